"""The anomalous classes of ``G~_{n,3}`` and checks inside the characteristic subring.

Throughout ``2^(t-1) < n <= 2^t`` and ``S = Z/2[w2, w3] / (g_{n-2}, g_{n-1}, g_n)``.

The p-classes are defined by equations such as ``w3 * p_{n-4} = g_{n-1}``
whose right side is already zero in ``S``, so in ``S`` they only say that
``p`` lies in the kernel of ``w3``.  The equations are therefore solved in the
polynomial ring ``Z/2[w2, w3]`` itself, where multiplication by ``w3`` is
injective and the solution is unique, and the result is then read in ``S``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .f2core import PolyF2
from .grassmann import char_subring_oriented3, two_power_bracket
from .quotient import GradedQuotientRing, cup_length, kernel_of_mul, solve_mul
from .swclasses import g_classes, g_ring
from .verdict import Verdict


@dataclass
class AnomalousClasses:
    n: int
    t: int
    parity: str  # "even" or "odd"
    subring: GradedQuotientRing
    p_low: PolyF2  # p_{n-4} (even) or p_{n-5} (odd)
    p_high: PolyF2  # p_{n-3}
    q: PolyF2 | None  # q_{n-3}, odd n only
    v_small: PolyF2  # degree 2^t - 8
    v_large: PolyF2  # degree 3n - 2^t - 5
    kernel_dims: dict = field(default_factory=dict)  # degree -> dim ker(w3) in S
    equations: dict = field(default_factory=dict)  # name -> re-verified

    @property
    def deg_small(self) -> int:
        return 2**self.t - 8

    @property
    def deg_large(self) -> int:
        return 3 * self.n - 2**self.t - 5


def admissible(n: int) -> bool:
    """Whether ``n`` lies in the range where the v-classes are defined."""
    if n < 9:
        return False
    t = two_power_bracket(n)
    return n <= 2**t - 4


def _exact_quotient(target: PolyF2, divisor: PolyF2, d: int) -> PolyF2:
    free = GradedQuotientRing(target.ring, [], d + divisor.degree())
    x, _ = solve_mul(free, divisor, target, d)
    if x is None:
        raise ArithmeticError(f"{divisor} does not divide {target}")
    return x


def _w3_kernel_dim(S: GradedQuotientRing, d: int) -> int:
    return len(kernel_of_mul(S, S.ring.gen("w3"), d))


def anomalous_classes(n: int) -> AnomalousClasses:
    if not admissible(n):
        raise ValueError(f"n={n} is outside 2^(t-1) < n <= 2^t - 4")
    t = two_power_bracket(n)
    R = g_ring(3)
    w2, w3 = R.gen("w2"), R.gen("w3")
    g = g_classes(3, n)
    S = char_subring_oriented3(n)
    eqs: dict[str, bool] = {}
    kdims: dict[int, int] = {}
    h = 2 ** (t - 1)

    if n % 2 == 0:
        lo = _exact_quotient(g[n - 1], w3, n - 4)
        hi_target = g[n] + w2 * g[n - 2]
        hi = _exact_quotient(hi_target, w3, n - 3)
        eqs["w3*p_{n-4} = g_{n-1}"] = w3 * lo == g[n - 1]
        eqs["w3*p_{n-3} = g_n + w2*g_{n-2}"] = w3 * hi == hi_target
        kdims[n - 4] = _w3_kernel_dim(S, n - 4)
        kdims[n - 3] = _w3_kernel_dim(S, n - 3)
        q = None
        vs = w2 ** (h - 2 - n // 2) * lo
        vl = w2 ** (n - h - 1) * hi
    else:
        lo = _exact_quotient(g[n - 2], w3, n - 5)
        hi = _exact_quotient(g[n], w3, n - 3)
        q = hi + w2 * lo
        eqs["w3*p_{n-5} = g_{n-2}"] = w3 * lo == g[n - 2]
        eqs["w3*p_{n-3} = g_n"] = w3 * hi == g[n]
        eqs["q_{n-3} = p_{n-3} + w2*p_{n-5}"] = q + hi == w2 * lo
        kdims[n - 5] = _w3_kernel_dim(S, n - 5)
        kdims[n - 3] = _w3_kernel_dim(S, n - 3)
        vs = w2 ** (h - 2 - (n + 1) // 2) * hi
        vl = w2 ** (n - h - 1) * q

    nf = S.normal_form
    return AnomalousClasses(
        n=n,
        t=t,
        parity="even" if n % 2 == 0 else "odd",
        subring=S,
        p_low=nf(lo),
        p_high=nf(hi),
        q=None if q is None else nf(q),
        v_small=nf(vs),
        v_large=nf(vl),
        kernel_dims=kdims,
        equations=eqs,
    )


def _annihilation_checks(v: Verdict, S, vs: PolyF2, vl: PolyF2, prefix=""):
    w2, w3 = S.ring.gen("w2"), S.ring.gen("w3")
    v.check(prefix + "v_small != 0", bool(vs))
    v.check(prefix + "v_large != 0", bool(vl))
    for name, cls in (("v_small", vs), ("v_large", vl)):
        v.check(f"{prefix}w2*{name} = 0", S.is_zero(w2 * cls))
        v.check(f"{prefix}w3*{name} = 0", S.is_zero(w3 * cls))


def representatives(ac: AnomalousClasses) -> list[tuple[PolyF2, PolyF2]]:
    """``(v_small, v_large)`` for every choice of p-classes modulo ``ker w3``.

    The equations defining the p-classes only determine them up to the kernel
    of ``w3`` in ``S``; this lists the v-classes for each such choice.
    """
    S = ac.subring
    R = S.ring
    w2, w3 = R.gen("w2"), R.gen("w3")
    n, h = ac.n, 2 ** (ac.t - 1)

    def coset(p: PolyF2, d: int) -> list[PolyF2]:
        ker = kernel_of_mul(S, w3, d)
        out = []
        for bits in itertools.product((0, 1), repeat=len(ker)):
            x = p
            for b, k in zip(bits, ker):
                if b:
                    x = x + k
            out.append(x)
        return out

    pairs = []
    if ac.parity == "even":
        for lo in coset(ac.p_low, n - 4):
            for hi in coset(ac.p_high, n - 3):
                vs = w2 ** (h - 2 - n // 2) * lo
                vl = w2 ** (n - h - 1) * hi
                pairs.append((S.normal_form(vs), S.normal_form(vl)))
    else:
        for lo in coset(ac.p_low, n - 5):
            for hi in coset(ac.p_high, n - 3):
                vs = w2 ** (h - 2 - (n + 1) // 2) * hi
                vl = w2 ** (n - h - 1) * (hi + w2 * lo)
                pairs.append((S.normal_form(vs), S.normal_form(vl)))
    return pairs


def verify_annihilation(n: int, per_representative: bool = True) -> Verdict:
    """``w2`` and ``w3`` kill both v-classes, and both are nonzero."""
    ac = anomalous_classes(n)
    v = Verdict("annihilation", {"n": n, "t": ac.t})
    for name, ok in ac.equations.items():
        v.check(name, ok)
    _annihilation_checks(v, ac.subring, ac.v_small, ac.v_large)
    if per_representative:
        reps = []
        for vs, vl in representatives(ac):
            sub = Verdict("rep")
            _annihilation_checks(sub, ac.subring, vs, vl)
            reps.append(sub.passed)
        v.details["representatives"] = {
            "count": len(reps),
            "passing": sum(reps),
        }
    v.details["kernel_dims"] = {str(d): k for d, k in sorted(ac.kernel_dims.items())}
    return v


def verify_lemma_not_so(n: int, t: int | None = None) -> Verdict:
    """``w2^(n - 2^(t-1)) * g_{n-3} = g_{3n - 2^t - 3}`` in ``S``."""
    if t is None:
        t = two_power_bracket(n)
    if not 2 ** (t - 1) < n <= 2**t:
        raise ValueError(f"need 2^(t-1) < n <= 2^t, got n={n}, t={t}")
    if n < 6:
        raise ValueError("need n >= 6")
    S = char_subring_oriented3(n)
    d = 3 * n - 2**t - 3
    if d > S.cap:
        raise ValueError(f"degree {d} exceeds cap {S.cap}")
    g = g_classes(3, max(d, n))
    w2 = S.ring.gen("w2")
    lhs = w2 ** (n - 2 ** (t - 1)) * g[n - 3]
    v = Verdict("lemma-not-so", {"n": n, "t": t})
    v.check("congruence", S.is_zero(lhs + g[d]), degree=d)
    return v


# -- divisibility of nonzero classes into the v-classes ------------------------


EXHAUSTIVE_DIM = 12


class _Divisibility:
    """Decides whether some monomial ``Q`` has ``P*Q`` equal to a v-class."""

    def __init__(self, S: GradedQuotientRing, targets: list[PolyF2]):
        self.S = S
        self.targets = [(t.degree(), S.coords(t)) for t in targets]
        self._cols: dict[tuple[int, int], list[list[int]]] = {}

    def _columns(self, d: int, D: int) -> list[list[int]]:
        key = (d, D)
        if key not in self._cols:
            R = self.S.ring
            mats = []
            for Q in R.monomials_of_degree(D - d):
                mats.append(self.S.multiplication_columns(R.from_monomial(Q), d))
            self._cols[key] = mats
        return self._cols[key]

    def divides(self, d: int, coords: int) -> bool:
        for D, target in self.targets:
            if D < d:
                continue
            for cols in self._columns(d, D):
                prod = 0
                for i, c in enumerate(cols):
                    if coords >> i & 1:
                        prod ^= c
                if prod == target:
                    return True
        return False


def verify_relations_a(n: int, samples: int = 10_000, seed: int = 0) -> Verdict:
    """Products of v-classes vanish, and every nonzero class divides one of them."""
    ac = anomalous_classes(n)
    S = ac.subring
    v = Verdict("relations-a", {"n": n, "t": ac.t, "samples": samples, "seed": seed})
    vs, vl = ac.v_small, ac.v_large
    v.check("v_small^2 = 0", S.is_zero(vs * vs))
    v.check("v_large^2 = 0", S.is_zero(vl * vl))
    v.check("v_small*v_large = 0", S.is_zero(vs * vl))

    div = _Divisibility(S, [vs, vl])
    R = S.ring
    bad_monos = []
    count = 0
    for d in range(S.cap + 1):
        for m in R.monomials_of_degree(d):
            c = S.coords(R.from_monomial(m), d)
            if not c:
                continue
            count += 1
            if not div.divides(d, c):
                bad_monos.append(R.format_monomial(m))
    v.check(
        "(v) monomial classes", not bad_monos, tested=count, failures=bad_monos[:10]
    )

    # every nonzero class, wherever a degree is small enough to enumerate
    bad_all = 0
    swept = 0
    for d in range(S.cap + 1):
        if 0 < S.dim(d) <= EXHAUSTIVE_DIM:
            for c in range(1, 1 << S.dim(d)):
                swept += 1
                bad_all += not div.divides(d, c)
    v.check("(v) all classes in small degrees", bad_all == 0, tested=swept, failures=bad_all)

    rng = random.Random(seed)
    degrees = [d for d in range(S.cap + 1) if S.dim(d)]
    bad_random = 0
    for _ in range(samples):
        d = rng.choice(degrees)
        c = rng.randrange(1, 1 << S.dim(d))
        if not div.divides(d, c):
            bad_random += 1
    v.check("(v) random classes", bad_random == 0, tested=samples, failures=bad_random)

    reps = []
    for a, b in representatives(ac):
        reps.append(
            bool(a) and bool(b)
            and S.is_zero(a * a) and S.is_zero(b * b) and S.is_zero(a * b)
        )
    v.details["representatives"] = {"count": len(reps), "passing": sum(reps)}
    return v


# -- cup-length bounds --------------------------------------------------------


def cup_bounds_interval(t: int) -> tuple[Fraction, int]:
    h = 2 ** (t - 1)
    return Fraction(h) + Fraction(h, 3), 2**t - 2


def cup_bounds(n: int, t: int) -> tuple[Fraction, Fraction]:
    """Exact lower and upper cup-length bounds for ``G~_{n,3}``."""
    if t < 4:
        raise ValueError("need t >= 4")
    lo_n, hi_n = cup_bounds_interval(t)
    if not lo_n <= n <= hi_n:
        raise ValueError(f"n={n} outside [{lo_n}, {hi_n}]")
    h = 2 ** (t - 1)
    lower = max(Fraction(h - 3), Fraction(4 * (n - 3), 3) - h + 3)
    upper = Fraction(3 * (n - 3), 2) - h + 3
    return lower, upper


def subring_cup_support(n: int, t: int) -> Verdict:
    """Facts about ``S`` used when bounding the cup-length from below."""
    if not 2 ** (t - 1) <= n <= 2**t - 1:
        raise ValueError(f"need 2^(t-1) <= n <= 2^t - 1, got n={n}, t={t}")
    S = char_subring_oriented3(n)
    w2 = S.ring.gen("w2")
    e = 2 ** (t - 1) - 4
    v = Verdict("cup-support", {"n": n, "t": t})
    v.check(f"w2^{e} != 0", not S.is_zero(w2**e))
    v.details["subring_cup_length"] = cup_length(S)
    if admissible(n) and two_power_bracket(n) == t:
        ac = anomalous_classes(n)
        best = {}
        R = S.ring
        for name, cls in (("v_small", ac.v_small), ("v_large", ac.v_large)):
            D = cls.degree()
            top = None
            for m in R.monomials_of_degree(D):
                if S.normal_form(R.from_monomial(m)) == cls:
                    a, b = R.exponents(m)
                    top = max(top or 0, a + b)
            best[name] = top
        v.details["max_monomial_length"] = best
    return v
