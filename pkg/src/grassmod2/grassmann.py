"""Borel rings of real Grassmannians and the double-cover Gysin analysis.

For the double cover ``G~_{n,k} -> G_{n,k}`` the Gysin sequence reads

    H^{j-1}(G) --w1--> H^j(G) --pi*--> H^j(G~) --> H^j(G) --w1--> H^{j+1}(G)

so ``b~_j = dim coker(w1 into H^j) + dim ker(w1 out of H^j)`` and ``pi*`` is
onto in degree ``j`` exactly when ``w1`` is injective on ``H^j(G)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .f2core import decompose_345
from .gf2 import Echelon
from .quotient import GradedQuotientRing
from .swclasses import g_classes, g_ring, sw_ring, wbar_classes, wbar_coefficient
from .verdict import Verdict


def _check_nk(n: int, k: int) -> None:
    if k < 1 or n <= k:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    if k == 3 and n < 6:
        raise ValueError("oriented 3-plane Grassmannians need n >= 6")


def borel_ring(n: int, k: int, cap: int | None = None) -> GradedQuotientRing:
    """``H*(G_{n,k}) = Z/2[w1..wk] / (wbar_{n-k+1}, ..., wbar_n)``."""
    if k < 1 or n <= k:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    wb = wbar_classes(k, n)
    # relations above the cap never affect degrees at or below it
    cap = k * (n - k) if cap is None else cap
    return GradedQuotientRing(sw_ring(k), wb[n - k + 1 : n + 1], cap, truncate=True)


def char_subring_oriented3(n: int) -> GradedQuotientRing:
    """``Z/2[w2, w3] / (g_{n-2}, g_{n-1}, g_n)``: the image of ``pi*`` for k = 3."""
    if n < 6:
        raise ValueError("need n >= 6")
    g = g_classes(3, n)
    return GradedQuotientRing(g_ring(3), [g[n - 2], g[n - 1], g[n]], 3 * (n - 3))


def two_power_bracket(n: int) -> int:
    """The ``t`` with ``2^(t-1) < n <= 2^t``."""
    if n < 2:
        raise ValueError("need n >= 2")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class GysinReport:
    n: int
    k: int
    top: int
    dims: tuple
    ker: tuple  # ker(w1 : H^j -> H^{j+1})
    coker: tuple  # coker(w1 : H^{j-1} -> H^j)
    betti: tuple  # oriented Betti numbers
    failure_degrees: tuple
    charrank: int

    def exact(self) -> bool:
        return all(b == c + k for b, c, k in zip(self.betti, self.coker, self.ker))

    def dual(self) -> bool:
        return self.betti == self.betti[::-1]


class _W1Ranks:
    """Ranks of ``. w1`` on a Borel ring, computed degree by degree."""

    def __init__(self, ring: GradedQuotientRing):
        self.ring = ring
        self.w1 = ring.ring.gen("w1")
        self._ranks: dict[int, int] = {}

    def rank(self, j: int) -> int:
        if j < 0 or j >= self.ring.cap:
            return 0
        if j not in self._ranks:
            cols = self.ring.multiplication_columns(self.w1, j)
            self._ranks[j] = Echelon(cols).rank
        return self._ranks[j]

    def ker(self, j: int) -> int:
        return self.ring.dim(j) - self.rank(j)


def gysin_report(n: int, k: int) -> GysinReport:
    _check_nk(n, k)
    ring = borel_ring(n, k)
    w = _W1Ranks(ring)
    top = ring.cap
    dims = tuple(ring.dim(j) for j in range(top + 1))
    ker = tuple(w.ker(j) for j in range(top + 1))
    coker = tuple(dims[j] - w.rank(j - 1) for j in range(top + 1))
    betti = tuple(c + x for c, x in zip(coker, ker))
    fails = tuple(j for j in range(top + 1) if ker[j])
    return GysinReport(n, k, top, dims, ker, coker, betti, fails, min(fails) - 1)


def first_failure(n: int, k: int = 3) -> int:
    """Smallest ``j`` where ``pi*`` misses part of ``H^j(G~_{n,k})``.

    Only builds the Borel ring up to the degree it needs.
    """
    _check_nk(n, k)
    w = _W1Ranks(borel_ring(n, k))
    j = 0
    while not w.ker(j):
        j += 1
    return j


def charrank_oriented_tautological(n: int, k: int) -> int:
    return first_failure(n, k) - 1


def predicted_first_failure(n: int) -> int:
    """First indecomposable degree above 3 in ``H*(G~_{n,3})``, ``n >= 8``."""
    t = two_power_bracket(n)
    if n == 2**t:
        return 2**t - 1
    if n >= 2**t - 3:
        return 2**t - 4
    return min(3 * n - 2**t - 1, 2**t - 4)


def _is_power_of_two(r: int) -> bool:
    return r > 0 and r & (r - 1) == 0


def ucharrank_oriented3(n: int) -> int:
    """Upper characteristic rank of ``G~_{n,3}``, equal to the charrank of the
    oriented tautological bundle once ``charrank + 1`` is not a power of two."""
    if n < 8:
        raise ValueError("need n >= 8")
    cr = charrank_oriented_tautological(n, 3)
    if _is_power_of_two(cr + 1):
        raise AssertionError(f"n={n}: charrank+1 = {cr + 1} is a power of two")
    return cr


def verify_theorem_k5(n: int, k: int) -> Verdict:
    """Charrank of the oriented tautological bundle is at least ``n - k + 2``."""
    if k < 5 or n < 2 * k:
        raise ValueError("need k >= 5 and n >= 2k")
    v = Verdict("thm-k5", {"n": n, "k": k})
    bound = n - k + 2
    w = _W1Ranks(borel_ring(n, k, cap=min(k * (n - k), bound + 1)))
    bad = [j for j in range(bound + 1) if w.ker(j)]
    v.check("kernel_vanishes", not bad, upto=bound, nonzero_kernel_degrees=bad)

    i = n - k + 3
    triple = decompose_345(i)
    if triple is None:
        v.check("witness", False, degree=i, reason="no decomposition")
        return v
    ring = sw_ring(k)
    exps = [0] * k
    exps[2], exps[3], exps[4] = triple
    mono = ring.monomial(exps)
    coeff = wbar_classes(k, i)[i].coefficient(mono)
    v.check(
        "witness",
        coeff == 1 and wbar_coefficient(tuple(exps)) == 1,
        degree=i,
        triple=list(triple),
        monomial=ring.format_monomial(mono),
    )
    return v
