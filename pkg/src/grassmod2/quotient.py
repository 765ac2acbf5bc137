"""Graded quotients of weighted GF(2) polynomial rings, degree by degree.

In each degree ``d`` the monomials of degree ``d`` are listed in increasing
order and a vector is an int whose bit ``j`` is the coefficient of the
``j``-th monomial.  The ideal in degree ``d`` is spanned by the relations of
degree ``d`` and by ``x_v * I_{d - deg x_v}``; it is kept in reduced echelon
form whose pivots are leading monomials.  The monomials that are not pivots
form the residue basis, and the normal form of a vector is what is left after
cancelling its pivot bits.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from typing import Iterable, Sequence

from .f2core import Monomial, PolyF2, PolyRing
from .gf2 import Echelon, iter_bits, kernel_basis, solve
from .limits import LIMITS, ResourceCapExceeded


class FiniteGradedRing:
    """A graded commutative GF(2) algebra of finite dimension.

    Elements of degree ``d`` are bit vectors over the basis of ``H^d``;
    subclasses provide ``dim``, ``basis_product`` and optionally ``generators``.
    """

    cap: int

    def dim(self, d: int) -> int:
        raise NotImplementedError

    def basis_product(self, d1: int, i: int, d2: int, j: int) -> int:
        raise NotImplementedError

    def labels(self, d: int) -> list[str]:
        return [f"e{d}_{i}" for i in range(self.dim(d))]

    def generators(self) -> list[tuple[int, int]] | None:
        """Algebra generators as ``(degree, coords)``, or None if unknown."""
        return None

    # -- derived -------------------------------------------------------------

    def dims(self) -> list[int]:
        return [self.dim(d) for d in range(self.cap + 1)]

    @property
    def top(self) -> int:
        for d in range(self.cap, -1, -1):
            if self.dim(d):
                return d
        return 0

    def total_dim(self) -> int:
        return sum(self.dims())

    def one(self) -> int:
        return 1  # the unique basis element of H^0

    def mul(self, d1: int, x: int, d2: int, y: int) -> int:
        if d1 + d2 > self.cap or not x or not y:
            return 0
        out = 0
        for i in iter_bits(x):
            for j in iter_bits(y):
                out ^= self.basis_product(d1, i, d2, j)
        return out


class TableRing(FiniteGradedRing):
    """A finite graded ring given by explicit structure constants.

    ``products[(d1, i, d2, j)]`` is the coordinate vector of ``e_i * e_j``; a
    missing entry means zero.  Products with the degree-0 unit are implicit and
    pairs are looked up in either order.
    """

    def __init__(self, dims: Sequence[int], products: dict, labels=None):
        if not dims or dims[0] != 1:
            raise ValueError("degree 0 must be one-dimensional")
        self._dims = list(dims)
        self.cap = len(dims) - 1
        self._products = dict(products)
        self._labels = labels

    def dim(self, d: int) -> int:
        return self._dims[d] if 0 <= d <= self.cap else 0

    def labels(self, d: int) -> list[str]:
        if self._labels is not None:
            return list(self._labels[d])
        return super().labels(d)

    def basis_product(self, d1: int, i: int, d2: int, j: int) -> int:
        if d1 + d2 > self.cap:
            return 0
        if d1 == 0:
            return 1 << j
        if d2 == 0:
            return 1 << i
        key = (d1, i, d2, j)
        if key in self._products:
            return self._products[key]
        return self._products.get((d2, j, d1, i), 0)


def table_ring(dims: Sequence[int], products: dict, labels=None) -> TableRing:
    return TableRing(dims, products, labels)


class _Degree:
    __slots__ = ("monos", "index", "rref", "residue", "residue_pos")

    def __init__(self, monos, rref):
        self.monos = monos
        self.index = {m: j for j, m in enumerate(monos)}
        self.rref = rref  # pivot -> row
        self.residue = [j for j in range(len(monos)) if j not in rref]
        self.residue_pos = {j: r for r, j in enumerate(self.residue)}


class GradedQuotientRing(FiniteGradedRing):
    """``ring / (relations)`` truncated above degree ``cap``.

    Degrees are eliminated lazily in increasing order, so asking about a low
    degree never pays for the high ones.
    """

    def __init__(
        self,
        ring: PolyRing,
        relations: Iterable[PolyF2],
        cap: int,
        truncate: bool = False,
    ):
        rels = [r for r in relations if r]
        by_deg: dict[int, list[PolyF2]] = {}
        for r in rels:
            if r.ring != ring:
                raise ValueError("relation lives in a different polynomial ring")
            if not r.is_homogeneous():
                raise ValueError(f"relation {r} is not homogeneous")
            d = r.degree()
            if d > cap:
                if truncate:
                    continue  # vacuous below the cap
                raise ValueError(f"cap {cap} below relation degree {d}")
            by_deg.setdefault(d, []).append(r)
        self.ring = ring
        self.relations = tuple(rels)
        self.cap = cap
        self._rels_by_deg = by_deg
        self._degrees: list[_Degree] = []
        self._lock = threading.RLock()
        self._products: dict = {}

    # -- construction -----------------------------------------------------

    def _level(self, d: int) -> _Degree:
        with self._lock:
            while len(self._degrees) <= d:
                self._degrees.append(self._build(len(self._degrees)))
            return self._degrees[d]

    def _build(self, d: int) -> _Degree:
        monos = self.ring.monomials_of_degree(d)
        if len(monos) > LIMITS.cap_dim:
            raise ResourceCapExceeded(
                f"degree {d}: {len(monos)} monomials > cap {LIMITS.cap_dim}"
            )
        index = {m: j for j, m in enumerate(monos)}

        def vec(terms: Iterable[Monomial]) -> int:
            v = 0
            for m in terms:
                v ^= 1 << index[m]
            return v

        ech = Echelon()
        for r in self._rels_by_deg.get(d, ()):
            ech.add(vec(r.terms))
        for v, step in enumerate(self.ring.degrees):
            if step > d:
                continue
            lower = self._degrees[d - step]
            shift = self.ring.var(v)
            for row in lower.rref.values():
                ech.add(vec(lower.monos[j] + shift for j in iter_bits(row)))
        return _Degree(monos, ech.reduced())

    # -- vectors ----------------------------------------------------------

    def dim(self, d: int) -> int:
        if d < 0 or d > self.cap:
            return 0
        return len(self._level(d).residue)

    def residue_basis(self, d: int) -> list[Monomial]:
        if d < 0 or d > self.cap:
            return []
        lv = self._level(d)
        return [lv.monos[j] for j in lv.residue]

    def labels(self, d: int) -> list[str]:
        return [self.ring.format_monomial(m) for m in self.residue_basis(d)]

    def _nf_vec(self, lv: _Degree, v: int) -> int:
        rref = lv.rref
        for p in [b for b in iter_bits(v) if b in rref]:
            v ^= rref[p]
        return v

    def coords(self, p: PolyF2, d: int | None = None) -> int:
        """Residue-basis coordinates of the homogeneous ``p``."""
        if not p:
            return 0
        if d is None:
            d = p.degree()
        if d > self.cap:
            return 0
        lv = self._level(d)
        v = 0
        for m in p.terms:
            v ^= 1 << lv.index[m]
        v = self._nf_vec(lv, v)
        out = 0
        for j in iter_bits(v):
            out |= 1 << lv.residue_pos[j]
        return out

    def element(self, d: int, coords: int) -> PolyF2:
        if d > self.cap:
            return self.ring.zero()
        lv = self._level(d)
        terms = frozenset(lv.monos[lv.residue[r]] for r in iter_bits(coords))
        return PolyF2(self.ring, terms)

    # -- ring operations --------------------------------------------------

    def normal_form(self, p: PolyF2) -> PolyF2:
        if p.ring != self.ring:
            raise ValueError("polynomial lives in a different ring")
        out: set[Monomial] = set()
        for d in sorted(p.degrees()):
            if d > self.cap:
                continue
            part = p.homogeneous_part(d)
            out |= self.element(d, self.coords(part, d)).terms
        return PolyF2(self.ring, frozenset(out))

    def is_zero(self, p: PolyF2) -> bool:
        return not self.normal_form(p)

    def multiply(self, p: PolyF2, q: PolyF2) -> PolyF2:
        return self.normal_form(p * q)

    def basis_product(self, d1: int, i: int, d2: int, j: int) -> int:
        if d1 + d2 > self.cap:
            return 0
        key = (d1, i, d2, j) if (d1, i) <= (d2, j) else (d2, j, d1, i)
        hit = self._products.get(key)
        if hit is None:
            a = self._level(d1).monos[self._level(d1).residue[i]]
            b = self._level(d2).monos[self._level(d2).residue[j]]
            hit = self.coords(self.ring.from_monomial(a + b), d1 + d2)
            self._products[key] = hit
        return hit

    def generators(self) -> list[tuple[int, int]]:
        out = []
        for v, step in enumerate(self.ring.degrees):
            c = self.coords(self.ring.gen(v), step) if step <= self.cap else 0
            if c:
                out.append((step, c))
        return out

    def multiplication_columns(self, m: PolyF2, d: int) -> list[int]:
        """Columns of ``x -> x*m`` from ``H^d`` to ``H^{d + deg m}``."""
        e = m.degree()
        return [
            self.coords(m.mul_monomial(b), d + e) if d + e <= self.cap else 0
            for b in self.residue_basis(d)
        ]


def build_quotient(
    names: Sequence[str],
    degrees: Sequence[int],
    relations: Iterable,
    cap: int,
) -> GradedQuotientRing:
    """Quotient of ``Z/2[names]`` by ``relations``.

    ``relations`` may be PolyF2 over an equal ring, or callables taking the
    freshly built PolyRing.
    """
    ring = PolyRing(names, degrees)
    rels = [r(ring) if callable(r) else r for r in relations]
    return GradedQuotientRing(ring, rels, cap)


def normal_form(q: GradedQuotientRing, p: PolyF2) -> PolyF2:
    return q.normal_form(p)


def graded_dims(r: FiniteGradedRing) -> list[int]:
    return r.dims()


@lru_cache(maxsize=None)
def partition_box_count(k: int, m: int, d: int) -> int:
    """Partitions of ``d`` with at most ``k`` parts, each at most ``m``."""
    if d < 0 or d > k * m:
        return 0
    if d == 0:
        return 1
    if k == 0 or m == 0:
        return 0
    return partition_box_count(k - 1, m, d) + partition_box_count(k, m - 1, d - k)


def pairing_matrix(r: FiniteGradedRing, d: int, top: int | None = None) -> list[int]:
    """Rows ``i`` of ``e_i * f_j`` in ``H^top`` (assumed one-dimensional)."""
    T = r.top if top is None else top
    rows = []
    for i in range(r.dim(d)):
        row = 0
        for j in range(r.dim(T - d)):
            if r.basis_product(d, i, T - d, j) & 1:
                row |= 1 << j
        rows.append(row)
    return rows


def pairing_perfect(r: FiniteGradedRing, d: int) -> bool:
    T = r.top
    if r.dim(T) != 1:
        raise ValueError(f"top degree {T} has dimension {r.dim(T)}, not 1")
    if not 0 <= d <= T:
        return r.dim(d) == 0
    a, b = r.dim(d), r.dim(T - d)
    if a != b:
        return False
    return Echelon(pairing_matrix(r, d, T)).rank == a


def cup_length(r: FiniteGradedRing) -> int:
    """Largest ``m`` with ``(H^+)^m != 0``.

    ``(H^+)^{j+1}`` is the span of ``x * y`` with ``x`` in ``H^+`` and ``y`` in
    ``(H^+)^j``.  When algebra generators are known only they are used for
    ``x``, which spans the same space because ``(H^+)^j`` is an ideal.
    """
    gens = r.generators()
    if gens is None:
        gens = [(d, 1 << i) for d in range(1, r.cap + 1) for i in range(r.dim(d))]
    current: dict[int, list[int]] = {}
    for d in range(1, r.cap + 1):
        if r.dim(d):
            current[d] = [1 << i for i in range(r.dim(d))]
    length = 0
    while current:
        length += 1
        spans: dict[int, Echelon] = {}
        for gd, gx in gens:
            for d, vecs in current.items():
                e = d + gd
                if e > r.cap:
                    continue
                ech = spans.setdefault(e, Echelon())
                for y in vecs:
                    ech.add(r.mul(gd, gx, d, y))
        current = {e: list(ech.rows.values()) for e, ech in spans.items() if ech.rank}
    return length


def solve_mul(
    q: GradedQuotientRing, m: PolyF2, t: PolyF2, d: int
) -> tuple[PolyF2 | None, int]:
    """Find ``x`` of degree ``d`` with ``x * m = t`` in ``q``.

    Returns ``(x, dim ker(. m : H^d -> H^{d + deg m}))``.  ``x`` is the
    echelon-canonical solution, or None when ``t`` is not a multiple of ``m``.
    """
    if not m:
        raise ValueError("multiplier is zero")
    e = m.degree()
    if t and t.degree() != d + e:
        raise ValueError(f"target degree {t.degree()} != {d} + {e}")
    cols = q.multiplication_columns(m, d)
    target = q.coords(t, d + e) if t else 0
    if not cols:
        return (q.ring.zero() if target == 0 else None), 0
    combo, kdim = solve(cols, target)
    if combo is None:
        return None, kdim
    return q.element(d, combo), kdim


def kernel_of_mul(q: GradedQuotientRing, m: PolyF2, d: int) -> list[PolyF2]:
    """Basis of the kernel of multiplication by ``m`` on ``H^d``."""
    return [q.element(d, x) for x in kernel_basis(q.multiplication_columns(m, d))]
