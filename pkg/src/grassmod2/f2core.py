"""GF(2) polynomials over weighted variables, plus binary-expansion combinatorics.

Monomials are packed into a single non-negative integer: variable ``v`` owns
the 16-bit field starting at bit ``16 * v``.  Multiplying monomials is then
integer addition (no carries while every exponent stays below 2**16), and a
polynomial is a frozenset of packed monomials, so GF(2) addition is a
symmetric difference.

Variables are ordered ``x_0 < x_1 < ...``; within one degree monomials are
compared lexicographically starting from the *last* variable, which is exactly
integer comparison of the packed form.  The graded order used everywhere is
``(degree, packed)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1

Monomial = int
BinarySupport = tuple  # bit positions of an integer, decreasing


class AmbientMismatchError(ValueError):
    """Two polynomials live in different polynomial rings."""


class PolyRing:
    """Z/2[x_0, ..., x_{r-1}] with positive internal degrees ``deg x_v``."""

    def __init__(self, names: Sequence[str], degrees: Sequence[int]):
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if any(d <= 0 for d in degrees):
            raise ValueError("internal degrees must be positive")
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self._key = (self.names, self.degrees)
        self._by_degree: dict[int, tuple[Monomial, ...]] = {0: (0,)}

    @classmethod
    def stiefel_whitney(cls, k: int, start: int = 1) -> "PolyRing":
        """Ring in ``w_start, ..., w_k`` with ``deg w_i = i``."""
        idx = range(start, k + 1)
        return cls([f"w{i}" for i in idx], list(idx))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"PolyRing({inner})"

    # -- monomials ---------------------------------------------------------

    def monomial(self, exponents: Sequence[int]) -> Monomial:
        if len(exponents) != self.nvars:
            raise ValueError(
                f"expected {self.nvars} exponents, got {len(exponents)}"
            )
        m = 0
        for v, e in enumerate(exponents):
            if not 0 <= e <= FIELD_MASK:
                raise OverflowError(f"exponent {e} outside [0, 2**16)")
            m |= e << (FIELD_BITS * v)
        return m

    def exponents(self, m: Monomial) -> tuple[int, ...]:
        return tuple(
            (m >> (FIELD_BITS * v)) & FIELD_MASK for v in range(self.nvars)
        )

    def var(self, name_or_index) -> Monomial:
        v = self.index(name_or_index)
        return 1 << (FIELD_BITS * v)

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.nvars:
                raise IndexError(name_or_index)
            return name_or_index
        try:
            return self.names.index(name_or_index)
        except ValueError:
            raise KeyError(f"no variable named {name_or_index!r}") from None

    def mono_degree(self, m: Monomial) -> int:
        d = 0
        v = 0
        while m:
            d += (m & FIELD_MASK) * self.degrees[v]
            m >>= FIELD_BITS
            v += 1
        return d

    def exponent_of(self, m: Monomial, name_or_index) -> int:
        return (m >> (FIELD_BITS * self.index(name_or_index))) & FIELD_MASK

    def monomials_of_degree(self, d: int) -> tuple[Monomial, ...]:
        """All monomials of graded degree ``d``, increasing."""
        if d < 0:
            return ()
        cached = self._by_degree.get(d)
        if cached is not None:
            return cached
        out: list[Monomial] = []

        def rec(v: int, remaining: int, acc: int) -> None:
            if v < 0:
                if remaining == 0:
                    out.append(acc)
                return
            step = self.degrees[v]
            if v == 0:
                if remaining % step == 0:
                    out.append(acc | ((remaining // step) << 0))
                return
            shift = FIELD_BITS * v
            for e in range(remaining // step + 1):
                rec(v - 1, remaining - e * step, acc | (e << shift))

        rec(self.nvars - 1, d, 0)
        out.sort()
        result = tuple(out)
        self._by_degree[d] = result
        return result

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, self.exponents(m)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- polynomials -------------------------------------------------------

    def zero(self) -> "PolyF2":
        return PolyF2(self, frozenset())

    def one(self) -> "PolyF2":
        return PolyF2(self, frozenset((0,)))

    def gen(self, name_or_index) -> "PolyF2":
        return PolyF2(self, frozenset((self.var(name_or_index),)))

    def from_monomial(self, m: Monomial) -> "PolyF2":
        return PolyF2(self, frozenset((m,)))

    def from_exponents(self, rows: Iterable[Sequence[int]]) -> "PolyF2":
        terms: set[Monomial] = set()
        for exps in rows:
            terms ^= {self.monomial(exps)}
        return PolyF2(self, frozenset(terms))


@dataclass(frozen=True)
class PolyF2:
    """A polynomial with coefficients in GF(2): a set of distinct monomials."""

    ring: PolyRing
    terms: frozenset

    def _check(self, other: "PolyF2") -> None:
        if not isinstance(other, PolyF2):
            raise TypeError(f"cannot combine PolyF2 with {type(other).__name__}")
        if self.ring is not other.ring and self.ring != other.ring:
            raise AmbientMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other: "PolyF2") -> "PolyF2":
        self._check(other)
        return PolyF2(self.ring, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "PolyF2") -> "PolyF2":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return self.ring.zero()
        if len(b) == 1:
            (m,) = b
            return PolyF2(self.ring, frozenset(t + m for t in a))
        acc: set[Monomial] = set()
        for m in b:
            acc ^= {t + m for t in a}
        return PolyF2(self.ring, frozenset(acc))

    def __pow__(self, e: int) -> "PolyF2":
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, m: Monomial) -> "PolyF2":
        return PolyF2(self.ring, frozenset(t + m for t in self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.sorted_terms())

    def __contains__(self, m: Monomial) -> bool:
        return m in self.terms

    def sorted_terms(self) -> list[Monomial]:
        """Terms in graded-lex order, largest first."""
        deg = self.ring.mono_degree
        return sorted(self.terms, key=lambda m: (deg(m), m), reverse=True)

    def degrees(self) -> set[int]:
        return {self.ring.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree() needs a nonzero homogeneous polynomial")
        return next(iter(ds))

    def homogeneous_part(self, d: int) -> "PolyF2":
        deg = self.ring.mono_degree
        return PolyF2(self.ring, frozenset(m for m in self.terms if deg(m) == d))

    def drop_variable(self, name_or_index) -> "PolyF2":
        """Delete every term divisible by the given variable."""
        shift = FIELD_BITS * self.ring.index(name_or_index)
        return PolyF2(
            self.ring,
            frozenset(m for m in self.terms if not (m >> shift) & FIELD_MASK),
        )

    def coefficient(self, m: Monomial) -> int:
        return int(m in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(self.ring.format_monomial(m) for m in self.sorted_terms())

    def __repr__(self) -> str:
        return f"PolyF2({self})"


def poly_add(p: PolyF2, q: PolyF2) -> PolyF2:
    return p + q


def poly_mul(p: PolyF2, q: PolyF2) -> PolyF2:
    return p * q


def substitute(p: PolyF2, images: Sequence[PolyF2], target: PolyRing) -> PolyF2:
    """Image of ``p`` under the ring map sending variable ``v`` to ``images[v]``."""
    if len(images) != p.ring.nvars:
        raise ValueError("need one image per variable")
    powers: dict[tuple[int, int], PolyF2] = {}
    out = target.zero()
    for m in p.terms:
        term = target.one()
        for v, e in enumerate(p.ring.exponents(m)):
            if e:
                key = (v, e)
                if key not in powers:
                    powers[key] = images[v] ** e
                term = term * powers[key]
        out = out + term
    return out


# -- binary-expansion combinatorics ------------------------------------------


def binary_support(q: int) -> BinarySupport:
    """Positions of the 1-bits of ``q``, largest first (``23 -> (4, 2, 1, 0)``)."""
    if q < 0:
        raise ValueError("binary_support needs a non-negative integer")
    return tuple(i for i in range(q.bit_length() - 1, -1, -1) if (q >> i) & 1)


def lucas_parity(m: int, r: int) -> int:
    """C(m, r) mod 2; zero when ``r > m``."""
    if r < 0 or m < 0 or r > m:
        return 0
    return int(r & m == r)


def multinomial_parity(parts: Iterable[int]) -> int:
    """(sum parts)! / prod(part!) mod 2: odd iff the binary supports are disjoint."""
    seen = 0
    for p in parts:
        if p < 0:
            return 0
        if seen & p:
            return 0
        seen |= p
    return 1


def has_property_P(p1: int, p2: int, p3: int) -> bool:
    return not (p1 & p2 or p2 & p3 or p1 & p3)


_SMALL_345 = {
    0: (0, 0, 0),
    3: (1, 0, 0),
    4: (0, 1, 0),
    5: (0, 0, 1),
    6: (2, 0, 0),
    8: (0, 2, 0),
    9: (3, 0, 0),
}


def _base_family(s: int, r: int) -> tuple[int, int, int]:
    """Explicit triples for i = 5*2^s + r, r in {1, 2, 7}."""
    i = 5 * 2**s + r
    if r == 1:
        if s % 2 == 0:
            return (i // 3, 0, 0)
        return ((i - 5) // 3, 0, 1)
    if r == 2:
        if s % 2 == 1:
            return (i // 3, 0, 0)
        return ((i - 4) // 3, 1, 0)
    if r == 7:
        if s % 2 == 0:
            return (i // 3, 0, 0)
        return ((i - 5) // 3, 0, 1)
    raise ValueError(r)


def decompose_345(i: int) -> tuple[int, int, int] | None:
    """Write ``i = 3*p1 + 4*p2 + 5*p3`` with pairwise disjoint binary supports.

    Returns ``None`` exactly for ``i in {1, 2, 7}``.  The construction strips
    the largest ``5 * 2**s <= i`` and repairs the smaller decomposition, so the
    result is deterministic.
    """
    if i < 0:
        raise ValueError("decompose_345 needs a non-negative integer")
    if i in (1, 2, 7):
        return None
    if i < 10:
        return _SMALL_345[i]
    s = (i // 5).bit_length() - 1
    rem = i - 5 * 2**s
    if rem in (1, 2, 7):
        return _base_family(s, rem)
    p1, p2, p3 = decompose_345(rem)
    top = 2**s
    if p1 < top and p2 < top:
        return (p1, p2, p3 + top)
    if p1 >= top:
        return (p1 - top, p2 + 2 * top, p3)
    return (p1 + 3 * top, p2 - top, p3)


def brute_force_345(i: int) -> tuple[int, int, int] | None:
    """Some triple with ``3*p1 + 4*p2 + 5*p3 = i`` and property P, by search."""
    for p3 in range(i // 5 + 1):
        for p2 in range((i - 5 * p3) // 4 + 1):
            rest = i - 5 * p3 - 4 * p2
            if rest % 3 == 0 and has_property_P(rest // 3, p2, p3):
                return (rest // 3, p2, p3)
    return None
