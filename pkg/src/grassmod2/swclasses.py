"""Dual Stiefel-Whitney classes and their reductions modulo w1.

``wbar[i]`` is the degree-``i`` part of ``(1 + w1 + ... + wk)^(-1)``, obtained
from ``wbar[i] = sum_{j=1..min(k,i)} w_j * wbar[i-j]``.  ``g[i]`` is ``wbar[i]``
with every ``w1``-divisible term removed; it satisfies the same recursion
without the ``j = 1`` term, which is how it is computed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from .f2core import Monomial, PolyF2, PolyRing, multinomial_parity
from .limits import check_terms


@dataclass(frozen=True)
class DualClassTable:
    k: int
    max_i: int
    wbar: tuple  # PolyF2 in w1..wk
    g: tuple  # PolyF2 in w2..wk

    @property
    def ring(self) -> PolyRing:
        return self.wbar[0].ring

    @property
    def g_ring(self) -> PolyRing:
        return self.g[0].ring


class _Series:
    """Monotonically extended solution of ``s[i] = sum_j w_j s[i-j]``."""

    def __init__(self, ring: PolyRing, label: str):
        self.ring = ring
        self.label = label
        self.gens = [(ring.degrees[v], ring.var(v)) for v in range(ring.nvars)]
        self.values: list[PolyF2] = [ring.one()]
        self.lock = threading.Lock()

    def upto(self, max_i: int) -> list[PolyF2]:
        with self.lock:
            vals = self.values
            while len(vals) <= max_i:
                i = len(vals)
                acc: set[Monomial] = set()
                for d, m in self.gens:
                    if d <= i:
                        acc ^= {t + m for t in vals[i - d].terms}
                check_terms(len(acc), f"{self.label}[{i}]")
                vals.append(PolyF2(self.ring, frozenset(acc)))
            return vals[: max_i + 1]


_wbar_cache: dict[int, _Series] = {}
_g_cache: dict[int, _Series] = {}
_cache_lock = threading.Lock()


def sw_ring(k: int) -> PolyRing:
    return _wbar_series(k).ring


def g_ring(k: int) -> PolyRing:
    return _g_series(k).ring


def _wbar_series(k: int) -> _Series:
    if k < 1:
        raise ValueError("rank k must be at least 1")
    with _cache_lock:
        if k not in _wbar_cache:
            _wbar_cache[k] = _Series(PolyRing.stiefel_whitney(k), f"wbar(k={k})")
        return _wbar_cache[k]


def _g_series(k: int) -> _Series:
    if k < 2:
        raise ValueError("g classes need k >= 2")
    with _cache_lock:
        if k not in _g_cache:
            _g_cache[k] = _Series(PolyRing.stiefel_whitney(k, start=2), f"g(k={k})")
        return _g_cache[k]


def wbar_classes(k: int, max_i: int) -> list[PolyF2]:
    return _wbar_series(k).upto(max_i)


def g_classes(k: int, max_i: int) -> list[PolyF2]:
    """``[g_0, ..., g_max_i]`` as polynomials in ``w2, ..., wk``."""
    return _g_series(k).upto(max_i)


def dual_classes(k: int, max_i: int) -> DualClassTable:
    if max_i < 0:
        raise ValueError("max_i must be non-negative")
    wbar = wbar_classes(k, max_i)
    if k >= 2:
        g = g_classes(k, max_i)
    else:
        # with only w1 every positive-degree class is w1-divisible
        empty = PolyRing([], [])
        g = [empty.one()] + [empty.zero()] * max_i
    return DualClassTable(k, max_i, tuple(wbar), tuple(g))


def reduce_mod_w1(p: PolyF2, k: int) -> PolyF2:
    """Drop ``w1``-divisible terms of ``p`` (in ``w1..wk``) and move to ``w2..wk``."""
    target = g_ring(k)
    # packed layout: field v of the source is field v-1 of the target
    kept = (m >> 16 for m in p.terms if not m & 0xFFFF)
    return PolyF2(target, frozenset(kept))


def coefficient_of(p: PolyF2, m: Monomial) -> int:
    return p.coefficient(m)


# -- nonvanishing via odd multinomial coefficients ----------------------------


def wbar_coefficient(exponents: tuple[int, ...]) -> int:
    """Coefficient of ``prod w_j^a_j`` in ``wbar``: a multinomial mod 2."""
    return multinomial_parity(exponents)


@lru_cache(maxsize=None)
def _witness(parts: tuple[int, ...], remaining: int, used: int):
    if not parts:
        return () if remaining == 0 else None
    d = parts[0]
    rest = parts[1:]
    if not rest:
        if remaining % d:
            return None
        a = remaining // d
        return (a,) if not a & used else None
    for a in range(remaining // d, -1, -1):
        if a & used:
            continue
        sub = _witness(rest, remaining - a * d, used | a)
        if sub is not None:
            return (a,) + sub
    return None


def g_witness(k: int, i: int) -> tuple[int, ...] | None:
    """Exponents ``(a_2, ..., a_k)`` of a term of ``g_i``, or None if ``g_i = 0``.

    A monomial in ``w2..wk`` has coefficient 1 in ``g_i`` exactly when its
    exponents have pairwise disjoint binary supports, so this is an exact
    test that never expands ``g_i``.
    """
    if k < 2:
        raise ValueError("g classes need k >= 2")
    parts = tuple(range(k, 1, -1))
    found = _witness(parts, i, 0)
    if found is None:
        return None
    return tuple(reversed(found))


def g_vanishing_degrees(k: int, max_i: int, method: str = "auto") -> set[int]:
    """``{i in [2, max_i] : g_i = 0}``.

    ``method="table"`` expands the recursion; ``"witness"`` searches for an
    odd multinomial term instead.  ``"auto"`` uses the table for ``k = 3``.
    """
    if k < 2:
        raise ValueError("g classes need k >= 2")
    if method == "auto":
        method = "table" if k <= 3 else "witness"
    if method == "table":
        g = g_classes(k, max_i)
        return {i for i in range(2, max_i + 1) if not g[i]}
    if method == "witness":
        return {i for i in range(2, max_i + 1) if g_witness(k, i) is None}
    raise ValueError(f"unknown method {method!r}")
