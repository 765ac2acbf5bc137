"""Exact GF(2) linear algebra on rows packed into Python ints.

Bit ``j`` of a row is the coefficient of column ``j``; the pivot of a row is
its highest set bit.
"""

from __future__ import annotations

from typing import Iterable


def iter_bits(v: int) -> Iterable[int]:
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def popcount(v: int) -> int:
    return bin(v).count("1")


class Echelon:
    """Incrementally built echelon basis of a subspace of GF(2)^N."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        rows = self.rows
        while v:
            p = rows.get(v.bit_length() - 1)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduced(self) -> dict[int, int]:
        """Reduced row-echelon form: pivot -> row with no other pivot bits."""
        out: dict[int, int] = {}
        for piv in sorted(self.rows):
            row = self.rows[piv]
            rest = row ^ (1 << piv)
            for b in list(iter_bits(rest)):
                if b in out:
                    row ^= out[b]
            out[piv] = row
        return out


def rank(rows: Iterable[int]) -> int:
    return Echelon(rows).rank


def _eliminate_tagged(columns: list[int], width: int):
    mask = (1 << width) - 1
    rows: dict[int, int] = {}
    kernel: list[int] = []
    for i, c in enumerate(columns):
        row = c | (1 << (width + i))
        while row & mask:
            p = rows.get((row & mask).bit_length() - 1)
            if p is None:
                break
            row ^= p
        if row & mask:
            rows[(row & mask).bit_length() - 1] = row
        else:
            kernel.append(row >> width)
    return rows, kernel


def solve(columns: list[int], target: int) -> tuple[int | None, int]:
    """Solve ``sum_i x_i * columns[i] = target``.

    Returns ``(x, kernel_dim)``: ``x`` is a bitmask over column indices with
    every free coordinate zero, or ``None`` when ``target`` is not in the
    column span.  Free columns are those in the span of earlier columns.
    """
    width = max([c.bit_length() for c in columns] + [target.bit_length()])
    mask = (1 << width) - 1
    rows, kernel = _eliminate_tagged(columns, width)
    v = target
    combo = 0
    while v & mask:
        p = rows.get((v & mask).bit_length() - 1)
        if p is None:
            return None, len(kernel)
        v ^= p
        combo ^= p >> width
    return combo, len(kernel)


def kernel_basis(columns: list[int]) -> list[int]:
    """Basis (bitmasks over column indices) of ``{x : sum x_i columns[i] = 0}``."""
    width = max((c.bit_length() for c in columns), default=0)
    return _eliminate_tagged(columns, width)[1]
