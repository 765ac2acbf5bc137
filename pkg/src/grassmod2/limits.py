"""Process-wide resource caps, adjustable from the command line."""

from __future__ import annotations

from dataclasses import dataclass


class ResourceCapExceeded(RuntimeError):
    """A computation would exceed a configured size limit."""


@dataclass
class Limits:
    cap_terms: int = 2_000_000  # terms in a single dual class
    cap_dim: int = 250_000  # monomials in one degree of a quotient
    cap_search: int = 1 << 14  # candidates in a parameter search


LIMITS = Limits()


def check_terms(n: int, what: str) -> None:
    if n > LIMITS.cap_terms:
        raise ResourceCapExceeded(f"{what}: {n} terms > cap {LIMITS.cap_terms}")
