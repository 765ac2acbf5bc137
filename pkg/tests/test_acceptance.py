"""The thirteen acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line to the terminal
(also under pytest's output capture).  Run directly with
``python tests/test_acceptance.py`` for just those lines.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import exists_345, partitions_in_box  # noqa: E402

from grassmod2.f2core import decompose_345, has_property_P  # noqa: E402
from grassmod2.grassmann import (  # noqa: E402
    borel_ring,
    char_subring_oriented3,
    charrank_oriented_tautological,
    first_failure,
    gysin_report,
    ucharrank_oriented3,
    verify_theorem_k5,
)
from grassmod2.oriented3 import (  # noqa: E402
    admissible,
    cup_bounds,
    cup_bounds_interval,
    subring_cup_support,
    verify_annihilation,
    verify_lemma_not_so,
    verify_relations_a,
)
from grassmod2.presentations import (  # noqa: E402
    build_presented_ring,
    feasible_params,
    format_params,
    oriented3_instance,
    restriction_oriented2,
    restriction_w21,
    verify_hom,
    w21_duality_pairs,
)
from grassmod2.quotient import graded_dims, pairing_perfect  # noqa: E402
from grassmod2.swclasses import g_vanishing_degrees  # noqa: E402

_terminal = None


@pytest.fixture(autouse=True)
def _terminal_writer(capsys):
    global _terminal
    _terminal = capsys
    yield
    _terminal = None


def report(number: int, ok: bool, seconds: float, budget: float, detail: str = "") -> None:
    within = seconds <= budget
    mark = "PASS" if ok and within else "FAIL"
    line = f"criterion {number:2d}: {mark}  ({seconds:.2f}s, budget {budget:g}s)"
    if not within:
        line += " over time budget"
    if detail:
        line += f"  {detail}"
    if _terminal is not None:
        with _terminal.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line
    assert within, line


class timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


_feasible_cache: dict[int, list[dict]] = {}


def feasible(n: int) -> list[dict]:
    if n not in _feasible_cache:
        _feasible_cache[n] = feasible_params(n)
    return _feasible_cache[n]


def test_criterion_01_g_vanishing_k3():
    with timer() as t:
        got = g_vanishing_degrees(3, 2048)
    want = {2**r - 3 for r in range(3, 12)}
    report(1, got == want, t.seconds, 5, f"vanishing={sorted(got)}")


def test_criterion_02_g_nonvanishing_k5_to_8():
    with timer() as t:
        bad = {k: sorted(g_vanishing_degrees(k, 512)) for k in range(5, 9)}
    report(2, not any(bad.values()), t.seconds, 10, f"vanishing={bad}")


def _borel_cases():
    return [(n, k) for k in range(1, 5) for n in range(2 * k, 15) if n > k]


def test_criterion_03_borel_dims():
    bad = []
    with timer() as t:
        for n, k in _borel_cases():
            dims = graded_dims(borel_ring(n, k))
            oracle = [partitions_in_box(k, n - k, d) for d in range(k * (n - k) + 1)]
            if dims != oracle or sum(dims) != comb(n, k):
                bad.append((n, k))
    report(3, not bad, t.seconds, 30, f"{len(_borel_cases())} rings, mismatches={bad}")


def test_criterion_04_poincare_pairing():
    bad = []
    count = 0
    with timer() as t:
        for n, k in _borel_cases():
            q = borel_ring(n, k)
            count += 1
            if not all(pairing_perfect(q, d) for d in range(q.cap + 1)):
                bad.append(("borel", n, k))
        for n in (8, 13, 14, 15, 16):
            inst = oriented3_instance(n)
            for a in feasible(n):
                r = build_presented_ring(inst, a)
                count += 1
                if r.dim(r.cap) != 1 or not all(pairing_perfect(r, d) for d in range(r.cap + 1)):
                    bad.append(("presented", n, format_params(a)))
    report(4, not bad, t.seconds, 60, f"{count} rings, failures={bad}")


def _expected_first_failure(n: int) -> int:
    t = (n - 1).bit_length()
    if n == 2**t:
        return 2**t - 1
    if n in (2**t - 1, 2**t - 2, 2**t - 3):
        return 2**t - 4
    return min(3 * n - 2**t - 1, 2**t - 4)


def test_criterion_05_first_indecomposable():
    with timer() as t:
        got = {n: first_failure(n, 3) for n in range(8, 17)}
    want = {n: _expected_first_failure(n) for n in range(8, 17)}
    report(5, got == want, t.seconds, 60, f"got={got}")


def test_criterion_06_feasible_parameters():
    problems = []
    with timer() as t:
        for n in (8, 13, 14, 15, 16):
            found = feasible(n)
            if not found:
                problems.append(f"n={n}: nothing feasible")
            betti = gysin_report(n, 3).betti
            inst = oriented3_instance(n)
            for a in found:
                if tuple(graded_dims(build_presented_ring(inst, a))) != betti:
                    problems.append(f"n={n}: dims differ for {format_params(a)}")
            if n in (14, 15):
                nonzero = [format_params(a) for a in found if a.get("P2")]
                if nonzero:
                    problems.append(
                        f"n={n}: {len(nonzero)} of {len(found)} feasible have P2 != 0, "
                        f"e.g. {nonzero[0]}"
                    )
    report(6, not problems, t.seconds, 300, "; ".join(problems))


def _t_values():
    return [10, 11, 12] + [n for n in range(17, 29) if admissible(n)]


def test_criterion_07_anomalous_classes():
    bad = []
    with timer() as t:
        for n in _t_values():
            for v in (verify_annihilation(n), verify_relations_a(n, samples=10_000, seed=0)):
                if not v.passed:
                    bad.append((n, v.name, v.failures()))
    report(7, not bad, t.seconds, 180, f"n={_t_values()} failures={bad}")


def test_criterion_08_w2_power_congruence():
    bad, checked = [], 0
    with timer() as t:
        for tt in (4, 5):
            for n in range(2 ** (tt - 1) + 1, 2**tt + 1):
                if 3 * n - 2**tt - 3 > 3 * (n - 3):
                    continue
                checked += 1
                if not verify_lemma_not_so(n, tt).passed:
                    bad.append((n, tt))
    report(8, not bad and checked, t.seconds, 60, f"{checked} cases, failures={bad}")


def test_criterion_09_kernel_vanishing_k5():
    cases = [(10, 5), (11, 5), (12, 5), (12, 6), (13, 6), (14, 7)]
    bad = []
    with timer() as t:
        for n, k in cases:
            v = verify_theorem_k5(n, k)
            if not v.passed:
                bad.append((n, k, v.failures()))
    report(9, not bad, t.seconds, 30, f"failures={bad}")


def test_criterion_10_decomposition_345():
    bad = []
    with timer() as t:
        for i in range(100_001):
            d = decompose_345(i)
            if i in (1, 2, 7):
                if d is not None:
                    bad.append(i)
                continue
            if d is None or 3 * d[0] + 4 * d[1] + 5 * d[2] != i or not has_property_P(*d):
                bad.append(i)
        for i in range(2001):
            if exists_345(i) != (decompose_345(i) is not None):
                bad.append(("oracle", i))
        missing = [i for i in range(2001) if not exists_345(i)]
    report(10, not bad and missing == [1, 2, 7], t.seconds, 10,
           f"no decomposition exactly at {missing}, failures={bad[:5]}")


def test_criterion_11_cup_length_support():
    problems = []
    with timer() as t:
        for n in range(11, 15):
            lower, upper = cup_bounds(n, 4)
            want_lo = max(Fraction(8 - 3), Fraction(4 * (n - 3), 3) - 8 + 3)
            want_hi = Fraction(3 * (n - 3), 2) - 8 + 3
            if (lower, upper) != (want_lo, want_hi):
                problems.append(f"n={n}: {lower},{upper}")
        if cup_bounds(12, 4) != (Fraction(7), Fraction(17, 2)):
            problems.append("n=12 example")
        for tt in (4, 5):
            for n in range(2 ** (tt - 1), 2**tt):
                if not subring_cup_support(n, tt).passed:
                    problems.append(f"w2 power zero at n={n}")
        for tt in range(4, 9):
            lo_n, hi_n = cup_bounds_interval(tt)
            for n in range(-(-lo_n.numerator // lo_n.denominator), hi_n + 1):
                lower, upper = cup_bounds(n, tt)
                if lower > upper:
                    problems.append(f"lower > upper at n={n}, t={tt}")
    report(11, not problems, t.seconds, 30, "; ".join(problems))


def test_criterion_12_homomorphisms():
    bad, count = [], 0
    with timer() as t:
        for n in range(4, 20):
            count += 1
            if not verify_hom(restriction_oriented2(n)):
                bad.append(("oriented2", n))
        for N in range(5, 20):
            spec = restriction_w21(N)
            if N % 2:
                pairs = [(None, {"lam": a, "mu": b}) for a, b in w21_duality_pairs(spec.target.ints["m"])]
            else:
                pairs = [({"lam": a, "mu": b}, None) for a, b in w21_duality_pairs(spec.source.ints["m"])]
            if not pairs:
                bad.append(("w21 no duality-consistent parameters", N))
            for ps, pt in pairs:
                count += 1
                if not verify_hom(spec, ps, pt):
                    bad.append(("w21", N, ps, pt))
    report(12, not bad, t.seconds, 30, f"{count} maps, failures={bad}")


def test_criterion_13_upper_characteristic_rank():
    bad = []
    with timer() as t:
        for n in range(8, 33):
            cr = charrank_oriented_tautological(n, 3)
            r = cr + 1
            if r & (r - 1) == 0:
                bad.append((n, "power of two"))
            elif ucharrank_oriented3(n) != cr:
                bad.append((n, "mismatch"))
    report(13, not bad, t.seconds, 10, f"failures={bad}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
