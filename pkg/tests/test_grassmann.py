import pytest

from grassmod2.grassmann import (
    borel_ring,
    char_subring_oriented3,
    charrank_oriented_tautological,
    first_failure,
    gysin_report,
    predicted_first_failure,
    two_power_bracket,
    ucharrank_oriented3,
    verify_theorem_k5,
)
from grassmod2.quotient import graded_dims


def quadric_betti(n):
    """Mod 2 Betti numbers of the oriented 2-plane Grassmannian (a complex quadric)."""
    top = 2 * (n - 2)
    b = [1 if j % 2 == 0 else 0 for j in range(top + 1)]
    if n % 2 == 0:
        b[n - 2] += 1
    return tuple(b)


def test_g52_report():
    r = gysin_report(5, 2)
    assert r.betti == (1, 0, 1, 0, 1, 0, 1)
    assert r.exact() and r.dual()
    assert r.charrank == 3


@pytest.mark.parametrize("n", range(4, 21))
def test_two_planes_match_quadric(n):
    assert gysin_report(n, 2).betti == quadric_betti(n)


@pytest.mark.parametrize("n", range(2, 12))
def test_lines_give_spheres(n):
    b = gysin_report(n, 1).betti
    assert b == tuple(1 if j in (0, n - 1) else 0 for j in range(n))


@pytest.mark.parametrize("n,k", [(6, 3), (8, 3), (9, 4), (11, 3), (16, 3), (10, 5)])
def test_report_is_exact_and_dual(n, k):
    r = gysin_report(n, k)
    assert r.exact() and r.dual()
    assert sum(r.betti) == 2 * sum(r.ker)
    assert r.betti[0] == r.betti[-1] == 1


def test_g83_total():
    assert sum(gysin_report(8, 3).betti) == 14


def near_power_of_two(n):
    return any(n + s == 2 ** (n + s).bit_length() // 2 for s in range(4)) or n & (n - 1) == 0


def test_surjective_below_n():
    for n in range(8, 21):
        if near_power_of_two(n):
            continue
        r = gysin_report(n, 3)
        assert not any(r.ker[: min(n, r.top + 1)]), n


def test_first_failures():
    got = [first_failure(n) for n in range(8, 17)]
    assert got == [7, 10, 12, 12, 12, 12, 12, 12, 15]
    assert got == [predicted_first_failure(n) for n in range(8, 17)]
    for n in range(17, 33):
        assert first_failure(n) == predicted_first_failure(n), n


def test_g163_failure_degrees():
    r = gysin_report(16, 3)
    assert r.failure_degrees[0] == 15
    assert r.dual()


def test_charrank_and_ucharrank():
    for n in range(8, 33):
        cr = charrank_oriented_tautological(n, 3)
        assert cr + 1 & cr, n
        assert ucharrank_oriented3(n) == cr
    with pytest.raises(ValueError):
        ucharrank_oriented3(7)


def test_two_power_bracket():
    assert [two_power_bracket(n) for n in (8, 9, 16, 17)] == [3, 4, 4, 5]


@pytest.mark.parametrize("n,k", [(10, 5), (11, 5), (12, 5), (12, 6), (13, 6), (14, 7)])
def test_k5_bound(n, k):
    v = verify_theorem_k5(n, k)
    assert v.passed, v.failures()
    assert charrank_oriented_tautological(n, k) >= n - k + 2


def test_refusals():
    for n in (4, 5):
        with pytest.raises(ValueError):
            gysin_report(n, 3)
        with pytest.raises(ValueError):
            char_subring_oriented3(n)
    with pytest.raises(ValueError):
        borel_ring(3, 3)
    with pytest.raises(ValueError):
        verify_theorem_k5(9, 5)


def test_subring_is_half_at_powers_of_two():
    for n in (8, 16):
        S = char_subring_oriented3(n)
        assert 2 * sum(graded_dims(S)) == sum(gysin_report(n, 3).betti)


def test_truncated_borel_agrees_with_full():
    full = graded_dims(borel_ring(10, 4))
    part = graded_dims(borel_ring(10, 4, cap=9))
    assert part == full[:10]
