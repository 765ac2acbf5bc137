import pytest

from grassmod2.f2core import PolyF2, PolyRing
from grassmod2.grassmann import char_subring_oriented3, gysin_report
from grassmod2.limits import LIMITS, ResourceCapExceeded
from grassmod2.presentations import (
    PreconditionError,
    PresentationError,
    build_presented_ring,
    cup_length_presented,
    duality_ok,
    eval_int,
    feasible_params,
    fixture_names,
    identity_hom,
    load_presentation,
    oriented3_instance,
    oriented3_presented,
    parse_poly,
    parse_presentation,
    restriction_oriented2,
    restriction_w21,
    search_params,
    verify_hom,
    w21_duality_pairs,
)
from grassmod2.quotient import cup_length, graded_dims

from oracles import sphere_product_betti

R = PolyRing(["w2", "w3", "x"], [2, 3, 5])


def test_eval_int():
    env = {"n": 13}
    assert eval_int("bitlen(n)", env) == 4
    assert eval_int("2**bitlen(n) - 4", env) == 12
    assert eval_int("n % 4 == 1 and not n > 20", env) is True
    assert eval_int("max(n // 2, 3)", env) == 6
    for bad in ("__import__('os')", "n.real", "[1]", "open"):
        with pytest.raises(PresentationError):
            eval_int(bad, env)


def test_parse_poly():
    w2, w3, x = R.gen("w2"), R.gen("w3"), R.gen("x")
    assert parse_poly("w2^2 + w3*w2 - 1", R) == w2 * w2 + w3 * w2 + R.one()
    assert parse_poly("x^(n-3)", R, {"n": 5}) == x * x
    assert parse_poly("x^e", R, {"e": 3}) == x**3
    assert parse_poly("g(5)", R) == R.zero()
    assert parse_poly("g(7)", R) == w2 * w2 * w3
    assert parse_poly("3*w2", R) == w2
    assert parse_poly("(w2 + w3)^2", R) == w2 * w2 + w3 * w3
    assert parse_poly("P*x", R, values={"P": w2}) == w2 * x


@pytest.mark.parametrize("text", ["w2 +", "w4", "w2^", "(w2", "w2 w3", "x^(1", "g(n)"])
def test_parse_poly_errors(text):
    with pytest.raises(PresentationError):
        parse_poly(text, R)


def test_parse_presentation_errors():
    with pytest.raises(PresentationError):
        parse_presentation("generator x 1\n")
    with pytest.raises(PresentationError):
        parse_presentation("presentation p\nbogus 1\n")
    with pytest.raises(PresentationError):
        parse_presentation("presentation p\nlet a 3\n")
    with pytest.raises(PresentationError):
        parse_presentation("presentation p\nfix P when n > 1\n")


def test_inline_presentation():
    text = """
    presentation trunc   # a comment
    int n
    require n >= 1
    generator x 2
    relation x^(n+1)
    top 2*n
    """
    pres = parse_presentation(text)
    ring = build_presented_ring(pres.instantiate(n=3))
    assert graded_dims(ring) == [1, 0, 1, 0, 1, 0, 1]
    assert duality_ok(ring)
    with pytest.raises(PreconditionError):
        pres.instantiate(n=0)
    with pytest.raises(PreconditionError):
        pres.instantiate()


def test_fixtures_are_shipped():
    names = set(fixture_names())
    assert {
        "oriented2_odd", "oriented2_even", "w21_even", "w21_odd",
        "stiefel3", "oriented3_power", "oriented3_near_power",
    } <= names


@pytest.mark.parametrize("n", range(4, 21))
def test_oriented2_dims_match_gysin(n):
    name = "oriented2_odd" if n % 2 else "oriented2_even"
    ring = build_presented_ring(load_presentation(name).instantiate(n=n))
    assert tuple(graded_dims(ring)) == gysin_report(n, 2).betti
    assert duality_ok(ring)


@pytest.mark.parametrize("n", range(6, 14))
def test_stiefel_total_dimension(n):
    ring = build_presented_ring(load_presentation("stiefel3").instantiate(n=n))
    assert sum(graded_dims(ring)) == 8
    assert duality_ok(ring)


@pytest.mark.parametrize("m", range(1, 8))
def test_w21_even_matches_sphere_product(m):
    ring = build_presented_ring(load_presentation("w21_even").instantiate(m=m))
    assert graded_dims(ring) == sphere_product_betti(m - 1, [2 * m, 2 * m + 1])
    assert duality_ok(ring)


@pytest.mark.parametrize("m", range(2, 8))
def test_w21_odd_duality_pairs(m):
    pairs = w21_duality_pairs(m)
    assert pairs
    inst = load_presentation("w21_odd").instantiate(m=m)
    for lam, mu in pairs:
        ring = build_presented_ring(inst, {"lam": lam, "mu": mu})
        assert graded_dims(ring) == sphere_product_betti(m - 1, [2 * m - 2, 2 * m])


def test_parameter_coercion():
    inst = oriented3_instance(14)
    with pytest.raises(PreconditionError):
        inst.coerce_params({"P2": "w2^12"})  # fixed to zero at this n
    with pytest.raises(PreconditionError):
        inst.coerce_params({"P1": "w2"})  # wrong degree
    with pytest.raises(PresentationError):
        inst.coerce_params({"Q": 0})
    with pytest.raises(PreconditionError):
        oriented3_instance(12)


def test_power_of_two_presentation():
    ring = oriented3_presented(8)
    S = char_subring_oriented3(8)
    assert sum(graded_dims(ring)) == 2 * sum(graded_dims(S))
    assert tuple(graded_dims(ring)) == gysin_report(8, 3).betti
    assert duality_ok(ring)


@pytest.mark.parametrize("n", [8, 13, 14, 15, 16])
def test_feasible_rings_match_gysin(n):
    found = feasible_params(n)
    assert found
    betti = gysin_report(n, 3).betti
    inst = oriented3_instance(n)
    for a in found:
        ring = build_presented_ring(inst, a)
        assert tuple(graded_dims(ring)) == betti
        assert duality_ok(ring)


@pytest.mark.parametrize("n", [13, 14])
def test_second_parameter_forced_to_vanish(n):
    assert all(not a["P2"] for a in feasible_params(n))


def test_n15_extra_solutions_are_generator_changes_except_one():
    # P2 is only meaningful modulo P1*Q + Q^2 (generator change x -> x + Q)
    inst = oriented3_instance(15)
    S = inst.subring(("w2", "w3"))
    Qs = inst.param_candidates("P1")
    found = feasible_params(15)
    assert len(found) == 16
    removable = 0
    for a in found:
        if not a["P2"]:
            removable += 1
            continue
        if any(S.is_zero(_restrict(S, a["P2"] + a["P1"] * q + q * q)) for q in Qs):
            removable += 1
    assert removable == 15


def _restrict(S, p):
    return PolyF2(S.ring, frozenset(S.ring.monomial(p.ring.exponents(m)[:2]) for m in p.terms))


def test_search_cap():
    inst = oriented3_instance(15)
    old = LIMITS.cap_search
    LIMITS.cap_search = 3
    try:
        with pytest.raises(ResourceCapExceeded):
            search_params(inst, lambda r: True)
    finally:
        LIMITS.cap_search = old


def test_identity_homs():
    for name, ints in [("oriented2_odd", {"n": 9}), ("w21_even", {"m": 3}), ("stiefel3", {"n": 9})]:
        assert verify_hom(identity_hom(load_presentation(name).instantiate(**ints)))


@pytest.mark.parametrize("n", range(4, 20))
def test_oriented2_restrictions(n):
    assert verify_hom(restriction_oriented2(n))


@pytest.mark.parametrize("N", range(5, 20))
def test_w21_restrictions(N):
    spec = restriction_w21(N)
    src = [(0, 0)] if N % 2 else w21_duality_pairs(spec.source.ints["m"])
    tgt = w21_duality_pairs(spec.target.ints["m"]) if N % 2 else [(0, 0)]
    for ls, ms in src:
        for lt, mt in tgt:
            ps = {"lam": ls, "mu": ms} if not N % 2 else None
            pt = {"lam": lt, "mu": mt} if N % 2 else None
            assert verify_hom(spec, ps, pt)


def test_bad_hom_is_rejected():
    spec = restriction_oriented2(6)
    spec.images = {"w2": "w2", "a": "w2^2"}
    with pytest.raises(PresentationError):
        verify_hom(spec)
    spec.images = {"w2": "w2"}
    with pytest.raises(PresentationError):
        verify_hom(spec)


@pytest.mark.parametrize("n", [8, 13, 14, 16])
def test_presented_cup_length_at_least_subring(n):
    assert cup_length_presented(n) >= cup_length(char_subring_oriented3(n))
