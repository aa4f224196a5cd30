import json

import pytest
from hypothesis import given, strategies as st

from realsplit.assemble import (
    CoefficientError,
    CoefficientRing,
    CyclotomicLocus,
    ExplicitCount,
    InputError,
    NoSplittingClaimed,
    QuadraticLocus,
    VarietyInput,
    assemble_splitting,
    check_coefficients,
    corrupt_family,
    from_json_dict,
    integral_top_cell,
    parse_text,
    primes_up_to,
    render,
    render_text,
    resolve_components,
    to_json_dict,
    verify_all,
)
from realsplit.motives import PlusPartCell
from realsplit.real_locus import IncompleteInputError

Z2 = CoefficientRing.parse("Z[1/2]")
Q = CoefficientRing.rationals()


def primes_by_sieve(n):
    flags = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if flags[p]:
            out.append(p)
            for q in range(p * p, n + 1, p):
                flags[q] = False
    return out


# -- coefficients --------------------------------------------------------------

def test_primes_up_to_matches_sieve():
    assert primes_up_to(200) == primes_by_sieve(200)


@pytest.mark.parametrize("ring, g, passed, missing", [
    ("Z[1/2]", 1, True, []),
    ("Z[1/2]", 3, False, [3, 5]),
    ("Q", 2, True, []),
    ("Z", 1, False, [2]),
    ("Z[1/6,1/5]", 3, True, []),
])
def test_check_coefficients(ring, g, passed, missing):
    r = check_coefficients(CoefficientRing.parse(ring), g)
    assert r.passed is passed
    assert r.details["missing_primes"] == missing


@given(st.integers(1, 12), st.sets(st.sampled_from(primes_by_sieve(30)), max_size=8))
def test_coefficients_pass_iff_factorial_is_a_unit(g, inverted):
    ring = CoefficientRing(frozenset(inverted))
    fact_primes = {p for p in primes_by_sieve(2 * g)}
    assert check_coefficients(ring, g).passed == fact_primes.issubset(inverted)


def test_ring_parsing_and_labels():
    assert CoefficientRing.parse("ℤ[1/6]").label == "Z[1/2,1/3]"
    assert CoefficientRing.parse("ℚ").label == "Q"
    assert CoefficientRing.parse("Z").label == "Z"
    assert CoefficientRing.inverting(12, 5).inverted_primes == {2, 3, 5}
    for bad in ("Z[2]", "R", "Z[1/x]"):
        with pytest.raises(InputError):
            CoefficientRing.parse(bad)
    with pytest.raises(InputError):
        CoefficientRing(frozenset({4}))


# -- inputs ------------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 3, 6, 12])
def test_explicit_count_must_be_power_of_two(n):
    with pytest.raises(InputError):
        VarietyInput(3, ExplicitCount(n), Q)


def test_explicit_count_bounded_by_two_to_g():
    with pytest.raises(InputError):
        VarietyInput(2, ExplicitCount(8), Q)


def test_g_mismatch_with_field_data():
    with pytest.raises(InputError):
        resolve_components(VarietyInput(2, QuadraticLocus(-2), Q))


def test_missing_epsilon_is_incomplete():
    with pytest.raises(IncompleteInputError):
        assemble_splitting(VarietyInput(1, QuadraticLocus(-1), Z2))


# -- assembly ----------------------------------------------------------------

def test_elliptic_d_minus_two():
    e = assemble_splitting(VarietyInput(1, QuadraticLocus(-2), Z2))
    assert e.n_components == 2
    assert e.plus_part == (PlusPartCell(0, 0, 0), PlusPartCell(0, 0, 1), PlusPartCell(2, 1, 0))
    assert e.minus_part == ((0, 2), (1, 2))
    assert render_text(e) == "S^{0,0} ∨ J_1 ∨ S^{2,1} ∨ 2×(S^{0,0} ∨ S^{1,0})"


def test_elliptic_one_component():
    e = assemble_splitting(VarietyInput(1, QuadraticLocus(-3), Z2))
    assert render_text(e) == "S^{0,0} ∨ J_1 ∨ S^{2,1} ∨ 1×(S^{0,0} ∨ S^{1,0})"


def test_surface_with_four_components():
    e = assemble_splitting(VarietyInput(2, ExplicitCount(4), Q))
    assert set(e.plus_part) == {
        PlusPartCell(0, 0, 0), PlusPartCell(4, 2, 0), PlusPartCell(2, 1, 0),
        PlusPartCell(0, 0, 1), PlusPartCell(2, 1, 1), PlusPartCell(0, 0, 2),
    }
    assert dict(e.minus_part) == {0: 4, 1: 8, 2: 4}
    assert render_text(e) == (
        "S^{0,0} ∨ J_1 ∨ J_2 ∨ S^{2,1} ∨ S^{2,1} ∧ J_1 ∨ S^{4,2} ∨ 4×(S^{0,0} ∨ 2×S^{1,0} ∨ S^{2,0})"
    )


def test_cyclotomic_assembly():
    e = assemble_splitting(VarietyInput(2, CyclotomicLocus(12, 0), Q))
    assert e.n_components == 4


@pytest.mark.parametrize("g, top", [(1, "S^{2,1}"), (2, "S^{4,2}"), (5, "S^{10,5}")])
def test_integral_top_cell(g, top):
    assert render_text(integral_top_cell(g)) == f"S^{{0,0}} ∨ F ∨ {top}"


def test_integral_input_is_refused_with_fallback():
    with pytest.raises(CoefficientError) as info:
        assemble_splitting(VarietyInput(1, QuadraticLocus(-2), CoefficientRing.integers()))
    assert render_text(info.value.fallback) == "S^{0,0} ∨ F ∨ S^{2,1}"


def test_no_rational_point_claims_nothing():
    with pytest.raises(NoSplittingClaimed):
        assemble_splitting(VarietyInput(1, QuadraticLocus(-2), Z2, rational_point=False))


# -- serialization -------------------------------------------------------------

variety_inputs = st.integers(1, 4).flatmap(
    lambda g: st.integers(0, g).map(lambda k: VarietyInput(g, ExplicitCount(2 ** k), Q))
)


@given(variety_inputs)
def test_json_round_trip(v):
    e = assemble_splitting(v)
    doc = json.loads(render(e, "json"))
    assert from_json_dict(doc) == e


@given(variety_inputs)
def test_text_round_trip_is_structural(v):
    e = assemble_splitting(v)
    back = parse_text(render_text(e), e.lambda_label)
    assert back.structure() == e.structure()
    assert render_text(back) == render_text(e)


def test_fallback_round_trips():
    e = integral_top_cell(3)
    assert parse_text(render_text(e), "Z").structure() == e.structure()
    assert from_json_dict(to_json_dict(e)) == e


def test_json_schema_keys_and_determinism():
    e = assemble_splitting(VarietyInput(1, QuadraticLocus(-2), Z2))
    doc = to_json_dict(e, {"deninger_murre": "pass"})
    assert list(doc) == [
        "schema_version", "g", "lambda", "n_components", "plus_part",
        "minus_part", "integral_fallback", "notes", "verification",
    ]
    assert doc["plus_part"][1] == {"p": 0, "q": 0, "j_index": 1}
    assert doc["minus_part"] == [{"i": 0, "multiplicity": 2}, {"i": 1, "multiplicity": 2}]
    assert render(e, "json") == render(e, "json")


def test_render_unknown_format():
    with pytest.raises(ValueError):
        render(integral_top_cell(1), "xml")


@pytest.mark.parametrize("bad", ["S^{0,0} ∨ J_1", "S^{0,0} ∨ Q ∨ 1×(S^{0,0})", "S^{0,0} ∨ F"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_text(bad)


# -- verification report -------------------------------------------------------

def test_verify_elliptic_full():
    r = verify_all(VarietyInput(1, QuadraticLocus(-2), Z2), depth="full")
    assert r.passed and r.exit_code == 0
    assert set(r.statuses().values()) == {"pass"}


def test_verify_threefold_explicit():
    v = VarietyInput(3, ExplicitCount(8), CoefficientRing.parse("Z[1/2,1/3,1/5]"))
    r = verify_all(v, depth="full")
    assert r.passed, r.to_dict()
    assert r.suites["deninger_murre"].details["n_range"] == list(range(-3, 4))


def test_verify_corrupted_projector_fails():
    r = verify_all(VarietyInput(1, QuadraticLocus(-2), Z2), depth="quick", corrupt_projector=1)
    assert r.suites["deninger_murre"].status == "fail"
    assert r.exit_code == 1


def test_verify_skips_topology_without_epsilon():
    r = verify_all(VarietyInput(1, QuadraticLocus(-1), Z2), depth="quick")
    assert r.suites["topology_oracle"].status == "skip"
    assert r.suites["real_locus"].status == "fail"


def test_verify_integral_reports_coefficient_failure():
    r = verify_all(VarietyInput(1, QuadraticLocus(-2), CoefficientRing.integers()), depth="quick")
    assert r.suites["coefficients"].status == "fail"
    assert r.suites["deninger_murre"].status == "pass"


def test_verify_is_deterministic_per_seed():
    v = VarietyInput(2, ExplicitCount(2), Q)
    a = verify_all(v, depth="quick", seed=7).to_dict()
    b = verify_all(v, depth="quick", seed=7).to_dict()
    for d in (a, b):
        for s in d["suites"].values():
            s.pop("runtime_s")
    assert a == b


def test_corrupt_family_index_range():
    with pytest.raises(InputError):
        corrupt_family(1, 5)
    with pytest.raises(InputError):
        verify_all(VarietyInput(1, QuadraticLocus(-2), Z2), depth="deep")
