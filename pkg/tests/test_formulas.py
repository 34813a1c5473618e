import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wbnc.config import (
    BaseSurface,
    ConfigError,
    Configuration,
    CurveDecoration,
    CurveKind,
    Point,
    chain_below,
    maximal_points,
    p2_to_f1,
)
from wbnc.cone import min_delta_threshold
from wbnc.fixtures import fig1, fig2, fig3
from wbnc.formulas import (
    HypothesisNotMet,
    a_closed_form_free_fibers,
    a_closed_form_single_root,
    ceil_star,
    compute_a,
    curvette,
    curvette_multiplicities,
    free_fibers_hypotheses,
    single_root_hypotheses,
)

from oracles import free_fibers_selection_max
from randconf import random_configuration, random_free_fiber_configuration, random_points


def hz(points, curves):
    return Configuration(BaseSurface.hirzebruch(None), tuple(points), tuple(curves))


def fiber(name, *pts):
    return CurveDecoration(name, CurveKind.FIBER, tuple(pts))


NO_SECTION = CurveDecoration("M0", CurveKind.SPECIAL_SECTION, ())


def two_free_chains():
    pts = [Point("a1"), Point("a2", "a1"), Point("a3", "a2"), Point("b1"), Point("b2", "b1")]
    return hz(pts, [fiber("F1", "a1"), fiber("F2", "b1"), NO_SECTION])


def assert_proximity_equalities(c, chain, mult):
    inside = set(chain)
    assert mult[chain[-1]] == 1
    for p in chain:
        above = [q for q in c.proximate_to(p) if q in inside]
        assert mult[p] == (sum(mult[q] for q in above) if above else 1)


@pytest.mark.parametrize("x, expected", [(Fraction(23, 10), 3), (-5, 1), (4, 4), (0, 1), (Fraction(1, 3), 1)])
def test_ceil_star(x, expected):
    assert ceil_star(x) == expected


@settings(max_examples=200)
@given(x=st.fractions(min_value=-50, max_value=50))
def test_ceil_star_properties(x):
    v = ceil_star(x)
    assert v >= x and v >= 1 and isinstance(v, int)
    assert v - 1 < x or v == 1


def test_curvette_free_chain():
    pts = [Point("p1")] + [Point(f"p{i}", f"p{i - 1}") for i in range(2, 6)]
    c = hz(pts, [fiber("F1", "p1"), NO_SECTION])
    data = curvette(c, "p5")
    assert set(data.multiplicities.values()) == {1}
    assert data.sum_of_squares == 5


def test_curvette_satellite_by_hand():
    pts = [Point("p1"), Point("p2", "p1"), Point("p3", "p2", "p1")]
    c = hz(pts, [fiber("F1", "p1"), NO_SECTION])
    assert curvette(c, "p3").multiplicities == {"p1": 2, "p2": 1, "p3": 1}


@pytest.mark.parametrize("r, n", [(3, 1), (5, 2), (8, 4)])
def test_curvette_fig3(r, n):
    c = p2_to_f1(fig3(r, n))
    for q in maximal_points(c):
        data = curvette(c, q)
        assert data.sum_of_squares == r + 1
        assert data.int_with_special_section == 1
        assert data.int_with_fiber_through_root == 1


def test_curvette_requires_maximal_point():
    with pytest.raises(ValueError):
        curvette(fig1(), "p3")


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 8), sat=st.booleans())
def test_curvette_multiplicities_satisfy_proximity_equalities(seed, n, sat):
    rng = random.Random(seed)
    pts = random_points(rng, n, satellites=sat, max_roots=1)
    c = hz(pts, [])
    for q in maximal_points(c):
        chain = chain_below(c, q)
        mult = curvette_multiplicities(c, chain)
        assert_proximity_equalities(c, chain, mult)
        if not any(c.point(p).is_satellite for p in chain):
            assert set(mult.values()) == {1}


def test_closed_form_a_examples():
    assert a_closed_form_free_fibers(two_free_chains()) == 5
    assert a_closed_form_free_fibers(hz([Point("p1")], [fiber("F1", "p1"), NO_SECTION])) == 1
    with pytest.raises(HypothesisNotMet, match="satellite"):
        a_closed_form_free_fibers(fig1())
    assert free_fibers_selection_max(two_free_chains()) == 5


def test_closed_form_b_examples():
    single = hz([Point("q0")], [fiber("F1", "q0"), NO_SECTION])
    assert a_closed_form_single_root(single) == 1
    pair = hz([Point("q0"), Point("q1", "q0")], [fiber("F1", "q0"), NO_SECTION])
    assert a_closed_form_single_root(pair) == 2
    with pytest.raises(HypothesisNotMet):
        a_closed_form_single_root(fig1())


@pytest.mark.parametrize("r", range(3, 11))
def test_closed_form_b_fig3(r):
    for n in (1, 2):
        assert a_closed_form_single_root(p2_to_f1(fig3(r, n))) == r - 1
        assert a_closed_form_single_root(fig3(r, n)) == r - 1  # converts P2 input itself


def test_compute_a_dispatch():
    assert compute_a(fig1()) == (6, "cone")
    assert compute_a(p2_to_f1(fig3(5, 3))) == (4, "closed_form_b")
    assert compute_a(two_free_chains()) == (5, "closed_form_a")
    assert compute_a(two_free_chains(), "cone") == (5, "cone")
    assert compute_a(two_free_chains(), "closed_form") == (5, "closed_form_a")
    with pytest.raises(HypothesisNotMet):
        compute_a(fig1(), "closed_form")


def test_compute_a_refuses_f0():
    with pytest.raises(ConfigError):
        compute_a(fig2())


def test_hypothesis_reasons_are_listed():
    reasons = free_fibers_hypotheses(fig1())
    assert any("satellite" in r for r in reasons)
    assert any("level-0 point lies on the special section" in r for r in reasons)
    assert single_root_hypotheses(fig1()) == ["3 points of level 0 (need exactly one)"]


@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 8))
def test_closed_form_a_against_brute_force_and_cone(seed, n):
    c = random_free_fiber_configuration(random.Random(seed), n)
    assert free_fibers_hypotheses(c) == []
    value = a_closed_form_free_fibers(c)
    assert value == free_fibers_selection_max(c)
    assert value == min_delta_threshold(c)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 7), sat=st.booleans())
def test_closed_form_b_against_cone(seed, n, sat):
    c = random_configuration(random.Random(seed), n, satellites=sat, max_roots=1)
    assert a_closed_form_single_root(c) == min_delta_threshold(c)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 7))
def test_auto_agrees_with_cone(seed, n):
    c = random_configuration(random.Random(seed), n)
    assert compute_a(c).value == compute_a(c, "cone").value
