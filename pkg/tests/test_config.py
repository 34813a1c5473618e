import json
import random

import pydot
import pytest
from hypothesis import given, settings, strategies as st

from wbnc.config import (
    BaseSurface,
    ConfigError,
    Configuration,
    CurveDecoration,
    CurveKind,
    Point,
    arrowed_graph,
    chain_below,
    consistency_warnings,
    export_dot,
    level,
    maximal_points,
    p2_to_f1,
    parse_configuration,
    serialize,
    to_document,
    validate,
)
from wbnc.fixtures import fig1, fig2, fig3

from randconf import random_configuration


def hz(points, curves=(), delta=1):
    return Configuration(BaseSurface.hirzebruch(delta), tuple(points), tuple(curves))


def test_parse_fig1_document():
    c = parse_configuration(serialize(fig1()))
    assert len(c) == 20
    assert len(c.curves_of_kind(CurveKind.FIBER)) == 3
    assert len(c.curves_of_kind(CurveKind.SPECIAL_SECTION)) == 1
    assert validate(c) == []


def test_parse_single_point_over_p2():
    doc = {"surface": {"kind": "p2"}, "points": [{"id": "p1", "parent": None, "extra_proximity": None}],
           "curves": []}
    c = parse_configuration(json.dumps(doc))
    assert len(c) == 1 and c.curves == ()
    assert validate(c) == []


def test_parse_unknown_point_id_in_curve():
    doc = {"surface": {"kind": "hirzebruch", "delta": 1}, "points": [{"id": "p1"}],
           "curves": [{"name": "F1", "kind": "fiber", "points": ["p7"]}]}
    with pytest.raises(ConfigError, match="unknown point id"):
        parse_configuration(json.dumps(doc))


def test_parse_syntax_error_has_position():
    with pytest.raises(ConfigError, match="line 1, column"):
        parse_configuration('{"surface": ')


@pytest.mark.parametrize("doc, msg", [
    ({"surface": {"kind": "hirzebruch"}, "points": [], "bogus": 1}, "unknown field"),
    ({"surface": {"kind": "torus"}, "points": []}, "unknown kind"),
    ({"surface": {"kind": "hirzebruch", "delta": 1.5}, "points": []}, "delta must be"),
    ({"surface": {"kind": "hirzebruch"}, "points": [{"id": "a"}, {"id": "a"}]}, "duplicate id"),
    ({"surface": {"kind": "hirzebruch"}, "points": [{"id": "a"}],
      "curves": [{"name": "X", "kind": "conic", "points": ["a"]}]}, "unknown curve kind"),
])
def test_parse_rejects(doc, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_configuration(json.dumps(doc))


def test_symbolic_delta_accepted():
    doc = {"surface": {"kind": "hirzebruch", "delta": "symbolic"}, "points": [{"id": "p1"}]}
    assert parse_configuration(json.dumps(doc)).base.is_symbolic


def test_validate_fig_fixtures():
    assert validate(fig1()) == []
    assert validate(fig2()) == []
    assert validate(fig3(3, 1)) == []


def test_duplicate_proximity_target():
    c = hz([Point("p1"), Point("p2", "p1", "p1")], [CurveDecoration("F1", CurveKind.FIBER, ("p1",))])
    assert any("duplicate proximity target" in v for v in validate(c))


def test_chain_not_parent_linked():
    pts = [Point("p1"), Point("p2", "p1"), Point("p3", "p2")]
    c = hz(pts, [CurveDecoration("F1", CurveKind.FIBER, ("p1", "p3"))])
    assert any("decoration chain not parent-linked" in v for v in validate(c))


@pytest.mark.parametrize("points, curves, fragment", [
    ([], [], "empty configuration"),
    ([Point("p1", "p9")], [], "unknown parent"),
    ([Point("p1", "p2"), Point("p2", "p1")], [], "cycle"),
    ([Point("p1"), Point("p2", "p1", "p7")], [], "unknown proximity target"),
    ([Point("p1"), Point("p2"), Point("p3", "p2", "p1")], [], "not a predecessor"),
    ([Point("p1", None, "p1")], [], "level-0 point"),
    ([Point("p1"), Point("p2", "p1")], [CurveDecoration("F1", CurveKind.FIBER, ("p2",))], "level"),
    ([Point("p1"), Point("p2", "p1"), Point("p3", "p2", "p1")],
     [CurveDecoration("F1", CurveKind.FIBER, ("p1", "p2", "p3"))], "satellite"),
    ([Point("p1")], [CurveDecoration("F1", CurveKind.FIBER, ("p1",)),
                     CurveDecoration("F2", CurveKind.FIBER, ("p1",))], "fiber"),
    ([Point("p1")], [CurveDecoration("F1", CurveKind.FIBER, ("p1",)),
                     CurveDecoration("M0", CurveKind.SPECIAL_SECTION, ()),
                     CurveDecoration("M1", CurveKind.SPECIAL_SECTION, ())], "special section"),
    ([Point("p1")], [CurveDecoration("F1", CurveKind.FIBER, ())], "empty chain"),
])
def test_validate_violations(points, curves, fragment):
    violations = validate(hz(points, curves))
    assert violations, "expected a violation"
    assert any(fragment in v for v in violations), violations


def test_transversality_of_fiber_and_section():
    pts = [Point("p1"), Point("p2", "p1")]
    c = hz(pts, [CurveDecoration("F1", CurveKind.FIBER, ("p1", "p2")),
                 CurveDecoration("M0", CurveKind.SPECIAL_SECTION, ("p1", "p2"))])
    assert validate(c)


def test_p2_roots_need_a_line():
    c = Configuration(BaseSurface.p2(), (Point("p1"), Point("q")), ())
    assert any("line" in v for v in validate(c))


def test_levels_and_chains():
    c = fig1()
    assert level(c, "p1") == 0
    assert level(c, "p8") == 3
    assert level(c, "p20") == 2
    assert chain_below(c, "p7") == ["p1", "p2", "p3", "p4", "p5", "p6", "p7"]
    assert chain_below(c, "p9") == ["p1", "p2", "p3", "p8", "p9"]
    assert chain_below(c, "p10") == ["p10"]


def test_maximal_points():
    assert set(maximal_points(fig1())) == {"p7", "p9", "p13", "p17", "p20"}
    assert maximal_points(hz([Point("x")])) == ["x"]
    assert maximal_points(hz([Point("a"), Point("b", "a"), Point("c", "b")])) == ["c"]


def test_proximity_queries():
    c = fig1()
    assert set(c.proximate_to("p4")) == {"p5", "p6", "p7"}
    assert set(c.proximate_to("p2")) == {"p3", "p8"}
    assert c.point("p6").is_satellite and not c.point("p5").is_satellite


def test_arrowed_graph_arrows_at_chain_ends():
    g = arrowed_graph(fig1())
    assert dict(g.arrows) == {"F1": "p1", "F2": "p11", "M0": "p15", "F3": "p19"}
    assert len(g.vertices) == 20
    assert len(g.proximity_edges) == 19 - 2 + 7  # parent links plus the seven extra proximities


def _dot_counts(text):
    graphs = pydot.graph_from_dot_data(text)
    assert graphs is not None and len(graphs) == 1
    names = [n.get_name().strip('"') for n in graphs[0].get_nodes()]
    points = [n for n in names if n not in ("node", "edge", "graph") and not n.startswith("arrow:")]
    arrows = [n for n in names if n.startswith("arrow:")]
    return points, arrows


def test_dot_fig1_parses_with_counts():
    points, arrows = _dot_counts(export_dot(fig1()))
    assert len(points) == 20
    assert len(arrows) == 4


def test_dot_fig2_has_six_arrows():
    assert len(_dot_counts(export_dot(fig2()))[1]) == 6


def test_dot_no_curves_no_arrows():
    c = hz([Point("p1"), Point("p2", "p1")])
    assert _dot_counts(export_dot(c))[1] == []


def test_dot_deterministic():
    assert export_dot(fig1()) == export_dot(fig1())


def test_p2_to_f1_fig3():
    f1 = p2_to_f1(fig3(3, 1))
    assert f1.base == BaseSurface.hirzebruch(1)
    assert f1.roots() == ("q2",)
    assert f1.special_section.points == ("q2",)
    assert [f.points for f in f1.fibers] == [("q2",)]
    assert len(f1) == len(fig3(3, 1)) - 1


def test_p2_to_f1_lone_p1_is_empty():
    c = Configuration(BaseSurface.p2(), (Point("p1"),), ())
    with pytest.raises(ConfigError) as err:
        p2_to_f1(c)
    assert "empty configuration" in err.value.violations


def test_p2_to_f1_second_root_on_a_line():
    c = Configuration(BaseSurface.p2(), (Point("p1"), Point("q")),
                      (CurveDecoration("L1", CurveKind.LINE_THROUGH_P1, ("q",)),))
    f1 = p2_to_f1(c)
    assert f1.roots() == ("q",)
    assert f1.special_section.points == ()
    assert [f.points for f in f1.fibers] == [("q",)]


def test_fig3_point_count():
    assert len(fig3(3, 1)) == 5
    assert len(fig3(4, 3)) == 14


def test_consistency_warnings_quiet_on_fixtures():
    assert consistency_warnings(fig1()) == []


def test_consistency_warning_for_satellite_parent():
    # p4 -> p1 although its parent p3 is not proximate to p1
    pts = [Point("p1"), Point("p2", "p1"), Point("p3", "p2"), Point("p4", "p3", "p1")]
    assert consistency_warnings(hz(pts))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 12))
def test_random_configurations_round_trip(seed, n):
    c = random_configuration(random.Random(seed), n)
    assert validate(c) == []
    back = parse_configuration(serialize(c))
    assert validate(back) == []
    assert back == c
    assert to_document(back) == to_document(c)
    for q in c.ids:
        assert len(chain_below(c, q)) == level(c, q) + 1
    for p in c.points:
        if p.is_satellite:
            anc = chain_below(c, p.id)[:-1]
            assert p.parent in anc and p.extra_proximity in anc and p.parent != p.extra_proximity


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10 ** 9), r=st.integers(3, 6), n=st.integers(1, 3))
def test_p2_to_f1_preserves_other_proximities(seed, r, n):
    c = fig3(r, n)
    f1 = p2_to_f1(c)
    p1 = c.points[0].id
    before = {(p.id, t) for p in c.points for t in p.targets if p1 not in (p.id, t)}
    after = {(p.id, t) for p in f1.points for t in p.targets}
    assert before == after
    assert len(f1) == len(c) - 1
