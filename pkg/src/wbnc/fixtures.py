"""Worked example configurations, built in code."""

from __future__ import annotations

from math import ceil

from .config import BaseSurface, Configuration, CurveDecoration, CurveKind, Point

# child -> (parent, extra proximity target)
_FIG1_POINTS = {
    "p1": (None, None),
    "p2": ("p1", None),
    "p3": ("p2", None),
    "p4": ("p3", None),
    "p5": ("p4", None),
    "p6": ("p5", "p4"),
    "p7": ("p6", "p4"),
    "p8": ("p3", "p2"),
    "p9": ("p8", None),
    "p10": (None, None),
    "p11": ("p10", None),
    "p12": ("p11", None),
    "p13": ("p12", "p11"),
    "p14": ("p10", None),
    "p15": ("p14", None),
    "p16": ("p15", "p14"),
    "p17": ("p16", "p15"),
    "p18": (None, None),
    "p19": ("p18", None),
    "p20": ("p19", "p18"),
}


def _fig_points() -> tuple[Point, ...]:
    return tuple(Point(pid, parent, extra) for pid, (parent, extra) in _FIG1_POINTS.items())


def fig1(delta: int | None = None) -> Configuration:
    """Twenty points over F_delta with three decorated fibers and the special section."""
    curves = (
        CurveDecoration("F1", CurveKind.FIBER, ("p1",)),
        CurveDecoration("F2", CurveKind.FIBER, ("p10", "p11")),
        CurveDecoration("M0", CurveKind.SPECIAL_SECTION, ("p10", "p14", "p15")),
        CurveDecoration("F3", CurveKind.FIBER, ("p18", "p19")),
    )
    return Configuration(BaseSurface.hirzebruch(delta), _fig_points(), curves)


def fig2() -> Configuration:
    """The same points over F_0, decorated by three curves of each ruling."""
    curves = (
        CurveDecoration("F1", CurveKind.F_SECTION_F0, ("p1",)),
        CurveDecoration("F2", CurveKind.F_SECTION_F0, ("p10", "p11")),
        CurveDecoration("F3", CurveKind.F_SECTION_F0, ("p18", "p19")),
        CurveDecoration("M1", CurveKind.M_SECTION_F0, ("p1", "p2", "p3", "p4", "p5")),
        CurveDecoration("M2", CurveKind.M_SECTION_F0, ("p10", "p14", "p15")),
        CurveDecoration("M3", CurveKind.M_SECTION_F0, ("p18",)),
    )
    return Configuration(BaseSurface.hirzebruch(0), _fig_points(), curves)


# Per-choice thresholds for fig2, keyed by the curve playing the special section
# (None = a general member of the linear system through no point).
FIG2_TABLE_M = {"M1": 4, "M2": 6, "M3": 8, None: 9}
FIG2_TABLE_F = {"F1": 4, "F2": 3, "F3": 3, None: 5}


def fig3(r: int, n: int) -> Configuration:
    """rn + 2 free points over P2: q1, q2 on the line L1, then n branches of length r at q2."""
    if r < 3 or n < 1:
        raise ValueError("fig3 needs r >= 3 and n >= 1")
    points = [Point("q1"), Point("q2", "q1")]
    for k in range(1, n + 1):
        parent = "q2"
        for j in range(1, r + 1):
            pid = f"p{k}_{j}"
            points.append(Point(pid, parent))
            parent = pid
    curves = (CurveDecoration("L1", CurveKind.LINE_THROUGH_P1, ("q2",)),)
    return Configuration(BaseSurface.p2(), tuple(points), curves)


def fig3_prior_bound(r: int, n: int) -> int:
    """Earlier general bound on C~^2 / (L*.C~)^2 for the fig3 family."""
    return -n * ceil((r - 2) / 4) - 2 * n + 1


FIXTURES = {"fig1": fig1, "fig2": fig2, "fig3": fig3}


def get_fixture(name: str, r: int = 3, n: int = 1) -> Configuration:
    if name == "fig1":
        return fig1()
    if name == "fig2":
        return fig2()
    if name == "fig3":
        return fig3(r, n)
    raise KeyError(f"unknown fixture {name!r} (known: {', '.join(FIXTURES)})")
