"""Configurations of infinitely near points over a Hirzebruch surface or P2.

A configuration stores each point with its parent (the point it was blown up
from) and at most one extra proximity target.  Curves through the points
(fibers, sections, lines) are stored as explicit chains of points; the arrow
of the arrowed proximity graph sits on the last element of each chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Iterable


class ConfigError(ValueError):
    """Raised for malformed documents and for unusable configurations."""

    def __init__(self, message: str, violations: Iterable[str] = ()):
        super().__init__(message)
        self.violations = list(violations)


class SurfaceKind(str, Enum):
    P2 = "p2"
    HIRZEBRUCH = "hirzebruch"


class CurveKind(str, Enum):
    FIBER = "fiber"
    SPECIAL_SECTION = "special_section"
    M_SECTION_F0 = "m_section_f0"
    F_SECTION_F0 = "f_section_f0"
    LINE_THROUGH_P1 = "line_through_p1"


SYMBOLIC = "symbolic"


@dataclass(frozen=True)
class BaseSurface:
    """P2, or the Hirzebruch surface F_delta.

    ``delta`` is None for P2 and for Hirzebruch configurations whose delta is
    left symbolic (only the arrowed proximity graph matters, e.g. when
    computing the threshold).
    """

    kind: SurfaceKind
    delta: int | None = None

    @classmethod
    def p2(cls) -> BaseSurface:
        return cls(SurfaceKind.P2)

    @classmethod
    def hirzebruch(cls, delta: int | None = None) -> BaseSurface:
        return cls(SurfaceKind.HIRZEBRUCH, delta)

    @property
    def is_p2(self) -> bool:
        return self.kind is SurfaceKind.P2

    @property
    def is_symbolic(self) -> bool:
        return self.kind is SurfaceKind.HIRZEBRUCH and self.delta is None

    @property
    def is_f0(self) -> bool:
        return self.kind is SurfaceKind.HIRZEBRUCH and self.delta == 0


@dataclass(frozen=True)
class Point:
    id: str
    parent: str | None = None
    extra_proximity: str | None = None

    @property
    def targets(self) -> tuple[str, ...]:
        """Points this one is proximate to (parent first)."""
        return tuple(t for t in (self.parent, self.extra_proximity) if t is not None)

    @property
    def is_satellite(self) -> bool:
        return len(self.targets) == 2


@dataclass(frozen=True)
class CurveDecoration:
    name: str
    kind: CurveKind
    points: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "kind", CurveKind(self.kind))

    @property
    def last(self) -> str | None:
        return self.points[-1] if self.points else None


@dataclass(frozen=True)
class Configuration:
    base: BaseSurface
    points: tuple[Point, ...]
    curves: tuple[CurveDecoration, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "curves", tuple(self.curves))

    # cached_property needs an instance __dict__, which frozen dataclasses keep.
    @cached_property
    def _index(self) -> dict[str, Point]:
        return {p.id: p for p in self.points}

    @cached_property
    def _proximate(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {p.id: [] for p in self.points}
        for p in self.points:
            for t in p.targets:
                if t in out:
                    out[t].append(p.id)
        return {k: tuple(v) for k, v in out.items()}

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def point(self, pid: str) -> Point:
        try:
            return self._index[pid]
        except KeyError:
            raise KeyError(f"unknown point id {pid!r}") from None

    def proximate_to(self, pid: str) -> tuple[str, ...]:
        """Ids of the points q with q -> pid, in declaration order."""
        self.point(pid)
        return self._proximate[pid]

    def roots(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.points if p.parent is None)

    def curves_of_kind(self, *kinds: CurveKind) -> tuple[CurveDecoration, ...]:
        return tuple(c for c in self.curves if c.kind in kinds)

    def curve(self, name: str) -> CurveDecoration:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(f"unknown curve {name!r}")

    @property
    def special_section(self) -> CurveDecoration | None:
        found = self.curves_of_kind(CurveKind.SPECIAL_SECTION)
        return found[0] if found else None

    @property
    def fibers(self) -> tuple[CurveDecoration, ...]:
        return self.curves_of_kind(CurveKind.FIBER)

    @property
    def p1(self) -> str:
        """The distinguished first point of a P2 configuration."""
        if not self.base.is_p2:
            raise ConfigError("only P2 configurations have a distinguished p1")
        if not self.points:
            raise ConfigError("empty configuration")
        return self.points[0].id

    def with_base(self, base: BaseSurface) -> Configuration:
        return replace(self, base=base)

    def with_curves(self, curves: Iterable[CurveDecoration]) -> Configuration:
        return replace(self, curves=tuple(curves))


@dataclass(frozen=True)
class ArrowedProximityGraph:
    vertices: tuple[str, ...]
    proximity_edges: tuple[tuple[str, str], ...]
    arrows: tuple[tuple[str, str], ...] = field(default=())


# -- structural queries ------------------------------------------------------


def level(c: Configuration, pid: str) -> int:
    return len(chain_below(c, pid)) - 1


def chain_below(c: Configuration, q: str) -> list[str]:
    """The chain of points p with q >= p, root first and q last."""
    chain = [c.point(q).id]
    seen = {q}
    parent = c.point(q).parent
    while parent is not None:
        if parent in seen:
            raise ConfigError(f"parent cycle through {parent!r}")
        seen.add(parent)
        chain.append(parent)
        parent = c.point(parent).parent
    chain.reverse()
    return chain


def maximal_points(c: Configuration) -> list[str]:
    """Points that are nobody's parent or proximity target."""
    used = {t for p in c.points for t in p.targets}
    return [pid for pid in c.ids if pid not in used]


def arrowed_graph(c: Configuration) -> ArrowedProximityGraph:
    edges = tuple((p.id, t) for p in c.points for t in p.targets)
    arrows = tuple((cv.name, cv.last if cv.last is not None else "none") for cv in c.curves)
    return ArrowedProximityGraph(c.ids, edges, arrows)


# -- validation ----------------------------------------------------------------


def _ancestors(c: Configuration, pid: str, known: set[str]) -> list[str] | None:
    """Strict ancestors of pid, or None when the parent links are broken."""
    out = []
    seen = {pid}
    parent = c._index[pid].parent
    while parent is not None:
        if parent not in known or parent in seen:
            return None
        out.append(parent)
        seen.add(parent)
        parent = c._index[parent].parent
    return out


def validate(c: Configuration) -> list[str]:
    """Check every structural invariant; returns violations (empty = valid)."""
    v: list[str] = []
    if not c.points:
        return ["empty configuration"]
    if c.base.kind is SurfaceKind.HIRZEBRUCH and c.base.delta is not None and c.base.delta < 0:
        v.append(f"negative delta {c.base.delta}")

    known: set[str] = set()
    for p in c.points:
        if p.id in known:
            v.append(f"duplicate point id {p.id!r}")
        known.add(p.id)

    broken: set[str] = set()
    for p in c.points:
        if p.parent is not None and p.parent not in known:
            v.append(f"point {p.id!r}: unknown parent {p.parent!r}")
            broken.add(p.id)
            continue
        if p.extra_proximity is not None and p.extra_proximity not in known:
            v.append(f"point {p.id!r}: unknown proximity target {p.extra_proximity!r}")
            broken.add(p.id)
            continue
        anc = _ancestors(c, p.id, known)
        if anc is None:
            if p.parent is not None:
                v.append(f"point {p.id!r}: parent relation has a cycle or dangling link")
            broken.add(p.id)
            continue
        if p.extra_proximity is None:
            continue
        if p.parent is None:
            v.append(f"point {p.id!r}: level-0 point cannot be proximate to {p.extra_proximity!r}")
        elif p.extra_proximity == p.parent:
            v.append(f"point {p.id!r}: duplicate proximity target {p.parent!r}")
        elif p.extra_proximity not in anc:
            v.append(f"point {p.id!r}: proximity target {p.extra_proximity!r} is not a predecessor")

    for cv in c.curves:
        v.extend(_validate_curve(c, cv, known, broken))
    if not v:
        v.extend(_validate_base_rules(c))
    return v


def _validate_curve(c: Configuration, cv: CurveDecoration, known: set[str], broken: set[str]) -> list[str]:
    v = []
    where = f"curve {cv.name!r}"
    missing = [pid for pid in cv.points if pid not in known]
    if missing:
        return [f"{where}: unknown point id {pid!r}" for pid in missing]
    if any(pid in broken for pid in cv.points):
        return v
    if not cv.points and cv.kind is not CurveKind.SPECIAL_SECTION:
        v.append(f"{where}: empty chain (only a special section may pass through no point)")
    if len(set(cv.points)) != len(cv.points):
        v.append(f"{where}: repeated point in chain")
    for prev, nxt in zip(cv.points, cv.points[1:]):
        if c._index[nxt].parent != prev:
            v.append(f"{where}: decoration chain not parent-linked at {prev!r} -> {nxt!r}")
            return v
    if not cv.points:
        return v
    first = c._index[cv.points[0]]
    if cv.kind is CurveKind.LINE_THROUGH_P1 and c.base.is_p2:
        p1 = c.points[0].id
        if p1 in cv.points:
            v.append(f"{where}: the distinguished point {p1!r} belongs to no decoration")
        elif first.parent not in (None, p1):
            v.append(f"{where}: chain must start at level 0 or right after {p1!r}")
    elif first.parent is not None:
        v.append(f"{where}: chain must start at a level-0 point")
    on_curve = set(cv.points)
    if cv.kind is CurveKind.LINE_THROUGH_P1 and c.base.is_p2:
        on_curve.add(c.points[0].id)
    for pid in cv.points:
        extra = c._index[pid].extra_proximity
        if extra is not None and extra in on_curve:
            v.append(f"{where}: smooth curve cannot pass through satellite {pid!r} "
                     f"(proximate to {extra!r} on the same curve)")
    return v


_ALLOWED = {
    "hirzebruch": {CurveKind.FIBER, CurveKind.SPECIAL_SECTION},
    "f0": {CurveKind.F_SECTION_F0, CurveKind.M_SECTION_F0},
    "p2": {CurveKind.LINE_THROUGH_P1},
}


def _validate_base_rules(c: Configuration) -> list[str]:
    v = []
    if c.base.is_p2:
        regime = "p2"
    elif c.base.is_f0:
        regime = "f0"
    else:
        regime = "hirzebruch"
    for cv in c.curves:
        if cv.kind not in _ALLOWED[regime]:
            v.append(f"curve {cv.name!r}: kind {cv.kind.value!r} not allowed over this base")
    names = [cv.name for cv in c.curves]
    for name in sorted({n for n in names if names.count(n) > 1}):
        v.append(f"duplicate curve name {name!r}")
    if v:
        return v

    if regime == "hirzebruch":
        if len(c.curves_of_kind(CurveKind.SPECIAL_SECTION)) > 1:
            v.append("more than one special section")
        v.extend(_one_curve_per_root(c, c.roots(), (CurveKind.FIBER,), "fiber"))
        v.extend(_transversal(c, c.fibers, c.curves_of_kind(CurveKind.SPECIAL_SECTION)))
    elif regime == "f0":
        v.extend(_one_curve_per_root(c, c.roots(), (CurveKind.F_SECTION_F0,), "f-section"))
        v.extend(_one_curve_per_root(c, c.roots(), (CurveKind.M_SECTION_F0,), "m-section"))
        v.extend(_transversal(c, c.curves_of_kind(CurveKind.F_SECTION_F0),
                              c.curves_of_kind(CurveKind.M_SECTION_F0)))
    else:
        p1 = c.points[0].id
        if c.points[0].parent is not None:
            v.append(f"the first point {p1!r} must have level 0")
        # Points on the first exceptional divisor become level-0 points over F_1,
        # so they need a line too.
        needs_line = [p.id for p in c.points[1:] if p.parent in (None, p1)]
        v.extend(_one_curve_per_root(c, needs_line, (CurveKind.LINE_THROUGH_P1,), "line through p1"))
    return v


def _one_curve_per_root(c: Configuration, roots: Iterable[str], kinds, label: str) -> list[str]:
    v = []
    curves = c.curves_of_kind(*kinds)
    for root in roots:
        n = sum(root in cv.points for cv in curves)
        if n != 1:
            v.append(f"point {root!r} lies on {n} {label} decorations (expected exactly 1)")
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            shared = sorted(set(a.points) & set(b.points), key=c.ids.index)
            if shared:
                v.append(f"{label} decorations {a.name!r} and {b.name!r} share point {shared[0]!r}")
    return v


def _transversal(c: Configuration, first, second) -> list[str]:
    # A fiber meets a section once, transversally: at most one common point.
    v = []
    for a in first:
        for b in second:
            if len(set(a.points) & set(b.points)) > 1:
                v.append(f"curves {a.name!r} and {b.name!r} share more than one point")
    return v


def consistency_warnings(c: Configuration) -> list[str]:
    """Proximity consistency checks that are reported but not enforced.

    A satellite point q -> p (p not its parent) sits on the strict transform of
    E_p, so its parent must be proximate to p as well; and the points
    proximate to a fixed point beyond its first neighbourhood must form a chain.
    """
    w = []
    for p in c.points:
        if p.extra_proximity is not None and p.parent is not None:
            parent = c.point(p.parent)
            if p.extra_proximity not in parent.targets:
                w.append(f"point {p.id!r} -> {p.extra_proximity!r} but its parent "
                         f"{parent.id!r} is not proximate to {p.extra_proximity!r}")
    for p in c.points:
        prox = [q for q in c.proximate_to(p.id) if c.point(q).parent != p.id]
        for a, b in zip(prox, prox[1:]):
            if a not in chain_below(c, b) and b not in chain_below(c, a):
                w.append(f"points proximate to {p.id!r} do not form a chain ({a!r}, {b!r})")
                break
    return w


def require_valid(c: Configuration) -> Configuration:
    violations = validate(c)
    if violations:
        raise ConfigError("invalid configuration: " + "; ".join(violations), violations)
    return c


# -- P2 to F1 ------------------------------------------------------------------


def p2_to_f1(c: Configuration, special_name: str = "M0") -> Configuration:
    """Blow up the first point of a P2 configuration to land on F_1.

    Lines through p1 become fibers and the first exceptional divisor becomes
    the special section, whose chain is made of the points proximate to p1.
    """
    if not c.base.is_p2:
        raise ConfigError("p2_to_f1 expects a configuration over P2")
    if not c.points:
        raise ConfigError("empty configuration", ["empty configuration"])
    p1 = c.points[0].id
    points = []
    on_exceptional = []
    for p in c.points[1:]:
        if p1 in p.targets:
            on_exceptional.append(p.id)
        parent = None if p.parent == p1 else p.parent
        extra = None if p.extra_proximity == p1 else p.extra_proximity
        points.append(Point(p.id, parent, extra))
    curves = [CurveDecoration(special_name, CurveKind.SPECIAL_SECTION, tuple(on_exceptional))]
    for cv in c.curves:
        curves.append(CurveDecoration(cv.name, CurveKind.FIBER, cv.points))
    out = Configuration(BaseSurface.hirzebruch(1), tuple(points), tuple(curves))
    violations = validate(out)
    if violations:
        raise ConfigError("P2 configuration does not give a valid F1 configuration: "
                          + "; ".join(violations), violations)
    return out


# -- JSON ----------------------------------------------------------------------

_TOP_FIELDS = {"surface", "points", "curves"}
_POINT_FIELDS = {"id", "parent", "extra_proximity"}
_CURVE_FIELDS = {"name", "kind", "points"}


def _check_fields(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown field {unknown[0]!r}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing field {missing[0]!r}")


def _parse_surface(obj: Any) -> BaseSurface:
    _check_fields(obj, {"kind", "delta"}, {"kind"}, "surface")
    kind = obj["kind"]
    if kind == "p2":
        if obj.get("delta") is not None:
            raise ConfigError("surface: p2 takes no delta")
        return BaseSurface.p2()
    if kind != "hirzebruch":
        raise ConfigError(f"surface: unknown kind {kind!r}")
    delta = obj.get("delta")
    if delta is None or delta == SYMBOLIC:
        return BaseSurface.hirzebruch(None)
    if isinstance(delta, bool) or not isinstance(delta, int):
        raise ConfigError(f"surface: delta must be an integer or {SYMBOLIC!r}")
    return BaseSurface.hirzebruch(delta)


def _opt_id(value: Any, where: str) -> str | None:
    if value is None or isinstance(value, str):
        return value
    raise ConfigError(f"{where}: point ids must be strings")


def parse_configuration(text: str) -> Configuration:
    """Parse a JSON document.  Invariants are checked later by ``validate``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _check_fields(doc, _TOP_FIELDS, {"surface", "points"}, "document")
    base = _parse_surface(doc["surface"])

    if not isinstance(doc["points"], list):
        raise ConfigError("points: expected a list")
    points = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["points"]):
        where = f"points[{i}]"
        _check_fields(raw, _POINT_FIELDS, {"id"}, where)
        pid = _opt_id(raw["id"], where)
        if pid is None:
            raise ConfigError(f"{where}: id must be a string")
        if pid in seen:
            raise ConfigError(f"{where}: duplicate id {pid!r}")
        seen.add(pid)
        points.append(Point(pid, _opt_id(raw.get("parent"), where), _opt_id(raw.get("extra_proximity"), where)))

    curves = []
    names: set[str] = set()
    for i, raw in enumerate(doc.get("curves", [])):
        where = f"curves[{i}]"
        _check_fields(raw, _CURVE_FIELDS, {"name", "kind"}, where)
        name = raw["name"]
        if name in names:
            raise ConfigError(f"{where}: duplicate curve name {name!r}")
        names.add(name)
        try:
            kind = CurveKind(raw["kind"])
        except ValueError:
            raise ConfigError(f"{where}: unknown curve kind {raw['kind']!r}") from None
        chain = raw.get("points", [])
        if not isinstance(chain, list):
            raise ConfigError(f"{where}: points must be a list")
        for pid in chain:
            if pid not in seen:
                raise ConfigError(f"{where}: unknown point id {pid!r}")
        curves.append(CurveDecoration(name, kind, tuple(chain)))
    return Configuration(base, tuple(points), tuple(curves))


def to_document(c: Configuration) -> dict:
    if c.base.is_p2:
        surface: dict = {"kind": "p2"}
    else:
        surface = {"kind": "hirzebruch", "delta": SYMBOLIC if c.base.delta is None else c.base.delta}
    return {
        "surface": surface,
        "points": [{"id": p.id, "parent": p.parent, "extra_proximity": p.extra_proximity} for p in c.points],
        "curves": [{"name": cv.name, "kind": cv.kind.value, "points": list(cv.points)} for cv in c.curves],
    }


def serialize(c: Configuration) -> str:
    return json.dumps(to_document(c), indent=2) + "\n"


# -- DOT -----------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(c: Configuration, name: str = "APG") -> str:
    """Graphviz rendering of the arrowed proximity graph.

    Parent edges are solid, extra proximities are drawn curved (dashed), and
    each decoration gets a labeled pseudo-node pointed at by its last point.
    """
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=circle, style=filled, "
             "fillcolor=black, fixedsize=true, width=0.12, label=\"\", xlabel=\"\"];"]
    for p in c.points:
        lines.append(f"  {_quote(p.id)} [xlabel={_quote(p.id)}];")
    for p in c.points:
        if p.parent is not None:
            lines.append(f"  {_quote(p.parent)} -> {_quote(p.id)} [arrowhead=none];")
    for p in c.points:
        if p.extra_proximity is not None:
            lines.append(f"  {_quote(p.extra_proximity)} -> {_quote(p.id)} "
                         "[arrowhead=none, style=dashed, constraint=false];")
    for i, cv in enumerate(c.curves):
        if cv.last is None:
            continue
        arrow = _quote(f"arrow:{i}:{cv.name}")
        lines.append(f"  {arrow} [shape=plaintext, style=\"\", width=0, label={_quote('~' + cv.name)}];")
        lines.append(f"  {_quote(cv.last)} -> {arrow};")
    lines.append("}")
    return "\n".join(lines) + "\n"
