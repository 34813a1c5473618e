"""Weighted bounded negativity bounds and the report that collects them.

Notation used throughout:

alpha  min self-intersection of the strict transforms of the decorated curves
       (special section and fibers for delta > 0, both rulings for delta = 0,
       lines through p1 over P2)
beta   min self-intersection of the strict transforms of the exceptional curves
omega  a - delta for 0 < delta < a; for delta = 0, max(a_1, a_2) where a_i is
       the smallest threshold over the choices of special section in ruling i
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .config import (
    BaseSurface,
    ConfigError,
    Configuration,
    CurveDecoration,
    CurveKind,
    p2_to_f1,
    require_valid,
)
from .cone import generator_classes
from .formulas import AResult, CurvetteData, Method, compute_a, single_root_terms
from .lattice import (
    NSClass,
    PairingContext,
    class_of_exceptional_strict,
    class_of_fiber_strict,
    class_of_line_strict,
    class_of_m_section_f0,
    class_of_special_section_strict,
    fraction_str,
    intersect,
    self_intersection,
)


class RegimeError(ValueError):
    """The requested quantity is not defined for this delta."""


@dataclass(frozen=True)
class Affine:
    """c0 + c1 * delta."""

    c0: int
    c1: int

    def at(self, delta: int) -> int:
        return self.c0 + self.c1 * delta

    def __str__(self) -> str:
        if not self.c1:
            return str(self.c0)
        lin = {1: "delta", -1: "-delta"}.get(self.c1, f"{self.c1}*delta")
        return lin if not self.c0 else f"{lin} {'+' if self.c0 > 0 else '-'} {abs(self.c0)}"


@dataclass(frozen=True)
class BoundEntry:
    theorem: str
    condition: str
    value: Fraction
    quantifier: str

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "condition": self.condition,
                "value": fraction_str(self.value), "quantifier": self.quantifier}


# -- alpha, beta ---------------------------------------------------------------------


def _int(x: Fraction) -> int:
    assert x.denominator == 1
    return int(x)


def alpha_terms(c: Configuration) -> list[tuple[str, Affine]]:
    """Self-intersection of each curve entering alpha, as a function of delta."""
    if c.base.is_p2:
        ctx = PairingContext.p2()
        return [(ln.name, Affine(_int(self_intersection(class_of_line_strict(c, ln), ctx)), 0))
                for ln in c.curves_of_kind(CurveKind.LINE_THROUGH_P1)]
    if c.base.is_f0:
        ctx = PairingContext.hirzebruch(0)
        out = []
        for cv in c.curves:
            cls = class_of_m_section_f0(cv) if cv.kind is CurveKind.M_SECTION_F0 else class_of_fiber_strict(c, cv)
            out.append((cv.name, Affine(_int(self_intersection(cls, ctx)), 0)))
        return out
    out = [(f.name, Affine(_int(self_intersection(class_of_fiber_strict(c, f), PairingContext.hirzebruch(0))), 0))
           for f in c.fibers]
    section = c.special_section or CurveDecoration("M0", CurveKind.SPECIAL_SECTION, ())
    s0, s1 = (self_intersection(class_of_special_section_strict(c, PairingContext.hirzebruch(d), section),
                                PairingContext.hirzebruch(d)) for d in (0, 1))
    out.append((section.name, Affine(_int(s0), _int(s1 - s0))))
    return out


def alpha(c: Configuration, delta: int | None = None) -> int | None:
    """min C~^2 over the decorated curves; None when there is no such curve."""
    require_valid(c)
    delta = _resolve_delta(c, delta, allow_p2=True)
    terms = alpha_terms(c)
    if not terms:
        return None
    return min(t.at(delta or 0) for _, t in terms)


def alpha_expression(c: Configuration, delta: int) -> Affine:
    """The affine term realizing alpha at ``delta`` (ties go to the first curve)."""
    terms = alpha_terms(c)
    return min((t for _, t in terms), key=lambda t: t.at(delta))


def beta(c: Configuration) -> int:
    require_valid(c)
    ctx = PairingContext.p2() if c.base.is_p2 else PairingContext.hirzebruch(0)
    return min(_int(self_intersection(class_of_exceptional_strict(c, p), ctx)) for p in c.ids)


def _resolve_delta(c: Configuration, delta: int | None, allow_p2: bool = False) -> int | None:
    if c.base.is_p2:
        if not allow_p2:
            raise ConfigError("expected a Hirzebruch configuration")
        return None
    if delta is None:
        delta = c.base.delta
    elif c.base.delta is not None and c.base.delta != delta:
        raise ConfigError(f"configuration is over F_{c.base.delta}, not F_{delta}")
    if delta is not None and delta < 0:
        raise ValueError("delta must be non-negative")
    if c.base.is_f0 and delta != 0:
        raise ConfigError("configuration is over F_0")
    if delta == 0 and not c.base.is_f0:
        raise ConfigError("delta = 0 needs a configuration decorated with curves of both rulings "
                          "(f_section_f0 / m_section_f0)")
    return delta


# -- delta = 0 ------------------------------------------------------------------------

GENERIC = "generic"


def delta_zero_variant(c: Configuration, ruling: str, choice: str | None) -> Configuration:
    """Arrowed variant of an F_0 configuration.

    ``ruling`` "M" keeps the f-sections as fibers and picks the special
    section among the m-sections; "F" exchanges the two rulings.  ``choice``
    None stands for a general member through no configuration point.
    """
    if ruling not in ("M", "F"):
        raise ValueError("ruling must be 'M' or 'F'")
    fiber_kind, section_kind = ((CurveKind.F_SECTION_F0, CurveKind.M_SECTION_F0) if ruling == "M"
                                else (CurveKind.M_SECTION_F0, CurveKind.F_SECTION_F0))
    curves = [CurveDecoration(cv.name, CurveKind.FIBER, cv.points) for cv in c.curves_of_kind(fiber_kind)]
    if choice is None:
        curves.append(CurveDecoration(GENERIC, CurveKind.SPECIAL_SECTION, ()))
    else:
        cv = c.curve(choice)
        if cv.kind is not section_kind:
            raise ValueError(f"{choice!r} is not a section of the {ruling} ruling")
        curves.append(CurveDecoration(cv.name, CurveKind.SPECIAL_SECTION, cv.points))
    return Configuration(BaseSurface.hirzebruch(None), c.points, tuple(curves))


@dataclass(frozen=True)
class DeltaZeroTable:
    m_choices: tuple[tuple[str, int], ...]
    f_choices: tuple[tuple[str, int], ...]

    @property
    def a1(self) -> int:
        return min(v for _, v in self.m_choices)

    @property
    def a2(self) -> int:
        return min(v for _, v in self.f_choices)

    @property
    def omega(self) -> int:
        return max(self.a1, self.a2)

    def to_json(self) -> dict:
        return {"m_ruling": dict(self.m_choices), "f_ruling": dict(self.f_choices),
                "a1": self.a1, "a2": self.a2, "omega": self.omega}


def delta_zero_table(c: Configuration, method: Method | str = Method.AUTO, cap: int | None = None) -> DeltaZeroTable:
    require_valid(c)
    if not c.base.is_f0:
        raise ConfigError("the delta = 0 table needs a configuration over F_0")
    rows = {}
    for ruling, kind in (("M", CurveKind.M_SECTION_F0), ("F", CurveKind.F_SECTION_F0)):
        choices = [cv.name for cv in c.curves_of_kind(kind)] + [None]
        rows[ruling] = tuple((GENERIC if ch is None else ch,
                              compute_a(delta_zero_variant(c, ruling, ch), method, cap).value) for ch in choices)
    return DeltaZeroTable(rows["M"], rows["F"])


# -- omega ------------------------------------------------------------------------------


def omega(c: Configuration, delta: int | None = None, method: Method | str = Method.AUTO,
          cap: int | None = None) -> int:
    delta = _resolve_delta(c, delta, allow_p2=True)
    if c.base.is_p2:
        return compute_a(c, method, cap).value - 1
    if delta is None:
        raise ValueError("omega needs a concrete delta")
    if delta == 0:
        return delta_zero_table(c, method, cap).omega
    a = compute_a(c, method, cap).value
    if delta >= a:
        raise RegimeError(f"omega is only defined for delta < a = {a}; the absolute bound applies instead")
    return a - delta


# -- theorem bounds ---------------------------------------------------------------------

_Q_ABSOLUTE = "every integral curve C on Z: C^2 >= value"
_Q_NEF = "every nef H on F_delta and integral C on Z with H*.C > 0: C^2/(H*.C)^2 >= value"
_Q_DELTA_SET = ("every D in Delta_{H*}(Z, epsilon) for a nonzero nef H on F_delta, and integral C on Z "
                "with D.C > 0: C^2/(D.C)^2 >= value")


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("epsilon must be rational (int or Fraction), not float")
    return Fraction(x)


def wbnc_bound_hirzebruch(c: Configuration, delta: int | None = None, method: Method | str = Method.AUTO,
                          cap: int | None = None) -> BoundEntry:
    delta = _resolve_delta(c, delta)
    if delta is None:
        raise ValueError("a concrete delta is needed")
    al = alpha(c, delta)
    if delta == 0:
        w = delta_zero_table(c, method, cap).omega
        return BoundEntry("nef_quotient", "delta = 0", Fraction(min(al, -w)), _Q_NEF)
    a = compute_a(c, method, cap).value
    if delta >= a:
        return BoundEntry("absolute", f"delta > 0 and delta >= a = {a}", Fraction(min(al, beta(c))), _Q_ABSOLUTE)
    return BoundEntry("nef_quotient", f"0 < delta < a = {a}", Fraction(min(al, -(a - delta))), _Q_NEF)


def wbnc_bound_delta_set(c: Configuration, delta: int | None, epsilon, method: Method | str = Method.AUTO,
                         cap: int | None = None) -> BoundEntry:
    eps = _frac(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    delta = _resolve_delta(c, delta)
    if delta is None:
        raise ValueError("a concrete delta is needed")
    w = omega(c, delta, method, cap)
    value = min(Fraction(alpha(c, delta)), Fraction(beta(c)), -Fraction(w) / eps ** 2)
    cond = "delta = 0" if delta == 0 else f"0 < delta < a = {w + delta}"
    return BoundEntry("delta_set_quotient", f"{cond}, epsilon = {fraction_str(eps)}", value, _Q_DELTA_SET)


def _require_p2(c: Configuration) -> Configuration:
    if not c.base.is_p2:
        raise ConfigError("expected a configuration over P2")
    return require_valid(c)


def wbnc_bound_p2(c: Configuration, method: Method | str = Method.AUTO, cap: int | None = None) -> list[BoundEntry]:
    """Quotient bound -(a - 1) for H = iota L* - tau E_p1*, and its two specializations."""
    _require_p2(c)
    a = compute_a(p2_to_f1(c), method, cap).value
    value = Fraction(-(a - 1))
    cond = f"a = {a} computed on the F_1 configuration"
    return [
        BoundEntry("p2_pencil_quotient", cond, value,
                   "every H = iota L* - tau E_p1* with iota >= tau >= 0 not both zero, and every integral "
                   "curve C on P2 other than a line through p1: C~^2/(H.C~)^2 >= value"),
        BoundEntry("p2_line_quotient", cond, value,
                   "every integral curve C on P2 other than a line through p1: C~^2/(L*.C~)^2 >= value"),
        BoundEntry("p2_degree", cond, value,
                   "every integral curve C on P2 other than a line through p1: "
                   "C~^2 >= value * (deg C - mult_p1 C)^2"),
    ]


def wbnc_bound_p2_delta(c: Configuration, epsilon, method: Method | str = Method.AUTO,
                        cap: int | None = None) -> BoundEntry:
    _require_p2(c)
    eps = _frac(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    a = compute_a(p2_to_f1(c), method, cap).value
    al, be = alpha(c), beta(c)
    base = min(be, al) if al is not None else be
    if a == 1:
        return BoundEntry("p2_absolute", "a = 1", Fraction(base), "every integral curve C on Z: C^2 >= value")
    return BoundEntry("p2_delta_set_quotient", f"a = {a} > 1, epsilon = {fraction_str(eps)}",
                      min(Fraction(base), -Fraction(a - 1) / eps ** 2),
                      "every H = iota L* - tau E_p1* (iota >= tau >= 0, not both zero), every nef D in "
                      "Delta_{H*}(Z, epsilon) and integral C on Z with D.C > 0: C^2/(D.C)^2 >= value")


# -- polyhedral-regime checks --------------------------------------------------------------


def _polyhedral_generators(c: Configuration, delta: int, method, cap) -> list[NSClass]:
    if c.base.is_p2:
        raise ConfigError("convert P2 configurations with p2_to_f1 first")
    delta = _resolve_delta(c, delta)
    a = compute_a(c, method, cap).value
    if delta is None or delta < a:
        raise RegimeError(f"generators of the effective cone are only known for delta >= a = {a}")
    return [cls for _, cls in generator_classes(c, PairingContext.hirzebruch(delta))]


def is_nef_polyhedral(d: NSClass, c: Configuration, delta: int, method: Method | str = Method.AUTO,
                      cap: int | None = None) -> bool:
    ctx = PairingContext.hirzebruch(delta)
    return all(intersect(d, s, ctx) >= 0 for s in _polyhedral_generators(c, delta, method, cap))


def delta_set_sufficient(d: NSClass, h: NSClass, epsilon, c: Configuration, delta: int,
                         method: Method | str = Method.AUTO, cap: int | None = None) -> bool:
    """True when d - epsilon*h is nef, which puts d in Delta_h(Z, epsilon).

    False only means membership was not established this way.
    """
    eps = _frac(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if not h.is_pullback:
        raise ValueError("h must be a pullback class (no exceptional part)")
    return is_nef_polyhedral(d - eps * h, c, delta, method, cap)


# -- report -------------------------------------------------------------------------------


@dataclass
class BoundsReport:
    surface: str
    delta: int | None
    a: int | None
    method: str | None
    alpha: int | None
    alpha_expr: Affine | None
    beta: int
    omega: int | None
    bounds: list[BoundEntry] = field(default_factory=list)
    delta_zero_detail: DeltaZeroTable | None = None
    curvettes: list[CurvetteData] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"surface": self.surface, "delta": self.delta, "a": self.a, "method": self.method}
        if self.alpha_expr is not None:
            out["alpha"] = {"c0": self.alpha_expr.c0, "c1": self.alpha_expr.c1, "value": self.alpha}
        else:
            out["alpha"] = self.alpha
        out["beta"] = self.beta
        out["omega"] = self.omega
        out["bounds"] = [b.to_json() for b in self.bounds]
        if self.delta_zero_detail is not None:
            out["delta_zero_table"] = self.delta_zero_detail.to_json()
        if self.curvettes:
            out["curvettes"] = [cv.to_json() for cv in self.curvettes]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_text(self) -> str:
        lines = [f"surface: {self.surface}" + ("" if self.delta is None else f" (delta = {self.delta})")]
        if self.a is not None:
            lines.append(f"a: {self.a} ({self.method})")
        if self.alpha_expr is not None:
            lines.append(f"alpha: {self.alpha} [{self.alpha_expr}]")
        elif self.alpha is not None:
            lines.append(f"alpha: {self.alpha}")
        lines.append(f"beta: {self.beta}")
        if self.omega is not None:
            lines.append(f"omega: {self.omega}")
        if self.delta_zero_detail is not None:
            t = self.delta_zero_detail
            lines.append("delta = 0 thresholds:")
            lines.append("  M ruling: " + ", ".join(f"{k}={v}" for k, v in t.m_choices) + f"  -> a1 = {t.a1}")
            lines.append("  F ruling: " + ", ".join(f"{k}={v}" for k, v in t.f_choices) + f"  -> a2 = {t.a2}")
        for cv in self.curvettes:
            mults = " ".join(f"{p}:{cv.multiplicities[p]}" for p in cv.chain)
            lines.append(f"curvette {cv.q}: {mults} (M0: {cv.int_with_special_section}, "
                         f"F: {cv.int_with_fiber_through_root})")
        for b in self.bounds:
            lines.append(f"[{b.theorem}] {fraction_str(b.value)}  if {b.condition}")
            lines.append(f"    for {b.quantifier}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _curvettes_for(c: Configuration, res: AResult) -> list[CurvetteData]:
    if res.method != "closed_form_b":
        return []
    return [data for data, _ in single_root_terms(c)]


def full_report(c: Configuration, delta: int | None = None, epsilon=None, method: Method | str = Method.AUTO,
                cap: int | None = None, extra_bounds: Iterable[BoundEntry] = ()) -> BoundsReport:
    require_valid(c)
    if epsilon is not None:
        epsilon = _frac(epsilon)
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")

    if c.base.is_p2:
        f1 = p2_to_f1(c)
        res = compute_a(f1, method, cap)
        rep = BoundsReport("p2", None, res.value, res.method, alpha(c), None, beta(c), res.value - 1,
                           curvettes=_curvettes_for(f1, res))
        rep.bounds.extend(wbnc_bound_p2(c, method, cap))
        if res.value == 1 or epsilon is not None:
            rep.bounds.append(wbnc_bound_p2_delta(c, epsilon if epsilon is not None else 1, method, cap))
        rep.bounds.extend(extra_bounds)
        return rep

    delta = _resolve_delta(c, delta)
    if delta == 0:
        table = delta_zero_table(c, method, cap)
        rep = BoundsReport("hirzebruch", 0, None, None, alpha(c, 0), None, beta(c), table.omega,
                           delta_zero_detail=table)
        rep.bounds.append(wbnc_bound_hirzebruch(c, 0, method, cap))
        if epsilon is not None:
            rep.bounds.append(wbnc_bound_delta_set(c, 0, epsilon, method, cap))
        rep.bounds.extend(extra_bounds)
        return rep

    res = compute_a(c, method, cap)
    shown = res.value if delta is None else delta
    rep = BoundsReport("hirzebruch", delta, res.value, res.method, alpha(c, shown), alpha_expression(c, shown),
                       beta(c), None, curvettes=_curvettes_for(c, res))
    if delta is None:
        rep.notes.append(f"alpha shown at delta = a = {res.value}; pass a delta for the theorem bounds")
    else:
        if delta < res.value:
            rep.omega = res.value - delta
        rep.bounds.append(wbnc_bound_hirzebruch(c, delta, method, cap))
        if epsilon is not None and delta < res.value:
            rep.bounds.append(wbnc_bound_delta_set(c, delta, epsilon, method, cap))
    rep.bounds.extend(extra_bounds)
    return rep
