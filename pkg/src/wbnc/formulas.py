"""Closed forms for the polyhedrality threshold and the method dispatcher.

Two configuration families have closed forms:

* only free points, nothing at level 0 on the special section, and every
  decorated fiber passing through a single point: the threshold is the sum,
  over level-0 points, of the longest chain above each of them;
* a single level-0 point q0: the threshold is the max over maximal points q
  of ceil*((sum m_p^2 - 2 (phi.M0)(phi.F)) / (phi.F)^2), where m_p are the
  multiplicities of a curvette phi through the chain below q.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil
from typing import NamedTuple

from .config import (
    ConfigError,
    Configuration,
    CurveKind,
    chain_below,
    maximal_points,
    p2_to_f1,
    require_valid,
)
from .cone import min_delta_threshold

log = logging.getLogger(__name__)


class HypothesisNotMet(ValueError):
    """A closed form was asked for on a configuration outside its family."""

    def __init__(self, reasons: list[str]):
        super().__init__("; ".join(reasons))
        self.reasons = reasons


class MethodDisagreement(RuntimeError):
    pass


def ceil_star(x) -> int:
    """Least positive integer >= x."""
    return max(1, ceil(Fraction(x)))


@dataclass(frozen=True)
class CurvetteData:
    q: str
    chain: tuple[str, ...]
    multiplicities: dict[str, int]
    int_with_special_section: int
    int_with_fiber_through_root: int

    @property
    def sum_of_squares(self) -> int:
        return sum(m * m for m in self.multiplicities.values())

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "multiplicities": {p: self.multiplicities[p] for p in self.chain},
            "int_with_special_section": self.int_with_special_section,
            "int_with_fiber_through_root": self.int_with_fiber_through_root,
        }


def curvette_multiplicities(c: Configuration, chain: list[str]) -> dict[str, int]:
    """Multiplicities of a curvette whose points are exactly ``chain``.

    Solved from the last point down: m_last = 1 and every other point gets the
    sum of the multiplicities of the chain points proximate to it.
    """
    inside = set(chain)
    mult: dict[str, int] = {}
    for pid in reversed(chain):
        above = [q for q in c.proximate_to(pid) if q in inside]
        mult[pid] = sum(mult[q] for q in above) if above else 1
    return mult


def curvette(c: Configuration, q: str) -> CurvetteData:
    if q not in maximal_points(c):
        raise ValueError(f"{q!r} is not a maximal point")
    chain = chain_below(c, q)
    mult = curvette_multiplicities(c, chain)
    root = chain[0]
    section = c.special_section
    on_section = set(section.points) if section else set()
    fiber = next((f for f in c.fibers if root in f.points), None)
    if fiber is None:
        raise ConfigError(f"no decorated fiber through {root!r}")
    return CurvetteData(
        q=q,
        chain=tuple(chain),
        multiplicities=mult,
        int_with_special_section=sum(mult[p] for p in chain if p in on_section),
        int_with_fiber_through_root=sum(mult[p] for p in chain if p in fiber.points),
    )


def _hirzebruch_shape(c: Configuration) -> Configuration:
    if c.base.is_p2:
        return p2_to_f1(c)
    if c.base.is_f0 or c.curves_of_kind(CurveKind.M_SECTION_F0, CurveKind.F_SECTION_F0):
        raise ConfigError("over F_0 the threshold depends on the choice of special section; "
                          "use the delta = 0 table (bounds.omega)")
    return c


# -- closed form for free chains on separate fibers ----------------------------------


def free_fibers_hypotheses(c: Configuration) -> list[str]:
    """Reasons why the free-points closed form does not apply (empty = applies)."""
    reasons = []
    satellites = [p.id for p in c.points if p.is_satellite]
    if satellites:
        reasons.append(f"satellite points present ({', '.join(satellites)})")
    section = c.special_section
    roots = set(c.roots())
    if section and roots & set(section.points):
        reasons.append("a level-0 point lies on the special section")
    for f in c.fibers:
        if len(f.points) > 1:
            reasons.append(f"strict transforms of fiber {f.name!r} pass through further points")
    return reasons


def a_closed_form_free_fibers(c: Configuration) -> int:
    c = _hirzebruch_shape(c)
    reasons = free_fibers_hypotheses(c)
    if reasons:
        raise HypothesisNotMet(reasons)
    best: dict[str, int] = {}
    for q in maximal_points(c):
        chain = chain_below(c, q)
        best[chain[0]] = max(best.get(chain[0], 0), len(chain))
    return sum(best.values())


# -- closed form for a single level-0 point ---------------------------------------------


def single_root_hypotheses(c: Configuration) -> list[str]:
    roots = c.roots()
    if len(roots) != 1:
        return [f"{len(roots)} points of level 0 (need exactly one)"]
    return []


def single_root_terms(c: Configuration) -> list[tuple[CurvetteData, int]]:
    out = []
    for q in maximal_points(c):
        data = curvette(c, q)
        fm = data.int_with_fiber_through_root
        value = Fraction(data.sum_of_squares - 2 * data.int_with_special_section * fm, fm * fm)
        out.append((data, ceil_star(value)))
    return out


def a_closed_form_single_root(c: Configuration) -> int:
    c = _hirzebruch_shape(c)
    reasons = single_root_hypotheses(c)
    if reasons:
        raise HypothesisNotMet(reasons)
    return max(v for _, v in single_root_terms(c))


# -- dispatcher ----------------------------------------------------------------------


class Method(str, Enum):
    AUTO = "auto"
    CONE = "cone"
    CLOSED_FORM = "closed_form"


class AResult(NamedTuple):
    value: int
    method: str


_CLOSED_FORMS = (
    ("closed_form_a", free_fibers_hypotheses, a_closed_form_free_fibers),
    ("closed_form_b", single_root_hypotheses, a_closed_form_single_root),
)


def compute_a(c: Configuration, method: Method | str = Method.AUTO, cap: int | None = None) -> AResult:
    """Threshold a(APG) with the tag of the method that produced it.

    ``auto`` uses a closed form when one applies and cross-checks it with the
    cone computation; otherwise it falls back to the cone computation.
    """
    method = Method(method)
    c = require_valid(_hirzebruch_shape(require_valid(c)))
    if method is Method.CONE:
        return AResult(min_delta_threshold(c, cap), "cone")

    closed = None
    reasons = []
    for tag, hyp, fn in _CLOSED_FORMS:
        why = hyp(c)
        if not why:
            closed = AResult(fn(c), tag)
            break
        reasons.extend(why)
    if closed is None:
        if method is Method.CLOSED_FORM:
            raise HypothesisNotMet(reasons)
        return AResult(min_delta_threshold(c, cap), "cone")
    if method is Method.CLOSED_FORM:
        return closed
    cone_value = min_delta_threshold(c, cap)
    if cone_value != closed.value:
        raise MethodDisagreement(f"{closed.method} gives {closed.value} but the cone method gives {cone_value}")
    log.debug("closed form %s confirmed by cone method: %d", closed.method, closed.value)
    return closed
