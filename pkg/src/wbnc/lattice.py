"""Divisor classes on the blown-up surface and their intersection pairing.

Classes are written in the pullback basis as

    a F* + b M* - sum_p m_p E_p*      (Hirzebruch base)
    a L*        - sum_p m_p E_p*      (P2 base, b is None)

with F^2 = 0, F.M = 1, M^2 = delta, L^2 = 1, E_p*.E_q* = -[p == q].
Everything is exact (``fractions.Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .config import BaseSurface, Configuration, CurveDecoration, CurveKind, SurfaceKind


class BasisMismatch(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use int or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class NSClass:
    """A class a F* + b M* - sum m_p E_p* (or a L* - sum m_p E_p* when b is None)."""

    a: Fraction
    b: Fraction | None
    m: tuple[tuple[str, Fraction], ...] = ()

    def __init__(self, a=0, b=0, m: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        items = m.items() if isinstance(m, Mapping) else m
        merged: dict[str, Fraction] = {}
        for pid, val in items:
            merged[pid] = merged.get(pid, Fraction(0)) + _frac(val)
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", None if b is None else _frac(b))
        object.__setattr__(self, "m", tuple(sorted((k, v) for k, v in merged.items() if v != 0)))

    @classmethod
    def p2(cls, a=0, m=()) -> NSClass:
        return cls(a, None, m)

    @property
    def is_p2(self) -> bool:
        return self.b is None

    def mult(self, pid: str) -> Fraction:
        for k, v in self.m:
            if k == pid:
                return v
        return Fraction(0)

    @property
    def multiplicities(self) -> dict[str, Fraction]:
        return dict(self.m)

    @property
    def is_pullback(self) -> bool:
        return not self.m

    def _check(self, other: NSClass) -> None:
        if self.is_p2 != other.is_p2:
            raise BasisMismatch("cannot combine a P2-basis class with a Hirzebruch-basis class")

    def __add__(self, other: NSClass) -> NSClass:
        self._check(other)
        b = None if self.is_p2 else self.b + other.b
        return NSClass(self.a + other.a, b, list(self.m) + list(other.m))

    def __neg__(self) -> NSClass:
        return NSClass(-self.a, None if self.is_p2 else -self.b, [(k, -v) for k, v in self.m])

    def __sub__(self, other: NSClass) -> NSClass:
        return self + (-other)

    def __mul__(self, k) -> NSClass:
        k = _frac(k)
        return NSClass(k * self.a, None if self.is_p2 else k * self.b, [(p, k * v) for p, v in self.m])

    __rmul__ = __mul__

    def vector(self, order: Sequence[str]) -> tuple[Fraction, ...]:
        """Coordinates (a, b, m_p...) following ``order``; (a, m_p...) for P2."""
        extra = set(dict(self.m)) - set(order)
        if extra:
            raise KeyError(f"class has coefficients on points outside the ordering: {sorted(extra)}")
        head = (self.a,) if self.is_p2 else (self.a, self.b)
        return head + tuple(self.mult(p) for p in order)

    @classmethod
    def from_vector(cls, vec: Sequence, order: Sequence[str], p2: bool = False) -> NSClass:
        if p2:
            return cls.p2(vec[0], zip(order, vec[1:]))
        return cls(vec[0], vec[1], zip(order, vec[2:]))

    def to_json(self) -> dict:
        out: dict = {"a": fraction_str(self.a)}
        if not self.is_p2:
            out["b"] = fraction_str(self.b)
        out["m"] = {k: fraction_str(v) for k, v in self.m}
        return out

    def __str__(self) -> str:
        parts = [f"{self.a}L*"] if self.is_p2 else [f"{self.a}F*", f"{self.b}M*"]
        parts += [f"{-v}E{k}*" for k, v in self.m]
        return " + ".join(parts)


def fraction_str(x: Rational) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def exceptional(pid: str, p2: bool = False) -> NSClass:
    """The total transform E_p*."""
    return NSClass(0, None if p2 else 0, {pid: -1})


F_STAR = NSClass(1, 0)
M_STAR = NSClass(0, 1)
L_STAR = NSClass.p2(1)


@dataclass(frozen=True)
class PairingContext:
    base: BaseSurface

    def __post_init__(self):
        if self.base.kind is SurfaceKind.HIRZEBRUCH:
            if self.base.delta is None:
                raise ValueError("a pairing needs a concrete delta")
            if self.base.delta < 0:
                raise ValueError("delta must be non-negative")

    @classmethod
    def hirzebruch(cls, delta: int) -> PairingContext:
        return cls(BaseSurface.hirzebruch(delta))

    @classmethod
    def p2(cls) -> PairingContext:
        return cls(BaseSurface.p2())

    @property
    def delta(self) -> int | None:
        return self.base.delta

    @property
    def is_p2(self) -> bool:
        return self.base.is_p2


def intersect(u: NSClass, v: NSClass, ctx: PairingContext) -> Fraction:
    if u.is_p2 != ctx.is_p2 or v.is_p2 != ctx.is_p2:
        raise BasisMismatch("class basis does not match the pairing context")
    mv = dict(v.m)
    exc = sum((val * mv[k] for k, val in u.m if k in mv), Fraction(0))
    if ctx.is_p2:
        return u.a * v.a - exc
    return u.a * v.b + v.a * u.b + ctx.delta * u.b * v.b - exc


def self_intersection(u: NSClass, ctx: PairingContext) -> Fraction:
    return intersect(u, u, ctx)


def gram_matrix(ctx: PairingContext, n_points: int) -> list[list[int]]:
    """Gram matrix of the basis (F*, M*, E_1*, ..., E_n*) or (L*, E_1*, ...)."""
    head = [[1]] if ctx.is_p2 else [[0, 1], [1, ctx.delta]]
    k = len(head)
    size = k + n_points
    g = [[0] * size for _ in range(size)]
    for i in range(k):
        for j in range(k):
            g[i][j] = head[i][j]
    for i in range(k, size):
        g[i][i] = -1
    return g


def transport_self_intersection(s, b, delta_from: int, delta_to: int) -> Fraction:
    """Self-intersection of the same (a, b, m) class after changing delta."""
    return _frac(s) + _frac(b) ** 2 * (delta_to - delta_from)


# -- strict transforms ---------------------------------------------------------


def class_of_exceptional_strict(c: Configuration, pid: str) -> NSClass:
    """E_p* minus the total transforms of the points proximate to p."""
    p2 = c.base.is_p2
    m = {pid: -1}
    for q in c.proximate_to(pid):
        m[q] = 1
    return NSClass(0, None if p2 else 0, m)


def class_of_fiber_strict(c: Configuration, f: CurveDecoration) -> NSClass:
    if f.kind not in (CurveKind.FIBER, CurveKind.F_SECTION_F0):
        raise ValueError(f"curve {f.name!r} is not a fiber")
    if not f.points:
        raise ValueError(f"fiber {f.name!r} passes through no configuration point")
    return NSClass(1, 0, {p: 1 for p in f.points})


def class_of_special_section_strict(c: Configuration, ctx: PairingContext,
                                    section: CurveDecoration | None = None) -> NSClass:
    """M* - delta F* minus the points on the special section.

    ``section`` defaults to the configuration's special section decoration.
    """
    if ctx.is_p2 or c.base.is_p2:
        raise ValueError("the special section only exists over a Hirzebruch surface")
    if section is None:
        section = c.special_section
        if section is None:
            raise ValueError("configuration has no special section decoration")
    return NSClass(-ctx.delta, 1, {p: 1 for p in section.points})


def class_of_m_section_f0(cv: CurveDecoration) -> NSClass:
    """Strict transform of a section in |M| on F_0."""
    return NSClass(0, 1, {p: 1 for p in cv.points})


def class_of_line_strict(c: Configuration, line: CurveDecoration) -> NSClass:
    """L* - E_p1* minus the further points on a line through p1 (P2 basis)."""
    if line.kind is not CurveKind.LINE_THROUGH_P1:
        raise ValueError(f"curve {line.name!r} is not a line through p1")
    m = {c.p1: 1}
    m.update({p: 1 for p in line.points})
    return NSClass.p2(1, m)
