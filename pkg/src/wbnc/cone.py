"""Exact rational polyhedral cones and duality under the intersection form.

The dual of cone(S) with respect to a symmetric form G is
{v : v^T G s >= 0 for every generator s}.  Its extreme rays are found with
the double description method in exact integer arithmetic: start from the
simplicial cone cut out by d independent halfspaces, then insert the
remaining halfspaces one at a time, combining adjacent ray pairs across each
new hyperplane.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .config import Configuration, require_valid
from .lattice import (
    NSClass,
    PairingContext,
    class_of_exceptional_strict,
    class_of_fiber_strict,
    class_of_special_section_strict,
    gram_matrix,
)

log = logging.getLogger(__name__)

Vector = tuple[int, ...]


class NonSpanningError(ValueError):
    def __init__(self, dim: int, rank: int):
        super().__init__(f"generators span a subspace of dimension {rank} in ambient dimension {dim} "
                         f"(deficient by {dim - rank})")
        self.dim = dim
        self.rank = rank
        self.deficiency = dim - rank


class ThresholdError(RuntimeError):
    """The delta scan hit its cap, or the threshold was not monotone."""


def primitive(vec: Sequence) -> Vector:
    """Positive rescaling of a nonzero rational vector to a primitive integer one."""
    if all(type(x) is int for x in vec):
        g = reduce(gcd, vec, 0)
        if g == 0:
            raise ValueError("zero vector is not a ray")
        return tuple(x // g for x in vec)
    fr = [Fraction(x) for x in vec]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("zero vector is not a ray")
    return tuple(x // g for x in ints)


def _matvec(g: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(row[j] * v[j] for j in range(len(v)) if row[j]) for row in g)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def pair(u: Sequence, v: Sequence, form: Sequence[Sequence[int]]) -> Fraction | int:
    return _dot(u, _matvec(form, v))


def identity_form(dim: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


@dataclass(frozen=True)
class RationalCone:
    """Cone generated by ``rays``; ``form`` is the bilinear form used for duality."""

    ambient_dim: int
    rays: tuple[Vector, ...]
    form: tuple[tuple[int, ...], ...]

    def __init__(self, rays: Iterable[Sequence], form: Sequence[Sequence[int]] | None = None,
                 ambient_dim: int | None = None):
        canon: list[Vector] = []
        for r in rays:
            v = primitive(r)
            if v not in canon:
                canon.append(v)
        if ambient_dim is None:
            if not canon:
                raise ValueError("ambient dimension needed for a cone without rays")
            ambient_dim = len(canon[0])
        if any(len(v) != ambient_dim for v in canon):
            raise ValueError("all rays must have the ambient dimension")
        form = identity_form(ambient_dim) if form is None else tuple(tuple(int(x) for x in row) for row in form)
        if len(form) != ambient_dim or any(len(row) != ambient_dim for row in form):
            raise ValueError("form must be a square matrix of the ambient dimension")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "rays", tuple(canon))
        object.__setattr__(self, "form", form)

    @classmethod
    def with_context(cls, rays: Iterable[Sequence], ctx: PairingContext, n_points: int) -> RationalCone:
        return cls(rays, gram_matrix(ctx, n_points), (1 if ctx.is_p2 else 2) + n_points)

    def sorted(self) -> RationalCone:
        return RationalCone(sorted(self.rays), self.form, self.ambient_dim)

    def pair(self, u: Sequence, v: Sequence):
        return pair(u, v, self.form)

    def self_pairing(self, v: Sequence):
        return pair(v, v, self.form)

    def same_cone(self, other: RationalCone) -> bool:
        """Equality as sets, via membership of each generator set in the other cone."""
        return all(other.contains(r) for r in self.rays) and all(self.contains(r) for r in other.rays)

    def contains(self, v: Sequence) -> bool:
        """Membership test through the facet normals (extreme rays of the dual)."""
        facets = dual_cone(self)
        return all(facets.pair(f, v) >= 0 for f in facets.rays)


# -- exact linear algebra ----------------------------------------------------------


def rank(rows: Sequence[Sequence]) -> int:
    return len(_independent_rows(rows, len(rows[0]) if rows else 0))


def _reduce_row(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    return [x // g for x in row] if g > 1 else row


def _eliminate(row: list[int], pivot_row: list[int], col: int) -> list[int]:
    """Fraction-free elimination of ``row[col]`` using ``pivot_row``."""
    f, pv = row[col], pivot_row[col]
    if pv < 0:
        f, pv = -f, -pv
    return _reduce_row([pv * x - f * y for x, y in zip(row, pivot_row)])


def _independent_rows(rows: Sequence[Sequence], dim: int) -> list[int]:
    """Indices of a maximal independent subset of rows, chosen greedily in order."""
    basis: list[tuple[int, list[int]]] = []  # (pivot column, reduced integer row)
    chosen = []
    for idx, row in enumerate(rows):
        fr = [Fraction(x) for x in row]
        den = reduce(lcm, (x.denominator for x in fr), 1)
        r = [int(x * den) for x in fr]
        for col, b in basis:
            if r[col]:
                r = _eliminate(r, b, col)
        pivot = next((j for j in range(dim) if r[j]), None)
        if pivot is not None:
            basis.append((pivot, r))
            chosen.append(idx)
            if len(chosen) == dim:
                break
    return chosen


def _inverse_columns(square: Sequence[Sequence[int]]) -> list[Vector]:
    """Columns of the inverse of a nonsingular integer matrix, made primitive."""
    n = len(square)
    aug = [[int(x) for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(square)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                aug[r] = _eliminate(aug[r], aug[col], col)
    # now aug = [D | D A^-1] with D diagonal
    return [primitive([Fraction(aug[i][n + j], aug[i][i]) for i in range(n)]) for j in range(n)]


# -- double description ------------------------------------------------------------


def extreme_rays_of_halfspaces(normals: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Extreme rays of the pointed cone {x : a.x >= 0 for every normal a}.

    Raises NonSpanningError when the normals do not have full rank (the cone
    then contains a line).
    """
    rows = [tuple(int(x) for x in a) for a in normals]
    basis = _independent_rows(rows, dim)
    if len(basis) < dim:
        raise NonSpanningError(dim, len(basis))

    # Initial simplicial cone: rays are the columns of the inverse of the basis rows.
    rays = _inverse_columns([rows[i] for i in basis])
    zero_sets = [0] * dim
    for j, i in enumerate(basis):
        for k in range(dim):
            if k != j:
                zero_sets[k] |= 1 << i

    for i, a in enumerate(rows):
        if i in basis:
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << i
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zero = [zero_sets[k] for k in pos] + [zero_sets[k] | bit for k in zer]
        for p in pos:
            for n in neg:
                common = zero_sets[p] & zero_sets[n]
                if common.bit_count() < dim - 2:
                    continue
                # Combinatorial adjacency: no third ray is tight on all common constraints.
                if any(k != p and k != n and zero_sets[k] & common == common for k in range(len(rays))):
                    continue
                vp, vn = vals[p], -vals[n]
                combo = [vp * x + vn * y for x, y in zip(rays[n], rays[p])]
                new_rays.append(primitive(combo))
                new_zero.append(common | bit)
        rays, zero_sets = new_rays, new_zero
    return sorted(set(rays))


def dual_cone(k: RationalCone) -> RationalCone:
    """Extreme rays of {v : <v, s> >= 0 for all generators s}, sorted."""
    normals = [_matvec(k.form, s) for s in k.rays]
    if not normals:
        raise NonSpanningError(k.ambient_dim, 0)
    rays = extreme_rays_of_halfspaces(normals, k.ambient_dim)
    return RationalCone(rays, k.form, k.ambient_dim)


# -- the surface cone ----------------------------------------------------------------


def generator_classes(c: Configuration, ctx: PairingContext) -> list[tuple[str, NSClass]]:
    """Labeled classes of S: strict transforms of exceptionals, decorated fibers, M0."""
    out = [(f"E{p}", class_of_exceptional_strict(c, p)) for p in c.ids]
    out += [(f.name, class_of_fiber_strict(c, f)) for f in c.fibers]
    section = c.special_section
    out.append((section.name if section else "M0", class_of_special_section_strict(c, ctx, section)
                if section else NSClass(-ctx.delta, 1)))
    return out


def effective_generators(c: Configuration, ctx: PairingContext) -> RationalCone:
    if c.base.is_p2 or ctx.is_p2:
        raise ValueError("effective_generators expects a Hirzebruch configuration; convert P2 with p2_to_f1")
    require_valid(c)
    vectors = [cls.vector(c.ids) for _, cls in generator_classes(c, ctx)]
    return RationalCone.with_context(vectors, ctx, len(c))


def threshold_holds(c: Configuration, delta: int) -> bool:
    """True when every extreme ray of the dual of cone(S) has non-negative square at delta."""
    ctx = PairingContext.hirzebruch(delta)
    dual = dual_cone(effective_generators(c, ctx))
    return all(dual.self_pairing(v) >= 0 for v in dual.rays)


def default_cap(c: Configuration) -> int:
    env = os.environ.get("WBNC_MAX_DELTA")
    if env:
        return int(env)
    return 10 * len(c) + 10


def min_delta_threshold(c: Configuration, cap: int | None = None, window: int = 5) -> int:
    """Least delta >= 1 for which ``threshold_holds``.

    The criterion is re-checked on ``[a, a + window]``; a failure there means
    the criterion is not monotone for this input and is reported as an error.
    """
    return _min_delta_threshold(c, default_cap(c) if cap is None else cap, window)


@lru_cache(maxsize=256)
def _min_delta_threshold(c: Configuration, cap: int, window: int) -> int:
    """Least delta >= 1 for which ``threshold_holds``.

    The criterion is re-checked on ``[a, a + window]``; a failure there means
    the criterion is not monotone for this input and is reported as an error.
    """
    if c.base.is_p2:
        raise ValueError("convert a P2 configuration with p2_to_f1 first")
    for delta in range(1, cap + 1):
        if threshold_holds(c, delta):
            log.debug("threshold reached at delta=%d", delta)
            for later in range(delta + 1, delta + window + 1):
                if not threshold_holds(c, later):
                    raise ThresholdError(f"criterion holds at delta={delta} but fails at delta={later}")
            return delta
    raise ThresholdError(f"no delta <= {cap} satisfies the criterion (raise --max-delta)")
