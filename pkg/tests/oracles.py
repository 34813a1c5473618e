"""Slow, independent reference implementations used as test oracles.

Nothing here calls into the double description code or the closed forms;
the linear algebra is plain Gaussian elimination over Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from wbnc.config import Configuration, chain_below, maximal_points


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def matrix_rank(rows) -> int:
    if not rows:
        return 0
    return len(_rref([[Fraction(x) for x in row] for row in rows], len(rows[0]))[1])


def nullspace(rows, dim: int) -> list[list[Fraction]]:
    m, pivots = _rref([[Fraction(x) for x in row] for row in rows], dim)
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def to_primitive(v) -> tuple[int, ...]:
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def brute_force_extreme_rays(normals, dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of {x : a.x >= 0} by trying every (dim-1)-subset of constraints."""
    found = set()
    for subset in combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in subset]
        ns = nullspace(rows, dim)
        if len(ns) != 1:
            continue
        for sign in (1, -1):
            v = [sign * x for x in ns[0]]
            if all(sum(Fraction(a) * x for a, x in zip(n, v)) >= 0 for n in normals):
                found.add(to_primitive(v))
    return sorted(found)


def _solve(columns, target) -> list[Fraction] | None:
    """Unique solution of sum lambda_i columns_i = target, if consistent."""
    dim = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(dim)]
    m, pivots = _rref(aug, k + 1)
    if k in pivots:
        return None
    sol = [Fraction(0)] * k
    for i, p in enumerate(pivots):
        sol[p] = m[i][k]
    return sol


def in_cone(rays, v) -> bool:
    """Caratheodory membership: v is a non-negative combination of some independent subset."""
    if all(x == 0 for x in v):
        return True
    dim = len(v)
    for size in range(1, min(dim, len(rays)) + 1):
        for subset in combinations(rays, size):
            if matrix_rank(list(subset)) < size:
                continue
            sol = _solve(list(subset), v)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def free_fibers_selection_max(c: Configuration) -> int:
    """Max of sum #C^q over sets of maximal points with pairwise disjoint chains on different fibers."""
    chains = {q: chain_below(c, q) for q in maximal_points(c)}
    fiber_of = {}
    for f in c.fibers:
        for p in f.points:
            fiber_of[p] = f.name
    best = 0
    qs = sorted(chains)
    for size in range(1, len(qs) + 1):
        for subset in combinations(qs, size):
            pts = [set(chains[q]) for q in subset]
            if sum(len(s) for s in pts) != len(set().union(*pts)):
                continue
            roots = [chains[q][0] for q in subset]
            fibers = [fiber_of.get(r, r) for r in roots]
            if len(set(fibers)) != len(fibers):
                continue
            best = max(best, sum(len(chains[q]) for q in subset))
    return best
