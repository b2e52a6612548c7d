"""Exact rational linear and integer programming.

Small dense problems only: the simplex tableau holds ``Fraction`` entries and
pivots with Bland's rule, so it never cycles and never rounds.  Integer
programs are solved by branch and bound on the most fractional variable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
BUDGET = "budget-exceeded"


@dataclass
class LPResult:
    status: str
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None


@dataclass
class ILPResult:
    status: str
    x: Optional[List[int]] = None
    value: Optional[int] = None
    lower_bound: Optional[Fraction] = None
    nodes: int = 0
    root: Optional[LPResult] = field(default=None, repr=False)


def _frac_rows(rows):
    return [[Fraction(v) for v in r] for r in rows]


def _pivot(T, basis, r, c):
    piv = T[r][c]
    if piv != 1:
        T[r] = [v / piv for v in T[r]]
    prow = T[r]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = c


def _simplex(T, basis, ncols, allowed):
    """Minimise the objective held in the last row of ``T`` (stored as
    reduced costs).  Bland's rule: entering = smallest index with negative
    reduced cost, leaving = smallest basis index among ratio ties."""
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, basis, best[1], enter)


def linprog_exact(c: Sequence, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Minimise ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
    ``x >= 0``, exactly."""
    c = [Fraction(v) for v in c]
    n = len(c)
    A_ub, A_eq = _frac_rows(A_ub), _frac_rows(A_eq)
    b_ub, b_eq = [Fraction(v) for v in b_ub], [Fraction(v) for v in b_eq]
    n_slack = len(A_ub)
    rows, rhs = [], []
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(1)
        rows.append(row + slack)
        rhs.append(b)
    for row, b in zip(A_eq, b_eq):
        rows.append(row + [Fraction(0)] * n_slack)
        rhs.append(b)
    m = len(rows)
    nx = n + n_slack
    if m == 0:
        if any(v < 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0))
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    # phase one: one artificial per row
    ncols = nx + m
    T = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(rows[i] + art + [rhs[i]])
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        for j in range(nx):
            obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    T.append(obj)
    basis = [nx + i for i in range(m)]
    _simplex(T, basis, ncols, [True] * ncols)
    if T[-1][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nx:
            j = next((j for j in range(nx) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)
    keep = [i for i in range(m) if basis[i] < nx]
    T = [T[i][:nx] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase two objective in reduced form
    obj = [Fraction(0)] * (nx + 1)
    for j in range(n):
        obj[j] = c[j]
    for i, bj in enumerate(basis):
        cb = obj[bj]
        if cb:
            obj = [a - cb * b for a, b in zip(obj, T[i])]
    T.append(obj)
    status = _simplex(T, basis, nx, [True] * nx)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * nx
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    x = x[:n]
    return LPResult(OPTIMAL, x, sum(ci * xi for ci, xi in zip(c, x)))


def _most_fractional(x, integer):
    best = None
    for j, v in enumerate(x):
        if integer[j] and v.denominator != 1:
            frac = v - math.floor(v)
            dist = abs(frac - Fraction(1, 2))
            if best is None or dist < best[0]:
                best = (dist, j)
    return None if best is None else best[1]


def intlinprog_exact(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), integer=None,
                     node_budget: int = 10_000, incumbent=None) -> ILPResult:
    """Branch and bound over :func:`linprog_exact`.

    ``integer`` is a boolean mask (default: every variable).  The objective
    coefficients are assumed integral so that LP bounds may be rounded up.
    ``incumbent`` optionally seeds a known feasible integer point.
    """
    n = len(c)
    integer = [True] * n if integer is None else list(integer)
    A_ub, b_ub = [list(r) for r in A_ub], list(b_ub)
    best_x, best_val = None, None
    if incumbent is not None:
        best_x = list(incumbent)
        best_val = sum(Fraction(ci) * xi for ci, xi in zip(c, best_x))
    root = linprog_exact(c, A_ub, b_ub, A_eq, b_eq)
    if root.status != OPTIMAL:
        return ILPResult(root.status, root=root)
    lower = Fraction(math.ceil(root.value))
    stack = [((), root)]
    nodes = 0
    while stack:
        cuts, res = stack.pop()
        nodes += 1
        if nodes > node_budget:
            return ILPResult(BUDGET, best_x and [int(v) for v in best_x],
                             best_val and int(best_val), lower, nodes, root)
        if res is None:
            rows = A_ub + [r for r, _ in cuts]
            rhs = b_ub + [b for _, b in cuts]
            res = linprog_exact(c, rows, rhs, A_eq, b_eq)
        if res.status != OPTIMAL:
            continue
        if best_val is not None and math.ceil(res.value) >= best_val:
            continue
        j = _most_fractional(res.x, integer)
        if j is None:
            best_x, best_val = res.x, res.value
            continue
        v = res.x[j]
        up = [Fraction(0)] * n
        up[j] = Fraction(-1)
        down = [Fraction(0)] * n
        down[j] = Fraction(1)
        # explore the branch nearer the LP value last so it is popped first
        branches = [(cuts + ((up, -Fraction(math.ceil(v))),), None),
                    (cuts + ((down, Fraction(math.floor(v))),), None)]
        if v - math.floor(v) >= Fraction(1, 2):
            branches.reverse()
        stack.extend(branches)
    if best_x is None:
        return ILPResult(INFEASIBLE, lower_bound=lower, nodes=nodes, root=root)
    return ILPResult(OPTIMAL, [int(v) for v in best_x], int(best_val), lower, nodes, root)
