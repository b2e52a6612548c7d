"""Smith normal form over the integers (exact, Python ints)."""
from __future__ import annotations

from typing import List, Sequence

Matrix = List[List[int]]


def _copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in a]


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U @ A @ V == D``, ``U``, ``V`` unimodular,
    ``D`` diagonal with ``d_1 | d_2 | ...`` and non-negative entries."""
    A = _copy(a)
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/col t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: pivot must divide the whole remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def invariant_factors(a: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith form."""
    if not a or not a[0]:
        return []
    D, _, _ = smith_normal_form(a)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


def rank(a: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(a))


def sparse_invariant_factors(columns, nrows: int) -> List[int]:
    """Invariant factors of a sparse integer matrix given as a list of
    ``{row: value}`` column dicts.

    Unit pivots are eliminated sparsely first (each contributes a factor 1);
    whatever is left goes through the dense Smith form.
    """
    cols = [dict((r, int(v)) for r, v in c.items() if v) for c in columns]
    rows: dict = {}
    for j, c in enumerate(cols):
        for r in c:
            rows.setdefault(r, set()).add(j)
    alive = set(range(len(cols)))
    units = 0
    changed = True
    while changed:
        changed = False
        for j in sorted(alive):
            c = cols[j]
            piv = next((r for r in sorted(c) if abs(c[r]) == 1), None)
            if piv is None:
                continue
            pv = c[piv]
            for k in sorted(rows.get(piv, ()) - {j}):
                f = cols[k][piv] * pv  # pv = +-1, so this is the exact quotient
                ck = cols[k]
                for r, v in c.items():
                    nv = ck.get(r, 0) - f * v
                    if nv:
                        if r not in ck:
                            rows.setdefault(r, set()).add(k)
                        ck[r] = nv
                    elif r in ck:
                        del ck[r]
                        rows[r].discard(k)
            for r in c:
                rows[r].discard(j)
            del rows[piv]
            alive.discard(j)
            cols[j] = {}
            units += 1
            changed = True
    rest = [cols[j] for j in sorted(alive) if cols[j]]
    used_rows = sorted({r for c in rest for r in c})
    if not rest:
        return [1] * units
    ridx = {r: i for i, r in enumerate(used_rows)}
    dense = [[0] * len(rest) for _ in used_rows]
    for j, c in enumerate(rest):
        for r, v in c.items():
            dense[ridx[r]][j] = v
    return [1] * units + invariant_factors(dense)
