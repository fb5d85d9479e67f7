#!/usr/bin/env python3
"""
Exact linear algebra over the fraction field of Z[s^{+-1}, q^{+-1}]
Gauss-Jordan elimination with RatFunc entries, kernels, solves and
block-wise inversion of sparse Laurent matrices.
"""

from typing import Dict, List, Sequence, Tuple

from errors import NotDivisible, SingularSystem
from laurent import LaurentPoly, RatFunc

SparseColumns = Dict[int, List[Tuple[int, LaurentPoly]]]


def _weight(x: RatFunc) -> int:
    return len(x.num) + sum(len(g) * m for g, m in x.factors.items())


def _as_ratfunc_rows(rows: Sequence[Sequence]) -> List[List[RatFunc]]:
    return [[x if isinstance(x, RatFunc) else RatFunc(x) for x in row] for row in rows]


def row_reduce(rows: Sequence[Sequence]) -> Tuple[List[List[RatFunc]], List[int]]:
    """Reduced row echelon form and the pivot columns"""
    m = _as_ratfunc_rows(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        candidates = [i for i in range(r, len(m)) if not m[i][c].is_zero()]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: _weight(m[i][c]))
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x if x.is_zero() else x * inv for x in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i == r or m[i][c].is_zero():
                continue
            f = m[i][c]
            m[i] = [a if b.is_zero() else a - f * b for a, b in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[RatFunc]]:
    """Basis of {x : rows * x = 0}, one vector per free column"""
    if not rows:
        return [[RatFunc(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [RatFunc(0) for _ in range(ncols)]
        vec[f] = RatFunc(1)
        for row_index, c in enumerate(pivots):
            vec[c] = -reduced[row_index][f]
        basis.append(vec)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> List[RatFunc]:
    """Unique solution of A x = b or SingularSystem"""
    n = len(A[0]) if A else 0
    augmented = [list(row) + [rhs] for row, rhs in zip(A, b)]
    reduced, pivots = row_reduce(augmented)
    if n in pivots:
        raise SingularSystem("inconsistent linear system")
    if pivots != list(range(n)):
        raise SingularSystem("linear system has no unique solution")
    return [reduced[i][n] for i in range(n)]


def invert_dense(A: Sequence[Sequence]) -> List[List[RatFunc]]:
    n = len(A)
    augmented = []
    for i, row in enumerate(A):
        augmented.append(list(row) + [1 if i == j else 0 for j in range(n)])
    reduced, pivots = row_reduce(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is singular")
    return [row[n:] for row in reduced[:n]]


def _blocks(columns: SparseColumns, size: int) -> List[List[int]]:
    parent = list(range(size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for col, entries in columns.items():
        for row, _ in entries:
            a, b = find(col), find(row)
            if a != b:
                parent[a] = b
    groups: Dict[int, List[int]] = {}
    for i in range(size):
        groups.setdefault(find(i), []).append(i)
    return [sorted(g) for g in groups.values()]


def invert_sparse(columns: SparseColumns, size: int) -> SparseColumns:
    """Inverse of a square sparse Laurent matrix whose inverse is again Laurent"""
    inverse: SparseColumns = {}
    for block in _blocks(columns, size):
        index = {k: i for i, k in enumerate(block)}
        dense = [[LaurentPoly() for _ in block] for _ in block]
        for col in block:
            for row, value in columns.get(col, ()):
                dense[index[row]][index[col]] = value
        inv = invert_dense(dense)
        for j, col in enumerate(block):
            entries = []
            for i, row in enumerate(block):
                value = inv[i][j]
                if value.is_zero():
                    continue
                try:
                    entries.append((row, value.to_laurent()))
                except NotDivisible:
                    raise NotDivisible(f"inverse entry ({row}, {col}) is not a Laurent polynomial")
            if entries:
                inverse[col] = entries
    return inverse
