"""Gaussian elimination over an arbitrary exact field.

The routines only rely on ``+ - * /`` and comparison with zero, so they work
unchanged for :class:`fractions.Fraction` entries and for
:class:`coxres.cyclotomic.Cyclotomic` entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence


def _is_zero(x: Any) -> bool:
    return x == 0


def row_echelon(rows: Sequence[Sequence[Any]]) -> tuple[list[list[Any]], list[int]]:
    """Return the reduced row echelon form and the pivot columns."""
    mat = [list(r) for r in rows]
    if not mat:
        return mat, []
    ncols = len(mat[0])
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(top, len(mat)):
            if not _is_zero(mat[r][col]):
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[top], mat[pivot_row] = mat[pivot_row], mat[top]
        inv = 1 / mat[top][col] if not isinstance(mat[top][col], int) else Fraction(1, mat[top][col])
        mat[top] = [x * inv for x in mat[top]]
        for r in range(len(mat)):
            if r != top and not _is_zero(mat[r][col]):
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[top])]
        pivots.append(col)
        top += 1
        if top == len(mat):
            break
    return mat, pivots


def nullspace(rows: Sequence[Sequence[Any]], ncols: int, one: Any = 1) -> list[list[Any]]:
    """Basis of the right kernel ``{v : rows · v = 0}``."""
    if not rows:
        return [[one if j == k else one * 0 for j in range(ncols)] for k in range(ncols)]
    rref, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [one * 0 for _ in range(ncols)]
        vec[f] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][f]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> list[Any] | None:
    """One solution of ``rows · v = rhs``, or ``None`` when inconsistent.

    Free variables are set to zero, so the answer is unique exactly when
    the system has full column rank.
    """
    ncols = len(rows[0]) if rows else 0
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_echelon(augmented)
    if ncols in pivots:
        return None
    sol: list[Any] = [0] * ncols
    for r, pc in enumerate(pivots):
        sol[pc] = rref[r][ncols]
    return sol
