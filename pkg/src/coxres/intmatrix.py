"""Integer matrices, exact determinants and the Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError


@dataclass(frozen=True)
class IntMatrix:
    """An immutable rectangular matrix of Python integers."""

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data and len({len(r) for r in data}) != 1:
            raise ParameterError("rows of an IntMatrix must have equal length")
        object.__setattr__(self, "entries", data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(zip(*columns)) if columns else cls([])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries)) if self.entries else IntMatrix([])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ParameterError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries])

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise ParameterError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vector)) for r in self.entries)

    def delete_columns(self, indices: Iterable[int]) -> "IntMatrix":
        drop = set(indices)
        return IntMatrix([[x for j, x in enumerate(r) if j not in drop] for r in self.entries])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __str__(self) -> str:
        if not self.entries:
            return "[]"
        width = max(len(str(x)) for r in self.entries for x in r)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in self.entries)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.rows
    if n != m.cols:
        raise ParameterError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(m: IntMatrix) -> IntMatrix:
    """Classical adjoint, so that adjugate(m) @ m = det(m) * identity."""
    n = m.rows
    if n == 1:
        return IntMatrix([[1]])
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = m.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j])
            row.append((-1) ** (i + j) * determinant(minor))
        cof.append(row)
    return IntMatrix(cof).transpose()


def leading_principal_minors(m: IntMatrix) -> list[int]:
    return [determinant(m.submatrix(range(k), range(k))) for k in range(1, m.rows + 1)]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (S, left, right).

    ``left @ m @ right == S`` where S is diagonal with non-negative entries
    d_1 | d_2 | ... and left, right are unimodular.  Standard pivoting with
    Euclidean row and column steps; every operation is mirrored on the
    transforms.
    """
    if m.rows == 0 or m.cols == 0:
        raise ParameterError("smith_normal_form needs a nonempty matrix")
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.entries]
    left = [[int(i == j) for j in range(rows)] for i in range(rows)]
    right = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(target, source, factor):
        # row_target += factor * row_source
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
        left[target] = [x + factor * y for x, y in zip(left[target], left[source])]

    def add_col(target, source, factor):
        for r in a:
            r[target] += factor * r[source]
        for r in right:
            r[target] += factor * r[source]

    for t in range(min(rows, cols)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // pivot))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // pivot))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            # divisibility: fold any offending row into row t and retry
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    return IntMatrix(a), IntMatrix(left), IntMatrix(right)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Diagonal of the Smith normal form (length min(rows, cols))."""
    s, _, _ = smith_normal_form(m)
    return [s[i, i] for i in range(min(s.rows, s.cols))]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Integer inverse of a unimodular matrix."""
    det = determinant(m)
    if abs(det) != 1:
        raise ParameterError(f"matrix is not unimodular (det {det})")
    adj = adjugate(m)
    return IntMatrix([[det * x for x in r] for r in adj.entries])
