"""The kernel lattice of U: branch vectors alpha, beta, gamma and the matrix K.

K has three rows spanning ker U over Z; its columns are the rays of the
quotient fans, one per variable of the Cox ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InconsistencyError, ParameterError
from .intmatrix import IntMatrix, invariant_factors, smith_normal_form
from .resolution import ExtendedMatrix, ResolutionInvariant


def alpha_vector(branch: Sequence[int]) -> tuple[int, ...]:
    """Entries z_1..z_{n+1} with z_0 = 0, z_1 = 1, z_{k+1} = a_k z_k - z_{k-1}.

    The vector is orthogonal to the rows of the branch block of U, and its
    last entry is the numerator p of the branch fraction.
    """
    if any(a < 2 for a in branch):
        raise ParameterError(f"branch entries must be >= 2, got {list(branch)}")
    prev, cur = 0, 1
    out = [cur]
    for a in branch:
        prev, cur = cur, a * cur - prev
        out.append(cur)
    return tuple(out)


def _chain(branch: Sequence[int], b0: int, b1: int) -> tuple[int, ...]:
    out = [b0, b1]
    for a in branch:
        out.append(a * out[-1] - out[-2])
    return tuple(out)


def beta_gamma_vectors(branch: Sequence[int], d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """beta starts (1, 0), gamma starts (1, d); both continue by b_{j+1} = a_j b_j - b_{j-1}."""
    if any(a < 2 for a in branch):
        raise ParameterError(f"branch entries must be >= 2, got {list(branch)}")
    if d < 2:
        raise ParameterError(f"d must be >= 2, got {d}")
    return _chain(branch, 1, 0), _chain(branch, 1, d)


@dataclass(frozen=True)
class BranchVectors:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]


def branch_vectors(inv: ResolutionInvariant) -> tuple[BranchVectors, ...]:
    out = []
    for branch in inv.branches():
        beta, gamma = beta_gamma_vectors(branch, inv.d)
        out.append(BranchVectors(alpha_vector(branch), beta, gamma))
    return tuple(out)


def branch_vector_violations(inv: ResolutionInvariant) -> list[str]:
    """Every failed structural property of the branch vectors (empty when all hold)."""
    problems = []
    for i, ((p, q), bv) in enumerate(zip(inv.pairs, branch_vectors(inv)), start=1):
        a, b, g = bv.alpha, bv.beta, bv.gamma
        if a[0] != 1 or any(x >= y for x, y in zip(a, a[1:])):
            problems.append(f"branch {i}: alpha must start at 1 and increase strictly")
        if b[:2] != (1, 0) or any(y > x for x, y in zip(b[1:], b[2:])):
            problems.append(f"branch {i}: beta must start (1, 0) and not increase")
        if g[:2] != (1, inv.d) or any(x >= y for x, y in zip(g[1:], g[2:])):
            problems.append(f"branch {i}: gamma must start (1, d) and increase")
        if any(gk != bk + inv.d * ak for gk, bk, ak in zip(g, b, (0,) + a)):
            problems.append(f"branch {i}: gamma != beta + d * (0, alpha)")
        if (a[-1], b[-1], g[-1]) != (p, -q, inv.d * p - q):
            problems.append(f"branch {i}: last entries {(a[-1], b[-1], g[-1])} != {(p, -q, inv.d * p - q)}")
    return problems


@dataclass(frozen=True)
class KernelMatrix:
    """K with labelled columns (same labels as U)."""

    matrix: IntMatrix
    labels: tuple[str, ...]

    def column(self, label: str) -> tuple[int, int, int]:
        return self.matrix.column(self.labels.index(label))

    def columns(self) -> list[tuple[int, ...]]:
        return self.matrix.columns()


def build_K(U: ExtendedMatrix, inv: ResolutionInvariant) -> KernelMatrix:
    """Rows v1 = (1, beta1, beta2, gamma3), v2 = (0, alpha1, 0, -alpha3), v3 = (0, 0, alpha2, -alpha3).

    Each branch block drops the leading entry of beta/gamma, so it covers
    the branch curves followed by x_i.  U K^t = 0 is re-checked.
    """
    bv = branch_vectors(inv)
    if U.graph.branches != inv.branches() or U.graph.d != inv.d:
        raise ParameterError("U and the resolution invariant describe different graphs")
    v1, v2, v3 = [1], [0], [0]
    for i, vec in enumerate(bv, start=1):
        first = vec.gamma[1:] if i == 3 else vec.beta[1:]
        size = len(vec.alpha)
        v1 += list(first)
        v2 += list(vec.alpha) if i == 1 else ([-x for x in vec.alpha] if i == 3 else [0] * size)
        v3 += list(vec.alpha) if i == 2 else ([-x for x in vec.alpha] if i == 3 else [0] * size)
    K = KernelMatrix(IntMatrix([v1, v2, v3]), U.labels)
    if not (U.matrix @ K.matrix.transpose()).is_zero():
        raise InconsistencyError("U K^t != 0")
    return K


def is_saturated(K: KernelMatrix) -> bool:
    """The rows span a saturated sublattice: invariant factors all 1."""
    return invariant_factors(K.matrix) == [1, 1, 1]


def ray_recurrence_holds(K: KernelMatrix, inv: ResolutionInvariant) -> bool:
    """column_{j+1} = a_j column_j - column_{j-1} along each branch, column_0 central."""
    for i, branch in enumerate(inv.branches(), start=1):
        chain = [K.column("y0")] + [K.column(f"y{i}_{j}") for j in range(1, len(branch) + 1)]
        chain.append(K.column(f"x{i}"))
        for j, a in enumerate(branch, start=1):
            expect = tuple(a * c - b for c, b in zip(chain[j], chain[j - 1]))
            if chain[j + 1] != expect:
                return False
    return True


# ---------------------------------------------------------------------------
# spanning lemma


def adjacent_column_pairs(U: ExtendedMatrix) -> list[tuple[str, str]]:
    """Adjacent column pairs: y0 with each y_{i,1}, neighbours in a chain, y_{i,n_i} with x_i."""
    pairs = []
    for i, branch in enumerate(U.graph.branches, start=1):
        chain = ["y0"] + [f"y{i}_{j}" for j in range(1, len(branch) + 1)] + [f"x{i}"]
        pairs += list(zip(chain, chain[1:]))
    return pairs


def _branch_position_pair(U: ExtendedMatrix, i: int, j: int) -> tuple[str, str]:
    if i not in (1, 2, 3):
        raise ParameterError(f"branch index must be 1, 2 or 3, got {i}")
    n_i = len(U.graph.branches[i - 1])
    if not 0 <= j <= n_i:
        raise ParameterError(f"position {j} is outside 0..{n_i} on branch {i}")
    chain = ["y0"] + [f"y{i}_{k}" for k in range(1, n_i + 1)] + [f"x{i}"]
    return chain[j], chain[j + 1]


def spanning_check(U: ExtendedMatrix, first, second=None) -> bool:
    """Whether the columns of U other than an adjacent pair generate Z^n.

    Call as ``spanning_check(U, i, j)`` for the pair at positions j and j+1
    of branch i (position 0 is y0, position n_i + 1 is x_i), or as
    ``spanning_check(U, label_a, label_b)`` with two column labels.
    """
    if isinstance(first, int) and isinstance(second, int):
        a, b = _branch_position_pair(U, first, second)
    else:
        a, b = first, second
        pair_set = {frozenset(p) for p in adjacent_column_pairs(U)}
        if frozenset((a, b)) not in pair_set:
            raise ParameterError(f"columns {a} and {b} are not adjacent")
    drop = [U.column_index(a), U.column_index(b)]
    rest = U.matrix.delete_columns(drop)
    snf, _, _ = smith_normal_form(rest)
    return all(snf[k, k] == 1 for k in range(rest.rows))
