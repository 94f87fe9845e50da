"""Minimal resolutions of C^2/G: continued fractions, invariants, graphs, U.

The exceptional divisor of a non-cyclic quotient is a star with a central
curve E0 of self-intersection -d and three chains; the i-th chain is the
Hirzebruch-Jung expansion of p_i/q_i.  The seven integers
<d; p1,q1; p2,q2; p3,q3> determine everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .errors import AmbiguityError, InconsistencyError, ParameterError, UnsupportedFamilyError
from .groups import GroupSpec, abelianization_order_formula
from .intmatrix import IntMatrix


# ---------------------------------------------------------------------------
# Hirzebruch-Jung continued fractions


@dataclass(frozen=True)
class HJFraction:
    """p/q = a1 - 1/(a2 - 1/(... - 1/ak)) with every a_j >= 2."""

    p: int
    q: int
    entries: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)


def hjcf_expand(p: int, q: int) -> HJFraction:
    """Expand p/q (0 < q < p, coprime) into its Hirzebruch-Jung entries."""
    if not 0 < q < p:
        raise ParameterError(f"need 0 < q < p, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise ParameterError(f"p={p} and q={q} are not coprime")
    entries = []
    num, den = p, q
    while den:
        a = -(-num // den)  # ceiling
        entries.append(a)
        num, den = den, a * den - num
    return HJFraction(p, q, tuple(entries))


def hjcf_value(entries: Sequence[int]) -> tuple[int, int]:
    """Evaluate [a1, ..., ak] back to the reduced pair (p, q)."""
    if not entries:
        raise ParameterError("empty continued fraction")
    if any(a < 2 for a in entries):
        raise ParameterError(f"entries must be >= 2, got {list(entries)}")
    value = Fraction(entries[-1])
    for a in reversed(entries[:-1]):
        value = a - 1 / value
    return value.numerator, value.denominator


def dual_q(p: int, q: int) -> int:
    """The q' with q q' = 1 (mod p); its expansion is the reversed one."""
    return pow(q, -1, p)


# ---------------------------------------------------------------------------
# invariants and graphs


@dataclass(frozen=True)
class ResolutionInvariant:
    """<d; p1,q1; p2,q2; p3,q3> of a star-shaped minimal resolution."""

    d: int
    pairs: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        pairs = tuple((int(p), int(q)) for p, q in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if len(pairs) != 3:
            raise ParameterError("a resolution invariant has exactly three branches")
        if self.d < 2:
            raise ParameterError(f"central self-intersection must be <= -2, got d={self.d}")
        for p, q in pairs:
            if not 0 < q < p or gcd(p, q) != 1:
                raise ParameterError(f"branch pair ({p},{q}) needs 0 < q < p and gcd 1")

    @property
    def p(self) -> tuple[int, int, int]:
        return tuple(pq[0] for pq in self.pairs)

    @property
    def q(self) -> tuple[int, int, int]:
        return tuple(pq[1] for pq in self.pairs)

    def branches(self) -> tuple[tuple[int, ...], ...]:
        return tuple(hjcf_expand(p, q).entries for p, q in self.pairs)

    def lengths(self) -> tuple[int, int, int]:
        return tuple(len(b) for b in self.branches())

    @property
    def n(self) -> int:
        """Number of exceptional curves."""
        return sum(self.lengths()) + 1

    def r(self) -> int:
        """d p1 p2 p3 - q1 p2 p3 - p1 q2 p3 - p1 p2 q3."""
        (p1, q1), (p2, q2), (p3, q3) = self.pairs
        return self.d * p1 * p2 * p3 - q1 * p2 * p3 - p1 * q2 * p3 - p1 * p2 * q3

    def positivity(self) -> Fraction:
        return self.d - sum(Fraction(q, p) for p, q in self.pairs)

    def __str__(self) -> str:
        return f"<{self.d}; " + "; ".join(f"{p},{q}" for p, q in self.pairs) + ">"

    @classmethod
    def parse(cls, text: str) -> "ResolutionInvariant":
        """Parse ``<d; p1,q1; p2,q2; p3,q3>`` (angle brackets optional)."""
        body = text.strip().strip("<>")
        parts = [s.strip() for s in body.split(";")]
        try:
            d = int(parts[0])
            pairs = tuple(tuple(int(x) for x in s.split(",")) for s in parts[1:])
        except ValueError as exc:
            raise ParameterError(f"cannot parse invariant {text!r}") from exc
        if len(pairs) != 3 or any(len(pq) != 2 for pq in pairs):
            raise ParameterError(f"cannot parse invariant {text!r}")
        return cls(d, pairs)


def branch_constraint_holds(inv: ResolutionInvariant) -> bool:
    """Branch 1 is a single (-2) curve; branch 2 or 3 is (-2), (-2,-2) or (-3)."""
    b = inv.branches()
    short = {(2,), (2, 2), (3,)}
    return b[0] == (2,) and (b[1] in short or b[2] in short)


@dataclass(frozen=True)
class ExceptionalGraph:
    """Star-shaped dual graph: central weight d and three chains of weights."""

    d: int
    branches: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    @property
    def n(self) -> int:
        return 1 + sum(len(b) for b in self.branches)

    def node_labels(self) -> list[str]:
        labels = ["E0"]
        for i, b in enumerate(self.branches, start=1):
            labels += [f"E{i}_{j}" for j in range(1, len(b) + 1)]
        return labels

    def self_intersections(self) -> list[int]:
        return [-self.d] + [-a for b in self.branches for a in b]

    def edges(self) -> list[tuple[str, str]]:
        """Dual-graph adjacencies: E0 to each first curve, then along chains."""
        out = []
        for i, b in enumerate(self.branches, start=1):
            out.append(("E0", f"E{i}_1"))
            out += [(f"E{i}_{j}", f"E{i}_{j + 1}") for j in range(1, len(b))]
        return out


def build_graph(inv: ResolutionInvariant) -> ExceptionalGraph:
    return ExceptionalGraph(inv.d, inv.branches())


def variable_labels(graph: ExceptionalGraph) -> list[str]:
    """Column labels y0, y1_1.., x1, y2_1.., x2, y3_1.., x3."""
    labels = ["y0"]
    for i, b in enumerate(graph.branches, start=1):
        labels += [f"y{i}_{j}" for j in range(1, len(b) + 1)]
        labels.append(f"x{i}")
    return labels


def pretty_label(label: str) -> str:
    """``y3_2`` -> ``y_{3,2}``, ``x1`` -> ``x_1``, ``y0`` -> ``y_0``."""
    if "_" in label:
        head, j = label.split("_")
        return f"{head[0]}_{{{head[1:]},{j}}}"
    return f"{label[0]}_{label[1:]}"


@dataclass(frozen=True)
class ExtendedMatrix:
    """U: the n x (n+3) extended intersection matrix with labelled columns.

    Rows follow the curves (E0, then each branch in order); columns follow
    :func:`variable_labels`, so the x_i column sits right after branch i.
    """

    matrix: IntMatrix
    labels: tuple[str, ...]
    graph: ExceptionalGraph

    def column_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise ParameterError(f"unknown column label {label!r}") from exc

    def curve_columns(self) -> list[int]:
        return [k for k, lab in enumerate(self.labels) if not lab.startswith("x")]

    def outer_columns(self) -> list[int]:
        return [k for k, lab in enumerate(self.labels) if lab.startswith("x")]

    def U0(self) -> IntMatrix:
        """The square intersection matrix of the exceptional curves."""
        return self.matrix.delete_columns(self.outer_columns())


def build_U(graph: ExceptionalGraph) -> ExtendedMatrix:
    labels = variable_labels(graph)
    n = graph.n
    col = {lab: k for k, lab in enumerate(labels)}
    rows = [[0] * (n + 3) for _ in range(n)]
    rows[0][col["y0"]] = -graph.d
    r = 1
    for i, b in enumerate(graph.branches, start=1):
        for j, a in enumerate(b, start=1):
            row = rows[r]
            row[col[f"y{i}_{j}"]] = -a
            if j == 1:
                row[col["y0"]] = 1
                rows[0][col[f"y{i}_1"]] = 1
            else:
                row[col[f"y{i}_{j - 1}"]] = 1
            if j == len(b):
                row[col[f"x{i}"]] = 1
            else:
                row[col[f"y{i}_{j + 1}"]] = 1
            r += 1
    return ExtendedMatrix(IntMatrix(rows), tuple(labels), graph)


# ---------------------------------------------------------------------------
# from group to invariant

P_VECTORS = {"BT": (2, 3, 3), "BO": (2, 3, 4), "BI": (2, 3, 5)}

DU_VAL = {
    "BT": ResolutionInvariant(2, ((2, 1), (3, 2), (3, 2))),
    "BO": ResolutionInvariant(2, ((2, 1), (3, 2), (4, 3))),
    "BI": ResolutionInvariant(2, ((2, 1), (3, 2), (5, 4))),
}


def p_vector(spec: GroupSpec) -> tuple[int, int, int]:
    if spec.family == "BD":
        return (2, 2, spec.n)
    if spec.family in P_VECTORS:
        return P_VECTORS[spec.family]
    raise UnsupportedFamilyError("cyclic groups have a chain, not a star-shaped resolution")


def bd_invariant(n: int, m: int) -> ResolutionInvariant:
    """Solve m = n(d - 1) - q3 with 0 < q3 < n."""
    d = m // n + 2
    q3 = n * (d - 1) - m
    return ResolutionInvariant(d, ((2, 1), (2, 1), (n, q3)))


def _canonical(inv: ResolutionInvariant) -> ResolutionInvariant:
    """Order the two equal-p branches so the shorter (then smaller) one comes first."""
    (p1, q1), (p2, q2), (p3, q3) = inv.pairs
    if p2 == p3:
        b2, b3 = hjcf_expand(p2, q2).entries, hjcf_expand(p3, q3).entries
        if (len(b3), b3) < (len(b2), b2):
            return ResolutionInvariant(inv.d, ((p1, q1), (p3, q3), (p2, q2)))
    return inv


def search_candidates(spec: GroupSpec, r_target: int | None = None) -> list[ResolutionInvariant]:
    """All canonical invariants with the family's p-vector whose r matches |Ab(G)|.

    The search ranges over 2 <= d <= m + 3 and q_i coprime to p_i (q1 = 1).
    Candidates also have to satisfy positivity and the branch constraint.
    """
    p1, p2, p3 = p_vector(spec)
    target = abelianization_order_formula(spec) if r_target is None else r_target
    found: dict[tuple, ResolutionInvariant] = {}
    for d in range(2, spec.m + 4):
        for q2 in range(1, p2):
            if gcd(p2, q2) != 1:
                continue
            for q3 in range(1, p3):
                if gcd(p3, q3) != 1:
                    continue
                inv = _canonical(ResolutionInvariant(d, ((p1, 1), (p2, q2), (p3, q3))))
                if inv.r() != target or inv.positivity() <= 0 or not branch_constraint_holds(inv):
                    continue
                found[(inv.d, inv.pairs)] = inv
    return [found[k] for k in sorted(found)]


def select_unique(
    candidates: Iterable[ResolutionInvariant],
    accept: Callable[[ResolutionInvariant], bool],
    context: str,
) -> ResolutionInvariant:
    """The single candidate passing ``accept``; otherwise raise.

    No survivor means the inputs are inconsistent; several survivors are
    reported through :class:`AmbiguityError`, never resolved by choice.
    """
    survivors = [c for c in candidates if accept(c)]
    if not survivors:
        raise InconsistencyError(f"{context}: no resolution invariant survives the filters")
    if len(survivors) > 1:
        listing = ", ".join(str(s) for s in survivors)
        raise AmbiguityError(f"{context}: {len(survivors)} candidates survive: {listing}", survivors)
    return survivors[0]


def resolution_invariant(spec: GroupSpec) -> ResolutionInvariant:
    """The resolution invariant of C^2/G.

    BD groups follow the closed rule, SL(2) groups the Du Val list.  The
    other twisted groups are found by search: candidates must have r equal
    to |Ab(G)| and their J-action must match the action of Ab(G) on the
    sigma invariants.
    """
    if spec.is_cyclic:
        raise UnsupportedFamilyError("cyclic quotients resolve to a chain; use the cyclic Cox data")
    if spec.family == "BD":
        return bd_invariant(spec.n, spec.m)
    if spec.m == 1:
        return DU_VAL[spec.family]
    from .cox import sigma_set  # local imports: both modules depend on this one
    from .fan import match_action

    sigmas = sigma_set(spec)
    return select_unique(
        search_candidates(spec),
        lambda inv: match_action(spec, inv, sigmas).matched,
        spec.label,
    )
