"""Rank-3 fans whose rays are the columns of K, and the outer cone data.

Every fan considered here is simplicial, has the n + 3 columns of K as
rays, and has support equal to the cone spanned by the three outer rays.
Validation works on a plane section of that cone in exact rational
barycentric coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import InconsistencyError, ParameterError
from .groups import GroupSpec
from .intmatrix import IntMatrix, adjugate, determinant, inverse_unimodular, smith_normal_form
from .kernel import KernelMatrix, build_K, branch_vectors
from .resolution import ResolutionInvariant, build_graph, build_U

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# rays


@dataclass(frozen=True)
class Ray:
    """A primitive lattice vector with its position in the star.

    ``branch`` is 0 for the central ray; ``position`` runs 1..n_i + 1 along
    branch i, the last one being the outer ray.
    """

    label: str
    coords: Vector
    branch: int
    position: int
    outer: bool = False

    @property
    def kind(self) -> str:
        if self.branch == 0:
            return "central"
        return "outer" if self.outer else "branch"


def _in_branch_plane(branch: int, v: Vector) -> bool:
    x, y, z = v
    return {1: z == 0, 2: y == 0, 3: y == z}[branch]


def rays_from_K(K: KernelMatrix) -> list[Ray]:
    """One labelled ray per column of K, with primitivity and plane checks."""
    lengths = {}
    for lab in K.labels:
        if lab.startswith("y") and "_" in lab:
            i, j = (int(s) for s in lab[1:].split("_"))
            lengths[i] = max(lengths.get(i, 0), j)
    rays = []
    for lab, col in zip(K.labels, K.columns()):
        if gcd(*col) != 1:
            raise InconsistencyError(f"column {lab} = {col} is not primitive")
        if lab == "y0":
            ray = Ray(lab, col, 0, 0)
            if col != (1, 0, 0):
                raise InconsistencyError(f"central ray is {col}, expected (1, 0, 0)")
        elif lab.startswith("x"):
            i = int(lab[1:])
            ray = Ray(lab, col, i, lengths[i] + 1, outer=True)
        else:
            i, j = (int(s) for s in lab[1:].split("_"))
            ray = Ray(lab, col, i, j)
        if ray.branch and not _in_branch_plane(ray.branch, col):
            raise InconsistencyError(f"ray {lab} = {col} is off the plane of branch {ray.branch}")
        rays.append(ray)
    return rays


def rays_for_invariant(inv: ResolutionInvariant) -> list[Ray]:
    U = build_U(build_graph(inv))
    return rays_from_K(build_K(U, inv))


def outer_rays_closed_form(inv: ResolutionInvariant) -> tuple[Vector, Vector, Vector]:
    """(-q1, p1, 0), (-q2, 0, p2), (d p3 - q3, -p3, -p3)."""
    (p1, q1), (p2, q2), (p3, q3) = inv.pairs
    return (-q1, p1, 0), (-q2, 0, p2), (inv.d * p3 - q3, -p3, -p3)


def positivity_check(inv: ResolutionInvariant) -> Fraction:
    """d - q1/p1 - q2/p2 - q3/p3; positive exactly when (1,0,0) is inside the outer cone."""
    return inv.positivity()


def branch_chain(rays: Sequence[Ray], i: int) -> list[Ray]:
    """Central ray followed by the rays of branch i in order (outer ray last)."""
    central = next(r for r in rays if r.branch == 0)
    return [central] + sorted((r for r in rays if r.branch == i), key=lambda r: r.position)


def _ray_map(rays: Sequence[Ray]) -> dict[str, Ray]:
    return {r.label: r for r in rays}


# ---------------------------------------------------------------------------
# fans


@dataclass(frozen=True)
class Fan:
    """Rays plus maximal cones, each cone a sorted triple of ray indices."""

    rays: tuple[Ray, ...]
    cones: tuple[tuple[int, int, int], ...]

    def cone_labels(self) -> list[tuple[str, str, str]]:
        return [tuple(self.rays[k].label for k in c) for c in self.cones]

    def index(self, label: str) -> int:
        for k, r in enumerate(self.rays):
            if r.label == label:
                return k
        raise ParameterError(f"no ray labelled {label!r}")

    def has_cone(self, labels: Iterable[str]) -> bool:
        want = tuple(sorted(self.index(lab) for lab in labels))
        return want in self.cones

    def has_face(self, a: str, b: str) -> bool:
        ia, ib = self.index(a), self.index(b)
        return any(ia in c and ib in c for c in self.cones)

    def without_cone(self, labels: Iterable[str]) -> "Fan":
        drop = tuple(sorted(self.index(lab) for lab in labels))
        return Fan(self.rays, tuple(c for c in self.cones if c != drop))

    def with_cones(self, add: Iterable[Iterable[str]], remove: Iterable[Iterable[str]] = ()) -> "Fan":
        gone = {tuple(sorted(self.index(lab) for lab in c)) for c in remove}
        cones = [c for c in self.cones if c not in gone]
        cones += [tuple(sorted(self.index(lab) for lab in c)) for c in add]
        return Fan(self.rays, tuple(sorted(set(cones))))


def _staircase(chains: dict[int, list[Ray]], i: int, k: int) -> list[tuple[str, str, str]]:
    """Triangulate the sector between branches i and k.

    Every segment of branch i (from the centre out to the outer ray) is
    joined to the first ray of branch k, then every segment of branch k
    beyond its first ray is joined to the outer ray of branch i.
    """
    ci, ck = chains[i], chains[k]
    cones = [(ci[a].label, ci[a + 1].label, ck[1].label) for a in range(len(ci) - 1)]
    outer_i = ci[-1].label
    cones += [(outer_i, ck[b].label, ck[b + 1].label) for b in range(1, len(ck) - 1)]
    return cones


def _assemble(rays: Sequence[Ray], sectors: Sequence[tuple[int, int]]) -> Fan:
    chains = {i: branch_chain(rays, i) for i in (1, 2, 3)}
    index = {r.label: k for k, r in enumerate(rays)}
    cones = set()
    for i, k in sectors:
        for c in _staircase(chains, i, k):
            cones.add(tuple(sorted(index[lab] for lab in c)))
    return Fan(tuple(rays), tuple(sorted(cones)))


def canonical_fan(rays: Sequence[Ray]) -> Fan:
    """The staircase triangulation over the sectors (1,2), (2,3), (3,1)."""
    fan = _assemble(rays, [(1, 2), (2, 3), (3, 1)])
    report = validate_fan(fan)
    if not report:
        raise InconsistencyError("canonical fan failed validation: " + "; ".join(report.diagnostics))
    return fan


def fan_with_pivot(rays: Sequence[Ray], i: int, j: int) -> Fan:
    """A fan where rho_{i,j-1}, rho_{i,j}, rho_{i,j+1} all meet both other first rays.

    Branch i is used as the staircase spine of both sectors that touch it.
    """
    if i not in (1, 2, 3):
        raise ParameterError(f"branch must be 1, 2 or 3, got {i}")
    chain = branch_chain(rays, i)
    if not 1 <= j <= len(chain) - 2:
        raise ParameterError(f"pivot ({i},{j}) is not an inner ray of branch {i}")
    k, l = [b for b in (1, 2, 3) if b != i]
    fan = _assemble(rays, [(i, k), (i, l), (k, l)])
    report = validate_fan(fan)
    if not report:
        raise InconsistencyError("pivot fan failed validation: " + "; ".join(report.diagnostics))
    return fan


def pivot_property_holds(fan: Fan, i: int, j: int) -> bool:
    chain = branch_chain(fan.rays, i)
    firsts = [branch_chain(fan.rays, b)[1].label for b in (1, 2, 3) if b != i]
    return all(fan.has_face(chain[t].label, f) for t in (j - 1, j, j + 1) for f in firsts)


# ---------------------------------------------------------------------------
# validation


@dataclass
class FanValidation:
    valid: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def _det3(a: Vector, b: Vector, c: Vector) -> int:
    return determinant(IntMatrix([a, b, c]))


def _cross2(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _section(outer: Sequence[Vector]):
    """Map a vector to barycentric coordinates with respect to the outer rays."""
    M = IntMatrix.from_columns(outer)
    det = determinant(M)
    if det == 0:
        raise ParameterError("outer rays are linearly dependent")
    adj = adjugate(M)
    sign = 1 if det > 0 else -1

    def coords(v: Vector) -> tuple[int, int, int]:
        return tuple(sign * x for x in adj.apply(v))

    return coords


def _interiors_overlap(t1, t2) -> bool:
    """Exact separating-axis test for two non-degenerate triangles."""
    for a, b in ((t1, t2), (t2, t1)):
        for e in range(3):
            p, q, s = a[e], a[(e + 1) % 3], a[(e + 2) % 3]
            side = _cross2(p, q, s)
            if all(side * _cross2(p, q, v) <= 0 for v in b):
                return False
    return True


def mandatory_faces(rays: Sequence[Ray]) -> list[tuple[str, str]]:
    """2-faces every admissible fan must contain."""
    faces = []
    for i in (1, 2, 3):
        chain = branch_chain(rays, i)
        faces += [(a.label, b.label) for a, b in zip(chain, chain[1:])]
    firsts = [branch_chain(rays, i)[1].label for i in (1, 2, 3)]
    faces += list(combinations(firsts, 2))
    return faces


def mandatory_cones(rays: Sequence[Ray]) -> list[tuple[str, str, str]]:
    """The three cones at the central ray."""
    firsts = [branch_chain(rays, i)[1].label for i in (1, 2, 3)]
    return [("y0", a, b) for a, b in combinations(firsts, 2)]


def validate_fan(fan: Fan) -> FanValidation:
    """Check simpliciality, support, overlaps, stray rays and mandatory cones."""
    problems: list[str] = []
    outer = [r.coords for r in sorted((r for r in fan.rays if r.outer), key=lambda r: r.branch)]
    if len(outer) != 3:
        return FanValidation(False, ["fan needs exactly three outer rays"])
    try:
        bary = _section(outer)
    except ParameterError as exc:
        return FanValidation(False, [str(exc)])

    points = []
    for r in fan.rays:
        c = bary(r.coords)
        if any(x < 0 for x in c) or sum(c) <= 0:
            problems.append(f"ray {r.label} {r.coords} lies outside the outer cone")
            points.append(None)
            continue
        total = sum(c)
        points.append((Fraction(c[0], total), Fraction(c[1], total)))

    triangles = []
    for cone in fan.cones:
        vecs = [fan.rays[k].coords for k in cone]
        if _det3(*vecs) == 0:
            problems.append(f"cone {fan.cone_labels()[fan.cones.index(cone)]} is not simplicial")
            continue
        if any(points[k] is None for k in cone):
            continue
        triangles.append((cone, [points[k] for k in cone]))

    area = sum(abs(_cross2(*t)) for _, t in triangles) / 2
    if area < Fraction(1, 2):
        problems.append("support not covered")
    for (c1, t1), (c2, t2) in combinations(triangles, 2):
        if _interiors_overlap(t1, t2):
            labels = [tuple(fan.rays[k].label for k in c) for c in (c1, c2)]
            problems.append(f"cones {labels[0]} and {labels[1]} overlap")
    if area > Fraction(1, 2) and not any("overlap" in p for p in problems):
        problems.append("cones cover more than the outer cone")

    # rays sitting inside cones they do not generate
    for cone, _ in triangles:
        M = IntMatrix.from_columns([fan.rays[k].coords for k in cone])
        det = determinant(M)
        adj = adjugate(M)
        for k, r in enumerate(fan.rays):
            if k in cone:
                continue
            coeffs = [x * (1 if det > 0 else -1) for x in adj.apply(r.coords)]
            if all(x > 0 for x in coeffs):
                problems.append(f"{r.coords} interior to a cone it does not generate")
            elif sum(x > 0 for x in coeffs) == 2 and sum(x == 0 for x in coeffs) == 1:
                problems.append(f"{r.coords} lies on a face of a cone it does not span")

    for a, b in mandatory_faces(fan.rays):
        if not fan.has_face(a, b):
            problems.append(f"mandatory face ({a}, {b}) missing")
    for c in mandatory_cones(fan.rays):
        if not fan.has_cone(c):
            problems.append(f"mandatory cone {c} missing")
    return FanValidation(not problems, problems)


# ---------------------------------------------------------------------------
# smoothness and the central star


_PLANE_COORDS = {1: (0, 1), 2: (0, 2), 3: (0, 1)}


def planar_coordinates(branch: int, v: Vector) -> tuple[int, int]:
    """Coordinates inside the branch plane: (x, y) for z = 0 and y = z, (x, z) for y = 0."""
    a, b = _PLANE_COORDS[branch]
    return v[a], v[b]


@dataclass(frozen=True)
class SmoothnessReport:
    cone_dets: tuple[tuple[tuple[str, str, str], int], ...]
    adjacent_dets: tuple[tuple[tuple[str, str], int], ...]

    def central_unimodular(self) -> bool:
        return all(d == 1 for c, d in self.cone_dets if "y0" in c)

    def adjacent_unimodular(self) -> bool:
        return all(abs(d) == 1 for _, d in self.adjacent_dets)

    def smooth_cones(self) -> list[tuple[str, str, str]]:
        return [c for c, d in self.cone_dets if d == 1]


def smooth_cone_check(fan: Fan) -> SmoothnessReport:
    """|det| of every cone and the planar determinant of every adjacent branch pair."""
    cones = tuple(
        (labels, abs(_det3(*(fan.rays[k].coords for k in cone))))
        for labels, cone in zip(fan.cone_labels(), fan.cones)
    )
    pairs = []
    for i in (1, 2, 3):
        chain = branch_chain(fan.rays, i)
        for a, b in zip(chain, chain[1:]):
            u, v = planar_coordinates(i, a.coords), planar_coordinates(i, b.coords)
            pairs.append(((a.label, b.label), u[0] * v[1] - u[1] * v[0]))
    return SmoothnessReport(cones, tuple(pairs))


def central_star_projection(fan: Fan) -> list[tuple[int, int]]:
    """Rays of the cones at (1,0,0) projected along it onto the (y, z) plane."""
    central = fan.index("y0")
    seen = sorted({k for c in fan.cones if central in c for k in c if k != central})
    return [fan.rays[k].coords[1:] for k in seen]


# ---------------------------------------------------------------------------
# recovering intersection numbers


def _integer_multiple(target: Vector, base: Vector) -> int | None:
    """The integer a with target = a * base, or None."""
    a = None
    for t, b in zip(target, base):
        if b == 0:
            if t != 0:
                return None
            continue
        if t % b:
            return None
        if a is None:
            a = t // b
        elif a != t // b:
            return None
    return a


def recover_intersections(rays: Sequence[Ray]) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """(d, branch entries) from rho_{j-1} + rho_{j+1} = a_j rho_j and sum of first rays = d rho_0."""
    branches = []
    for i in (1, 2, 3):
        chain = branch_chain(rays, i)
        entries = []
        for j in range(1, len(chain) - 1):
            total = tuple(x + y for x, y in zip(chain[j - 1].coords, chain[j + 1].coords))
            a = _integer_multiple(total, chain[j].coords)
            if a is None:
                raise InconsistencyError(f"branch {i} position {j}: neighbours are not an integer multiple")
            entries.append(a)
        branches.append(tuple(entries))
    firsts = [branch_chain(rays, i)[1].coords for i in (1, 2, 3)]
    central = branch_chain(rays, 1)[0].coords
    d = _integer_multiple(tuple(map(sum, zip(*firsts))), central)
    if d is None:
        raise InconsistencyError("first rays do not sum to a multiple of the central ray")
    return d, tuple(branches)


def hirzebruch_index(rays: Sequence[Ray], i: int, j: int) -> int:
    """The a with rho_{k,1} + rho_{l,1} - a rho_{i,j-1} on the line of rho_{i,j}.

    This is the index of the Hirzebruch surface attached to rho_{i,j} in any
    fan where its three chain neighbours meet both other first rays.
    """
    chain = branch_chain(rays, i)
    if not 1 <= j <= len(chain) - 2:
        raise ParameterError(f"({i},{j}) is not an inner ray of branch {i}")
    firsts = [branch_chain(rays, b)[1].coords for b in (1, 2, 3) if b != i]
    s = tuple(x + y for x, y in zip(*firsts))
    prev, cur = chain[j - 1].coords, chain[j].coords
    # s - a * prev parallel to cur: every 2x2 minor of [s - a prev, cur] vanishes
    solutions = set()
    for p, q in combinations(range(3), 2):
        const = s[p] * cur[q] - s[q] * cur[p]
        lin = prev[p] * cur[q] - prev[q] * cur[p]
        if lin == 0:
            if const != 0:
                raise InconsistencyError(f"no Hirzebruch index at ({i},{j})")
            continue
        solutions.add(Fraction(const, lin))
    if len(solutions) != 1:
        raise InconsistencyError(f"Hirzebruch index at ({i},{j}) is not determined")
    a = solutions.pop()
    if a.denominator != 1:
        raise InconsistencyError(f"Hirzebruch index at ({i},{j}) is {a}, not an integer")
    return int(a)


def hirzebruch_index_formula(inv: ResolutionInvariant, i: int, j: int) -> int:
    """(gamma_i)_{j+1}, the closed form of the index (1-based)."""
    return branch_vectors(inv)[i - 1].gamma[j]


# ---------------------------------------------------------------------------
# the outer cone, its dual characters and J


@dataclass(frozen=True)
class OuterConeData:
    """Outer rays, the dual characters u1, u2, u3 and r.

    u1 takes the value 1 on the outer ray of branch 3, u2 on that of
    branch 2 and u3 on that of branch 1; each vanishes on the other two.
    """

    outer: tuple[Vector, Vector, Vector]
    u: tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[Fraction, ...]]
    r: int

    def dual_branch(self, k: int) -> int:
        """Branch whose outer ray u_k (1-based) is dual to."""
        return 4 - k


def dual_characters(inv: ResolutionInvariant) -> OuterConeData:
    (p1, q1), (p2, q2), (p3, q3) = inv.pairs
    d, r = inv.d, inv.r()
    if r <= 0:
        raise ParameterError(f"{inv}: r = {r} is not positive")
    u1 = (p1 * p2, q1 * p2, q2 * p1)
    u2 = (p1 * p3, q1 * p3, d * p1 * p3 - p1 * q3 - q1 * p3)
    u3 = (p2 * p3, d * p2 * p3 - p2 * q3 - q2 * p3, q2 * p3)
    u = tuple(tuple(Fraction(x, r) for x in vec) for vec in (u1, u2, u3))
    return OuterConeData(outer_rays_closed_form(inv), u, r)


def dual_pairing_holds(data: OuterConeData) -> bool:
    """u_k(outer ray of branch 4 - k) = 1 and u_k vanishes on the other outer rays."""
    for k, uk in enumerate(data.u, start=1):
        for b, ray in enumerate(data.outer, start=1):
            value = sum(x * y for x, y in zip(uk, ray))
            if value != (1 if b == data.dual_branch(k) else 0):
                return False
    return True


def action_weights(v: Sequence[int], data: OuterConeData) -> tuple[int, int, int]:
    """(r u1(v), r u2(v), r u3(v)) mod r, in the order u1, u2, u3."""
    out = []
    for uk in data.u:
        value = data.r * sum(x * y for x, y in zip(uk, v))
        if value.denominator != 1:
            raise InconsistencyError("r * u_k is not integral")
        out.append(int(value) % data.r)
    return tuple(out)


def branch_weights(v: Sequence[int], data: OuterConeData) -> tuple[int, int, int]:
    """The same weights reordered to branch order (x1, x2, x3)."""
    w = action_weights(v, data)
    return w[2], w[1], w[0]


@dataclass(frozen=True)
class QuotientGroupJ:
    """Z^3 modulo the lattice of the outer rays."""

    invariant_factors: tuple[int, ...]
    generators: tuple[Vector, ...]

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out


def cokernel_J(outer: Sequence[Vector]) -> QuotientGroupJ:
    """Invariant factors (> 1) of coker of the outer-ray matrix, with generating vectors."""
    M = IntMatrix.from_columns(outer)
    if determinant(M) == 0:
        raise ParameterError("outer rays are linearly dependent")
    S, left, _ = smith_normal_form(M)
    inv_left = inverse_unimodular(left)
    factors, gens = [], []
    for k in range(3):
        if S[k, k] != 1:
            factors.append(S[k, k])
            gens.append(inv_left.column(k))
    return QuotientGroupJ(tuple(factors), tuple(gens))


# ---------------------------------------------------------------------------
# matching J with Ab(G)


@dataclass(frozen=True)
class ActionMatch:
    """Outcome of comparing the J-action on x1, x2, x3 with Ab(G) on the sigmas.

    ``witnesses`` pairs each Ab(G) generator index with a lattice vector v
    whose weights (branch order) equal that generator's eigen-exponents.
    """

    matched: bool
    r: int
    j_weights: tuple[tuple[int, int, int], ...]
    ab_exponents: tuple[tuple[int, int, int], ...]
    witnesses: tuple[tuple[int, Vector, tuple[int, int, int]], ...]
    reason: str = ""


def _weight_span(data: OuterConeData) -> dict[tuple[int, int, int], Vector]:
    """Every weight triple (branch order) reachable from e1, e2, e3 with a witness vector."""
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    start = (0, 0, 0)
    found = {start: (0, 0, 0)}
    queue = deque([start])
    steps = [(branch_weights(e, data), e) for e in basis]
    while queue:
        w = queue.popleft()
        v = found[w]
        for sw, e in steps:
            nw = tuple((a + b) % data.r for a, b in zip(w, sw))
            if nw not in found:
                found[nw] = tuple(a + b for a, b in zip(v, e))
                queue.append(nw)
    return found


def _span(gens: Iterable[tuple[int, ...]], r: int) -> set[tuple[int, ...]]:
    gens = list(gens)
    span = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                nw = tuple((a + b) % r for a, b in zip(w, g))
                if nw not in span:
                    span.add(nw)
                    nxt.append(nw)
        frontier = nxt
    return span


def match_action(spec: GroupSpec, inv: ResolutionInvariant, sigmas) -> ActionMatch:
    """Compare J acting on x1, x2, x3 with Ab(G) acting on sigma_1, sigma_2, sigma_3.

    Both actions are faithful, so they agree after an isomorphism J = Ab(G)
    exactly when their images in (Z/r)^3 coincide.  For every Ab(G)
    generator a vector v with matching weights is reported.
    """
    data = dual_characters(inv)
    r = data.r
    basis_weights = tuple(branch_weights(e, data) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    if abs(determinant(IntMatrix.from_columns(data.outer))) != r:
        return ActionMatch(False, r, basis_weights, (), (), "r differs from |det| of the outer rays")
    try:
        exps = sigmas.eigen_exponents(r)
    except InconsistencyError as exc:
        # an eigenvalue outside mu_r means |J| = r cannot carry the Ab(G) action
        return ActionMatch(False, r, basis_weights, (), (), str(exc))
    j_span = _weight_span(data)
    witnesses = []
    for k, e in enumerate(exps):
        if e not in j_span:
            return ActionMatch(False, r, basis_weights, tuple(exps), tuple(witnesses),
                               f"eigen-exponents {e} of Ab generator {k} are not J-weights")
        witnesses.append((k, j_span[e], e))
    ab_span = _span(exps, r)
    if len(ab_span) != len(j_span):
        return ActionMatch(False, r, basis_weights, tuple(exps), tuple(witnesses),
                           f"Ab(G) image has {len(ab_span)} elements, J image has {len(j_span)}")
    return ActionMatch(True, r, basis_weights, tuple(exps), tuple(witnesses))


# ---------------------------------------------------------------------------
# cyclic quotients


def cyclic_chain_rays(n: int, q: int) -> list[tuple[int, int]]:
    """2D rays u_0 = (0, 1), u_1 = (1, 0), u_{j+1} = a_j u_j - u_{j-1}, ending at (n, -q)."""
    from .resolution import hjcf_expand

    rays = [(0, 1), (1, 0)]
    for a in hjcf_expand(n, q).entries:
        (x0, y0), (x1, y1) = rays[-2], rays[-1]
        rays.append((a * x1 - x0, a * y1 - y0))
    if rays[-1] != (n, -q):
        raise InconsistencyError(f"chain for ({n},{q}) ends at {rays[-1]}")
    return rays
