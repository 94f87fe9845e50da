"""Cox ring of the minimal resolution: the trinomial, the torus action, sigma
invariants, the generator embedding phi and the Ab(G)-torsor checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .cyclotomic import Cyclotomic, common_order, i_unit, root_of_unity_exponent, sqrt_minus_three
from .errors import AmbiguityError, InconsistencyError, ParameterError, UnsupportedFamilyError
from .groups import (
    GroupSpec,
    GroupTable,
    MatrixElement,
    abelianization,
    abelianization_generators,
    commutator_generators,
)
from .intmatrix import IntMatrix, adjugate, determinant
from .kernel import KernelMatrix
from .linalg import nullspace
from .polynomial import MultiPoly, poly_substitute
from .resolution import ExceptionalGraph, ExtendedMatrix, ResolutionInvariant, hjcf_expand, p_vector

AB = ("a", "b")


def label_branch(label: str) -> int:
    """0 for y0, i for y_{i,j} and x_i."""
    if label == "y0":
        return 0
    if label.startswith("x"):
        return int(label[1:])
    if label.startswith("y") and "_" in label:
        return int(label[1:].split("_")[0])
    raise ParameterError(f"unknown variable label {label!r}")


# ---------------------------------------------------------------------------
# the trinomial


@dataclass(frozen=True)
class TrinomialEquation:
    """Sum of monomials with coefficient 1, exponents indexed by ``variables``."""

    variables: tuple[str, ...]
    exponents: tuple[tuple[int, ...], ...]

    def polynomial(self) -> MultiPoly:
        return MultiPoly(self.variables, {e: 1 for e in self.exponents})

    def monomial_supports(self) -> list[dict[str, int]]:
        return [{v: k for v, k in zip(self.variables, e) if k} for e in self.exponents]

    def pretty(self) -> str:
        from .resolution import pretty_label

        parts = []
        for supp in self.monomial_supports():
            parts.append("".join(pretty_label(v) + (f"^{k}" if k > 1 else "") for v, k in supp.items()))
        return " + ".join(parts) + " = 0"


def cox_equation(K: KernelMatrix) -> TrinomialEquation:
    """Read alpha_1, alpha_2, alpha_3 off the second and third rows of K."""
    labels = K.labels
    row2, row3 = K.matrix.row(1), K.matrix.row(2)
    exps = []
    for i in (1, 2, 3):
        e = []
        for lab, a, b in zip(labels, row2, row3):
            if label_branch(lab) != i:
                e.append(0)
            elif i == 1:
                e.append(a)
            elif i == 2:
                e.append(b)
            else:
                e.append(-a)
        if any(x <= 0 for lab, x in zip(labels, e) if label_branch(lab) == i):
            raise InconsistencyError(f"alpha_{i} read from K is not positive")
        exps.append(tuple(e))
    return TrinomialEquation(tuple(labels), tuple(exps))


def verify_T_invariance(eq: TrinomialEquation, U: ExtendedMatrix) -> bool:
    """Every monomial has torus weight U * exponent equal to e_1."""
    e1 = tuple(int(k == 0) for k in range(U.matrix.rows))
    return all(U.matrix.apply(e) == e1 for e in eq.exponents)


# ---------------------------------------------------------------------------
# zero patterns


@dataclass(frozen=True)
class WMembership:
    in_W: bool
    reason: str

    def __bool__(self) -> bool:
        return self.in_W


def _chains(graph: ExceptionalGraph) -> list[list[str]]:
    return [
        ["y0"] + [f"y{i}_{j}" for j in range(1, len(b) + 1)] + [f"x{i}"]
        for i, b in enumerate(graph.branches, start=1)
    ]


def adjacent_pairs(graph: ExceptionalGraph) -> set[frozenset[str]]:
    return {frozenset(p) for chain in _chains(graph) for p in zip(chain, chain[1:])}


def w_membership(zero_pattern: Iterable[str], graph: ExceptionalGraph) -> WMembership:
    """Whether points with exactly these coordinates zero belong to W."""
    pattern = set(zero_pattern)
    known = {lab for chain in _chains(graph) for lab in chain}
    unknown = pattern - known
    if unknown:
        raise ParameterError(f"unknown variable labels {sorted(unknown)}")
    if not pattern:
        return WMembership(True, "all coordinates nonzero")
    if len(pattern) == 1:
        return WMembership(True, "a single zero coordinate")
    if len(pattern) >= 3:
        return WMembership(False, "three or more zero coordinates")
    if frozenset(pattern) in adjacent_pairs(graph):
        return WMembership(True, "adjacent pair on one branch")
    b1, b2 = (label_branch(lab) for lab in pattern)
    if b1 and b2 and b1 != b2:
        return WMembership(False, "cross-branch pair")
    return WMembership(False, "non-adjacent pair")


def _killing_sets(support: dict[str, int]) -> list[frozenset[str]]:
    """Minimal zero sets on which every partial derivative of one monomial vanishes."""
    out = [frozenset([v]) for v, k in support.items() if k >= 2]
    simple = [v for v, k in support.items() if k == 1]
    out += [frozenset(p) for p in combinations(simple, 2)]
    return out


def singular_pattern_check(eq: TrinomialEquation) -> bool:
    """Every zero pattern killing the whole gradient has >= 3 zeros on all three branches.

    The gradient of a sum of monomials in disjoint variables vanishes iff
    it vanishes for each monomial, so the minimal singular patterns are
    unions of one minimal killing set per monomial.
    """
    supports = eq.monomial_supports()
    per_monomial = [_killing_sets(s) for s in supports]
    if any(not sets for sets in per_monomial):
        return False
    for choice in product(*per_monomial):
        union = frozenset().union(*choice)
        branches = {label_branch(v) for v in union} - {0}
        if len(union) < 3 or branches != {1, 2, 3}:
            return False
    return True


# ---------------------------------------------------------------------------
# sigma invariants


def _poly(terms: dict[tuple[int, int], object]) -> MultiPoly:
    return MultiPoly(AB, terms)


def act(poly: MultiPoly, g: MatrixElement) -> MultiPoly:
    """f(g (a, b)): a -> g11 a + g12 b, b -> g21 a + g22 b."""
    g11, g12, g21, g22 = g.entries
    return poly_substitute(poly, {"a": _poly({(1, 0): g11, (0, 1): g12}), "b": _poly({(1, 0): g21, (0, 1): g22})})


def _sigma_polynomials(spec: GroupSpec) -> tuple[tuple[MultiPoly, MultiPoly, MultiPoly], tuple[str, str, str], str]:
    f = spec.family
    if f == "BD":
        n = spec.n
        if n % 2 == 0:
            return (
                (_poly({(n, 0): 1, (0, n): 1}), _poly({(n, 0): 1, (0, n): -1}), _poly({(1, 1): 1})),
                ("a^n+b^n", "a^n-b^n", "ab"),
                "BD, n even",
            )
        i = i_unit()
        return (
            (_poly({(n, 0): 1, (0, n): i}), _poly({(n, 0): 1, (0, n): -i}), _poly({(1, 1): 1})),
            ("a^n+i b^n", "a^n-i b^n", "ab"),
            "BD, n odd",
        )
    if f == "BT":
        c = 2 * sqrt_minus_three()  # 2 i sqrt(3)
        return (
            (
                _poly({(5, 1): 1, (1, 5): -1}),
                _poly({(4, 0): 1, (0, 4): 1, (2, 2): c}),
                _poly({(4, 0): 1, (0, 4): 1, (2, 2): -c}),
            ),
            ("ab(a^4-b^4)", "a^4+b^4+2i sqrt3 a^2b^2", "a^4+b^4-2i sqrt3 a^2b^2"),
            "BT",
        )
    if f == "BO":
        return (
            (
                _poly({(12, 0): 1, (8, 4): -33, (4, 8): -33, (0, 12): 1}),
                _poly({(8, 0): -1, (4, 4): -14, (0, 8): -1}),
                _poly({(5, 1): 1, (1, 5): -1}),
            ),
            ("C", "B", "A'"),
            "BO; the constant 108^(1/4) on A' is dropped",
        )
    if f == "BI":
        return (
            (
                _poly({(30, 0): 1, (0, 30): 1, (25, 5): 522, (5, 25): -522, (20, 10): -10005, (10, 20): -10005}),
                _poly({(20, 0): -1, (0, 20): -1, (15, 5): 228, (5, 15): -228, (10, 10): -494}),
                _poly({(11, 1): 1, (6, 6): 11, (1, 11): -1}),
            ),
            ("F", "E", "D'"),
            "BI; the constant 1728^(1/5) on D' is dropped",
        )
    raise UnsupportedFamilyError("cyclic groups have no sigma invariants")


@dataclass(frozen=True)
class SigmaSet:
    """Three [G,G]-invariant Ab(G)-eigenvectors, in branch order.

    ``eigenvalues[k][i]`` is the scalar by which the k-th Ab(G) generator
    multiplies sigma_i under f -> f(g (a, b)).
    """

    spec: GroupSpec
    polys: tuple[MultiPoly, MultiPoly, MultiPoly]
    names: tuple[str, str, str]
    ab_generators: tuple[MatrixElement, ...]
    eigenvalues: tuple[tuple[Cyclotomic, Cyclotomic, Cyclotomic], ...]
    note: str = ""

    def degrees(self) -> tuple[int, int, int]:
        return tuple(p.total_degree() for p in self.polys)

    def eigen_exponents(self, modulus: int) -> list[tuple[int, int, int]]:
        """Eigenvalues as exponents of zeta_modulus (one triple per generator)."""
        out = []
        for k, triple in enumerate(self.eigenvalues):
            exps = []
            for lam in triple:
                e = root_of_unity_exponent(lam, modulus)
                if e is None:
                    raise InconsistencyError(f"eigenvalue {lam} of generator {k} is not a {modulus}-th root of unity")
                exps.append(e)
            out.append(tuple(exps))
        return out

    def permuted(self, order: Sequence[int]) -> "SigmaSet":
        """Reorder the sigmas (and their eigenvalues) by ``order``."""
        pick = lambda seq: tuple(seq[k] for k in order)  # noqa: E731
        return SigmaSet(
            self.spec,
            pick(self.polys),
            pick(self.names),
            self.ab_generators,
            tuple(pick(t) for t in self.eigenvalues),
            self.note,
        )


def sigma_set(spec: GroupSpec) -> SigmaSet:
    """The sigma invariants of a non-cyclic group with their Ab(G) eigenvalues."""
    polys, names, note = _sigma_polynomials(spec)
    gens = abelianization_generators(spec)
    eigen = []
    for g in gens:
        triple = []
        for name, s in zip(names, polys):
            lam = act(s, g).proportionality_constant(s)
            if lam is None:
                raise InconsistencyError(f"{spec.label}: {name} is not an eigenvector of {g}")
            triple.append(lam.minimal_order())
        eigen.append(tuple(triple))
    return SigmaSet(spec, polys, names, tuple(gens), tuple(eigen), note)


def commutator_invariance_failures(s: SigmaSet) -> list[str]:
    """Names of sigmas moved by some generator of [G, G]."""
    failures = []
    for g in commutator_generators(s.spec):
        for name, poly in zip(s.names, s.polys):
            if act(poly, g) != poly:
                failures.append(f"{name} moved by {g}")
    return failures


def degree_pairing_holds(s: SigmaSet, p: Sequence[int]) -> bool:
    """deg(sigma_i) * p_i is the same for i = 1, 2, 3."""
    return len({d * pi for d, pi in zip(s.degrees(), p)}) == 1


def relation_constants(s: SigmaSet, p: Sequence[int]) -> tuple[Cyclotomic, Cyclotomic, Cyclotomic]:
    """(c1, c2, c3) with c1 = 1 and c1 s1^p1 + c2 s2^p2 + c3 s3^p3 = 0."""
    powers = [poly ** e for poly, e in zip(s.polys, p)]
    order = common_order(c for pw in powers for c in pw.terms.values())
    monomials = sorted(set().union(*(pw.terms for pw in powers)))
    rows = [[pw.coefficient(mono).lift(order) for pw in powers] for mono in monomials]
    basis = nullspace(rows, 3, one=Cyclotomic.rational(1, order))
    if not basis:
        raise InconsistencyError(f"{s.spec.label}: sigma powers satisfy no linear relation")
    if len(basis) > 1:
        raise AmbiguityError(f"{s.spec.label}: relation space has dimension {len(basis)}", basis)
    vec = basis[0]
    if vec[0].is_zero():
        raise InconsistencyError(f"{s.spec.label}: relation does not involve sigma_1")
    return tuple((x / vec[0]).minimal_order() for x in vec)


# ---------------------------------------------------------------------------
# the embedding phi


@dataclass(frozen=True)
class GeneratorRecord:
    """phi(variable) = poly(a, b) * prod t_k^character[k]."""

    label: str
    poly: MultiPoly
    character: tuple[int, ...]

    def image(self, n: int) -> MultiPoly:
        variables = AB + tuple(f"t{k}" for k in range(n))
        out = MultiPoly(variables)
        for (ea, eb), c in self.poly.terms.items():
            out = out + MultiPoly(variables, {(ea, eb) + self.character: c})
        return out

    def character_string(self) -> str:
        num = [f"t{k}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(self.character) if e > 0]
        den = [f"t{k}" + (f"^{-e}" if e < -1 else "") for k, e in enumerate(self.character) if e < 0]
        if not num and not den:
            return "1"
        text = "*".join(num) if num else "1"
        return text + ("/" + "*".join(den) if den else "")


@dataclass(frozen=True)
class CoxGenerators:
    records: tuple[GeneratorRecord, ...]
    constants: tuple[Cyclotomic, Cyclotomic, Cyclotomic]
    n: int
    note: str = ""

    def record(self, label: str) -> GeneratorRecord:
        for r in self.records:
            if r.label == label:
                return r
        raise ParameterError(f"no generator for {label!r}")

    def outer_torus_index(self, i: int) -> int:
        """k(i): the t-variable carried by phi(x_i)."""
        char = self.record(f"x{i}").character
        return next(k for k, e in enumerate(char) if e)


def phi_generators(spec: GroupSpec, U: ExtendedMatrix, K: KernelMatrix, s: SigmaSet) -> CoxGenerators:
    """phi(x_i) = sigma_i * chi_{x_i}; every other variable maps to its character.

    Characters are the columns of U.  The sigmas stay unnormalized; the
    relation constants record the radicals that normalization would need.
    """
    if tuple(K.labels) != tuple(U.labels):
        raise ParameterError("U and K have different column labels")
    constants = relation_constants(s, p_vector(spec))
    one = MultiPoly.constant(AB, 1)
    records = []
    for k, lab in enumerate(U.labels):
        char = U.matrix.column(k)
        poly = s.polys[int(lab[1:]) - 1] if lab.startswith("x") else one
        records.append(GeneratorRecord(lab, poly, char))
    note = "sigma_i carries the factor c_i^(1/p_i) after normalization; " + s.note
    return CoxGenerators(tuple(records), constants, U.matrix.rows, note)


@dataclass(frozen=True)
class PhiCheck:
    ok: bool
    monomial_images_ok: bool
    relation_ok: bool


def verify_phi_relation(gens: CoxGenerators, eq: TrinomialEquation, p: Sequence[int] | None = None) -> PhiCheck:
    """phi of the i-th monomial is t0 sigma_i^{p_i}, and sum c_i phi(monomial_i) = 0."""
    images = {r.label: r.image(gens.n) for r in gens.records}
    variables = AB + tuple(f"t{k}" for k in range(gens.n))
    t0 = MultiPoly.monomial(variables, (0, 0, 1) + (0,) * (gens.n - 1))
    mono_ok = True
    total = MultiPoly(variables)
    for i, e in enumerate(eq.exponents, start=1):
        image = MultiPoly.constant(variables, 1)
        for lab, k in zip(eq.variables, e):
            if k:
                image = image * images[lab] ** k
        sigma = gens.record(f"x{i}").poly.with_variables(variables)
        p_i = e[eq.variables.index(f"x{i}")] if p is None else p[i - 1]
        if image != t0 * sigma ** p_i:
            mono_ok = False
        total = total + image * gens.constants[i - 1]
    rel_ok = total.is_zero()
    return PhiCheck(mono_ok and rel_ok, mono_ok, rel_ok)


@dataclass(frozen=True)
class InjectivityCertificate:
    det_U0: int
    ab_order: int

    @property
    def ok(self) -> bool:
        return self.det_U0 != 0 and abs(self.det_U0) == self.ab_order


def injectivity_certificate(U: ExtendedMatrix, g: GroupTable | int) -> InjectivityCertificate:
    """det U0 != 0 and |det U0| = |Ab(G)|; raise on mismatch."""
    det = determinant(U.U0())
    if isinstance(g, int):
        ab = g
    else:
        ab = 1
        for f in abelianization(g):
            ab *= f
    cert = InjectivityCertificate(det, ab)
    if not cert.ok:
        raise InconsistencyError(f"|det U0| = {abs(det)} but |Ab(G)| = {ab}")
    return cert


# ---------------------------------------------------------------------------
# the Ab(G) action on the torus making phi equivariant


@dataclass(frozen=True)
class TorsorReport:
    """Per Ab(G) generator: exponents w_k with g t_k = zeta_r^{w_k} t_k.

    ``variable_weights`` gives, per generator, the resulting exponent on
    each phi(variable) (sigma eigen-exponent plus character weight), which
    must be zero for every variable.
    """

    r: int
    solvable: bool
    unique: bool
    weights: tuple[tuple[int, ...], ...]
    variable_weights: tuple[dict[str, int], ...]

    @property
    def all_fixed(self) -> bool:
        return all(v == 0 for d in self.variable_weights for v in d.values())

    @property
    def ok(self) -> bool:
        return self.solvable and self.unique and self.all_fixed


def _kernel_mod_r(U0: IntMatrix, r: int) -> list[tuple[int, ...]]:
    """All w mod r with U0 w = 0 mod r: the span of the adjugate's columns."""
    gens = [tuple(x % r for x in col) for col in adjugate(U0).columns()]
    zero = (0,) * U0.rows
    span = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                nw = tuple((a + b) % r for a, b in zip(w, g))
                if nw not in span:
                    span.add(nw)
                    nxt.append(nw)
        frontier = nxt
    return sorted(span)


def torsor_action_weights(spec: GroupSpec, gens: CoxGenerators, s: SigmaSet, U: ExtendedMatrix) -> TorsorReport:
    """Solve for the action of each Ab(G) generator on t_0..t_{n-1}.

    All characters of the y-variables must be fixed and t_{k(i)} must be
    scaled by the inverse of the eigenvalue of sigma_i.  The solution is
    searched over the whole kernel of U0 modulo r, so uniqueness is checked.
    """
    U0 = U.U0()
    r = abs(determinant(U0))
    if r == 1:
        return TorsorReport(1, True, True, tuple((0,) * gens.n for _ in s.eigenvalues),
                            tuple({rec.label: 0 for rec in gens.records} for _ in s.eigenvalues))
    kernel = _kernel_mod_r(U0, r)
    k_of = [gens.outer_torus_index(i) for i in (1, 2, 3)]
    exps = s.eigen_exponents(r)
    solvable, unique = True, True
    weights, var_weights = [], []
    for e in exps:
        target = tuple((-x) % r for x in e)
        sols = [w for w in kernel if tuple(w[k] for k in k_of) == target]
        if not sols:
            solvable = False
            continue
        unique = unique and len(sols) == 1
        w = sols[0]
        weights.append(w)
        per_var = {}
        for rec in gens.records:
            char_weight = sum(c * x for c, x in zip(rec.character, w))
            sigma_weight = e[int(rec.label[1:]) - 1] if rec.label.startswith("x") else 0
            per_var[rec.label] = (char_weight + sigma_weight) % r
        var_weights.append(per_var)
    return TorsorReport(r, solvable, unique, tuple(weights), tuple(var_weights))


# ---------------------------------------------------------------------------
# cyclic groups


@dataclass(frozen=True)
class CyclicCox:
    """Chain data of C^2/C_{n,q}: the Cox ring is a polynomial ring."""

    n: int
    q: int
    chain: tuple[int, ...]
    matrix: IntMatrix
    labels: tuple[str, ...]
    records: tuple[GeneratorRecord, ...]

    @property
    def det(self) -> int:
        return determinant(self.matrix.delete_columns([0, len(self.labels) - 1]))


def cyclic_cox(n: int, q: int) -> CyclicCox:
    """Chain matrix of [a1..ak] and generators a t0, b t_{k-1}, chi(y_j)."""
    chain = hjcf_expand(n, q).entries
    k = len(chain)
    labels = ("x1",) + tuple(f"y{j}" for j in range(1, k + 1)) + ("x2",)
    rows = []
    for j, a in enumerate(chain):
        row = [0] * (k + 2)
        row[j] = 1
        row[j + 1] = -a
        row[j + 2] = 1
        rows.append(row)
    matrix = IntMatrix(rows)
    records = []
    for c, lab in enumerate(labels):
        char = matrix.column(c)
        if lab == "x1":
            poly = MultiPoly(AB, {(1, 0): 1})
        elif lab == "x2":
            poly = MultiPoly(AB, {(0, 1): 1})
        else:
            poly = MultiPoly.constant(AB, 1)
        records.append(GeneratorRecord(lab, poly, char))
    out = CyclicCox(n, q, chain, matrix, labels, tuple(records))
    if abs(out.det) != n:
        raise InconsistencyError(f"chain matrix of ({n},{q}) has |det| {abs(out.det)} != {n}")
    return out
