"""Full computation per group, named verification checks, JSON and DOT export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .cox import (
    CoxGenerators,
    SigmaSet,
    TrinomialEquation,
    adjacent_pairs,
    commutator_invariance_failures,
    cox_equation,
    cyclic_cox,
    degree_pairing_holds,
    injectivity_certificate,
    phi_generators,
    relation_constants,
    sigma_set,
    singular_pattern_check,
    torsor_action_weights,
    verify_phi_relation,
    verify_T_invariance,
    w_membership,
)
from .cyclotomic import Cyclotomic
from .errors import CoxresError, ParameterError
from .fan import (
    Fan,
    Ray,
    canonical_fan,
    central_star_projection,
    cokernel_J,
    dual_characters,
    dual_pairing_holds,
    fan_with_pivot,
    hirzebruch_index,
    hirzebruch_index_formula,
    match_action,
    cyclic_chain_rays,
    outer_rays_closed_form,
    pivot_property_holds,
    rays_from_K,
    recover_intersections,
    smooth_cone_check,
    validate_fan,
)
from .groups import (
    GroupSpec,
    abelianization,
    abelianization_order_formula,
    commutator_subgroup,
    enumerate_group,
    expected_abelianization,
    is_small,
)
from .intmatrix import determinant
from .kernel import (
    KernelMatrix,
    adjacent_column_pairs,
    branch_vector_violations,
    build_K,
    is_saturated,
    spanning_check,
)
from .resolution import (
    ExceptionalGraph,
    ExtendedMatrix,
    ResolutionInvariant,
    branch_constraint_holds,
    build_graph,
    build_U,
    p_vector,
    resolution_invariant,
)


# ---------------------------------------------------------------------------
# the computation chain


@dataclass(frozen=True)
class StarData:
    """Everything derived from a non-cyclic group, built once and shared."""

    spec: GroupSpec
    invariant: ResolutionInvariant
    graph: ExceptionalGraph
    U: ExtendedMatrix
    K: KernelMatrix
    rays: tuple[Ray, ...]
    fan: Fan
    equation: TrinomialEquation
    sigmas: SigmaSet
    generators: CoxGenerators


@lru_cache(maxsize=128)
def star_data(spec: GroupSpec) -> StarData:
    inv = resolution_invariant(spec)
    graph = build_graph(inv)
    U = build_U(graph)
    K = build_K(U, inv)
    rays = tuple(rays_from_K(K))
    sigmas = sigma_set(spec)
    return StarData(
        spec, inv, graph, U, K, rays, canonical_fan(rays), cox_equation(K), sigmas,
        phi_generators(spec, U, K, sigmas),
    )


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str = ""


def _run(name: str, fn: Callable[[], tuple[bool, str] | bool]) -> CheckResult:
    try:
        out = fn()
    except CoxresError as exc:
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    if isinstance(out, tuple):
        return CheckResult(name, bool(out[0]), out[1])
    return CheckResult(name, bool(out), "")


def _group_checks(spec: GroupSpec) -> list[CheckResult]:
    table = enumerate_group(spec)
    results = [_run("group.order", lambda: (len(table) == spec.expected_order(),
                                            f"{len(table)} elements, expected {spec.expected_order()}"))]
    ab = abelianization(table)
    results.append(_run("group.abelianization", lambda: (ab == expected_abelianization(spec), f"invariant factors {ab}")))
    small = is_small(table)
    results.append(_run("group.small", lambda: (small.small, "" if small.small else f"pseudo-reflection {small.witness}")))
    orders = table.element_orders()
    results.append(_run("group.element_orders", lambda: bool((len(table) % orders == 0).all())))
    if spec.is_cyclic:
        return results
    comm = commutator_subgroup(table)
    expect = {"BD": spec.params[0], "BT": 8, "BO": 24, "BI": 120}[spec.family]
    results.append(_run("group.commutator_order", lambda: (len(comm) == expect, f"|[G,G]| = {len(comm)}")))
    ab_order = 1
    for f in ab:
        ab_order *= f
    results.append(_run("group.ab_formula", lambda: (abelianization_order_formula(spec) == ab_order,
                                                     f"formula {abelianization_order_formula(spec)}, table {ab_order}")))
    data = star_data(spec)
    results.append(_run("cox.injectivity", lambda: injectivity_certificate(data.U, table).ok))
    results.append(_run("fan.J_equals_Ab", lambda: (
        list(cokernel_J(outer_rays_closed_form(data.invariant)).invariant_factors) == ab,
        f"J {cokernel_J(outer_rays_closed_form(data.invariant)).invariant_factors}, Ab {ab}")))
    return results


def _star_checks(spec: GroupSpec) -> list[CheckResult]:
    data = star_data(spec)
    inv, U, K, rays = data.invariant, data.U, data.K, data.rays
    r = inv.r()
    out = []
    add = lambda name, fn: out.append(_run(name, fn))  # noqa: E731

    add("resolution.branch_constraint", lambda: branch_constraint_holds(inv))
    add("resolution.positivity", lambda: (inv.positivity() > 0, f"d - sum q/p = {inv.positivity()}"))
    add("resolution.r_matches_ab", lambda: (r == abelianization_order_formula(spec), f"r = {r}"))
    add("lattice.UK_zero", lambda: (U.matrix @ K.matrix.transpose()).is_zero())
    add("lattice.branch_vectors", lambda: (not branch_vector_violations(inv), "; ".join(branch_vector_violations(inv))))
    add("lattice.saturated", lambda: is_saturated(K))
    add("lattice.outer_rays", lambda: tuple(K.column(f"x{i}") for i in (1, 2, 3)) == outer_rays_closed_form(inv))
    add("lattice.det_U0", lambda: (abs(determinant(U.U0())) == r, f"|det U0| = {abs(determinant(U.U0()))}, r = {r}"))
    bad_pairs = lambda: [p for p in adjacent_column_pairs(U) if not spanning_check(U, *p)]  # noqa: E731
    add("lattice.spanning", lambda: (not bad_pairs(), f"failing pairs {bad_pairs()}"))

    def pivots_ok():
        for i in (1, 2, 3):
            for j in range(1, len(inv.branches()[i - 1]) + 1):
                if not pivot_property_holds(fan_with_pivot(rays, i, j), i, j):
                    return False, f"pivot ({i},{j})"
        return True, ""

    add("fan.canonical", lambda: (validate_fan(data.fan).valid, "; ".join(validate_fan(data.fan).diagnostics)))
    add("fan.pivots", pivots_ok)
    smooth = smooth_cone_check(data.fan)
    add("fan.central_smooth", smooth.central_unimodular)
    add("fan.adjacent_unimodular", smooth.adjacent_unimodular)
    add("fan.star_projection", lambda: sorted(central_star_projection(data.fan)) == sorted([(1, 0), (0, 1), (-1, -1)]))
    add("fan.recover_intersections", lambda: recover_intersections(rays) == (inv.d, inv.branches()))
    add("fan.hirzebruch_index", lambda: all(
        hirzebruch_index(rays, i, j) == hirzebruch_index_formula(inv, i, j)
        for i in (1, 2, 3) for j in range(1, len(inv.branches()[i - 1]) + 1)))
    data_u = dual_characters(inv)
    add("fan.dual_pairing", lambda: dual_pairing_holds(data_u))
    add("fan.J_order", lambda: cokernel_J(outer_rays_closed_form(inv)).order == r)
    add("fan.match_action", lambda: (match_action(spec, inv, data.sigmas).matched,
                                     match_action(spec, inv, data.sigmas).reason))

    add("cox.T_invariance", lambda: verify_T_invariance(data.equation, U))
    add("cox.singular_pattern", lambda: singular_pattern_check(data.equation))
    add("cox.sigma_invariance", lambda: (not commutator_invariance_failures(data.sigmas),
                                         "; ".join(commutator_invariance_failures(data.sigmas))))
    add("cox.degree_pairing", lambda: degree_pairing_holds(data.sigmas, p_vector(spec)))
    consts = lambda: relation_constants(data.sigmas, p_vector(spec))  # noqa: E731
    add("cox.relation_constants", lambda: (all(not c.is_zero() for c in consts()), ", ".join(str(c) for c in consts())))
    add("cox.phi_relation", lambda: verify_phi_relation(data.generators, data.equation).ok)
    add("cox.torsor", lambda: torsor_action_weights(spec, data.generators, data.sigmas, U).ok)

    def w_pairs():
        labels = list(U.labels)
        admitted = [frozenset((a, b)) for k, a in enumerate(labels) for b in labels[k + 1:]
                    if w_membership({a, b}, data.graph).in_W]
        want = adjacent_pairs(data.graph)
        return set(admitted) == want and len(want) == data.graph.n + 2, f"{len(admitted)} admissible pairs"

    add("cox.W_pairs", w_pairs)
    return out


def _cyclic_checks(spec: GroupSpec) -> list[CheckResult]:
    n, q = spec.params
    return [
        _run("cyclic.chain_det", lambda: abs(cyclic_cox(n, q).det) == n),
        _run("cyclic.chain_rays", lambda: cyclic_chain_rays(n, q)[-1] == (n, -q)),
    ]


SUITES = ("fast", "all")


def run_checks(spec: GroupSpec, suite: str = "fast") -> list[CheckResult]:
    """Named checks; ``fast`` skips group enumeration, ``all`` includes it."""
    if suite not in SUITES:
        raise ParameterError(f"unknown suite {suite!r}; choose from {SUITES}")
    results = _cyclic_checks(spec) if spec.is_cyclic else _star_checks(spec)
    if suite == "all":
        results += _group_checks(spec)
    return results


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class Report:
    """Serializable summary of one group; every field is plain data."""

    group: dict
    invariant: dict
    U: dict
    K: dict
    equation: dict
    rays: tuple
    cones: tuple
    generators: tuple
    checks: tuple


def _str_matrix(rows) -> list[list[str]]:
    return [[str(x) for x in r] for r in rows]


def cyclotomic_to_json(c: Cyclotomic) -> dict:
    c = c.minimal_order()
    return {"order": str(c.order), "coeffs": [str(x) for x in c.coeffs]}


def cyclotomic_from_json(obj: dict) -> Cyclotomic:
    return Cyclotomic.from_coeffs(int(obj["order"]), [Fraction(x) for x in obj["coeffs"]])


def _poly_json(poly) -> list[dict]:
    return [{"exponent": [str(e) for e in exp], "coeff": cyclotomic_to_json(c)} for exp, c in poly.sorted_terms()]


def build_report(spec: GroupSpec, suite: str = "fast", pivot: tuple[int, int] | None = None) -> Report:
    """Assemble the report in JSON-ready form (integers as strings)."""
    group = {"family": spec.family, "params": [str(p) for p in spec.params], "order": str(spec.expected_order())}
    if spec.is_cyclic:
        n, q = spec.params
        cc = cyclic_cox(n, q)
        group.update({"ab_order": str(n), "invariant_factors": [str(n)]})
        rays2 = cyclic_chain_rays(n, q)
        labels = ("x1",) + tuple(f"y{j}" for j in range(1, len(cc.chain) + 1)) + ("x2",)
        return Report(
            group,
            {"kind": "chain", "n": str(n), "q": str(q), "chain": [str(a) for a in cc.chain]},
            {"labels": list(cc.labels), "rows": _str_matrix(cc.matrix.entries)},
            {"labels": [], "rows": []},
            {"variables": [], "exponents": [], "pretty": ""},
            tuple({"label": lab, "coords": [str(x) for x in v]} for lab, v in zip(labels, rays2)),
            tuple([labels[k], labels[k + 1]] for k in range(len(labels) - 1)),
            tuple({"label": rec.label, "poly": _poly_json(rec.poly), "character": [str(x) for x in rec.character]}
                  for rec in cc.records),
            tuple({"name": c.name, "passed": c.passed, "witness": c.witness} for c in run_checks(spec, suite)),
        )
    data = star_data(spec)
    inv = data.invariant
    ab_factors = expected_abelianization(spec)
    group.update({"ab_order": str(inv.r()), "invariant_factors": [str(x) for x in ab_factors]})
    fan = data.fan if pivot is None else fan_with_pivot(data.rays, *pivot)
    consts = data.generators.constants
    return Report(
        group,
        {"kind": "star", "d": str(inv.d), "pairs": [[str(p), str(q)] for p, q in inv.pairs],
         "branches": [[str(a) for a in b] for b in inv.branches()]},
        {"labels": list(data.U.labels), "rows": _str_matrix(data.U.matrix.entries)},
        {"labels": list(data.K.labels), "rows": _str_matrix(data.K.matrix.entries)},
        {"variables": list(data.equation.variables),
         "exponents": _str_matrix(data.equation.exponents),
         "pretty": data.equation.pretty(),
         "relation_constants": [cyclotomic_to_json(c) for c in consts]},
        tuple({"label": r.label, "coords": [str(x) for x in r.coords]} for r in data.rays),
        tuple(list(c) for c in fan.cone_labels()),
        tuple({"label": rec.label, "poly": _poly_json(rec.poly), "character": [str(x) for x in rec.character]}
              for rec in data.generators.records),
        tuple({"name": c.name, "passed": c.passed, "witness": c.witness} for c in run_checks(spec, suite)),
    )


_KEYS = ("group", "invariant", "U", "K", "equation", "rays", "cones", "generators", "checks")


def export_json(report: Report) -> bytes:
    payload = {k: getattr(report, k) for k in _KEYS}
    return (json.dumps(payload, indent=2, sort_keys=False) + "\n").encode("utf-8")


def parse_json(blob: bytes | str) -> Report:
    data = json.loads(blob)
    missing = [k for k in _KEYS if k not in data]
    if missing:
        raise ParameterError(f"report JSON lacks keys {missing}")
    tuple_keys = {"rays", "cones", "generators", "checks"}
    return Report(**{k: tuple(data[k]) if k in tuple_keys else data[k] for k in _KEYS})


# ---------------------------------------------------------------------------
# DOT


def export_dot(graph: ExceptionalGraph, name: str = "dual_graph") -> bytes:
    """Undirected dual graph; ranks group curves by distance from E0."""
    lines = [f"graph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    lines.append(f'  E0 [label="E_0 (-{graph.d})"];')
    ranks: dict[int, list[str]] = {}
    for i, b in enumerate(graph.branches, start=1):
        for j, a in enumerate(b, start=1):
            lines.append(f'  E_{i}_{j} [label="E_{{{i},{j}}} (-{a})"];')
            ranks.setdefault(j, []).append(f"E_{i}_{j}")
    for u, v in graph.edges():
        lines.append(f"  {_dot_id(u)} -- {_dot_id(v)};")
    for j in sorted(ranks):
        lines.append("  { rank=same; " + " ".join(ranks[j]) + "; }")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_chain_dot(chain, name: str = "dual_graph") -> bytes:
    """The single chain of a cyclic quotient."""
    lines = [f"graph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for j, a in enumerate(chain, start=1):
        lines.append(f'  E_{j} [label="E_{{{j}}} (-{a})"];')
    for j in range(1, len(chain)):
        lines.append(f"  E_{j} -- E_{j + 1};")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _dot_id(label: str) -> str:
    """Graph labels E0 / E{i}_{j} as DOT ids E0 / E_i_j."""
    return "E0" if label == "E0" else "E_" + label[1:]
