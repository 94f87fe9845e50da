"""Rays, fans and their validation, smoothness, indices and the J-action."""

from __future__ import annotations

import numpy as np
import pytest

from coxres.cox import sigma_set
from coxres.errors import ParameterError
from coxres.fan import (
    action_weights,
    branch_weights,
    canonical_fan,
    central_star_projection,
    cokernel_J,
    cyclic_chain_rays,
    dual_characters,
    dual_pairing_holds,
    fan_with_pivot,
    hirzebruch_index,
    hirzebruch_index_formula,
    mandatory_cones,
    match_action,
    outer_rays_closed_form,
    pivot_property_holds,
    rays_for_invariant,
    recover_intersections,
    smooth_cone_check,
    validate_fan,
)
from coxres.groups import GroupSpec, expected_abelianization
from coxres.resolution import ResolutionInvariant, resolution_invariant
from grid import BO_GRID, GRID, SAMPLE, ids


def _rays(spec):
    inv = resolution_invariant(spec)
    return inv, rays_for_invariant(inv)


def _pivots(inv):
    return [(i, j) for i in (1, 2, 3) for j in range(1, len(inv.branches()[i - 1]) + 1)]


def _cover_count(fan, points):
    """How many cones contain each point in their relative interior (numeric oracle)."""
    counts = np.zeros(len(points), dtype=int)
    for cone in fan.cones:
        M = np.array([fan.rays[k].coords for k in cone], dtype=float).T
        coeffs = np.linalg.solve(M, points.T)
        counts += (coeffs > 1e-9).all(axis=0)
    return counts


@pytest.mark.parametrize("spec", SAMPLE, ids=ids(SAMPLE))
def test_fans_tile_the_outer_cone(spec):
    inv, rays = _rays(spec)
    outer = np.array(outer_rays_closed_form(inv), dtype=float)
    rng = np.random.default_rng(7)
    points = rng.random((400, 3)) @ outer
    for fan in [canonical_fan(rays)] + [fan_with_pivot(rays, i, j) for i, j in _pivots(inv)]:
        # random points avoid the walls almost surely, so each lies in exactly one cone
        assert (_cover_count(fan, points) == 1).all()
        assert len(fan.cones) == 2 * inv.n + 1


@pytest.mark.parametrize("spec", GRID, ids=ids(GRID))
def test_grid_fan_suite(spec):
    inv, rays = _rays(spec)
    fan = canonical_fan(rays)
    assert validate_fan(fan).valid
    report = smooth_cone_check(fan)
    assert report.central_unimodular()
    assert report.adjacent_unimodular()
    assert sorted(central_star_projection(fan)) == [(-1, -1), (0, 1), (1, 0)]
    assert recover_intersections(rays) == (inv.d, inv.branches())
    for i, j in _pivots(inv):
        pivot = fan_with_pivot(rays, i, j)
        assert validate_fan(pivot).valid
        assert pivot_property_holds(pivot, i, j)
        assert hirzebruch_index(rays, i, j) == hirzebruch_index_formula(inv, i, j)


def test_known_cone_counts():
    assert len(canonical_fan(_rays(GroupSpec.bd(2, 1))[1]).cones) == 9
    assert len(canonical_fan(_rays(GroupSpec.bi(1))[1]).cones) == 17
    assert len(canonical_fan(_rays(GroupSpec.bd(23, 39))[1]).cones) == 15


def test_hirzebruch_index_on_e8_third_branch():
    _, rays = _rays(GroupSpec.bi(1))
    assert [hirzebruch_index(rays, 3, j) for j in range(1, 5)] == [2, 3, 4, 5]


def test_validation_diagnostics():
    _, rays = _rays(GroupSpec.bi(1))
    fan = canonical_fan(rays)
    cone = fan.cone_labels()[-1]
    broken = fan.without_cone(cone)
    report = validate_fan(broken)
    assert not report.valid
    assert "support not covered" in report.diagnostics
    central = mandatory_cones(rays)[0]
    report = validate_fan(fan.without_cone(central))
    assert any("mandatory cone" in d for d in report.diagnostics)
    # a cone spanned by the outer rays swallows every other ray
    swollen = fan.with_cones([("x1", "x2", "x3")])
    report = validate_fan(swollen)
    assert not report.valid
    assert any("(1, 0, 0) interior to a cone it does not generate" in d for d in report.diagnostics)
    assert any("overlap" in d for d in report.diagnostics)


def test_pivot_errors():
    _, rays = _rays(GroupSpec.bd(23, 39))
    with pytest.raises(ParameterError):
        fan_with_pivot(rays, 4, 1)
    with pytest.raises(ParameterError):
        fan_with_pivot(rays, 1, 2)
    with pytest.raises(ParameterError):
        hirzebruch_index(rays, 3, 0)


def test_canonical_fan_is_not_a_pivot_fan_everywhere():
    inv, rays = _rays(GroupSpec.bi(1))
    fan = canonical_fan(rays)
    assert not all(pivot_property_holds(fan, i, j) for i, j in _pivots(inv))


# ---------------------------------------------------------------------------
# dual characters and J


@pytest.mark.parametrize("spec", GRID, ids=ids(GRID))
def test_J_matches_abelianization(spec):
    inv = resolution_invariant(spec)
    data = dual_characters(inv)
    assert dual_pairing_holds(data)
    J = cokernel_J(outer_rays_closed_form(inv))
    assert list(J.invariant_factors) == expected_abelianization(spec)
    assert J.order == inv.r()
    assert match_action(spec, inv, sigma_set(spec)).matched


def test_known_J():
    assert cokernel_J(outer_rays_closed_form(resolution_invariant(GroupSpec.bi(1)))).invariant_factors == ()
    assert cokernel_J(outer_rays_closed_form(resolution_invariant(GroupSpec.bd(23, 39)))).invariant_factors == (156,)
    assert cokernel_J(outer_rays_closed_form(resolution_invariant(GroupSpec.bd(2, 1)))).invariant_factors == (2, 2)
    with pytest.raises(ParameterError):
        cokernel_J([(1, 0, 0), (0, 1, 0), (1, 1, 0)])


@pytest.mark.parametrize("spec", BO_GRID, ids=ids(BO_GRID))
def test_bo_weight_triple(spec):
    m = spec.m
    data = dual_characters(resolution_invariant(spec))
    assert action_weights((0, 1, 0), data) == tuple(x % (2 * m) for x in (3, 4, m + 6))
    assert branch_weights((0, 1, 0), data) == tuple(reversed(action_weights((0, 1, 0), data)))


def test_match_action_rejects_wrong_invariant():
    spec = GroupSpec.bo(5)
    wrong = ResolutionInvariant(2, ((2, 1), (3, 1), (4, 1)))
    assert wrong.r() != resolution_invariant(spec).r()
    result = match_action(spec, wrong, sigma_set(spec))
    assert not result.matched and result.reason


def test_cyclic_chain_rays():
    rays = cyclic_chain_rays(7, 3)
    assert rays[0] == (0, 1) and rays[1] == (1, 0) and rays[-1] == (7, -3)
    for (x0, y0), (x1, y1) in zip(rays[1:], rays[2:]):
        assert abs(x0 * y1 - x1 * y0) == 1
