import pytest

from qkdrates.decoy import DEFAULT_DECOY
from qkdrates.link import DEFAULT_LINK
from qkdrates.optimize import (
    MU_INTERVAL,
    BoundKind,
    bound_distance,
    max_distance,
    optimize_mu,
    rate_sweep,
    region_curves,
    standard_rate,
)
from qkdrates.rates import entanglement_boundary, purification_boundary
from qkdrates.states import Protocol

# Threshold distances computed with dense reference scans (0.1 km class).
REFERENCE_KM = {
    ("four", "ent"): 41.9,
    ("four", "grey"): 37.3,
    ("six", "ent"): 49.6,
    ("six", "grey"): 44.3,
    ("four", 0): 25.4,
    ("four", 1): 29.9,
    ("six", 1): 34.0,
}


def brute_force_best_rate(protocol, l, n, step=1e-4):
    """Exhaustive intensity grid, the optimization oracle."""
    best = 0.0
    k = 1
    while True:
        mu = k * step
        if mu > MU_INTERVAL[1]:
            return best
        rate = standard_rate(protocol, DEFAULT_LINK, mu, l, n)
        if rate > best:
            best = rate
        k += 1


def test_short_distance_has_positive_rate():
    mu, rate = optimize_mu(Protocol.FOUR_STATE, DEFAULT_LINK, 0.0, 0)
    assert rate > 0.0
    assert MU_INTERVAL[0] <= mu <= MU_INTERVAL[1]


def test_far_distance_returns_midpoint_and_zero():
    mu, rate = optimize_mu(Protocol.FOUR_STATE, DEFAULT_LINK, 100.0, 0)
    assert rate == 0.0
    assert mu == pytest.approx(0.5 * (MU_INTERVAL[0] + MU_INTERVAL[1]), abs=1e-12)


def test_optimizer_matches_exhaustive_grid_at_20km():
    oracle = 1.9704059389782973e-04  # 1e-4-step grid, frozen
    mu, rate = optimize_mu(Protocol.FOUR_STATE, DEFAULT_LINK, 20.0, 0)
    assert rate >= oracle * (1.0 - 1e-9)
    assert rate == pytest.approx(oracle, rel=0.01)
    assert mu == pytest.approx(0.05, rel=0.05)


@pytest.mark.parametrize("protocol", list(Protocol))
@pytest.mark.parametrize("n", [0, 1])
@pytest.mark.parametrize("l", [0.0, 5.0, 10.0, 15.0, 20.0])
def test_optimizer_matches_exhaustive_grid(protocol, n, l):
    oracle = brute_force_best_rate(protocol, l, n)
    _, rate = optimize_mu(protocol, DEFAULT_LINK, l, n)
    assert oracle > 0.0
    assert rate == pytest.approx(oracle, rel=0.01)
    assert rate >= oracle * (1.0 - 1e-9)


def test_max_distance_reference_values():
    assert max_distance(Protocol.FOUR_STATE, DEFAULT_LINK, 0) == pytest.approx(
        REFERENCE_KM[("four", 0)], abs=0.3
    )
    assert max_distance(Protocol.FOUR_STATE, DEFAULT_LINK, 1) == pytest.approx(
        REFERENCE_KM[("four", 1)], abs=0.3
    )
    assert max_distance(Protocol.SIX_STATE, DEFAULT_LINK, 1) == pytest.approx(
        REFERENCE_KM[("six", 1)], abs=0.3
    )


def test_max_distance_budget_is_monotone():
    distances = [
        max_distance(Protocol.FOUR_STATE, DEFAULT_LINK, n) for n in (0, 1, 2)
    ]
    assert distances[0] <= distances[1] <= distances[2]


def test_max_distance_zero_when_link_hopeless():
    # an error floor beyond the four-state threshold kills the key at l = 0
    from qkdrates.link import LinkParams

    hopeless = LinkParams(alpha=0.2, l_c=1.0, eta_det=0.18, p_dark=2e-4, delta_0=0.3)
    assert max_distance(Protocol.FOUR_STATE, hopeless, 0) == 0.0


def test_bound_distances_reference_values():
    assert bound_distance(
        Protocol.FOUR_STATE, DEFAULT_LINK, BoundKind.ENTANGLEMENT
    ) == pytest.approx(REFERENCE_KM[("four", "ent")], abs=0.5)
    assert bound_distance(
        Protocol.SIX_STATE, DEFAULT_LINK, BoundKind.ENTANGLEMENT
    ) == pytest.approx(REFERENCE_KM[("six", "ent")], abs=0.5)
    assert bound_distance(
        Protocol.FOUR_STATE, DEFAULT_LINK, BoundKind.BSTEP_CSS
    ) == pytest.approx(REFERENCE_KM[("four", "grey")], abs=0.5)
    assert bound_distance(
        Protocol.SIX_STATE, DEFAULT_LINK, BoundKind.BSTEP_CSS
    ) == pytest.approx(REFERENCE_KM[("six", "grey")], abs=0.5)


@pytest.mark.parametrize("protocol", list(Protocol))
def test_bound_ordering(protocol):
    grey = bound_distance(protocol, DEFAULT_LINK, BoundKind.BSTEP_CSS)
    ent = bound_distance(protocol, DEFAULT_LINK, BoundKind.ENTANGLEMENT)
    assert grey <= ent


@pytest.mark.parametrize("protocol", list(Protocol))
def test_reachable_distances_respect_bounds(protocol):
    ent = bound_distance(protocol, DEFAULT_LINK, BoundKind.ENTANGLEMENT)
    grey = bound_distance(protocol, DEFAULT_LINK, BoundKind.BSTEP_CSS)
    for n in (0, 4):
        reach = max_distance(protocol, DEFAULT_LINK, n)
        assert reach <= ent + 0.2
        # the purification bound constrains the untagged component only; at
        # round budgets above ~4 the reachable tail can exceed it because
        # error correction is charged at the tagged-diluted observed rate
        assert reach <= grey + 0.2


def test_decoy_pipeline_uses_fixed_intensity():
    mu, rate = optimize_mu(
        Protocol.FOUR_STATE, DEFAULT_LINK, 40.0, 0, pipeline="decoy"
    )
    assert mu == DEFAULT_DECOY.mu
    assert rate > 0.0


def test_decoy_max_distance_reference():
    assert max_distance(
        Protocol.FOUR_STATE, DEFAULT_LINK, 0, pipeline="decoy"
    ) == pytest.approx(78.6, abs=0.3)


def test_rate_sweep_structure():
    rows = rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 0.0, 10.0, 5.0, [1, 0])
    assert [(r.l_km, r.n) for r in rows] == [
        (0.0, 0), (0.0, 1), (5.0, 0), (5.0, 1), (10.0, 0), (10.0, 1)
    ]
    for row in rows:
        assert row.rate >= 0.0
        assert MU_INTERVAL[0] <= row.mu_star <= MU_INTERVAL[1]
        assert row.s1_lower is None


def test_rate_sweep_single_distance():
    rows = rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 12.0, 12.0, 1.0, [0])
    assert len(rows) == 1
    assert rows[0].l_km == 12.0


def test_rate_decreases_with_distance():
    rows = rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 10.0, 30.0, 20.0, [0])
    assert rows[0].rate >= rows[1].rate


def test_each_round_extends_the_positive_region():
    rows = rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 20.0, 34.0, 1.0, [0, 1, 2])
    reach = {
        n: max((r.l_km for r in rows if r.n == n and r.rate > 0.0), default=-1.0)
        for n in (0, 1, 2)
    }
    assert reach[0] < reach[1] < reach[2]


def test_decoy_sweep_rows_carry_bounds():
    rows = rate_sweep(
        Protocol.FOUR_STATE, DEFAULT_LINK, 40.0, 40.0, 1.0, [2], pipeline="decoy"
    )
    (row,) = rows
    assert row.mu_star == DEFAULT_DECOY.mu
    assert row.s1_lower == pytest.approx(0.022521330992711443, abs=1e-12)
    assert row.big_delta_upper == pytest.approx(0.43218545401629, abs=1e-12)
    assert row.rate == pytest.approx(7.136898172617451e-05, rel=1e-11)


def test_region_curves_match_closed_forms():
    grid = [k * 0.01 for k in range(26)]
    points = region_curves(Protocol.SIX_STATE, grid)
    for point in points:
        assert point.big_delta_black == pytest.approx(
            entanglement_boundary(Protocol.SIX_STATE, point.delta), abs=1e-15
        )
        assert point.big_delta_grey == pytest.approx(
            purification_boundary(Protocol.SIX_STATE, point.delta), abs=1e-15
        )
        assert point.big_delta_grey <= point.big_delta_black + 1e-15


def test_region_curves_boundary_values():
    points = region_curves(Protocol.FOUR_STATE, [0.0, 0.25])
    assert points[0].big_delta_black == 1.0
    assert points[0].big_delta_grey == 1.0
    assert points[1].big_delta_black == 0.0


def test_region_curves_validate_grid():
    with pytest.raises(ValueError):
        region_curves(Protocol.FOUR_STATE, [0.6])


def test_sweep_validation():
    with pytest.raises(ValueError):
        rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 10.0, 0.0, 1.0, [0])
    with pytest.raises(ValueError):
        rate_sweep(Protocol.FOUR_STATE, DEFAULT_LINK, 0.0, 10.0, -1.0, [0])
    with pytest.raises(ValueError):
        optimize_mu(Protocol.FOUR_STATE, DEFAULT_LINK, 10.0, 0, pipeline="exotic")