"""Per-distance intensity optimization, sweeps, and threshold searches.

The signal intensity trades click rate against the tagged multiphoton
fraction, so every reported point optimizes the mean photon number over a
configured interval. Near the maximum reachable distance the positive-rate
window in the intensity can be far narrower than any practical grid, so the
optimizer refines two channels: the clamped rate around the best grid point,
and the signed secret-fraction surrogate, which stays informative where the
clamped rate is flat zero.

Every sweep point is an independent pure computation; rows are emitted in
deterministic (distance, round-count) order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .bstep import DEFAULT_MAX_ROUNDS, iterate_bsteps
from .decoy import DEFAULT_DECOY, DecoyParams, decoy_point
from .link import LinkParams, link_observables
from .rates import (
    POSITIVE_RATE_FLOOR,
    Feasibility,
    classify_feasibility,
    css_key_fraction,
    entanglement_boundary,
    purification_boundary,
    rate_css,
)
from .states import Protocol, StateModelError, initial_pair_state

__all__ = [
    "MU_INTERVAL",
    "COARSE_GRID_POINTS",
    "DISTANCE_RESOLUTION_KM",
    "DISTANCE_CAP_KM",
    "BoundKind",
    "SweepRow",
    "RegionPoint",
    "standard_rate",
    "optimize_mu",
    "rate_sweep",
    "max_distance",
    "bound_distance",
    "region_curves",
]

#: Search interval for the mean photon number.
MU_INTERVAL = (1e-4, 2.0)
#: Log-spaced points of the coarse optimization grid.
COARSE_GRID_POINTS = 64
#: Resolution of distance threshold searches, km.
DISTANCE_RESOLUTION_KM = 0.1
#: Upper distance limit for threshold searches, km.
DISTANCE_CAP_KM = 200.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BoundKind(Enum):
    """Necessary-condition bound selecting a limiting distance."""

    ENTANGLEMENT = "entanglement"
    BSTEP_CSS = "bstep-css"


@dataclass(frozen=True)
class SweepRow:
    """One record of a rate-versus-distance sweep."""

    l_km: float
    n: int
    mu_star: float
    rate: float
    delta: float
    big_delta: float
    feasibility: Feasibility
    s1_lower: float | None = None
    big_delta_upper: float | None = None


@dataclass(frozen=True)
class RegionPoint:
    """Feasibility-region boundaries at one observed error rate."""

    delta: float
    big_delta_black: float
    big_delta_grey: float


def _prefix_rates(protocol: Protocol, p_exp: float, trajectory) -> list[float]:
    """Clamped rates after 0..n rounds of one trajectory."""
    rates = []
    cumulative = 1.0
    for m, state in enumerate(trajectory.states):
        if m > 0:
            cumulative *= trajectory.survivals[m - 1]
        rates.append(rate_css(p_exp * cumulative / 2**m, protocol.beta, state))
    return rates


def _profile(
    protocol: Protocol,
    link: LinkParams,
    mu: float,
    l: float,
    n: int,
) -> tuple[list[float], list[float]]:
    """Per-round-count rates and signed secret-fraction margins at one point.

    Element ``m`` of each list refers to exactly ``m`` error-rejection
    rounds. Margins are ``-inf`` for intensities that cannot produce a key
    at all: a state-model violation or a fully tagged link, whose secret
    fraction is identically zero and would otherwise mask nearby genuinely
    positive windows during refinement.
    """
    obs = link_observables(link, mu, l)
    try:
        state = initial_pair_state(protocol, obs.delta, obs.big_delta)
    except StateModelError:
        return [0.0] * (n + 1), [-math.inf] * (n + 1)
    trajectory = iterate_bsteps(state, n)
    rates = _prefix_rates(protocol, obs.p_exp, trajectory)
    if obs.big_delta >= 1.0:
        return rates, [-math.inf] * (n + 1)
    margins = [css_key_fraction(s) for s in trajectory.states]
    return rates, margins


def standard_rate(
    protocol: Protocol,
    link: LinkParams,
    mu: float,
    l: float,
    n: int,
    *,
    up_to_n: bool = False,
) -> float:
    """Standard-pipeline secret-key rate at one (mu, distance) point.

    With ``up_to_n`` the best rate over 0..n rounds is returned. Error
    rates beyond the state model yield 0.
    """
    rates, _ = _profile(protocol, link, mu, l, n)
    return max(rates) if up_to_n else rates[-1]


def _golden_max(f, a: float, b: float, rel_tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section maximization of ``f`` on [a, b] (unimodal assumed)."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > rel_tol * (abs(a) + abs(b)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _log_grid(lo: float, hi: float, points: int) -> list[float]:
    ratio = hi / lo
    return [lo * ratio ** (i / (points - 1)) for i in range(points)]


#: Refinement skips round-count branches whose best grid margin sits deeper
#: than this; a positive needle never grows out of so negative a profile.
_BRANCH_MARGIN_CUTOFF = -0.25


def _optimize_standard(
    protocol: Protocol,
    link: LinkParams,
    l: float,
    n: int,
    *,
    up_to_n: bool,
    mu_interval: tuple[float, float],
    grid_points: int,
    floor: float,
    stop_at_positive: bool = False,
) -> tuple[float, float]:
    """Grid plus golden-section search of the standard pipeline over mu.

    Two refinement channels: the (budgeted) clamped rate around its best
    grid point, and, per round-count branch, the signed secret-fraction
    margin. The latter recovers positive-rate windows near the distance
    frontier that are much narrower than the grid spacing, where the clamped
    rate reads zero everywhere on the grid. With ``stop_at_positive`` the
    search returns the first candidate above the floor (for threshold
    scans where only positivity matters).
    """
    lo, hi = mu_interval
    branches = range(n + 1) if up_to_n else range(n, n + 1)

    def rate_at(mu: float) -> float:
        rates, _ = _profile(protocol, link, mu, l, n)
        return max(rates) if up_to_n else rates[-1]

    def margin_for(m: int):
        def margin_at(mu: float) -> float:
            return _profile(protocol, link, mu, l, m)[1][-1]

        return margin_at

    grid = _log_grid(lo, hi, grid_points)
    profiles = [_profile(protocol, link, mu, l, n) for mu in grid]
    rates = [max(p[0]) if up_to_n else p[0][-1] for p in profiles]

    best = (0.5 * (lo + hi), 0.0)

    def consider(mu: float, rate: float) -> bool:
        nonlocal best
        if rate > floor and rate > best[1]:
            best = (mu, rate)
        return stop_at_positive and best[1] > floor

    i = max(range(len(grid)), key=rates.__getitem__)
    if rates[i] > 0.0:
        if consider(grid[i], rates[i]):
            return best
        mu_r, rate_r = _golden_max(
            rate_at, grid[max(0, i - 1)], grid[min(len(grid) - 1, i + 1)]
        )
        if consider(mu_r, rate_r):
            return best

    # Branch ordering: least-negative grid margin first, most likely to hold
    # a positive needle.
    branch_peaks = []
    for m in branches:
        values = [p[1][m] for p in profiles]
        j = max(range(len(grid)), key=values.__getitem__)
        if math.isfinite(values[j]) and values[j] > _BRANCH_MARGIN_CUTOFF:
            branch_peaks.append((values[j], m, j))
    branch_peaks.sort(reverse=True)
    for _, m, j in branch_peaks:
        mu_m, _ = _golden_max(
            margin_for(m), grid[max(0, j - 1)], grid[min(len(grid) - 1, j + 1)]
        )
        if consider(mu_m, rate_at(mu_m)):
            return best
    return best


def optimize_mu(
    protocol: Protocol,
    link: LinkParams,
    l: float,
    n: int,
    pipeline: str = "standard",
    decoy: DecoyParams | None = None,
    *,
    up_to_n: bool = False,
    mu_interval: tuple[float, float] = MU_INTERVAL,
    grid_points: int = COARSE_GRID_POINTS,
    floor: float = POSITIVE_RATE_FLOOR,
) -> tuple[float, float]:
    """Best mean photon number and rate at one distance.

    For the standard pipeline the rate is maximized over ``mu_interval``
    with a coarse log-spaced grid followed by golden-section refinement (see
    :func:`_optimize_standard`). The decoy pipeline evaluates at the
    configured signal intensity: decoy intensities are a fixed working
    point, not free parameters.

    Returns
    -------
    (mu_star, rate_star)
        ``rate_star`` is 0 with ``mu_star`` at the interval midpoint (or the
        fixed decoy intensity) when no intensity clears the positivity floor.
    """
    if pipeline == "decoy":
        params = decoy if decoy is not None else DEFAULT_DECOY
        rounds = range(n + 1) if up_to_n else (n,)
        rate = max(decoy_point(protocol, link, params, l, m).rate for m in rounds)
        if rate <= floor:
            return params.mu, 0.0
        return params.mu, rate
    if pipeline != "standard":
        raise ValueError(f"unknown pipeline {pipeline!r}")
    return _optimize_standard(
        protocol,
        link,
        l,
        n,
        up_to_n=up_to_n,
        mu_interval=mu_interval,
        grid_points=grid_points,
        floor=floor,
    )


def rate_sweep(
    protocol: Protocol,
    link: LinkParams,
    l_min: float,
    l_max: float,
    step: float,
    n_list: list[int],
    pipeline: str = "standard",
    decoy: DecoyParams | None = None,
    **opt_kwargs,
) -> list[SweepRow]:
    """Rate-versus-distance table with per-point intensity optimization.

    One row per (distance, round count), distances inclusive of both ends,
    sorted by (distance, round count).
    """
    if l_min > l_max:
        raise ValueError(f"l_min must be <= l_max, got {l_min} > {l_max}")
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    count = int(math.floor((l_max - l_min) / step + 1e-9)) + 1
    distances = [l_min + k * step for k in range(count)]
    params = decoy if decoy is not None else DEFAULT_DECOY
    floor = opt_kwargs.get("floor", POSITIVE_RATE_FLOOR)
    rows = []
    for l in distances:
        for n in sorted(set(n_list)):
            if pipeline == "decoy":
                point = decoy_point(protocol, link, params, l, n)
                rows.append(
                    SweepRow(
                        l_km=l,
                        n=n,
                        mu_star=params.mu,
                        rate=point.rate if point.rate > floor else 0.0,
                        delta=point.delta,
                        big_delta=point.big_delta,
                        feasibility=classify_feasibility(
                            protocol, point.delta, point.bounds.big_delta_upper
                        ),
                        s1_lower=point.bounds.s1_lower,
                        big_delta_upper=point.bounds.big_delta_upper,
                    )
                )
            else:
                mu_star, rate_star = optimize_mu(
                    protocol, link, l, n, pipeline, decoy, **opt_kwargs
                )
                obs = link_observables(link, mu_star, l)
                rows.append(
                    SweepRow(
                        l_km=l,
                        n=n,
                        mu_star=mu_star,
                        rate=rate_star,
                        delta=obs.delta,
                        big_delta=obs.big_delta,
                        feasibility=classify_feasibility(
                            protocol, obs.delta, obs.big_delta
                        ),
                    )
                )
    return rows


def max_distance(
    protocol: Protocol,
    link: LinkParams,
    n: int,
    pipeline: str = "standard",
    decoy: DecoyParams | None = None,
    *,
    cap: float = DISTANCE_CAP_KM,
    resolution: float = DISTANCE_RESOLUTION_KM,
    floor: float = POSITIVE_RATE_FLOOR,
    scan_step: float = 1.0,
    **opt_kwargs,
) -> float:
    """Largest distance with a positive rate using up to ``n`` rounds.

    The round count is a budget: at each distance the best round count
    m <= n is used, which makes the result non-decreasing in ``n``. The
    positive region need not be contiguous for a fixed round count, so the
    search scans downward from ``cap`` in ``scan_step`` increments and then
    bisects the bracketing interval to ``resolution``. Returns 0 when even
    zero distance yields no key, and ``cap`` when the rate is still positive
    there.
    """

    if pipeline == "standard":
        mu_interval = opt_kwargs.pop("mu_interval", MU_INTERVAL)
        grid_points = opt_kwargs.pop("grid_points", COARSE_GRID_POINTS)

        def positive(l: float) -> bool:
            _, rate = _optimize_standard(
                protocol, link, l, n,
                up_to_n=True, mu_interval=mu_interval,
                grid_points=grid_points, floor=floor,
                stop_at_positive=True,
            )
            return rate > 0.0

    else:

        def positive(l: float) -> bool:
            _, rate = optimize_mu(
                protocol, link, l, n, pipeline, decoy,
                up_to_n=True, floor=floor, **opt_kwargs,
            )
            return rate > 0.0

    if positive(cap):
        return cap
    steps = int(math.ceil(cap / scan_step))
    found = None
    for k in range(1, steps + 1):
        l = max(0.0, cap - k * scan_step)
        if positive(l):
            found = l
            break
    if found is None:
        return 0.0
    lo, hi = found, min(found + scan_step, cap)
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return lo


def bound_distance(
    protocol: Protocol,
    link: LinkParams,
    bound: BoundKind,
    *,
    cap: float = DISTANCE_CAP_KM,
    resolution: float = DISTANCE_RESOLUTION_KM,
    mu_interval: tuple[float, float] = MU_INTERVAL,
    grid_points: int = 256,
) -> float:
    """Largest distance at which some intensity satisfies a necessary bound.

    The bound margin (how far the observables sit inside the condition) is
    maximized over the intensity with a grid plus golden-section refinement;
    the distance is then bisected on the sign of that maximal margin.
    """
    beta = protocol.beta
    threshold = (beta - 1.0) / (2.0 * beta)

    def margin(mu: float, l: float) -> float:
        obs = link_observables(link, mu, l)
        if obs.big_delta >= 1.0:
            return -math.inf
        if bound is BoundKind.ENTANGLEMENT:
            return threshold - obs.delta / (1.0 - obs.big_delta)
        if protocol is Protocol.FOUR_STATE:
            limit = 1.0 - 5.0 * obs.delta
        else:
            limit = (2.0 - 5.0 * obs.delta - math.sqrt(5.0) * obs.delta) / 2.0
        return limit - obs.big_delta

    lo, hi = mu_interval
    grid = _log_grid(lo, hi, grid_points)

    def satisfiable(l: float) -> bool:
        values = [margin(mu, l) for mu in grid]
        j = max(range(len(grid)), key=values.__getitem__)
        if not math.isfinite(values[j]):
            return False
        if values[j] > 0.0:
            return True
        _, best = _golden_max(
            lambda mu: margin(mu, l),
            grid[max(0, j - 1)],
            grid[min(len(grid) - 1, j + 1)],
        )
        return best > 0.0

    if not satisfiable(0.0):
        return 0.0
    if satisfiable(cap):
        return cap
    low, high = 0.0, cap
    while high - low > resolution:
        mid = 0.5 * (low + high)
        if satisfiable(mid):
            low = mid
        else:
            high = mid
    return low


def region_curves(protocol: Protocol, delta_grid: list[float]) -> list[RegionPoint]:
    """Feasibility-region boundary curves over a grid of error rates.

    For each error rate the entanglement boundary (above it no key by any
    means) and the two-way purification boundary (between them entanglement
    is provable but this post-processing cannot reach it) are emitted,
    clamped at zero.
    """
    points = []
    for delta in delta_grid:
        if not 0.0 <= delta <= 0.5:
            raise ValueError(f"delta grid values must be in [0, 1/2], got {delta}")
        points.append(
            RegionPoint(
                delta=delta,
                big_delta_black=entanglement_boundary(protocol, delta),
                big_delta_grey=purification_boundary(protocol, delta),
            )
        )
    return points
