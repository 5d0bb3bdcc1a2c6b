"""Decoy-pulse yield bounds and the decoy secret-key pipeline.

Two auxiliary pulse intensities below the signal intensity let the receiver
bound the single-photon yield from observed click rates alone, which in turn
bounds the tagged (multiphoton) fraction of detected signal pulses far more
tightly than the worst-case redistribution argument. The tighter bound is
substituted for the tagging fraction in the standard rate pipeline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bstep import iterate_bsteps
from .link import LinkParams, link_observables
from .rates import rate_bcss
from .states import Protocol, StateModelError, initial_pair_state

__all__ = [
    "DecoyParams",
    "DecoyObservations",
    "DecoyBounds",
    "DEFAULT_DECOY",
    "simulated_yields",
    "decoy_bounds",
    "decoy_point",
    "decoy_rate",
    "DecoyPoint",
]


@dataclass(frozen=True)
class DecoyParams:
    """Signal and decoy mean photon numbers.

    The bound derivation requires ``kappa < nu``, ``kappa e^-kappa <
    nu e^-nu`` and ``mu > kappa + nu``; violations are rejected here so the
    downstream formulas are always applicable.
    """

    mu: float = 0.55
    kappa: float = 0.10
    nu: float = 0.27

    def __post_init__(self) -> None:
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if not self.kappa < self.nu:
            raise ValueError(f"decoy intensities require kappa < nu, got {self.kappa} >= {self.nu}")
        if not self.kappa * math.exp(-self.kappa) < self.nu * math.exp(-self.nu):
            raise ValueError(
                "decoy intensities require kappa*exp(-kappa) < nu*exp(-nu), "
                f"violated by kappa={self.kappa}, nu={self.nu}"
            )
        if not self.mu > self.kappa + self.nu:
            raise ValueError(
                f"signal intensity must satisfy mu > kappa + nu, got mu={self.mu}"
            )


#: Standard two-decoy working point.
DEFAULT_DECOY = DecoyParams()


@dataclass(frozen=True)
class DecoyObservations:
    """Click probabilities observed at the two decoy and the signal intensity."""

    p_exp_kappa: float
    p_exp_nu: float
    p_exp_mu: float

    def __post_init__(self) -> None:
        for name in ("p_exp_kappa", "p_exp_nu", "p_exp_mu"):
            p = getattr(self, name)
            if not 0.0 < p <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {p}")


@dataclass(frozen=True)
class DecoyBounds:
    """Yield bounds derived from decoy observations.

    ``s1_lower`` bounds the single-photon click yield from below and
    ``big_delta_upper`` bounds the tagged fraction of detected signal pulses
    from above; both are clamped into [0, 1] with the pre-clamp values kept
    for diagnostics.
    """

    s1_lower: float
    big_delta_upper: float
    s1_lower_raw: float
    big_delta_upper_raw: float

    @property
    def clamped(self) -> bool:
        """True when either bound had to be clamped into [0, 1]."""
        return (
            self.s1_lower != self.s1_lower_raw
            or self.big_delta_upper != self.big_delta_upper_raw
        )


def simulated_yields(link: LinkParams, decoy: DecoyParams, l: float) -> DecoyObservations:
    """Honest-channel click probabilities at the three intensities.

    Stands in for real measurements: each intensity ``x`` clicks with
    probability ``1 - exp(-x eta_c eta_det) + p_dark`` at distance ``l``.
    """
    return DecoyObservations(
        p_exp_kappa=link_observables(link, decoy.kappa, l).p_exp,
        p_exp_nu=link_observables(link, decoy.nu, l).p_exp,
        p_exp_mu=link_observables(link, decoy.mu, l).p_exp,
    )


def decoy_bounds(
    obs: DecoyObservations, decoy: DecoyParams, p_dark: float
) -> DecoyBounds:
    """Single-photon yield and tagging bounds from click observations.

    The yield bound eliminates the unknown multiphoton yield between the two
    decoy relations:

    ``s1 >= [nu^2 e^kappa P(kappa) - kappa^2 e^nu P(nu) - (nu^2 - kappa^2) p_dark]
    / (kappa nu (nu - kappa))``

    and the tagged fraction of detected signal pulses is then at most
    ``1 - s1 mu e^-mu / P(mu)``. Observations inconsistent with any physical
    yield drive the bounds out of [0, 1]; they are clamped and the raw values
    retained.
    """
    if not 0.0 <= p_dark < 1.0:
        raise ValueError(f"p_dark must be in [0, 1), got {p_dark}")
    kappa, nu, mu = decoy.kappa, decoy.nu, decoy.mu
    s1_raw = (
        nu * nu * math.exp(kappa) * obs.p_exp_kappa
        - kappa * kappa * math.exp(nu) * obs.p_exp_nu
        - (nu * nu - kappa * kappa) * p_dark
    ) / (kappa * nu * (nu - kappa))
    s1 = min(1.0, max(0.0, s1_raw))
    big_delta_raw = 1.0 - s1 * mu * math.exp(-mu) / obs.p_exp_mu
    big_delta = min(1.0, max(0.0, big_delta_raw))
    return DecoyBounds(
        s1_lower=s1,
        big_delta_upper=big_delta,
        s1_lower_raw=s1_raw,
        big_delta_upper_raw=big_delta_raw,
    )


@dataclass(frozen=True)
class DecoyPoint:
    """Full decoy evaluation at one distance (used by sweeps and the CLI)."""

    l_km: float
    n: int
    rate: float
    delta: float
    big_delta: float
    bounds: DecoyBounds
    state_valid: bool


def decoy_point(
    protocol: Protocol, link: LinkParams, decoy: DecoyParams, l: float, n: int
) -> DecoyPoint:
    """Evaluate the decoy pipeline at one distance, keeping diagnostics.

    The initial state uses the decoy tagging bound in place of the worst-case
    tagging fraction; an error rate too large for any valid state yields a
    zero rate with ``state_valid`` cleared rather than an error.
    """
    obs = simulated_yields(link, decoy, l)
    bounds = decoy_bounds(obs, decoy, link.p_dark)
    lobs = link_observables(link, decoy.mu, l)
    try:
        state = initial_pair_state(protocol, lobs.delta, bounds.big_delta_upper)
    except StateModelError:
        return DecoyPoint(
            l_km=l,
            n=n,
            rate=0.0,
            delta=lobs.delta,
            big_delta=lobs.big_delta,
            bounds=bounds,
            state_valid=False,
        )
    trajectory = iterate_bsteps(state, n)
    rate = rate_bcss(obs.p_exp_mu, protocol.beta, trajectory)
    return DecoyPoint(
        l_km=l,
        n=n,
        rate=rate,
        delta=lobs.delta,
        big_delta=lobs.big_delta,
        bounds=bounds,
        state_valid=True,
    )


def decoy_rate(
    protocol: Protocol, link: LinkParams, decoy: DecoyParams, l: float, n: int
) -> float:
    """Decoy secret-key rate per pulse at distance ``l`` with ``n`` rounds."""
    return decoy_point(protocol, link, decoy, l, n).rate
