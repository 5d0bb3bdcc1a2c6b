"""Optical-fiber link model.

Distance-dependent observables of a weak-coherent-pulse link: channel
transmission, click probability, sifted-key error rate, and the effective
fraction of detected pulses an eavesdropper may know perfectly (multiphoton
pulses redistributed over a lossless channel).

All functions are pure; parameter records are immutable and safe to share
across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DeadLinkError",
    "LinkParams",
    "LinkObservables",
    "DEFAULT_LINK",
    "channel_transmission",
    "multiphoton_fraction",
    "link_observables",
]


class DeadLinkError(ValueError):
    """The link produces no clicks at all (zero total click probability)."""


@dataclass(frozen=True)
class LinkParams:
    """Fiber, detector and source constants.

    Attributes
    ----------
    alpha : float
        Polarization-independent fiber loss coefficient, dB/km.
    l_c : float
        Distance-independent loss of the channel, dB.
    eta_det : float
        Detection efficiency of the receiver, in (0, 1].
    p_dark : float
        Total dark-count probability per pulse of the detection unit, in [0, 1).
    delta_0 : float
        Baseline optical error fraction (alignment, visibility), in [0, 1/2).
    """

    alpha: float = 0.2
    l_c: float = 1.0
    eta_det: float = 0.18
    p_dark: float = 2e-4
    delta_0: float = 0.01

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.l_c < 0:
            raise ValueError(f"l_c must be >= 0, got {self.l_c}")
        if not 0 < self.eta_det <= 1:
            raise ValueError(f"eta_det must be in (0, 1], got {self.eta_det}")
        if not 0 <= self.p_dark < 1:
            raise ValueError(f"p_dark must be in [0, 1), got {self.p_dark}")
        if not 0 <= self.delta_0 < 0.5:
            raise ValueError(f"delta_0 must be in [0, 1/2), got {self.delta_0}")


#: Telecom-fiber defaults (1550 nm experiment parameters used throughout).
DEFAULT_LINK = LinkParams()


@dataclass(frozen=True)
class LinkObservables:
    """Observable link quantities at one (mean photon number, distance) point.

    Attributes
    ----------
    eta_c : float
        Channel transmission, in [0, 1].
    p_signal : float
        Probability of a signal-induced click.
    p_exp : float
        Total click probability (signal plus dark counts).
    delta : float
        Sifted-key quantum bit error rate, in [0, 1/2].
    big_delta : float
        Effective tagging fraction, clamped into [0, 1].
    big_delta_raw : float
        Tagging fraction before clamping (diagnostic; may exceed 1 at long
        distance or large mean photon number).
    """

    eta_c: float
    p_signal: float
    p_exp: float
    delta: float
    big_delta: float
    big_delta_raw: float

    @property
    def fully_tagged(self) -> bool:
        """True when the tagging bound saturates (no untagged signal left)."""
        return self.big_delta >= 1.0


def channel_transmission(params: LinkParams, l: float) -> float:
    """Channel transmission of ``l`` km of fiber.

    Parameters
    ----------
    params : LinkParams
        Link constants.
    l : float
        Fiber length in km, >= 0.

    Returns
    -------
    float
        ``10**(-(alpha*l + l_c)/10)``.
    """
    if l < 0:
        raise ValueError(f"distance must be >= 0, got {l}")
    return 10.0 ** (-(params.alpha * l + params.l_c) / 10.0)


def multiphoton_fraction(mu: float) -> float:
    """Probability that a Poissonian pulse of mean ``mu`` carries >= 2 photons.

    Evaluates ``1 - (1 + mu) * exp(-mu)`` without catastrophic cancellation:
    for small ``mu`` the direct expression loses all significant digits, so a
    series is used below ``mu = 0.05``.
    """
    if mu < 0:
        raise ValueError(f"mean photon number must be >= 0, got {mu}")
    if mu == 0.0:
        return 0.0
    if mu < 0.05:
        # sum_{k>=2} (-1)^k (k-1) mu^k / k!  with t_{k+1} = -t_k mu k / ((k+1)(k-1))
        term = mu * mu / 2.0
        total = term
        k = 2
        while abs(term) > 1e-17 * total:
            term *= -mu * k / ((k + 1.0) * (k - 1.0))
            k += 1
            total += term
        return total
    return -math.expm1(-mu) - mu * math.exp(-mu)


def link_observables(params: LinkParams, mu: float, l: float) -> LinkObservables:
    """All distance-dependent observables at mean photon number ``mu``.

    Parameters
    ----------
    params : LinkParams
        Link constants.
    mu : float
        Mean photon number of the signal pulse, > 0.
    l : float
        Fiber length in km, >= 0.

    Returns
    -------
    LinkObservables

    Raises
    ------
    DeadLinkError
        If the total click probability is zero (possible only with
        ``p_dark == 0`` and a fully opaque channel).
    """
    if mu <= 0:
        raise ValueError(f"mean photon number must be > 0, got {mu}")
    eta_c = channel_transmission(params, l)
    p_signal = -math.expm1(-mu * eta_c * params.eta_det)
    p_exp = p_signal + params.p_dark
    if p_exp <= 0.0:
        raise DeadLinkError(
            "total click probability is zero: no dark counts and no transmission"
        )
    delta = (params.delta_0 * p_signal + params.p_dark / 2.0) / p_exp
    big_delta_raw = multiphoton_fraction(mu) / p_exp
    big_delta = min(1.0, max(0.0, big_delta_raw))
    return LinkObservables(
        eta_c=eta_c,
        p_signal=p_signal,
        p_exp=p_exp,
        delta=delta,
        big_delta=big_delta,
        big_delta_raw=big_delta_raw,
    )
