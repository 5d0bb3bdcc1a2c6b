"""Asymptotic secret-key rates and feasibility classification.

The one-way rate charges the sifted key for error correction at the observed
error rate and for privacy amplification at the untagged phase-error rate,
after discarding the tagged fraction outright. The two-way variant applies
the same expression to the final state of an error-rejection trajectory,
scaled by the surviving fraction of pairs.
"""
from __future__ import annotations

import math
from enum import Enum

from .bstep import BStepTrajectory
from .states import PairState, Protocol, observed_qber

__all__ = [
    "POSITIVE_RATE_FLOOR",
    "Feasibility",
    "binary_entropy",
    "css_key_fraction",
    "rate_css",
    "rate_bcss",
    "entanglement_boundary",
    "purification_boundary",
    "classify_feasibility",
]

#: Rates above this floor count as positive in threshold searches.
POSITIVE_RATE_FLOOR = 1e-15

_SQRT5 = math.sqrt(5.0)


class Feasibility(Enum):
    """Classification of a (delta, big_delta) point.

    ``INFEASIBLE``: no secret key by any means (entanglement cannot be
    certified). ``GREY_REGION``: entanglement is provable but two-way
    error rejection followed by one-way post-processing cannot distill a
    key. ``FEASIBLE``: both necessary conditions hold.
    """

    FEASIBLE = "feasible"
    GREY_REGION = "grey-region"
    INFEASIBLE = "infeasible"


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits, with H(0) = H(1) = 0 by continuity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def css_key_fraction(state: PairState) -> float:
    """Signed secret fraction of the sifted key (negative means no key).

    ``1 - Delta - H(delta) - (1 - Delta) H(delta_pu)`` with ``delta`` the
    observed error rate and ``delta_pu`` the untagged phase-error rate.
    """
    delta = observed_qber(state)
    return (
        1.0
        - state.big_delta
        - binary_entropy(delta)
        - (1.0 - state.big_delta) * binary_entropy(state.phase_error_untagged)
    )


def rate_css(p_exp: float, beta: int, state: PairState) -> float:
    """One-way secret-key rate per pulse, clamped below at zero.

    Parameters
    ----------
    p_exp : float
        Total click probability, in (0, 1].
    beta : int
        Basis count (2 or 3); sifting keeps a fraction 1/beta.
    state : PairState
        Pair state at the start of one-way post-processing.
    """
    if not 0.0 < p_exp <= 1.0:
        raise ValueError(f"p_exp must be in (0, 1], got {p_exp}")
    if beta not in (2, 3):
        raise ValueError(f"beta must be 2 or 3, got {beta}")
    return max(0.0, p_exp / beta * css_key_fraction(state))


def rate_bcss(p_exp: float, beta: int, trajectory: BStepTrajectory) -> float:
    """Secret-key rate after the trajectory's error-rejection rounds.

    Each round halves the pair count (targets are consumed) and keeps
    survivors with the recorded probabilities, so the one-way rate of the
    final state is scaled by ``cumulative_survival / 2**n``. With zero
    rounds this reduces to :func:`rate_css` bit for bit.
    """
    n = trajectory.n_rounds
    scaled_p_exp = p_exp * trajectory.cumulative_survival / 2**n
    return rate_css(scaled_p_exp, beta, trajectory.final_state)


def entanglement_boundary(protocol: Protocol, delta: float) -> float:
    """Largest tagging fraction at which entanglement remains provable.

    Boundary of ``delta / (1 - Delta) < (beta - 1) / (2 beta)`` solved for
    ``Delta`` and clamped at zero: ``1 - 4 delta`` (four-state) or
    ``1 - 3 delta`` (six-state).
    """
    beta = protocol.beta
    return max(0.0, 1.0 - 2.0 * beta * delta / (beta - 1.0))


def purification_boundary(protocol: Protocol, delta: float) -> float:
    """Largest tagging fraction reachable by two-way error rejection.

    ``1 - 5 delta`` (four-state) or ``(2 - 5 delta - sqrt(5) delta) / 2``
    (six-state), clamped at zero.
    """
    if protocol is Protocol.FOUR_STATE:
        return max(0.0, 1.0 - 5.0 * delta)
    return max(0.0, (2.0 - 5.0 * delta - _SQRT5 * delta) / 2.0)


def classify_feasibility(
    protocol: Protocol, delta: float, big_delta: float
) -> Feasibility:
    """Classify a (delta, big_delta) point against both necessary conditions.

    A fully tagged ensemble (``big_delta == 1``) is infeasible by convention,
    including the degenerate ``delta == 0`` case.
    """
    if not 0.0 <= delta <= 0.5:
        raise ValueError(f"delta must be in [0, 1/2], got {delta}")
    if not 0.0 <= big_delta <= 1.0:
        raise ValueError(f"big_delta must be in [0, 1], got {big_delta}")
    if big_delta == 1.0:
        return Feasibility.INFEASIBLE
    beta = protocol.beta
    if delta / (1.0 - big_delta) >= (beta - 1.0) / (2.0 * beta):
        return Feasibility.INFEASIBLE
    if protocol is Protocol.FOUR_STATE:
        reachable = big_delta < 1.0 - 5.0 * delta
    else:
        reachable = big_delta < (2.0 - 5.0 * delta - _SQRT5 * delta) / 2.0
    return Feasibility.FEASIBLE if reachable else Feasibility.GREY_REGION
