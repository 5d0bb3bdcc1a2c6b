"""Tagged/untagged pair-ensemble model.

The joint state of one distributed qubit pair is a mixture of a tagged
component (the eavesdropper holds a perfect copy, no bit errors) with weight
``big_delta``, and an untagged Bell-diagonal component with probabilities
``(q_i, q_x, q_y, q_z)`` for the identity and the three Pauli errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "StateModelError",
    "Protocol",
    "PairState",
    "initial_pair_state",
    "observed_qber",
]

#: Absolute tolerance for probability bookkeeping throughout the package.
PROB_TOL = 1e-12


class StateModelError(ValueError):
    """Observed error rates cannot be produced by any valid pair state."""


class Protocol(Enum):
    """Prepare-and-measure protocol family, identified by its basis count."""

    FOUR_STATE = "four"
    SIX_STATE = "six"

    @property
    def beta(self) -> int:
        """Number of mutually unbiased bases (sifting keeps 1/beta)."""
        return 2 if self is Protocol.FOUR_STATE else 3


@dataclass(frozen=True)
class PairState:
    """Tagging fraction plus Bell-diagonal probabilities of the untagged part.

    Attributes
    ----------
    big_delta : float
        Tagging fraction, in [0, 1]. ``big_delta == 1`` is admitted as a
        degenerate state (the untagged component carries zero weight).
    q_i, q_x, q_y, q_z : float
        Identity / bit-flip / combined-flip / phase-flip probabilities of the
        untagged component. Must sum to 1 within ``PROB_TOL``.
    """

    big_delta: float
    q_i: float
    q_x: float
    q_y: float
    q_z: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.big_delta <= 1.0:
            raise ValueError(f"big_delta must be in [0, 1], got {self.big_delta}")
        for name in ("q_i", "q_x", "q_y", "q_z"):
            q = getattr(self, name)
            if q < -PROB_TOL or q > 1.0 + PROB_TOL:
                raise ValueError(f"{name} must be in [0, 1], got {q}")
            if q < 0.0:
                object.__setattr__(self, name, 0.0)
        total = self.q_i + self.q_x + self.q_y + self.q_z
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"Bell probabilities must sum to 1, got {total}")

    @property
    def bit_error_untagged(self) -> float:
        """Bit-error probability of the untagged component, q_x + q_y."""
        return self.q_x + self.q_y

    @property
    def phase_error_untagged(self) -> float:
        """Phase-error probability of the untagged component, q_z + q_y."""
        return self.q_z + self.q_y


def observed_qber(state: PairState) -> float:
    """Bit error rate Alice and Bob estimate on the full (mixed) ensemble.

    Tagged pairs never produce bit errors, so the observed rate is the
    untagged bit-error probability diluted by the untagged weight:
    ``(1 - big_delta) * (q_x + q_y)``.
    """
    return (1.0 - state.big_delta) * state.bit_error_untagged


def initial_pair_state(protocol: Protocol, delta: float, big_delta: float) -> PairState:
    """Construct the protocol's initial pair state from link observables.

    The basis symmetry of each protocol pins the Bell probabilities of the
    untagged component given the observed error rate ``delta``:

    * six-state: ``q_x = q_y = q_z = delta / (2 (1 - big_delta))``
    * four-state: ``q_y = 0``, ``q_x = q_z = delta / (1 - big_delta)``
      (the remaining freedom in ``q_y`` is fixed to the worst case, which
      maximizes the resulting phase-error probability)

    Parameters
    ----------
    protocol : Protocol
    delta : float
        Observed sifted-key error rate, in [0, 1/2].
    big_delta : float
        Tagging fraction, in [0, 1]. ``big_delta == 1`` yields the degenerate
        fully tagged state (all rate pipelines evaluate it to zero).

    Raises
    ------
    StateModelError
        If the rescaled error rate ``delta / (1 - big_delta)`` is too large
        for any valid state (negative identity probability).
    """
    if not 0.0 <= delta <= 0.5:
        raise ValueError(f"delta must be in [0, 1/2], got {delta}")
    if not 0.0 <= big_delta <= 1.0:
        raise ValueError(f"big_delta must be in [0, 1], got {big_delta}")
    if big_delta == 1.0:
        return PairState(big_delta=1.0, q_i=1.0, q_x=0.0, q_y=0.0, q_z=0.0)
    x = delta / (1.0 - big_delta)
    if protocol is Protocol.SIX_STATE:
        q = x / 2.0
        q_i = 1.0 - 3.0 * q
        if q_i < -PROB_TOL:
            raise StateModelError(
                f"error rate inconsistent with state model: 3*delta/(2(1-Delta)) = {3 * q} > 1"
            )
        return PairState(big_delta=big_delta, q_i=max(q_i, 0.0), q_x=q, q_y=q, q_z=q)
    q_i = 1.0 - 2.0 * x
    if q_i < -PROB_TOL:
        raise StateModelError(
            f"error rate inconsistent with state model: 2*delta/(1-Delta) = {2 * x} > 1"
        )
    return PairState(big_delta=big_delta, q_i=max(q_i, 0.0), q_x=x, q_y=0.0, q_z=x)
