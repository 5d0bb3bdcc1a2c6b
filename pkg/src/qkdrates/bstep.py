"""Two-way error-rejection recursion (B-steps).

One round pairs up the surviving qubit pairs, applies a bilateral XOR, and
keeps each control pair only when the target-pair measurements agree. On the
tagged/untagged mixture this induces a closed-form map: the Bell
probabilities of the untagged component are renormalized, tagging is
amplified (any round involving a tagged partner taints the survivor), and a
per-round survival probability accounts for the discarded candidates.
"""
from __future__ import annotations

from dataclasses import dataclass

from .states import PairState

__all__ = [
    "DEFAULT_MAX_ROUNDS",
    "BStepOutcome",
    "BStepTrajectory",
    "bstep",
    "iterate_bsteps",
]

#: Cap on iterated rounds; key-rate suppression by 1/2**n makes more pointless.
DEFAULT_MAX_ROUNDS = 16


@dataclass(frozen=True)
class BStepOutcome:
    """Post-round state and the probability the control pair was kept."""

    state: PairState
    p_survive: float


@dataclass(frozen=True)
class BStepTrajectory:
    """States and survival probabilities of an iterated error-rejection run.

    Attributes
    ----------
    states : tuple[PairState, ...]
        Round-by-round states; ``states[0]`` is the input, ``states[n]`` the
        final state, so the length is ``n + 1``.
    survivals : tuple[float, ...]
        Per-round survival probabilities (length ``n``).
    cumulative_survival : float
        Product of all per-round survivals (1.0 for ``n = 0``).
    """

    states: tuple[PairState, ...]
    survivals: tuple[float, ...]
    cumulative_survival: float

    @property
    def n_rounds(self) -> int:
        return len(self.survivals)

    @property
    def final_state(self) -> PairState:
        return self.states[-1]


def bstep(state: PairState) -> BStepOutcome:
    """Apply one error-rejection round to ``state``.

    With ``g = q_i + q_z``, ``e = q_x + q_y`` the untagged component survives
    (against an untagged partner) with probability ``g**2 + e**2`` and its
    probabilities are squared-and-renormalized; a tagged partner always taints
    the survivor. Pure function: identical inputs give identical outputs.
    """
    d = state.big_delta
    g = state.q_i + state.q_z
    e = state.q_x + state.q_y
    dz = state.q_i - state.q_z
    dy = state.q_x - state.q_y
    q_us = g * g + e * e
    p_survive = (1.0 - d) ** 2 * q_us + 2.0 * d * (1.0 - d) * g + d * d
    if p_survive <= 0.0:  # requires g = e = 0, impossible for a valid state
        raise ArithmeticError("error-rejection round has zero survival probability")
    new = PairState(
        big_delta=(d * d + 2.0 * d * (1.0 - d) * g) / p_survive,
        q_i=(g * g + dz * dz) / (2.0 * q_us),
        q_x=(e * e + dy * dy) / (2.0 * q_us),
        q_y=(e * e - dy * dy) / (2.0 * q_us),
        q_z=(g * g - dz * dz) / (2.0 * q_us),
    )
    return BStepOutcome(state=new, p_survive=p_survive)


def iterate_bsteps(
    state: PairState, n: int, max_rounds: int = DEFAULT_MAX_ROUNDS
) -> BStepTrajectory:
    """Apply ``n`` error-rejection rounds, recording the full trajectory.

    ``n = 0`` returns the input state alone with cumulative survival 1.
    """
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")
    if n > max_rounds:
        raise ValueError(f"round count {n} exceeds the configured cap {max_rounds}")
    states = [state]
    survivals: list[float] = []
    cumulative = 1.0
    for _ in range(n):
        outcome = bstep(states[-1])
        states.append(outcome.state)
        survivals.append(outcome.p_survive)
        cumulative *= outcome.p_survive
    return BStepTrajectory(
        states=tuple(states),
        survivals=tuple(survivals),
        cumulative_survival=cumulative,
    )
