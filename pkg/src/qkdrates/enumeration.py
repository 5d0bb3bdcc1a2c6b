"""Exhaustive enumeration of one error-rejection round.

Independent cross-check of the analytic recursion in :mod:`qkdrates.bstep`:
instead of the closed-form map, every joint configuration of a control/target
pair of pairs (tag flag times Bell label on each side) is enumerated, the
bilateral-XOR label map is applied atom by atom, and the surviving weights
are aggregated. The atom space is tiny, so the check is exact up to floating
point rounding.

Shipped with the library so users can verify the recursion themselves.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bstep import BStepOutcome, bstep
from .states import PairState

__all__ = ["PairAtom", "pair_atoms", "enumerate_bstep", "max_deviation"]

#: Surviving-control Bell distribution when the survivor is tagged: an even
#: mixture of the two phase labels, no bit flips.
_TAGGED_DISTRIBUTION = {(0, 0): 0.5, (0, 1): 0.5}


@dataclass(frozen=True)
class PairAtom:
    """One weighted configuration of a single qubit pair.

    ``bell`` is the label ``(i, j)`` with ``i`` the bit-flip index and ``j``
    the phase index: (0,0) identity, (0,1) phase flip, (1,0) bit flip,
    (1,1) both.
    """

    tagged: bool
    bell: tuple[int, int]
    weight: float


def pair_atoms(state: PairState) -> list[PairAtom]:
    """Decompose a pair state into weighted atoms.

    The tagged component is an even mixture of the two phase labels at weight
    ``big_delta / 2`` each; the untagged component carries ``(1 - big_delta)``
    times its Bell probabilities.
    """
    d = state.big_delta
    u = 1.0 - d
    return [
        PairAtom(tagged=True, bell=(0, 0), weight=d / 2.0),
        PairAtom(tagged=True, bell=(0, 1), weight=d / 2.0),
        PairAtom(tagged=False, bell=(0, 0), weight=u * state.q_i),
        PairAtom(tagged=False, bell=(0, 1), weight=u * state.q_z),
        PairAtom(tagged=False, bell=(1, 0), weight=u * state.q_x),
        PairAtom(tagged=False, bell=(1, 1), weight=u * state.q_y),
    ]


def enumerate_bstep(state: PairState) -> BStepOutcome:
    """One error-rejection round by exhaustive enumeration.

    For control atom ``(i, j)`` and target atom ``(x, y)`` the bilateral XOR
    maps the labels to ``(i, j xor y)`` and ``(i xor x, y)``; the control pair
    is kept if and only if the target measurements agree (``i == x``), and the
    survivor is tagged whenever either input atom was tagged.
    """
    atoms = pair_atoms(state)
    kept = 0.0
    kept_tagged = 0.0
    labels = {(0, 0): 0.0, (0, 1): 0.0, (1, 0): 0.0, (1, 1): 0.0}
    for control in atoms:
        i, j = control.bell
        for target in atoms:
            x, y = target.bell
            if i != x:
                continue
            weight = control.weight * target.weight
            kept += weight
            if control.tagged or target.tagged:
                kept_tagged += weight
            else:
                labels[(i, j ^ y)] += weight
    big_delta = kept_tagged / kept
    kept_untagged = kept - kept_tagged
    if kept_untagged > 0.0:
        dist = {bell: w / kept_untagged for bell, w in labels.items()}
    else:
        dist = dict(_TAGGED_DISTRIBUTION) | {(1, 0): 0.0, (1, 1): 0.0}
    new = PairState(
        big_delta=big_delta,
        q_i=dist[(0, 0)],
        q_z=dist[(0, 1)],
        q_x=dist[(1, 0)],
        q_y=dist[(1, 1)],
    )
    return BStepOutcome(state=new, p_survive=kept)


def max_deviation(state: PairState) -> float:
    """Largest absolute disagreement between the analytic map and enumeration.

    Compares survival probability, tagging fraction, and all four Bell
    probabilities of the post-round state.
    """
    analytic = bstep(state)
    enumerated = enumerate_bstep(state)
    a, e = analytic.state, enumerated.state
    return max(
        abs(analytic.p_survive - enumerated.p_survive),
        abs(a.big_delta - e.big_delta),
        abs(a.q_i - e.q_i),
        abs(a.q_x - e.q_x),
        abs(a.q_y - e.q_y),
        abs(a.q_z - e.q_z),
    )
