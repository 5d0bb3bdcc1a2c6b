import pytest

from qkdrates.bstep import bstep, iterate_bsteps
from qkdrates.states import PairState
from tests.conftest import random_pair_state

# Hand evaluation of the map on (Delta=0, q=(0.7, 0.1, 0.1, 0.1)); exact
# fractions 25/34, 1/34, 1/34, 7/34 with survival 17/25, and the second
# round 337/514, 1/514, 1/514, 175/514 with survival 257/289.
ROUND1 = (25 / 34, 1 / 34, 1 / 34, 7 / 34)
ROUND1_SURVIVAL = 0.68
ROUND2 = (337 / 514, 1 / 514, 1 / 514, 175 / 514)
ROUND2_SURVIVAL = 257 / 289

TAGGED_FIXED_POINT = PairState(big_delta=1.0, q_i=0.5, q_x=0.0, q_y=0.0, q_z=0.5)


def test_single_round_untagged_example():
    state = PairState(big_delta=0.0, q_i=0.7, q_x=0.1, q_y=0.1, q_z=0.1)
    outcome = bstep(state)
    assert outcome.p_survive == pytest.approx(ROUND1_SURVIVAL, abs=1e-12)
    assert outcome.state.big_delta == 0.0
    got = (outcome.state.q_i, outcome.state.q_x, outcome.state.q_y, outcome.state.q_z)
    for value, expected in zip(got, ROUND1):
        assert value == pytest.approx(expected, abs=1e-12)


def test_second_round_matches_exact_fractions():
    state = PairState(big_delta=0.0, q_i=0.7, q_x=0.1, q_y=0.1, q_z=0.1)
    trajectory = iterate_bsteps(state, 2)
    final = trajectory.final_state
    got = (final.q_i, final.q_x, final.q_y, final.q_z)
    for value, expected in zip(got, ROUND2):
        assert value == pytest.approx(expected, abs=1e-12)
    assert trajectory.survivals[1] == pytest.approx(ROUND2_SURVIVAL, abs=1e-12)
    assert trajectory.cumulative_survival == pytest.approx(257 / 425, abs=1e-12)


def test_tagged_fixed_point():
    outcome = bstep(TAGGED_FIXED_POINT)
    assert outcome.p_survive == 1.0
    assert outcome.state.big_delta == 1.0
    assert outcome.state.q_i == 0.5
    assert outcome.state.q_z == 0.5


def test_tagged_fixed_point_iteration():
    trajectory = iterate_bsteps(TAGGED_FIXED_POINT, 5)
    assert trajectory.cumulative_survival == 1.0
    for state in trajectory.states:
        assert state == TAGGED_FIXED_POINT


def test_tagging_amplification_on_clean_state():
    state = PairState(big_delta=0.5, q_i=1.0, q_x=0.0, q_y=0.0, q_z=0.0)
    outcome = bstep(state)
    assert outcome.p_survive == pytest.approx(1.0, abs=1e-15)
    assert outcome.state.big_delta == pytest.approx(0.75, abs=1e-15)


def test_zero_rounds_is_identity():
    state = PairState(big_delta=0.2, q_i=0.8, q_x=0.1, q_y=0.05, q_z=0.05)
    trajectory = iterate_bsteps(state, 0)
    assert trajectory.states == (state,)
    assert trajectory.survivals == ()
    assert trajectory.cumulative_survival == 1.0


def test_round_count_validation():
    state = TAGGED_FIXED_POINT
    with pytest.raises(ValueError):
        iterate_bsteps(state, -1)
    with pytest.raises(ValueError):
        iterate_bsteps(state, 17)
    assert iterate_bsteps(state, 17, max_rounds=20).n_rounds == 17


def test_determinism():
    state = PairState(big_delta=0.3, q_i=0.6, q_x=0.2, q_y=0.1, q_z=0.1)
    first = bstep(state)
    second = bstep(state)
    assert first.p_survive == second.p_survive
    assert first.state == second.state


def test_probability_conservation_randomized(rng):
    for _ in range(1000):
        state = random_pair_state(rng)
        outcome = bstep(state)
        total = (
            outcome.state.q_i
            + outcome.state.q_x
            + outcome.state.q_y
            + outcome.state.q_z
        )
        assert abs(total - 1.0) < 1e-12
        assert 0.0 < outcome.p_survive <= 1.0 + 1e-15


def test_bit_error_contraction_randomized(rng):
    for _ in range(1000):
        state = random_pair_state(rng)
        e = state.bit_error_untagged
        if e > 0.5:
            continue
        e_next = bstep(state).state.bit_error_untagged
        assert e_next <= e + 1e-15


def test_tagging_amplification_randomized(rng):
    for _ in range(1000):
        state = random_pair_state(rng)
        if state.q_i + state.q_z < 0.5:
            continue
        assert bstep(state).state.big_delta >= state.big_delta - 1e-15


def test_cumulative_survival_is_product(rng):
    for _ in range(100):
        state = random_pair_state(rng)
        trajectory = iterate_bsteps(state, 6)
        product = 1.0
        for s in trajectory.survivals:
            product *= s
        assert trajectory.cumulative_survival == pytest.approx(product, abs=1e-12)
        assert len(trajectory.states) == 7
        assert len(trajectory.survivals) == 6
