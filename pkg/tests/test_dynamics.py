"""Core dynamics: initialization, stepping, stopping, utility, entropy."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decoding_game.core import (
    init_policies,
    markovian_step,
    policy_entropy,
    preference_order,
    run_game,
    sigma_de_check,
    utility,
)
from decoding_game.io import generate_synthetic
from decoding_game.types import CORRECT, EPS, INCORRECT, GameConfig, SyntheticSpec

from conftest import agreeing_instance, make_instance, make_state


# ---------------------------------------------------------------- init

def test_init_softmax_of_raw_logits():
    # softmax(0, -1, -2) hand-computed: exp / sum = (0.66524, 0.24473, 0.09003)
    inst = make_instance([0.0, -1.0, -2.0])
    state = init_policies(inst)
    np.testing.assert_allclose(state.a_g[CORRECT], [0.66524, 0.24473, 0.09003], atol=1e-4)


def test_init_recovers_log_distribution():
    inst = make_instance([np.log(0.9), np.log(0.1)])
    state = init_policies(inst)
    np.testing.assert_allclose(state.a_g[CORRECT], [0.9, 0.1], atol=1e-12)


def test_init_all_equal_scores_is_uniform():
    inst = make_instance([1.0, 1.0], v_correct=[0.0, 0.0])
    state = init_policies(inst)
    np.testing.assert_allclose(state.a_g[CORRECT], [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(state.a_v[CORRECT], [0.5, 0.5], atol=1e-12)


def test_init_beliefs_mirror_opponent():
    inst = make_instance([0.3, -0.2, 1.1], v_correct=[0.5, -0.5, 0.0])
    state = init_policies(inst)
    np.testing.assert_array_equal(state.b_g, state.a_v)
    np.testing.assert_array_equal(state.b_v, state.a_g)
    assert state.t == 1


def test_init_shift_invariance_bitwise():
    # dyadic scores and a dyadic shift make the additions exact, so the
    # softmax and the whole trajectory are bitwise unchanged
    base = [0.5, -0.25, -1.5]
    inst_a = make_instance(base, v_correct=[0.25, -0.75, 0.5])
    inst_b = make_instance([x + 2.0 for x in base], v_correct=[0.25, -0.75, 0.5])
    cfg = GameConfig(max_iters=50)
    res_a, res_b = run_game(inst_a, cfg), run_game(inst_b, cfg)
    np.testing.assert_array_equal(res_a.final_state.a_g, res_b.final_state.a_g)
    np.testing.assert_array_equal(res_a.gap_trace, res_b.gap_trace)


# ---------------------------------------------------------------- orders

def test_preference_order_sorts_descending():
    np.testing.assert_array_equal(preference_order(np.array([0.1, 0.7, 0.2])), [1, 2, 0])


def test_preference_order_tie_breaks_ascending():
    np.testing.assert_array_equal(preference_order(np.array([0.5, 0.5])), [0, 1])


def test_preference_order_all_ties():
    np.testing.assert_array_equal(preference_order(np.array([0.3] * 4)), [0, 1, 2, 3])


# ---------------------------------------------------------------- stopping

def test_sigma_de_identical_rows_converges_at_zero_gap():
    state = make_state([[0.7, 0.3], [0.4, 0.6]])
    converged, gap = sigma_de_check(state, GameConfig())
    assert converged and gap == 0.0


def test_sigma_de_large_gap_not_converged():
    state = make_state([[0.9, 0.1], [0.5, 0.5]], [[0.4, 0.6], [0.5, 0.5]])
    converged, gap = sigma_de_check(state, GameConfig())
    assert not converged
    assert gap == pytest.approx(0.5)


def test_sigma_de_small_gap_equal_orders_converges():
    state = make_state([[0.7005, 0.2995], [0.5, 0.5]], [[0.7, 0.3], [0.5, 0.5]])
    converged, gap = sigma_de_check(state, GameConfig(sigma=1e-3))
    assert converged
    assert gap == pytest.approx(5e-4)


def test_sigma_de_requires_order_agreement():
    # orders differ, gap under sigma: still not converged
    state = make_state([[0.5 + 1e-5, 0.5 - 1e-5], [0.5, 0.5]],
                       [[0.5 - 1e-5, 0.5 + 1e-5], [0.5, 0.5]])
    converged, _ = sigma_de_check(state, GameConfig(sigma=1e-3))
    assert not converged


# ---------------------------------------------------------------- utility

def test_utility_equal_orders_zero_gap():
    state = make_state([[0.7, 0.3], [0.5, 0.5]])
    assert utility(state) == pytest.approx(1.0)


def test_utility_disagreeing_orders():
    state = make_state([[0.7, 0.3], [0.5, 0.5]], [[0.3, 0.7], [0.5, 0.5]])
    assert utility(state) == pytest.approx(-0.4)


def test_utility_equal_orders_with_gap():
    state = make_state([[0.6, 0.4], [0.5, 0.5]], [[0.8, 0.2], [0.5, 0.5]])
    assert utility(state) == pytest.approx(0.8)


# ---------------------------------------------------------------- entropy

def test_entropy_uniform_is_log_n():
    state = make_state([[0.25] * 4, [0.25] * 4])
    assert policy_entropy(state) == pytest.approx(np.log(4.0), abs=1e-4)


def test_entropy_hand_computed_value():
    # -(0.5 ln 0.5 + 0.25 ln 0.25 + 0.25 ln 0.25) = 1.5 ln 2 = 1.0397
    state = make_state([[0.5, 0.25, 0.25], [1 / 3] * 3])
    assert policy_entropy(state) == pytest.approx(1.0397, abs=1e-4)


def test_entropy_near_one_hot_is_near_zero():
    top = 1.0 - 3 * EPS
    state = make_state([[top, EPS, EPS, EPS], [0.25] * 4])
    assert 0.0 <= policy_entropy(state) < 1e-9


# ---------------------------------------------------------------- stepping

@given(st.integers(min_value=0, max_value=2**31 - 1), st.integers(min_value=2, max_value=8))
@settings(max_examples=40, deadline=None)
def test_step_preserves_normalization_and_bounds(seed, n):
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=n, seed=seed))[0]
    cfg = GameConfig()
    state = init_policies(inst)
    for _ in range(5):
        state = markovian_step(state, cfg)
        for arr in (state.a_g, state.a_v):
            np.testing.assert_allclose(arr.sum(axis=1), 1.0, atol=1e-9)
            assert arr.min() >= EPS * (1 - 1e-9)
            assert arr.max() <= 1.0


def test_step_increments_time():
    inst = make_instance([0.2, -0.3], v_correct=[0.1, -0.1])
    state = init_policies(inst)
    assert markovian_step(state, GameConfig()).t == 2


# ---------------------------------------------------------------- run loop

def test_run_game_deterministic_bitwise():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=8, seed=13))[0]
    cfg = GameConfig()
    res_a, res_b = run_game(inst, cfg), run_game(inst, cfg)
    np.testing.assert_array_equal(res_a.gap_trace, res_b.gap_trace)
    np.testing.assert_array_equal(res_a.entropy_trace, res_b.entropy_trace)
    np.testing.assert_array_equal(res_a.final_state.a_g, res_b.final_state.a_g)
    assert res_a.regret_g == res_b.regret_g
    assert res_a.regret_v == res_b.regret_v


def test_run_game_converges_on_seeded_instance(default_cfg):
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=10, seed=0))[0]
    res = run_game(inst, default_cfg)
    assert res.converged
    assert res.iterations_used <= 500
    assert res.gap_trace[-1] < default_cfg.sigma
    np.testing.assert_array_equal(res.order_g, res.order_v)


def test_run_game_trace_lengths_match_iterations():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=6, seed=4))[0]
    res = run_game(inst, GameConfig())
    assert len(res.gap_trace) == res.iterations_used == len(res.entropy_trace)


def test_run_game_non_convergence_is_partial_not_fatal():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=10, seed=2))[0]
    res = run_game(inst, GameConfig(max_iters=3))
    assert not res.converged
    assert res.iterations_used == 3
    assert len(res.gap_trace) == 3


def test_run_game_converges_at_one_on_agreeing_instance():
    res = run_game(agreeing_instance(), GameConfig())
    assert res.converged
    assert res.iterations_used == 1
    assert len(res.gap_trace) == 1


def test_run_game_gap_non_increasing_after_burn_in(default_cfg):
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=10, seed=9))[0]
    res = run_game(inst, default_cfg)
    diffs = np.diff(res.gap_trace[10:])
    assert (diffs <= 1e-12).mean() >= 0.99


def test_run_game_entropy_bounded(default_cfg):
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=7, seed=3))[0]
    res = run_game(inst, default_cfg)
    assert np.all(res.entropy_trace >= -1e-12)
    assert np.all(res.entropy_trace <= np.log(7) + 1e-12)


def test_run_game_final_scores_rules_differ_only_by_generator_factor():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=5, seed=6))[0]
    prod = run_game(inst, GameConfig(final_score_rule="product"))
    ver = run_game(inst, GameConfig(final_score_rule="verifier_only"))
    np.testing.assert_allclose(
        prod.final_scores,
        prod.final_state.a_g[CORRECT] * ver.final_scores,
        atol=1e-15,
    )


def test_run_game_cutoff_is_top_half_of_ranking():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=6, seed=8))[0]
    res = run_game(inst, GameConfig())
    assert res.correct_label_cutoff == tuple(sorted(res.final_ranking[:3].tolist()))
    assert not res.odd_n_warning


def test_run_game_flags_odd_n():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=5, seed=8))[0]
    res = run_game(inst, GameConfig())
    assert res.odd_n_warning
    assert len(res.correct_label_cutoff) == 2


def test_run_game_rejects_invalid_config():
    inst = make_instance([0.0, 1.0])
    with pytest.raises(ValueError):
        run_game(inst, GameConfig(eta_g=-1.0))


def test_incorrect_branch_also_updates():
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=6, seed=14))[0]
    state = init_policies(inst)
    stepped = markovian_step(state.copy(), GameConfig())
    assert np.abs(stepped.a_g[INCORRECT] - state.a_g[INCORRECT]).max() > 0
