"""Signaling-game state and Markovian no-regret dynamics.

The generator plays a distribution over candidates per signal branch, the
verifier a distribution over candidates per verdict branch. Each iteration
both players take one entropic mirror-ascent step on their perceived payoff
with an annealed stepsize 1 / (1/(eta*t) + lambda): early iterations are
cautious, late ones approach the 1/lambda ceiling. Play stops at a
sigma-decoding-equilibrium: the generator's correct branch and the normalized
verifier correct branch agree within sigma on every candidate and induce the
same preference order.
"""
from __future__ import annotations

import numpy as np

from .types import (
    CORRECT,
    EPS,
    INCORRECT,
    EquilibriumResult,
    GameConfig,
    GameInstance,
    PolicyState,
)

__all__ = [
    "init_policies",
    "belief_update",
    "markovian_step",
    "normalize_verifier",
    "preference_order",
    "sigma_de_check",
    "utility",
    "policy_entropy",
    "cumulative_regret",
    "run_game",
]


def _clamp_rows(rows: np.ndarray) -> np.ndarray:
    """Clamp entries to [EPS, 1], then renormalize each row."""
    rows = np.clip(rows, EPS, 1.0)
    return rows / rows.sum(axis=1, keepdims=True)


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    w = np.exp(z)
    return w / w.sum(axis=1, keepdims=True)


def init_policies(inst: GameInstance) -> PolicyState:
    """Initial policies from the raw log-scores.

    Generator branches are softmaxes of g_correct / g_incorrect. The
    verifier's verdict odds for each candidate come from the pairwise softmax
    of (v_correct, v_incorrect); each verdict branch is then normalized over
    candidates so both players live on the same simplex. Beliefs start equal
    to the opponent's initial action.
    """
    inst.validate()
    g = np.stack([inst.scores("g_correct"), inst.scores("g_incorrect")])
    if not np.all(np.isfinite(g)):
        raise ValueError(f"instance {inst.instance_id!r}: non-finite generator scores")
    a_g = _clamp_rows(_softmax_rows(g))

    # P(correct | candidate) via the two-way softmax, stable in both tails.
    margin = inst.scores("v_correct") - inst.scores("v_incorrect")
    q = np.empty_like(margin)
    pos = margin >= 0
    q[pos] = 1.0 / (1.0 + np.exp(-margin[pos]))
    q[~pos] = np.exp(margin[~pos]) / (1.0 + np.exp(margin[~pos]))
    a_v = _clamp_rows(np.stack([q, 1.0 - q]))

    return PolicyState(a_g=a_g, a_v=a_v, b_g=a_v.copy(), b_v=a_g.copy(), t=1)


def belief_update(state: PolicyState) -> PolicyState:
    """Memoryless belief rule: each player believes the opponent's last action."""
    return PolicyState(
        a_g=state.a_g, a_v=state.a_v,
        b_g=state.a_v.copy(), b_v=state.a_g.copy(), t=state.t,
    )


def _step_denominators(t: int, cfg: GameConfig) -> np.ndarray:
    """Annealed temperature per row of the stacked (4, n) policy block."""
    d_g = 1.0 / (cfg.eta_g * t) + cfg.lambda_g
    d_v = 1.0 / (cfg.eta_v * t) + cfg.lambda_v
    return np.array([d_g, d_g, d_v, d_v])[:, None]


def anchored_exp_step(
    anchor: np.ndarray, beliefs: np.ndarray, t: int, cfg: GameConfig
) -> np.ndarray:
    """One exponentiated update of the stacked policy block.

    Rows are (g-correct, g-incorrect, v-correct, v-incorrect). Each row moves
    from `anchor` along its belief payoff with the prior-weighted 1/2 factor,
    tempered by the annealed denominator; log-domain throughout. Every
    schedule funnels through this kernel so schedule identities hold bitwise.
    """
    logits = np.log(np.clip(anchor, EPS, 1.0)) + 0.5 * beliefs / _step_denominators(t, cfg)
    return _clamp_rows(_softmax_rows(logits))


def _stack(state_g: np.ndarray, state_v: np.ndarray) -> np.ndarray:
    return np.concatenate([state_g, state_v], axis=0)


def markovian_step(state: PolicyState, cfg: GameConfig) -> PolicyState:
    """One Markovian iteration: refresh beliefs, step both players, advance t."""
    state = belief_update(state)
    block = anchored_exp_step(
        anchor=_stack(state.a_g, state.a_v),
        beliefs=_stack(state.b_g, state.b_v),
        t=state.t,
        cfg=cfg,
    )
    return PolicyState(
        a_g=block[:2], a_v=block[2:],
        b_g=state.b_g, b_v=state.b_v, t=state.t + 1,
    )


def normalize_verifier(state: PolicyState) -> np.ndarray:
    """Correct-verdict branch normalized over candidates (a_NV)."""
    return normalize_correct_column(state.a_v[CORRECT])


def normalize_correct_column(column: np.ndarray) -> np.ndarray:
    column = np.asarray(column, dtype=float)
    return column / column.sum()


def preference_order(values: np.ndarray) -> np.ndarray:
    """Indices sorted by value descending; ties broken by ascending index."""
    values = np.asarray(values, dtype=float)
    return np.lexsort((np.arange(len(values)), -values))


def sigma_de_check(state: PolicyState, cfg: GameConfig) -> tuple[bool, float]:
    """Equilibrium test: per-candidate gap below sigma and orders agree."""
    a_nv = normalize_verifier(state)
    gap = float(np.abs(state.a_g[CORRECT] - a_nv).max())
    orders_equal = bool(
        np.array_equal(preference_order(state.a_g[CORRECT]), preference_order(state.a_v[CORRECT]))
    )
    return (gap < cfg.sigma) and orders_equal, gap


def _pair_utility(g_correct: np.ndarray, v_correct: np.ndarray) -> float:
    """Common payoff of a (generator, verifier) correct-branch pair."""
    a_nv = normalize_correct_column(v_correct)
    matched = np.array_equal(preference_order(g_correct), preference_order(v_correct))
    return float(matched) - float(np.abs(g_correct - a_nv).max())


def utility(state: PolicyState) -> float:
    """Order-match indicator minus the max per-candidate gap; shared payoff."""
    return _pair_utility(state.a_g[CORRECT], state.a_v[CORRECT])


def policy_entropy(state: PolicyState) -> float:
    """Shannon entropy (nats) of the generator's correct branch."""
    p = np.clip(state.a_g[CORRECT], EPS, 1.0)
    return float(-(p * np.log(p)).sum())


def _orders_matrix(rows: np.ndarray) -> np.ndarray:
    """Preference order of every row; (m, n) -> (m, n) permutation rows."""
    n = rows.shape[1]
    idx = np.broadcast_to(np.arange(n), rows.shape)
    return np.lexsort((idx, -rows), axis=1)


def _utility_grid(g_rows: np.ndarray, v_rows: np.ndarray) -> np.ndarray:
    """Payoff of every generator row against every verifier row; (A, B)."""
    a_nv = v_rows / v_rows.sum(axis=1, keepdims=True)
    gap = np.abs(g_rows[:, None, :] - a_nv[None, :, :]).max(axis=2)
    og = _orders_matrix(g_rows)
    ov = _orders_matrix(v_rows)
    matched = (og[:, None, :] == ov[None, :, :]).all(axis=2)
    return matched.astype(float) - gap


def _player_regret(played: np.ndarray, opponent: np.ndarray, is_generator: bool) -> float:
    """Average regret of one player against the opponent's recorded sequence.

    The hindsight strategy is chosen from the n one-hot strategies (simplex
    vertices) plus the player's own time-average, by best response to the
    opponent's time-averaged play; its payoff is then averaged along the
    opponent's actual sequence, as is the realized payoff.
    """
    n = played.shape[1]
    strategies = np.vstack([np.eye(n), played.mean(axis=0, keepdims=True)])
    opp_avg = opponent.mean(axis=0, keepdims=True)
    if is_generator:
        selection = _utility_grid(strategies, opp_avg)[:, 0]
        s_star = strategies[int(np.argmax(selection))][None, :]
        hindsight = _utility_grid(s_star, opponent)[0].mean()
        realized = np.array([
            _pair_utility(played[i], opponent[i]) for i in range(len(played))
        ]).mean()
    else:
        selection = _utility_grid(opp_avg, strategies)[0]
        s_star = strategies[int(np.argmax(selection))][None, :]
        hindsight = _utility_grid(opponent, s_star)[:, 0].mean()
        realized = np.array([
            _pair_utility(opponent[i], played[i]) for i in range(len(played))
        ]).mean()
    return float(hindsight - realized)


def cumulative_regret(history: list[PolicyState]) -> tuple[float, float]:
    """Cumulative average regret of both players over a recorded run."""
    if not history:
        raise ValueError("history must be non-empty")
    g_seq = np.stack([s.a_g[CORRECT] for s in history])
    v_seq = np.stack([s.a_v[CORRECT] for s in history])
    regret_g = _player_regret(g_seq, v_seq, is_generator=True)
    regret_v = _player_regret(v_seq, g_seq, is_generator=False)
    return regret_g, regret_v


def run_game(inst: GameInstance, cfg: GameConfig | None = None) -> EquilibriumResult:
    """Run one instance to a sigma-decoding-equilibrium or the iteration cap.

    Per iteration: belief refresh, one schedule step, equilibrium check; the
    gap and entropy traces carry one entry per iteration actually run.
    Deterministic given (instance, config).
    """
    from . import schedules  # deferred: schedules builds on this module

    cfg = cfg or GameConfig()
    cfg.validate()
    state = init_policies(inst)
    stepper = schedules.make_stepper(state, cfg)

    history = [state.copy()]
    gap_trace: list[float] = []
    entropy_trace: list[float] = []
    converged = False
    for _ in range(cfg.max_iters):
        state = belief_update(state)
        state = stepper(state)
        history.append(state.copy())
        done, gap = sigma_de_check(state, cfg)
        gap_trace.append(gap)
        entropy_trace.append(policy_entropy(state))
        if done:
            converged = True
            break

    regret_g, regret_v = cumulative_regret(history)
    final_scores = _final_scores(state, cfg)
    ranking = preference_order(final_scores)
    n = inst.n
    return EquilibriumResult(
        instance_id=inst.instance_id,
        final_state=state,
        order_g=preference_order(state.a_g[CORRECT]),
        order_v=preference_order(state.a_v[CORRECT]),
        converged=converged,
        iterations_used=len(gap_trace),
        gap_trace=np.array(gap_trace),
        entropy_trace=np.array(entropy_trace),
        regret_g=regret_g,
        regret_v=regret_v,
        final_scores=final_scores,
        correct_label_cutoff=tuple(sorted(int(i) for i in ranking[: n // 2])),
        odd_n_warning=bool(n % 2 == 1),
    )


def _final_scores(state: PolicyState, cfg: GameConfig) -> np.ndarray:
    if cfg.final_score_rule == "verifier_only":
        return state.a_v[CORRECT].copy()
    return state.a_g[CORRECT] * state.a_v[CORRECT]
