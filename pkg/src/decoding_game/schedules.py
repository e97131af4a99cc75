"""Belief-history schedules and the prover-verifier variant.

The Markovian schedule believes only the opponent's last action. The window
schedule averages the last w opponent actions and anchors each step to the
initial policy instead of the previous one; w = full recovers the sluggish
consensus dynamics that average all history. The prover-verifier variant
keeps the verifier as-is and lets an honest or sneaky prover drive the
generator, the sneaky one steering its incorrect branch toward the verifier's
rank boundary where verdicts are least certain.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .core import anchored_exp_step, belief_update, markovian_step, preference_order
from .types import (
    CORRECT,
    GameConfig,
    INCORRECT,
    PolicyState,
    PvgConfig,
    WindowState,
)

__all__ = [
    "make_window_state",
    "window_step",
    "gaussian_rank_target",
    "pvg_step",
    "make_stepper",
]


def make_window_state(initial: PolicyState, cfg: GameConfig) -> WindowState:
    w: Optional[int] = None if cfg.schedule == "full_history" else cfg.window_w
    return WindowState(
        w=w,
        anchor_g=initial.a_g.copy(),
        anchor_v=initial.a_v.copy(),
        compat=cfg.window_compat,
        _sum_g=np.zeros_like(initial.a_g),
        _sum_v=np.zeros_like(initial.a_v),
    )


def _push_history(win: WindowState, state: PolicyState) -> tuple[np.ndarray, np.ndarray]:
    """Record the current actions; return the windowed opponent means."""
    if win.w is None:
        # Full history: exact running mean via sums, nothing retained per-step.
        win._sum_g += state.a_v
        win._sum_v += state.a_g
        win._count += 1
        return win._sum_g / win._count, win._sum_v / win._count
    win.hist_g.append(state.a_v.copy())
    win.hist_v.append(state.a_g.copy())
    if len(win.hist_g) > win.w:
        del win.hist_g[0]
        del win.hist_v[0]
    mean_g = np.stack(win.hist_g).mean(axis=0)
    mean_v = np.stack(win.hist_v).mean(axis=0)
    return mean_g, mean_v


def window_step(state: PolicyState, win: WindowState, cfg: GameConfig) -> PolicyState:
    """One windowed step: averaged beliefs, initial-policy anchor.

    With w = 1 and the compat flag (anchor = previous action) the step is
    bit-for-bit the Markovian one; both paths share the same kernel.
    """
    mean_g, mean_v = _push_history(win, state)
    if win.compat:
        anchor = np.concatenate([state.a_g, state.a_v], axis=0)
    else:
        anchor = np.concatenate([win.anchor_g, win.anchor_v], axis=0)
    block = anchored_exp_step(
        anchor=anchor,
        beliefs=np.concatenate([mean_g, mean_v], axis=0),
        t=state.t,
        cfg=cfg,
    )
    return PolicyState(
        a_g=block[:2], a_v=block[2:], b_g=mean_g, b_v=mean_v, t=state.t + 1,
    )


def gaussian_rank_target(a_v_correct: np.ndarray, pcfg: PvgConfig) -> np.ndarray:
    """Gaussian bump over the verifier's rank order, centered on the boundary.

    Candidates are ranked by verifier correct-score descending; each gets the
    Gaussian density at its rank (1..n) around (n+1)/2, normalized to sum 1,
    returned in candidate-index order. Verdicts flip near the middle ranks,
    so that is where a sneaky prover aims.
    """
    a_v_correct = np.asarray(a_v_correct, dtype=float)
    n = len(a_v_correct)
    rank_sigma = pcfg.rank_sigma if pcfg.rank_sigma is not None else n / 4.0
    order = preference_order(a_v_correct)
    ranks = np.empty(n)
    ranks[order] = np.arange(1, n + 1)
    dens = np.exp(-((ranks - (n + 1) / 2.0) ** 2) / (2.0 * rank_sigma**2))
    # Tied scores share one rank span; averaging their densities makes the
    # target independent of the tie-break (a fully uniform verifier yields a
    # fully uniform target).
    for value in np.unique(a_v_correct):
        tied = a_v_correct == value
        if tied.sum() > 1:
            dens[tied] = dens[tied].mean()
    return dens / dens.sum()


def pvg_step(state: PolicyState, pcfg: PvgConfig, cfg: GameConfig) -> PolicyState:
    """Prover-verifier step; honest provers reproduce the Markovian update."""
    state = belief_update(state)
    beliefs = np.concatenate([state.b_g, state.b_v], axis=0)
    if pcfg.prover_type == "sneaky":
        beliefs[INCORRECT] = gaussian_rank_target(state.a_v[CORRECT], pcfg)
    block = anchored_exp_step(
        anchor=np.concatenate([state.a_g, state.a_v], axis=0),
        beliefs=beliefs,
        t=state.t,
        cfg=cfg,
    )
    return PolicyState(
        a_g=block[:2], a_v=block[2:], b_g=state.b_g, b_v=state.b_v, t=state.t + 1,
    )


def make_stepper(initial: PolicyState, cfg: GameConfig) -> Callable[[PolicyState], PolicyState]:
    """Bind the configured schedule to a state-to-state step function."""
    if cfg.schedule == "markovian":
        return lambda state: markovian_step(state, cfg)
    if cfg.schedule in ("window", "full_history"):
        win = make_window_state(initial, cfg)
        return lambda state: window_step(state, win, cfg)
    if cfg.schedule == "pvg":
        return lambda state: pvg_step(state, cfg.pvg, cfg)
    raise ValueError(f"unknown schedule {cfg.schedule!r}")
