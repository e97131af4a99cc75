"""Brute-force verifiers used by the test suite.

Everything here re-derives results from first principles in plain Python;
no solver code path is reused, so the two implementations cross-check each
other. Intended for tiny inputs at test time, not production work.
"""
from __future__ import annotations

from itertools import permutations
from typing import Optional

import numpy as np

from .core import markovian_step, normalize_verifier, sigma_de_check
from .types import (
    CORRECT,
    CalibrationInput,
    GameConfig,
    INCORRECT,
    PolicyState,
    PureProfile,
)

__all__ = [
    "enumerate_equilibria",
    "embed_profile",
    "grid_eta_star",
    "definitional_regret",
]

# Geometric grading ratio for embedding a preference permutation as a
# distribution; any ratio in (0, 1) encodes the same order.
_GRADE_RATIO = 0.5


def _graded_weights(n: int) -> list[float]:
    raw = [_GRADE_RATIO**k for k in range(n)]
    total = sum(raw)
    return [x / total for x in raw]


def embed_profile(profile: PureProfile) -> PolicyState:
    """Realize a pure profile as a mirrored graded policy state.

    Both players' correct branches carry the permutation's graded weights and
    both incorrect branches the reversed weights, so the two sides are exact
    mirrors: the equilibrium gap starts at zero and the preference orders
    coincide with the profile's permutation.
    """
    n = len(profile.order)
    weights = _graded_weights(n)
    correct = np.empty(n)
    incorrect = np.empty(n)
    for pos, cand in enumerate(profile.order):
        correct[cand] = weights[pos]
        incorrect[cand] = weights[n - 1 - pos]
    a = np.stack([correct, incorrect])
    return PolicyState(a_g=a.copy(), a_v=a.copy(), b_g=a.copy(), b_v=a.copy(), t=1)


def _profile_for(order: tuple[int, ...]) -> PureProfile:
    n = len(order)
    verdicts = [INCORRECT] * n
    for cand in order[: n // 2]:
        verdicts[cand] = CORRECT
    return PureProfile(
        order=order,
        gen_choice_correct=order[0],
        gen_choice_incorrect=order[-1],
        verifier_verdicts=tuple(verdicts),
    )


def enumerate_equilibria(n: int, cfg: Optional[GameConfig] = None) -> list[PureProfile]:
    """All pure separating profiles that one Markovian step leaves in place.

    Enumerates every preference permutation, embeds it, and keeps the profile
    when the equilibrium gap grows by less than 1e-9 over one step. The count
    equals n! for the order-matching payoff.
    """
    if not (2 <= n <= 4):
        raise ValueError("enumeration supported for 2 <= n <= 4 only")
    cfg = cfg or GameConfig()
    kept = []
    for order in permutations(range(n)):
        profile = _profile_for(order)
        state = embed_profile(profile)
        gap_before = _gap(state)
        stepped = markovian_step(state, cfg)
        if _gap(stepped) - gap_before < 1e-9:
            kept.append(profile)
    return kept


def _gap(state: PolicyState) -> float:
    return float(np.abs(state.a_g[CORRECT] - normalize_verifier(state)).max())


def grid_eta_star(inp: CalibrationInput, step: float) -> Optional[float]:
    """Largest grid point in [0, eta_bar) where all cross-group constraints hold.

    Plain scan; the feasible set is an interval starting at 0, so the scan
    stops at the first violation. Returns None when already infeasible at 0.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    c = [float(x) for x in inp.c]
    da = [float(x) for x in inp.da]
    cset = list(inp.cutoff_correct)
    iset = list(inp.cutoff_incorrect)

    best = None
    eta = 0.0
    while eta < inp.eta_bar:
        rel = [eta * da[i] + (1.0 - eta) * c[i] for i in range(len(c))]
        if min(rel[i] for i in cset) >= max(rel[i] for i in iset):
            best = eta
        else:
            break
        eta += step
    return best


def _plain_order(values: list[float]) -> list[int]:
    return sorted(range(len(values)), key=lambda i: (-values[i], i))


def _plain_utility(g_row: list[float], v_row: list[float]) -> float:
    total = sum(v_row)
    a_nv = [x / total for x in v_row]
    matched = 1.0 if _plain_order(g_row) == _plain_order(v_row) else 0.0
    gap = max(abs(a - b) for a, b in zip(g_row, a_nv))
    return matched - gap


def definitional_regret(history: list[PolicyState], player: str) -> float:
    """Average regret straight from the definition, by exhaustive enumeration.

    Hindsight strategies are the n one-hot distributions plus the player's
    own time average; each is scored against every recorded opponent action.
    """
    if player not in ("generator", "verifier"):
        raise ValueError("player must be 'generator' or 'verifier'")
    if not history:
        raise ValueError("history must be non-empty")
    n = history[0].n
    t_len = len(history)
    g_seq = [[float(x) for x in s.a_g[CORRECT]] for s in history]
    v_seq = [[float(x) for x in s.a_v[CORRECT]] for s in history]
    own_seq, opp_seq = (g_seq, v_seq) if player == "generator" else (v_seq, g_seq)

    strategies = [[1.0 if j == k else 0.0 for j in range(n)] for k in range(n)]
    strategies.append([sum(row[j] for row in own_seq) / t_len for j in range(n)])

    def payoff(own_row: list[float], opp_row: list[float]) -> float:
        if player == "generator":
            return _plain_utility(own_row, opp_row)
        return _plain_utility(opp_row, own_row)

    # Hindsight strategy: best response to the time-averaged opponent,
    # first maximizer wins ties; scored along the actual opponent sequence.
    opp_avg = [sum(row[j] for row in opp_seq) / t_len for j in range(n)]
    s_star = max(strategies, key=lambda strat: payoff(strat, opp_avg))
    hindsight = sum(payoff(s_star, opp_seq[t]) for t in range(t_len)) / t_len
    realized = sum(payoff(own_seq[t], opp_seq[t]) for t in range(t_len)) / t_len
    return hindsight - realized
