"""Reliability calibration: Rel scores, the exact eta* program, and labels.

Rel blends a correctness score c with a disambiguity value da through a
mixing weight eta. The calibration question is how much disambiguity weight
the candidate set tolerates before some Incorrect-labeled candidate overtakes
a Correct-labeled one; eta* is that exact boundary. Candidates implicated in
an order flip on the way to the eta_bar cap are labeled Specious.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .types import CalibrationInput, CalibrationResult, CrossingPair

__all__ = [
    "rel_score",
    "reliability_conditions",
    "solve_eta_star",
    "label_candidates",
    "fallback_da",
]

# Pairs with |slope| below this are parallel lines: no crossing ever.
_PARALLEL_TOL = 1e-12

VALID = "Valid"
SPECIOUS = "Specious"


def rel_score(c_i: float, da_i: float, eta: float) -> float:
    """Convex combination eta*da + (1-eta)*c, the reliability score."""
    return eta * da_i + (1.0 - eta) * c_i


def reliability_conditions(inp: CalibrationInput) -> tuple[bool, bool]:
    """The two theorem conditions: strict c-separation, and a flip by eta_bar.

    (1) every Correct-labeled candidate strictly out-scores every
    Incorrect-labeled one at eta = 0; (2) at eta = eta_bar at least one
    cross-group pair is strictly reversed. eta* exists iff both hold.
    """
    c = np.asarray(inp.c, dtype=float)
    cset = list(inp.cutoff_correct)
    iset = list(inp.cutoff_incorrect)
    cond1 = bool(c[cset].min() > c[iset].max())
    cond2 = len(_reversed_pairs_at_eta_bar(inp)) > 0
    return cond1, cond2


def _reversed_pairs_at_eta_bar(inp: CalibrationInput) -> list[CrossingPair]:
    """Cross-group pairs strictly reversed at eta_bar, with exact crossings."""
    pairs: list[CrossingPair] = []
    c, da = np.asarray(inp.c, dtype=float), np.asarray(inp.da, dtype=float)
    for yc in inp.cutoff_correct:
        for yi in inp.cutoff_incorrect:
            intercept = c[yc] - c[yi]               # Rel difference at eta = 0
            slope = (da[yc] - da[yi]) - intercept   # d(Rel_c - Rel_i)/d(eta)
            if intercept + inp.eta_bar * slope >= 0.0:
                continue  # pair still ordered (or tied) at eta_bar
            if abs(slope) < _PARALLEL_TOL:
                continue  # parallel lines cannot flip
            pairs.append(CrossingPair(int(yc), int(yi), float(-intercept / slope)))
    return pairs


def solve_eta_star(inp: CalibrationInput) -> CalibrationResult:
    """Exact eta* by pairwise linearity; no grid.

    Every cross-group constraint Rel(yc) >= Rel(yi) is linear in eta, so the
    feasible set on [0, eta_bar) is an interval starting at 0 whenever
    condition (1) holds; its exact right boundary is the smallest pair
    crossing. Unreliable inputs (either condition fails) get eta_star = None
    and all-Valid labels.
    """
    inp.validate()
    crossings = _reversed_pairs_at_eta_bar(inp)
    c = np.asarray(inp.c, dtype=float)
    cond1 = bool(c[list(inp.cutoff_correct)].min() > c[list(inp.cutoff_incorrect)].max())
    reliable = cond1 and len(crossings) > 0

    eta_star: Optional[float] = None
    if reliable:
        eta_star = min(p.eta_cross for p in crossings)

    labels = label_candidates(inp, reliable, crossings)
    eta_for_rel = eta_star if eta_star is not None else 0.0
    rel = np.array([rel_score(ci, dai, eta_for_rel) for ci, dai in zip(inp.c, inp.da)])
    return CalibrationResult(
        eta_star=eta_star,
        reliable=reliable,
        labels=labels,
        rel_at_eta_star=rel,
        crossing_pairs=tuple(crossings) if reliable else (),
    )


def label_candidates(
    inp: CalibrationInput, reliable: bool, crossings: list[CrossingPair]
) -> tuple[str, ...]:
    """Valid/Specious labels from the crossing structure.

    Members of crossing pairs are Specious; everyone else Valid. The
    candidates ranked best and worst by c keep Valid even if implicated: an
    extreme candidate cannot be confused with the boundary.
    """
    labels = [VALID] * inp.n
    if not reliable:
        return tuple(labels)
    for pair in crossings:
        labels[pair.correct_idx] = SPECIOUS
        labels[pair.incorrect_idx] = SPECIOUS
    c = np.asarray(inp.c, dtype=float)
    labels[int(np.argmax(c))] = VALID
    labels[int(np.argmin(c))] = VALID
    return tuple(labels)


def fallback_da(g_correct: np.ndarray) -> np.ndarray:
    """Rank-normalized g_correct margin over the instance median.

    A stand-in when no disambiguity values ship with the instance: the
    candidate's margin above the median generator score, reduced to its
    ascending rank and scaled to [0, 1]. Shift-invariant and deterministic;
    a fallback, not a measurement.
    """
    g_correct = np.asarray(g_correct, dtype=float)
    n = len(g_correct)
    margin = g_correct - np.median(g_correct)
    # lexsort: ascending margin, ties by ascending index
    order = np.lexsort((np.arange(n), margin))
    ranks = np.empty(n)
    ranks[order] = np.arange(n)
    return ranks / max(n - 1, 1)
