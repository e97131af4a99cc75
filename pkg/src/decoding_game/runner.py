"""Batch driver: fan instances over workers, merge results in id order.

Each instance runs a full game plus the calibration stage; outcomes carry
the equilibrium result, the calibration result, and the baseline top-1 ids
used by the summary writer. Instance-level failures become error records,
never exceptions, so one bad line cannot sink a batch.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .baselines import rank_generative
from .calibration import fallback_da, solve_eta_star
from .core import preference_order, run_game
from .types import (
    CalibrationInput,
    CalibrationResult,
    EquilibriumResult,
    GameConfig,
    GameInstance,
)

__all__ = ["InstanceOutcome", "calibrate_from_result", "run_one", "run_batch"]


@dataclass
class InstanceOutcome:
    instance: GameInstance
    result: Optional[EquilibriumResult] = None
    calibration: Optional[CalibrationResult] = None
    top1_before: Optional[str] = None  # candidate id, initial generative ranking
    top1_after: Optional[str] = None   # candidate id, equilibrium ranking
    error: Optional[str] = None


def calibrate_from_result(
    inst: GameInstance, result: EquilibriumResult, eta_bar: float = 0.5
) -> CalibrationResult:
    """Reliability stage for one finished run.

    Correctness scores are the normalized final scores; disambiguity comes
    from the instance when every candidate carries one, otherwise from the
    rank-margin fallback. Cutoff sets are the run's top-half/bottom-half.
    """
    total = result.final_scores.sum()
    c = result.final_scores / total if total > 0 else np.full(inst.n, 1.0 / inst.n)
    c = np.clip(c, 0.0, 1.0)
    das = [cand.da for cand in inst.candidates]
    if all(d is not None for d in das):
        da = np.array(das, dtype=float)
    else:
        da = fallback_da(inst.scores("g_correct"))
    correct = result.correct_label_cutoff
    incorrect = tuple(sorted(set(range(inst.n)) - set(correct)))
    inp = CalibrationInput(
        c=c, da=da, cutoff_correct=correct, cutoff_incorrect=incorrect, eta_bar=eta_bar,
    )
    return solve_eta_star(inp)


def run_one(inst: GameInstance, cfg: GameConfig, eta_bar: float = 0.5) -> InstanceOutcome:
    """Run game + calibration for one instance; trap per-instance failures."""
    try:
        result = run_game(inst, cfg)
        calibration = calibrate_from_result(inst, result, eta_bar)
        g_top = int(rank_generative(inst)[0])
        final_top = int(preference_order(result.final_scores)[0])
        return InstanceOutcome(
            instance=inst,
            result=result,
            calibration=calibration,
            top1_before=inst.candidates[g_top].candidate_id,
            top1_after=inst.candidates[final_top].candidate_id,
        )
    except (ValueError, FloatingPointError, ArithmeticError) as exc:
        return InstanceOutcome(instance=inst, error=str(exc))


def _worker(args: tuple) -> InstanceOutcome:
    inst, cfg, eta_bar = args
    return run_one(inst, cfg, eta_bar)


def run_batch(
    instances: Sequence[GameInstance],
    cfg: GameConfig,
    eta_bar: float = 0.5,
    jobs: int = 1,
) -> list[InstanceOutcome]:
    """Run a batch, optionally in parallel; results merged in instance-id order.

    Per-instance computation is identical under any job count, so jobs only
    changes wall time, never content.
    """
    if jobs <= 1 or len(instances) <= 1:
        outcomes = [run_one(inst, cfg, eta_bar) for inst in instances]
    else:
        payload = [(inst, cfg, eta_bar) for inst in instances]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(payload) // (jobs * 4))
            outcomes = list(pool.map(_worker, payload, chunksize=chunk))
    return sorted(outcomes, key=lambda o: o.instance.instance_id)
