"""Game-theoretic reranking of candidate answers.

A generator and a verifier play a signaling game over a fixed candidate set;
anchored exponential-weights dynamics drive both toward an approximate
equilibrium whose strategies rerank the candidates. A reliability stage then
solves for the smallest verifier/deliberation mixing weight that separates
correct from incorrect candidates.
"""
from .baselines import (
    BASELINE_RANKERS,
    build_report,
    inconsistency_pct,
    rank_discriminative,
    rank_generative,
    rank_mutual_information,
    rank_scd,
)
from .calibration import (
    fallback_da,
    label_candidates,
    rel_score,
    reliability_conditions,
    solve_eta_star,
)
from .core import (
    anchored_exp_step,
    belief_update,
    cumulative_regret,
    init_policies,
    markovian_step,
    policy_entropy,
    preference_order,
    run_game,
    sigma_de_check,
    utility,
)
from .io import (
    ParseError,
    ParseResult,
    emit_instances,
    emit_summary,
    emit_traces,
    generate_synthetic,
    parse_instances,
)
from .oracle import definitional_regret, embed_profile, enumerate_equilibria, grid_eta_star
from .runner import InstanceOutcome, calibrate_from_result, run_batch, run_one
from .schedules import gaussian_rank_target, make_stepper, make_window_state, pvg_step, window_step
from .types import (
    CORRECT,
    EPS,
    INCORRECT,
    CalibrationInput,
    CalibrationResult,
    CandidateRecord,
    CrossingPair,
    EquilibriumResult,
    GameConfig,
    GameInstance,
    PolicyState,
    PureProfile,
    PvgConfig,
    RankingReport,
    SyntheticSpec,
    WindowState,
)

__version__ = "0.1.0"

__all__ = [
    "BASELINE_RANKERS",
    "CORRECT",
    "EPS",
    "INCORRECT",
    "CalibrationInput",
    "CalibrationResult",
    "CandidateRecord",
    "CrossingPair",
    "EquilibriumResult",
    "GameConfig",
    "GameInstance",
    "InstanceOutcome",
    "ParseError",
    "ParseResult",
    "PolicyState",
    "PureProfile",
    "PvgConfig",
    "RankingReport",
    "SyntheticSpec",
    "WindowState",
    "anchored_exp_step",
    "belief_update",
    "build_report",
    "calibrate_from_result",
    "cumulative_regret",
    "definitional_regret",
    "embed_profile",
    "emit_instances",
    "emit_summary",
    "emit_traces",
    "enumerate_equilibria",
    "fallback_da",
    "gaussian_rank_target",
    "generate_synthetic",
    "grid_eta_star",
    "inconsistency_pct",
    "init_policies",
    "label_candidates",
    "make_stepper",
    "make_window_state",
    "markovian_step",
    "parse_instances",
    "policy_entropy",
    "preference_order",
    "pvg_step",
    "rank_discriminative",
    "rank_generative",
    "rank_mutual_information",
    "rank_scd",
    "rel_score",
    "reliability_conditions",
    "run_batch",
    "run_game",
    "run_one",
    "sigma_de_check",
    "solve_eta_star",
    "utility",
    "window_step",
]
