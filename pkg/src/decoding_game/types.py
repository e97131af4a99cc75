"""Shared domain types for the decoding game solver.

A game instance is one prompt's candidate set with the four raw log-scores
produced by a generative and a verifying pass over each candidate. Policies
are kept as (2, n) row-stochastic arrays: row 0 is the correct branch, row 1
the incorrect branch, columns are candidates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

# Probability floor applied before every log; keeps the stiffness term finite.
EPS = 1e-12

# Branch indices shared by every (2, n) policy/belief array.
CORRECT = 0
INCORRECT = 1

SCHEDULES = ("markovian", "window", "full_history", "pvg")
FINAL_SCORE_RULES = ("product", "verifier_only")


@dataclass(frozen=True)
class CandidateRecord:
    """One candidate answer with its raw log-scores."""

    candidate_id: str
    g_correct: float     # log P(candidate | prompt, asked-for-correct)
    g_incorrect: float   # log P(candidate | prompt, asked-for-incorrect)
    v_correct: float     # log P(verdict=correct | prompt, candidate)
    v_incorrect: float   # log P(verdict=incorrect | prompt, candidate)
    text: Optional[str] = None
    da: Optional[float] = None  # disambiguity in [0, 1], optional
    extra: dict = field(default_factory=dict)  # unknown input fields, preserved on emit

    def validate(self) -> None:
        for name in ("g_correct", "g_incorrect", "v_correct", "v_incorrect"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"candidate {self.candidate_id!r}: non-finite {name}")
        if self.da is not None and not (0.0 <= self.da <= 1.0):
            raise ValueError(f"candidate {self.candidate_id!r}: da={self.da} outside [0, 1]")


@dataclass(frozen=True)
class GameInstance:
    """One prompt's candidate set; `n` candidates with unique ids."""

    instance_id: str
    candidates: tuple[CandidateRecord, ...]
    gold_candidate_id: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.candidates)

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError(f"instance {self.instance_id!r}: needs >= 2 candidates, has {self.n}")
        ids = [c.candidate_id for c in self.candidates]
        if len(set(ids)) != len(ids):
            raise ValueError(f"instance {self.instance_id!r}: duplicate candidate ids")
        for c in self.candidates:
            c.validate()
        if self.gold_candidate_id is not None and self.gold_candidate_id not in ids:
            raise ValueError(
                f"instance {self.instance_id!r}: gold_candidate_id {self.gold_candidate_id!r} not among candidates"
            )

    def scores(self, name: str) -> np.ndarray:
        """Vector of one raw score field across candidates, in input order."""
        return np.array([getattr(c, name) for c in self.candidates], dtype=float)


@dataclass(frozen=True)
class PvgConfig:
    """Prover-verifier variant: which prover plays, and the rank-target width."""

    prover_type: str = "honest"        # "honest" or "sneaky"
    rank_sigma: Optional[float] = None  # Gaussian std in rank units; default n/4

    def validate(self) -> None:
        if self.prover_type not in ("honest", "sneaky"):
            raise ValueError(f"prover_type must be honest|sneaky, got {self.prover_type!r}")
        if self.rank_sigma is not None and self.rank_sigma <= 0:
            raise ValueError("rank_sigma must be positive")


@dataclass(frozen=True)
class GameConfig:
    """Dynamics configuration; defaults give the standard Markovian run."""

    schedule: str = "markovian"      # markovian | window | full_history | pvg
    window_w: int = 1                # window length when schedule == "window"
    window_compat: bool = False      # anchor window updates to the previous action
    eta_g: float = 0.1               # generator learning rate
    eta_v: float = 0.1               # verifier learning rate
    lambda_g: float = 0.1            # generator stiffness
    lambda_v: float = 0.1            # verifier stiffness
    sigma: float = 1e-3              # equilibrium gap tolerance
    max_iters: int = 5000            # early stopping cap
    seed: int = 0
    final_score_rule: str = "product"  # product | verifier_only
    pvg: PvgConfig = field(default_factory=PvgConfig)

    def validate(self) -> None:
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.schedule == "window" and self.window_w < 1:
            raise ValueError("window_w must be a positive integer")
        if self.eta_g <= 0 or self.eta_v <= 0:
            raise ValueError("learning rates must be positive")
        if self.lambda_g < 0 or self.lambda_v < 0:
            raise ValueError("stiffness must be non-negative")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.final_score_rule not in FINAL_SCORE_RULES:
            raise ValueError(f"unknown final_score_rule {self.final_score_rule!r}")
        self.pvg.validate()

    def with_(self, **kw) -> "GameConfig":
        return replace(self, **kw)


@dataclass
class PolicyState:
    """Joint play state at iteration t.

    a_g[v][y] is the generator's probability of candidate y on signal branch v;
    a_v[v][y] is the verifier's verdict-v distribution over candidates. Beliefs
    mirror the opponent's arrays: b_g is the generator's view of a_v, b_v the
    verifier's view of a_g.
    """

    a_g: np.ndarray  # (2, n), rows sum to 1
    a_v: np.ndarray  # (2, n), rows sum to 1
    b_g: np.ndarray  # (2, n), perceived verifier values
    b_v: np.ndarray  # (2, n), perceived generator values
    t: int = 1

    @property
    def n(self) -> int:
        return self.a_g.shape[1]

    def copy(self) -> "PolicyState":
        return PolicyState(
            a_g=self.a_g.copy(), a_v=self.a_v.copy(),
            b_g=self.b_g.copy(), b_v=self.b_v.copy(), t=self.t,
        )

    def validate(self) -> None:
        for name, arr in (("a_g", self.a_g), ("a_v", self.a_v)):
            if arr.shape != (2, self.n):
                raise ValueError(f"{name} must be (2, n)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
            if np.abs(arr.sum(axis=1) - 1.0).max() > 1e-9:
                raise ValueError(f"{name} rows must sum to 1")
            if arr.min() < EPS * (1.0 - 1e-6) or arr.max() > 1.0:
                raise ValueError(f"{name} entries must lie in [eps, 1]")
        if self.t < 1:
            raise ValueError("t must be >= 1")


@dataclass
class EquilibriumResult:
    """Outcome of one game run: final policies, traces, and the reranking."""

    instance_id: str
    final_state: PolicyState
    order_g: np.ndarray          # generator preference permutation
    order_v: np.ndarray          # verifier preference permutation
    converged: bool
    iterations_used: int
    gap_trace: np.ndarray        # per-iteration max |a_g[correct] - a_NV|
    entropy_trace: np.ndarray    # per-iteration entropy (nats) of a_g[correct]
    regret_g: float              # cumulative average regret at termination
    regret_v: float
    final_scores: np.ndarray     # per-candidate decode score
    correct_label_cutoff: tuple[int, ...]  # indices of the top floor(n/2) by final score
    odd_n_warning: bool          # cutoff halves an odd candidate set

    @property
    def final_ranking(self) -> np.ndarray:
        from .core import preference_order  # local import avoids a cycle

        return preference_order(self.final_scores)


@dataclass
class WindowState:
    """Rolling opponent history plus the initial-policy anchors.

    hist_g holds verifier actions as seen by the generator, hist_v the
    generator actions seen by the verifier; each snapshot is a (2, n) array.
    w = None means the full history (running mean kept incrementally).
    """

    w: Optional[int]             # window length; None = full history
    anchor_g: np.ndarray         # generator's initial policy a^(1)
    anchor_v: np.ndarray
    compat: bool = False         # anchor to previous action instead (test identity)
    hist_g: list = field(default_factory=list)
    hist_v: list = field(default_factory=list)
    _sum_g: Optional[np.ndarray] = None  # running sums for the full-history mean
    _sum_v: Optional[np.ndarray] = None
    _count: int = 0


@dataclass(frozen=True)
class CalibrationInput:
    """Inputs to the reliability stage for one instance."""

    c: np.ndarray                    # correctness scores in [0, 1]
    da: np.ndarray                   # disambiguity values in [0, 1]
    cutoff_correct: tuple[int, ...]  # indices labeled Correct (size floor(n/2))
    cutoff_incorrect: tuple[int, ...]
    eta_bar: float = 0.5             # upper bound on the mixing weight

    @property
    def n(self) -> int:
        return len(self.c)

    def validate(self) -> None:
        n = self.n
        if len(self.da) != n:
            raise ValueError("c and da must have equal length")
        if np.any(self.c < 0) or np.any(self.c > 1) or np.any(self.da < 0) or np.any(self.da > 1):
            raise ValueError("c and da entries must lie in [0, 1]")
        cset, iset = set(self.cutoff_correct), set(self.cutoff_incorrect)
        if cset & iset or cset | iset != set(range(n)):
            raise ValueError("cutoff sets must partition the candidates")
        if len(cset) != n // 2:
            raise ValueError("correct cutoff must contain floor(n/2) candidates")
        if not (0.0 < self.eta_bar < 1.0):
            raise ValueError("eta_bar must lie in (0, 1)")


@dataclass(frozen=True)
class CrossingPair:
    """A correct/incorrect pair whose Rel order flips on the way to eta_bar."""

    correct_idx: int
    incorrect_idx: int
    eta_cross: float


@dataclass
class CalibrationResult:
    eta_star: Optional[float]        # largest safe mixing weight, in [0, eta_bar)
    reliable: bool                   # both theorem conditions hold
    labels: tuple[str, ...]          # "Valid" | "Specious" per candidate
    rel_at_eta_star: np.ndarray      # Rel scores at eta_star (eta=0 when unreliable)
    crossing_pairs: tuple[CrossingPair, ...]


@dataclass(frozen=True)
class RankingReport:
    """One ranking method's output over a dataset."""

    method: str                        # G | D | MI | SCD | ECG | BDG
    rankings: dict                     # instance_id -> tuple of candidate ids, best first
    top1: dict                         # instance_id -> candidate id
    accuracy: Optional[float] = None   # fraction of top1 == gold, when gold present
    inconsistency_pct: Optional[float] = None  # top-1 disagreement vs a reference method


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the seeded synthetic instance generator."""

    num_instances: int
    n: int = 10
    seed: int = 0
    alpha: float = 1.0        # Dirichlet concentration of generator scores
    noise: float = 0.5        # verifier noise level in [0, 1]
    planted_gold: bool = True

    def validate(self) -> None:
        if self.num_instances < 1:
            raise ValueError("num_instances must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not (0.0 <= self.noise <= 1.0):
            raise ValueError("noise must lie in [0, 1]")


@dataclass(frozen=True)
class PureProfile:
    """A pure separating profile, labeled by its preference permutation.

    The generator picks one candidate per signal branch; the verifier assigns
    a verdict to every candidate. `order` is the permutation the profile
    encodes (best candidate first).
    """

    order: tuple[int, ...]
    gen_choice_correct: int          # candidate chosen on the correct branch
    gen_choice_incorrect: int
    verifier_verdicts: tuple[int, ...]  # CORRECT/INCORRECT per candidate
