"""Single-pass baseline rankers and the dataset-level inconsistency metric.

Each ranker orders one instance's candidates from the raw scores alone:
G by the generative correct-branch score, D by the verifier's verdict odds,
MI by their product, SCD by the correct/incorrect generative contrast. The
equilibrium ranking (method code BDG; ECG for the full-history schedule) is
produced by the game runner and compared against these through top-1
disagreement.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .core import preference_order
from .types import GameInstance, RankingReport

__all__ = [
    "rank_generative",
    "rank_discriminative",
    "rank_mutual_information",
    "rank_scd",
    "verifier_correct_prob",
    "inconsistency_pct",
    "build_report",
    "BASELINE_RANKERS",
]


def rank_generative(inst: GameInstance) -> np.ndarray:
    """Order by g_correct descending (method G)."""
    return preference_order(inst.scores("g_correct"))


def verifier_correct_prob(inst: GameInstance) -> np.ndarray:
    """P(correct | candidate) from the two-way softmax of the verdict scores."""
    margin = inst.scores("v_correct") - inst.scores("v_incorrect")
    q = np.empty_like(margin)
    pos = margin >= 0
    q[pos] = 1.0 / (1.0 + np.exp(-margin[pos]))
    q[~pos] = np.exp(margin[~pos]) / (1.0 + np.exp(margin[~pos]))
    return q


def rank_discriminative(inst: GameInstance) -> np.ndarray:
    """Order by the initial verifier correct-probability (method D)."""
    return preference_order(verifier_correct_prob(inst))


def rank_mutual_information(inst: GameInstance) -> np.ndarray:
    """Order by generator correct-probability times verifier correct-probability."""
    g = inst.scores("g_correct")
    p_g = np.exp(g - g.max())
    p_g = p_g / p_g.sum()
    return preference_order(p_g * verifier_correct_prob(inst))


def rank_scd(inst: GameInstance) -> np.ndarray:
    """Order by the log-domain contrast g_correct - g_incorrect."""
    return preference_order(inst.scores("g_correct") - inst.scores("g_incorrect"))


BASELINE_RANKERS = {
    "G": rank_generative,
    "D": rank_discriminative,
    "MI": rank_mutual_information,
    "SCD": rank_scd,
}


def inconsistency_pct(rankings_a: dict, rankings_b: dict) -> float:
    """Percentage of instances whose top-1 candidates differ between methods."""
    if set(rankings_a) != set(rankings_b):
        raise ValueError("methods ranked different instance sets")
    if not rankings_a:
        raise ValueError("no instances to compare")
    disagree = sum(1 for k in rankings_a if rankings_a[k][0] != rankings_b[k][0])
    return 100.0 * disagree / len(rankings_a)


def full_order_inconsistency_pct(rankings_a: dict, rankings_b: dict) -> float:
    """Secondary statistic: percentage of instances with any order difference."""
    if set(rankings_a) != set(rankings_b):
        raise ValueError("methods ranked different instance sets")
    if not rankings_a:
        raise ValueError("no instances to compare")
    disagree = sum(1 for k in rankings_a if tuple(rankings_a[k]) != tuple(rankings_b[k]))
    return 100.0 * disagree / len(rankings_a)


def build_report(
    method: str,
    instances: list[GameInstance],
    orders: dict,
    reference: Optional[dict] = None,
) -> RankingReport:
    """Assemble a RankingReport from per-instance candidate-index orders.

    `orders` maps instance_id to a permutation of candidate indices; ids are
    resolved against the instance's candidate list. Accuracy is reported only
    when every instance carries a gold label; inconsistency is top-1
    disagreement against the `reference` id rankings when given.
    """
    by_id = {inst.instance_id: inst for inst in instances}
    if set(orders) != set(by_id):
        raise ValueError("orders must cover exactly the given instances")
    rankings = {}
    top1 = {}
    for iid, perm in orders.items():
        inst = by_id[iid]
        ids = tuple(inst.candidates[int(i)].candidate_id for i in perm)
        rankings[iid] = ids
        top1[iid] = ids[0]

    accuracy = None
    golds = [inst.gold_candidate_id for inst in instances]
    if all(g is not None for g in golds):
        hits = sum(1 for inst in instances if top1[inst.instance_id] == inst.gold_candidate_id)
        accuracy = hits / len(instances)

    inc = inconsistency_pct(rankings, reference) if reference is not None else None
    return RankingReport(
        method=method, rankings=rankings, top1=top1,
        accuracy=accuracy, inconsistency_pct=inc,
    )
