"""Watch one game run to its stopping point.

Generates a single ten-candidate instance, runs the default Markovian
schedule, and prints the per-iteration gap and policy entropy alongside the
before/after rankings.
"""
import numpy as np

from decoding_game import (
    GameConfig,
    SyntheticSpec,
    generate_synthetic,
    preference_order,
    rank_generative,
    run_game,
)


def main() -> None:
    inst = generate_synthetic(SyntheticSpec(num_instances=1, n=10, seed=7))[0]
    cfg = GameConfig()
    result = run_game(inst, cfg)

    print(f"instance {inst.instance_id}: n = {inst.n}, gold = {inst.gold_candidate_id}")
    print(f"converged = {result.converged} after {result.iterations_used} iterations\n")

    print("  t    gap          entropy")
    marks = set(np.linspace(0, result.iterations_used - 1, 12, dtype=int).tolist())
    for t, (gap, ent) in enumerate(zip(result.gap_trace, result.entropy_trace), start=1):
        if t - 1 in marks:
            print(f"{t:4d}   {gap:.3e}    {ent:.4f}")

    ids = [c.candidate_id for c in inst.candidates]
    before = [ids[i] for i in rank_generative(inst)]
    after = [ids[i] for i in preference_order(result.final_scores)]
    print(f"\ngenerative ranking : {' '.join(before)}")
    print(f"equilibrium ranking: {' '.join(after)}")
    print(f"top-1 moved: {before[0]} -> {after[0]}" if before[0] != after[0]
          else f"top-1 kept: {after[0]}")


if __name__ == "__main__":
    main()
