"""Step through the reliability stage on a four-candidate example.

The reliability score Rel(i) = eta * da_i + (1 - eta) * c_i is linear in the
mixing weight eta, so each Correct/Incorrect pair either keeps its order on
the whole interval or flips at one exact crossing. The largest safe weight
eta* is the first crossing; candidates implicated in a crossing are labeled
Specious, except the extremes by c, which cannot sit at the decision
boundary.
"""
import numpy as np

from decoding_game import CalibrationInput, grid_eta_star, solve_eta_star

C = np.array([0.9, 0.6, 0.5, 0.2])
DA = np.array([0.9, 0.1, 0.8, 0.1])


def main() -> None:
    inp = CalibrationInput(
        c=C, da=DA, cutoff_correct=(0, 1), cutoff_incorrect=(2, 3), eta_bar=0.5
    )
    print("candidate   c     da   side")
    sides = {0: "Correct", 1: "Correct", 2: "Incorrect", 3: "Incorrect"}
    for i in range(4):
        print(f"    {i}      {C[i]:.2f}  {DA[i]:.2f}  {sides[i]}")

    res = solve_eta_star(inp)
    print(f"\nreliable = {res.reliable}")
    for pair in res.crossing_pairs:
        print(f"pair ({pair.correct_idx}, {pair.incorrect_idx}) flips at "
              f"eta = {pair.eta_cross:.6f}")
    print(f"eta* = {res.eta_star:.6f}")
    print(f"labels = {res.labels}")

    grid = grid_eta_star(inp, step=1e-4)
    print(f"\ngrid-search cross-check (step 1e-4): {grid:.4f} "
          f"(closed form {res.eta_star:.4f})")

    for eta in (0.0, res.eta_star / 2, res.eta_star, 0.3):
        rel = eta * DA + (1 - eta) * C
        order = " > ".join(str(i) for i in np.argsort(-rel))
        print(f"eta = {eta:.4f}: Rel order {order}")


if __name__ == "__main__":
    main()
