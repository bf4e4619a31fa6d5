#!/usr/bin/env python3
"""The group-vs-individual conflict in the lowest-unique-number game.

If everyone plays the same strategy, the group's average win rate is
maximized by uniform play: collisions are rarest when picks spread out.
But uniform play is not self-enforcing: the first number then wins far
more often than the rest, so each player is tempted toward low numbers.
The equilibrium that removes the temptation pays everyone strictly less
than uniform play would. This script quantifies that gap and compares two
fixed strategies suggested as solutions in earlier treatments.
"""

import numpy as np

import lupi
from lupi import Strategy


def main():
    print("Under uniform play the win chance decays fast with the number picked")
    print("(n = 9; the large-game limit is e^-1 (1 - e^-1)^(i-1)):")
    per = lupi.win_prob_vector(Strategy.uniform(9)).values
    for i, v in enumerate(per[:5], start=1):
        print(f"  c_{i} = {v:.5f}   large-game limit {lupi.uniform_asymptotic_win_prob(i):.5f}")
    print("  -> everyone wants to deviate toward 1, so uniform is not stable.\n")

    print("Scaled payoffs n*W when everyone plays the same strategy")
    print("(1.0 is the theoretical ceiling: one winner per round):")
    print("  n   uniform   equilibrium   half-on-1-and-2   dyadic")
    for n in range(3, 13):
        w_u = lupi.symmetric_payoff(Strategy.uniform(n))
        c_ne = lupi.solve_ne(n).c_ne
        w_z = lupi.symmetric_payoff(Strategy.zeng(n))
        w_f = lupi.symmetric_payoff(Strategy.flitney(n))
        print(f" {n:2d}   {n * w_u:.5f}   {n * c_ne:.5f}       {n * w_z:.5f}           {n * w_f:.5f}")
    print("  -> uniform play approaches the ceiling; the equilibrium stays below it.")
    print("  -> the two fixed strategies fade quickly (the dyadic one still beats")
    print("     the equilibrium in the four-player game before falling behind).\n")

    print("Why the equilibrium cannot be uniform: equalizing the first two win")
    print("chances forces p_2 < p_1. Identity check at solved equilibria:")
    for n in (3, 6, 9, 12):
        sol = lupi.solve_ne(n)
        ok = lupi.verify_ordering_inequality(sol.strategy)
        p = sol.strategy.probs
        print(f"  n={n:2d}: holds={ok}  (p_1={p[0]:.4f} > p_2={p[1]:.4f})")
    print(f"  uniform(9) fails it: {lupi.verify_ordering_inequality(Strategy.uniform(9))}\n")

    print("Numeric confirmation that uniform is the best symmetric strategy (n=6):")
    opt = lupi.best_symmetric(6)
    print(f"  ascent found p = {np.round(opt.strategy.probs, 8)}")
    print(f"  payoff {opt.w:.8f} vs uniform {lupi.symmetric_payoff(Strategy.uniform(6)):.8f}")


if __name__ == "__main__":
    main()
