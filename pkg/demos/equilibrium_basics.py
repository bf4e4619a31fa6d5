#!/usr/bin/env python3
"""Solve the symmetric equilibrium of the lowest-unique-number game.

n players pick integers from 1..n; the smallest number picked exactly once
wins. At the symmetric equilibrium no number is a better pick than any
other: every win chance c_i equals the same value c_NE. This script solves
that condition for several game sizes and shows how the strategy drifts
away from uniform play as the table gets bigger.
"""

import math

import numpy as np

import lupi


def main():
    print("Three players: the equilibrium is known in closed form.")
    sol = lupi.solve_ne(3)
    exact = (2 * math.sqrt(3) - 3, 2 - math.sqrt(3), 2 - math.sqrt(3))
    print(f"  solved  p = {np.round(sol.strategy.probs, 10)}")
    print(f"  exact   p = {np.round(exact, 10)}")
    print(f"  win value c_NE = {sol.c_ne:.12f}  (exact 28 - 16*sqrt(3) = {28 - 16 * math.sqrt(3):.12f})")
    print(f"  residual {sol.residual:.2e} after {sol.iterations} Newton steps\n")

    print("Equilibrium strategies, n = 4..12 (rows: p_1..p_4, tail summed):")
    print("  n    p_1     p_2     p_3     p_4     tail    c_NE")
    for n in range(4, 13):
        sol = lupi.solve_ne(n)
        p = sol.strategy.probs
        tail = float(np.sum(p[4:]))
        print(
            f" {n:2d}  {p[0]:.4f}  {p[1]:.4f}  {p[2]:.4f}  {p[3]:.4f}  "
            f"{tail:.4f}  {sol.c_ne:.6f}"
        )

    print("\nEvery solved equilibrium equalizes the win chances: spread check")
    for n in (5, 9, 12):
        c = lupi.win_prob_vector(lupi.solve_ne(n).strategy).values
        print(f"  n={n:2d}: max c_i - min c_i = {np.max(c) - np.min(c):.2e}")

    print("\nLow numbers are overweighted relative to uniform play (p_i vs 1/n):")
    sol = lupi.solve_ne(9)
    for i, v in enumerate(sol.strategy.probs, start=1):
        bar = "#" * int(round(200 * v))
        print(f"  p_{i} = {v:8.5f}  {'+' if v > 1 / 9 else '-'}  {bar}")
    print("  ('+' above 1/9, '-' below; the ninth number is almost never picked)")


if __name__ == "__main__":
    main()
