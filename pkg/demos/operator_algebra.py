#!/usr/bin/env python3
"""The exact polynomial layer behind the win probabilities.

Every combination of picks the opponents can produce is one term of
(p_1 + ... + p_n)^(n-1). A number is a winner when it is picked exactly
once, i.e. when its variable appears linearly, so "nobody wins at number
i" is enforced by subtracting the linear-in-p_i part. The linear
projection that does this is built from differentiation and
zero-substitution, and everything here runs on exact rational arithmetic:
this layer is the ground truth the fast floating-point evaluator is
checked against.
"""

from fractions import Fraction

import lupi
from lupi import SparsePolynomial, Strategy


def main():
    print("All opponent outcomes for the three-player game, (p1+p2+p3)^2:")
    z0 = lupi.opponents_outcome_poly(3)
    print(z0.canonical_text())
    print("  (squared terms: both opponents collide; cross terms: they split)\n")

    print("Removing every outcome where number 1 wins (is picked exactly once):")
    z1 = lupi.no_winner_poly(3, 1)
    print(z1.canonical_text())
    print()

    print("The linear projection annihilates what it already removed:")
    for i in (1,):
        print(f"  project_linear(result, {i}) has {len(lupi.project_linear(z1, i).terms)} terms")
    print()

    print("Exact win-chance polynomials for n=3 (note: no p_i in the i-th one):")
    for i in (1, 2, 3):
        poly = lupi.win_prob_poly(3, i)
        print(f"  c_{i}:")
        for line in poly.canonical_text().splitlines():
            print(f"    {line}")
    print()

    print("Recursion and inclusion-exclusion build the same polynomial, exactly:")
    for n in (4, 5):
        same = all(
            lupi.no_winner_poly(n, k) == lupi.no_winner_poly_by_subsets(n, k)
            for k in range(n + 1)
        )
        print(f"  n={n}: all depths agree -> {same}")
    print()

    print("Exact rational evaluation vs the floating-point evaluator:")
    point = [Fraction(5, 12), Fraction(4, 12), Fraction(3, 12)]
    s = Strategy([float(q) for q in point])
    for i in (1, 2, 3):
        exact = lupi.win_prob_poly(3, i).evaluate(point)
        fast = lupi.win_prob(i, s)
        print(f"  c_{i} = {exact} = {float(exact):.15f}   closed form {fast:.15f}")
    print()

    print("Operator identities on an arbitrary polynomial q = 3 p1^2 p2 + p2 p3:")
    q = SparsePolynomial(3, {(2, 1, 0): 3, (0, 1, 1): 1})
    li = lupi.project_linear
    print(f"  project twice equals once:  {li(li(q, 2), 2) == li(q, 2)}")
    print(f"  projections commute:        {li(li(q, 1), 2) == li(li(q, 2), 1)}")
    print(f"  quadratic term is killed:   {li(q, 1) == SparsePolynomial(3, {})}")


if __name__ == "__main__":
    main()
