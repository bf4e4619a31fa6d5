"""Win probabilities and equilibrium strategies for the lowest-unique-positive-integer game.

``n`` players each pick an integer from ``1..n``; the smallest number picked
by exactly one player wins. The package computes each number's exact win
chance under mixed strategies three independent ways (exact polynomial
algebra, a closed-form evaluator, and brute-force enumeration plus
simulation), solves the symmetric equilibrium where every number wins
equally often, and quantifies the gap between that equilibrium and the
group-optimal uniform play.
"""

from .config import ResourceLimitError
from .game import ChoiceProfile, GameSpec, Strategy, lowest_unique_winner
from .oracle import GENERATOR_NAME, SimulationStats, exact_win_prob, simulate
from .polynomials import (
    SparsePolynomial,
    differentiate,
    eliminate,
    no_winner_poly,
    no_winner_poly_by_subsets,
    opponents_outcome_poly,
    project_linear,
    win_prob_poly,
)
from .solvers import (
    C0Interval,
    ClassificationError,
    NESolution,
    SelfConsistentSolution,
    SequentialEntry,
    SequentialResult,
    SymmetricOptimum,
    best_symmetric,
    bound_c0,
    find_cne_sequential,
    sequential_solve,
    solve_ne,
    verify_ordering_inequality,
)
from .winprob import (
    PayoffReport,
    WinProbVector,
    expected_payoff,
    symmetric_payoff,
    uniform_asymptotic_win_prob,
    win_prob,
    win_prob_gradient,
    win_prob_vector,
)

__version__ = "0.1.0"

__all__ = [
    "C0Interval",
    "ChoiceProfile",
    "ClassificationError",
    "GENERATOR_NAME",
    "GameSpec",
    "NESolution",
    "PayoffReport",
    "ResourceLimitError",
    "SelfConsistentSolution",
    "SequentialEntry",
    "SequentialResult",
    "SimulationStats",
    "SparsePolynomial",
    "Strategy",
    "SymmetricOptimum",
    "WinProbVector",
    "best_symmetric",
    "bound_c0",
    "differentiate",
    "eliminate",
    "exact_win_prob",
    "expected_payoff",
    "find_cne_sequential",
    "lowest_unique_winner",
    "no_winner_poly",
    "no_winner_poly_by_subsets",
    "opponents_outcome_poly",
    "project_linear",
    "sequential_solve",
    "simulate",
    "solve_ne",
    "symmetric_payoff",
    "uniform_asymptotic_win_prob",
    "win_prob",
    "win_prob_gradient",
    "win_prob_poly",
    "win_prob_vector",
]
