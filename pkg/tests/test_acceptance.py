"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single ``[criterion NN] PASS/FAIL`` line (visible with
``pytest -s``); the assertions carry the same bounds. Criteria with runtime
budgets measure wall-clock time around the relevant call.
"""

import functools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import lupi
from lupi import Strategy
from tests.test_polynomials import random_poly

SQRT3 = math.sqrt(3.0)
CNE3 = 28 - 16 * SQRT3


def criterion(number, title):
    def wrap(func):
        @functools.wraps(func)
        def run(*args, **kwargs):
            try:
                result = func(*args, **kwargs)
            except BaseException:
                print(f"[criterion {number:02d}] FAIL  {title}")
                raise
            print(f"[criterion {number:02d}] PASS  {title}")
            return result

        return run

    return wrap


@criterion(1, "three-player equilibrium closed form, < 1 s")
def test_c01_three_player_closed_form():
    start = time.perf_counter()
    sol = lupi.solve_ne(3)
    elapsed = time.perf_counter() - start
    expected = (2 * SQRT3 - 3, 2 - SQRT3, 2 - SQRT3)
    assert sol.converged
    assert np.max(np.abs(sol.strategy.probs - expected)) <= 1e-10
    assert abs(sol.c_ne - CNE3) <= 1e-10
    assert elapsed < 1.0


@criterion(2, "nine-player equilibrium digits, < 10 s")
def test_c02_nine_player_digits():
    start = time.perf_counter()
    sol = lupi.solve_ne(9)
    elapsed = time.perf_counter() - start
    assert sol.converged
    expected = (0.2515, 0.2348, 0.2086, 0.1641)
    assert np.max(np.abs(sol.strategy.probs[:4] - expected)) <= 5e-4
    assert elapsed < 10.0


@criterion(3, "sequential chain reproduces the nine-player prefix")
def test_c03_sequential_reproduction():
    result = lupi.sequential_solve(9, 0.0985, 4)
    assert result.complete
    found = np.array([e.p_i for e in result.entries])
    assert np.max(np.abs(found - (0.2515, 0.2349, 0.2087, 0.1643))) <= 5e-4


@criterion(4, "missing real root diagnosed, residual shrinks with a better target")
def test_c04_complex_root_diagnostic():
    loose = lupi.sequential_solve(3, 0.287, 3)
    assert loose.entries[2].status == "no-real-root"
    tight = lupi.sequential_solve(3, 0.287187, 3)
    assert tight.entries[2].status == "no-real-root"
    assert tight.entries[2].residual < loose.entries[2].residual


@criterion(5, "depth-4 interval bound for nine players, containing the solved value")
def test_c05_interval_bound():
    interval = lupi.bound_c0(9, 4)
    assert abs(interval.lower - 0.078) <= 1e-3
    assert abs(interval.upper - 0.146) <= 1e-3
    found = lupi.find_cne_sequential(9)
    assert interval.lower <= found.c_ne <= interval.upper


@criterion(6, "closed form equals enumeration, 100 strategies per n in 3..7, < 60 s")
def test_c06_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for n in range(3, 8):
        rng = np.random.default_rng(60000 + n)
        for _ in range(100):
            raw = rng.random(n) + 1e-3
            s = Strategy(raw / raw.sum())
            for i in range(1, n + 1):
                worst = max(worst, abs(lupi.win_prob(i, s) - lupi.exact_win_prob(i, s)))
    assert worst <= 1e-12
    assert time.perf_counter() - start < 60.0


@criterion(7, "symbolic layer equals closed form; both no-winner constructions identical")
def test_c07_symbolic_equivalence():
    for n in range(3, 7):
        rng = np.random.default_rng(70000 + n)
        for i in range(1, n + 1):
            poly = lupi.win_prob_poly(n, i)
            for _ in range(20):
                ints = rng.integers(1, 50, size=n)
                total = int(ints.sum())
                point = [Fraction(int(v), total) for v in ints]
                s = Strategy([float(q) for q in point])
                assert abs(float(poly.evaluate(point)) - lupi.win_prob(i, s)) <= 1e-12
        for k in range(n + 1):
            assert lupi.no_winner_poly(n, k) == lupi.no_winner_poly_by_subsets(n, k)


@criterion(8, "projection-operator identity suite, 20 random polynomials each")
def test_c08_operator_identities():
    rng = random.Random(808)
    zero = lupi.SparsePolynomial(5, {})
    for _ in range(20):
        q1 = random_poly(rng, 5)
        q2 = random_poly(rng, 5)
        i, j = rng.sample(range(1, 6), 2)
        li = lupi.project_linear
        # idempotence
        assert li(li(q1, i), i) == li(q1, i)
        # commutation
        assert li(li(q1, j), i) == li(li(q1, i), j)
        # linearity
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        assert li(q1.scale(a) + q2.scale(b), i) == li(q1, i).scale(a) + li(q2, i).scale(b)
        # commutation with elimination
        assert lupi.eliminate(li(q1, i), j) == li(lupi.eliminate(q1, j), i)
        # delta action on monomials
        m = rng.randint(0, 5)
        a = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        mono = lupi.SparsePolynomial(5, {(0, 0, m, 0, 0): a})
        expected = lupi.SparsePolynomial(5, {(0, 0, 1, 0, 0): a} if m == 1 else {})
        assert li(mono, 3) == expected
    # annihilation of already-projected outcome polynomials
    for n in (4, 5):
        for k in range(n + 1):
            q = lupi.no_winner_poly(n, k)
            for i in range(1, k + 1):
                assert lupi.project_linear(q, i) == lupi.SparsePolynomial(n, {})
    assert zero == zero


@criterion(9, "ten-million-round simulation at the five-player equilibrium, < 60 s")
def test_c09_monte_carlo_consistency():
    sol = lupi.solve_ne(5)
    assert sol.converged
    start = time.perf_counter()
    stats = lupi.simulate(sol.strategy, sol.strategy, 10**7, seed=20240917)
    elapsed = time.perf_counter() - start
    for k in range(5):
        est, err = stats.est_ci[k], stats.std_err[k]
        assert est is not None
        assert abs(est - sol.c_ne) <= 4 * err
    repeat = lupi.simulate(sol.strategy, sol.strategy, 10**7, seed=20240917)
    assert repeat.to_json_obj() == stats.to_json_obj()
    assert elapsed < 60.0


@criterion(10, "comparison payoffs: closed forms, dominance chain, theoretical cap")
def test_c10_comparison_payoffs():
    for n in range(3, 13):
        assert abs(lupi.symmetric_payoff(Strategy.zeng(n)) - 2.0 ** (1 - n)) <= 1e-14
    payoffs = {}
    for n in range(4, 13):
        sol = lupi.solve_ne(n)
        assert sol.converged
        payoffs[n] = (
            lupi.symmetric_payoff(Strategy.uniform(n)),
            sol.c_ne,
            lupi.symmetric_payoff(Strategy.zeng(n)),
            lupi.symmetric_payoff(Strategy.flitney(n)),
        )
    for n, (w_uniform, c_ne, w_zeng, w_flitney) in payoffs.items():
        for w in (w_uniform, c_ne, w_zeng, w_flitney):
            assert w <= 1.0 / n + 1e-15
        assert w_uniform > c_ne, f"n={n}"
        assert c_ne > max(w_zeng, w_flitney), (
            f"n={n}: c_ne={c_ne:.6f} <= max(zeng={w_zeng:.6f}, flitney={w_flitney:.6f})"
        )


@criterion(11, "uniform-play win chances reach the large-game limit at n = 10^4")
def test_c11_asymptotics():
    s = Strategy.uniform(10**4)
    for i in range(1, 11):
        gap = abs(lupi.win_prob(i, s) - lupi.uniform_asymptotic_win_prob(i))
        assert gap <= 1e-3, f"i={i}: gap {gap:.2e}"


@criterion(12, "uniform is the best symmetric strategy for every n up to 12")
def test_c12_uniform_optimality():
    rng = np.random.default_rng(1212)
    for n in range(3, 13):
        optimum = lupi.best_symmetric(n)
        assert np.max(np.abs(optimum.strategy.probs - 1.0 / n)) <= 1e-6, f"n={n}"
        w_uniform = lupi.symmetric_payoff(Strategy.uniform(n))
        for _ in range(100):
            raw = 1.0 / n + 0.1 * (rng.random(n) - 0.5)
            raw = np.clip(raw, 1e-6, None)
            s = Strategy(raw / raw.sum())
            assert lupi.symmetric_payoff(s) <= w_uniform + 1e-15


@criterion(13, "ordering identity holds at every solved equilibrium, fails at uniform")
def test_c13_ordering_inequality():
    for n in range(3, 13):
        sol = lupi.solve_ne(n)
        assert lupi.verify_ordering_inequality(sol.strategy), f"n={n}"
    assert not lupi.verify_ordering_inequality(Strategy.uniform(5))


@criterion(14, "twelve-player equilibrium at tight residual, < 60 s")
def test_c14_scale_ceiling():
    start = time.perf_counter()
    sol = lupi.solve_ne(12)
    elapsed = time.perf_counter() - start
    assert sol.converged
    assert sol.residual <= 1e-10
    assert elapsed < 60.0
