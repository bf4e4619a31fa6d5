"""Enumeration oracle self-checks and simulator reproducibility."""

import json
import math
from itertools import combinations_with_replacement

import numpy as np
import pytest

from lupi import (
    GENERATOR_NAME,
    ChoiceProfile,
    ResourceLimitError,
    Strategy,
    exact_win_prob,
    lowest_unique_winner,
    simulate,
    win_prob,
)
from lupi.oracle import _round_winners


def random_strategy(rng, n):
    raw = rng.random(n) + 1e-3
    return Strategy(raw / raw.sum())


def occupancy_total(probs):
    """Unrestricted multinomial total, written independently of the oracle:
    must be 1 because the occupancy vectors partition the outcome space."""
    n = len(probs)
    total = 0.0
    for picks in combinations_with_replacement(range(n), n - 1):
        counts = [0] * n
        for j in picks:
            counts[j] += 1
        ways = math.factorial(n - 1)
        weight = 1.0
        for j, k in enumerate(counts):
            ways //= math.factorial(k)
            weight *= probs[j] ** k
        total += ways * weight
    return total


class TestExactWinProb:
    def test_partition_of_unity(self):
        rng = np.random.default_rng(11)
        for n in (3, 4, 5, 6):
            s = random_strategy(rng, n)
            assert occupancy_total(list(s.probs)) == pytest.approx(1.0, abs=1e-12)

    def test_uniform3_values(self):
        s = Strategy.uniform(3)
        assert exact_win_prob(1, s) == pytest.approx(4 / 9, abs=1e-15)
        assert exact_win_prob(2, s) == pytest.approx(2 / 9, abs=1e-15)

    def test_forced_collision(self):
        # all three opponents pile on number 1, so picking 2 always wins
        s = Strategy([1.0, 0.0, 0.0, 0.0])
        assert exact_win_prob(2, s) == 1.0

    def test_matches_closed_form(self):
        rng = np.random.default_rng(13)
        for n in (3, 5, 7):
            for _ in range(10):
                s = random_strategy(rng, n)
                for i in range(1, n + 1):
                    assert abs(exact_win_prob(i, s) - win_prob(i, s)) <= 1e-12

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            exact_win_prob(1, Strategy.uniform(11))
        assert exact_win_prob(1, Strategy.uniform(11), max_players=11) > 0.0

    def test_bad_index(self):
        with pytest.raises(ValueError):
            exact_win_prob(0, Strategy.uniform(3))


class TestSimulate:
    def test_vectorized_winner_matches_rule(self):
        # the simulator's batched winner detection against the game rule
        rng = np.random.default_rng(101)
        for n in (3, 5, 8):
            picks = rng.integers(0, n, size=(500, n))
            has_winner, winning = _round_winners(picks, n)
            for row in range(picks.shape[0]):
                profile = ChoiceProfile(tuple(int(v) + 1 for v in picks[row]), n)
                result = lowest_unique_winner(profile)
                if result is None:
                    assert not has_winner[row]
                else:
                    assert has_winner[row]
                    assert winning[row] + 1 == result[1]

    def test_bitwise_reproducible(self):
        u = Strategy.uniform(3)
        a = simulate(u, u, 50_000, seed=123)
        b = simulate(u, u, 50_000, seed=123)
        assert a.to_json_obj() == b.to_json_obj()

    def test_shard_structure_reported(self):
        u = Strategy.uniform(3)
        stats = simulate(u, u, 10_000, seed=5, shards=4)
        assert stats.shards == 4
        assert stats.generator == GENERATOR_NAME
        assert stats.seed == 5

    def test_different_seeds_agree_statistically(self):
        u = Strategy.uniform(3)
        a = simulate(u, u, 200_000, seed=1)
        b = simulate(u, u, 200_000, seed=2)
        spread = abs(a.w_estimate - b.w_estimate)
        assert spread <= 6 * math.hypot(a.w_std_err, b.w_std_err)

    def test_uniform3_win_rate(self):
        u = Strategy.uniform(3)
        stats = simulate(u, u, 200_000, seed=42)
        assert abs(stats.w_estimate - 8 / 27) <= 4 * stats.w_std_err

    def test_single_round(self):
        u = Strategy.uniform(3)
        stats = simulate(u, u, 1, seed=9)
        assert sum(stats.win_counts) in (0, 1)
        assert stats.rounds == 1

    def test_degenerate_point_mass(self):
        # the observed player always picks 1; opponents always collide on 2
        pi = Strategy([1.0, 0.0, 0.0])
        p = Strategy([0.0, 1.0, 0.0])
        stats = simulate(pi, p, 1_000, seed=3)
        assert stats.est_ci[0] == 1.0
        assert stats.est_ci[1] is None and stats.est_ci[2] is None
        assert stats.win_counts == [1_000, 0, 0]

    def test_zero_probability_numbers_never_picked(self):
        z = Strategy.zeng(5)
        stats = simulate(z, z, 20_000, seed=8)
        assert all(stats.est_ci[k] is None for k in range(2, 5))

    def test_estimates_near_analytic(self):
        p = Strategy([0.5, 0.3, 0.2])
        stats = simulate(Strategy.uniform(3), p, 300_000, seed=77)
        for i in range(1, 4):
            est, err = stats.est_ci[i - 1], stats.std_err[i - 1]
            assert est is not None
            assert abs(est - win_prob(i, p)) <= 4.5 * err

    def test_json_fields(self):
        u = Strategy.uniform(3)
        obj = simulate(u, u, 100, seed=0).to_json_obj()
        assert set(obj) == {
            "rounds",
            "win_counts",
            "est_ci",
            "std_err",
            "seed",
            "shards",
            "generator",
            "w_estimate",
            "w_std_err",
        }
        json.dumps(obj)  # nulls and numbers only, must round-trip

    def test_input_validation(self):
        u = Strategy.uniform(3)
        with pytest.raises(ValueError):
            simulate(u, u, 0, seed=1)
        with pytest.raises(ValueError):
            simulate(u, u, 10, seed=-1)
        with pytest.raises(ValueError):
            simulate(u, u, 10, seed=1, shards=0)
        with pytest.raises(ValueError):
            simulate(u, Strategy.uniform(4), 10, seed=1)
