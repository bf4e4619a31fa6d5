"""Independent ground truth: exact enumeration and seeded simulation.

Both routes here deliberately avoid the inclusion-exclusion algebra used by
:mod:`lupi.winprob`, so agreement between the two is a real check rather
than the same code twice.

The exact route enumerates occupancy vectors: how many opponents land on
each number. Win-with-``i`` status depends only on those counts, so the sum
runs over the ``C(2n-2, n-1)`` compositions of ``n - 1`` picks into ``n``
numbers instead of the ``n^(n-1)`` labeled outcomes.

The simulation route actually plays the game. Randomness comes from the
counter-based Philox 4x64 generator with 10 rounds, keyed by the 128-bit
pair ``(seed, shard_index)``; uniform doubles are the generator's 53-bit
variates, consumed round-major as one ``(rounds, n)`` matrix per block
(opponent columns first, the observed player last). A pick is the inverse
CDF of the strategy on right-closed intervals: with ``u`` uniform on
``[0, 1)``, ``v = 1 - u`` lies in ``(0, 1]`` and the pick is the smallest
``k`` whose cumulative probability is ``>= v``, so zero-probability numbers
are never picked. Everything downstream is integer counting, so the merged
result over shards equals the single-threaded result for the same
``(seed, shards)`` no matter how shards would be scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ORACLE_PLAYER_CAP_DEFAULT, ResourceLimitError
from .game import Strategy

GENERATOR_NAME = "philox4x64-10"

# Rounds are simulated in fixed-size blocks inside each shard; the block
# size is part of the reproducibility contract only in that it is constant.
_BLOCK_ROUNDS = 1 << 16


@dataclass(frozen=True)
class SimulationStats:
    """Outcome counts and estimates from one simulation run.

    ``est_ci[i-1]`` estimates the win chance given the observed player
    picked ``i``, so it conditions on the pick count; numbers never picked
    carry ``None``. ``w_estimate`` is the unconditional win rate.
    """

    rounds: int
    win_counts: list[int]
    est_ci: list[float | None]
    std_err: list[float | None]
    seed: int
    shards: int
    generator: str
    w_estimate: float
    w_std_err: float

    def to_json_obj(self) -> dict:
        return {
            "rounds": self.rounds,
            "win_counts": list(self.win_counts),
            "est_ci": list(self.est_ci),
            "std_err": list(self.std_err),
            "seed": self.seed,
            "shards": self.shards,
            "generator": self.generator,
            "w_estimate": self.w_estimate,
            "w_std_err": self.w_std_err,
        }


def exact_win_prob(i: int, p: Strategy, *, max_players: int | None = None) -> float:
    """Win chance with number ``i`` by direct enumeration.

    Sums ``multinomial(n-1; k) * prod p_j^k_j`` over all occupancy vectors
    ``k`` of the opponents' picks with ``k_i = 0`` and no ``k_j = 1`` for
    ``j < i``. Exact up to floating-point rounding, no algebra shared with
    the closed-form evaluator.
    """
    n = p.n
    cap = ORACLE_PLAYER_CAP_DEFAULT if max_players is None else max_players
    if n > cap:
        raise ResourceLimitError(
            f"enumeration for n={n} has C({2 * n - 2},{n - 1}) occupancy vectors, "
            f"above the configured cap n={cap}"
        )
    if int(i) != i or not 1 <= i <= n:
        raise ValueError(f"number index {i} outside 1..{n}")
    probs = p.probs
    terms: list[float] = []

    def descend(number: int, remaining: int, ways: int, weight: float) -> None:
        # number is 0-based; ways carries the running multinomial count
        if number == n - 1:
            k = remaining
            if (number == i - 1 and k != 0) or (number < i - 1 and k == 1):
                return
            if k and probs[number] == 0.0:
                return
            terms.append(ways * weight * probs[number] ** k)
            return
        if number == i - 1:
            descend(number + 1, remaining, ways, weight)
            return
        for k in range(remaining + 1):
            if number < i - 1 and k == 1:
                continue
            if k and probs[number] == 0.0:
                continue
            descend(
                number + 1,
                remaining - k,
                ways * math.comb(remaining, k),
                weight * probs[number] ** k,
            )

    descend(0, n - 1, 1, 1.0)
    return math.fsum(terms)


def _round_winners(picks: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Winner status for a block of rounds.

    ``picks`` is (rounds, players) of 0-based numbers. Returns
    ``(has_winner, winning_number)``; the winning number is 0-based and
    meaningful only where ``has_winner`` is set.
    """
    block = picks.shape[0]
    counts = np.zeros((block, n), dtype=np.int16)
    rows = np.arange(block)
    for col in range(picks.shape[1]):
        counts[rows, picks[:, col]] += 1
    unique = counts == 1
    return unique.any(axis=1), unique.argmax(axis=1)


def simulate(
    pi: Strategy,
    p: Strategy,
    rounds: int,
    seed: int,
    *,
    shards: int = 1,
) -> SimulationStats:
    """Play ``rounds`` games: ``n - 1`` opponents on ``p``, observed player on ``pi``.

    Fully reproducible from ``(seed, shards)``. Rounds are split across
    shards as evenly as possible (earlier shards take the remainder); shard
    ``s`` draws from its own Philox stream keyed ``(seed, s)``, so the run
    could be executed shard-parallel and merged without changing a single
    count.

    Args:
        pi: Strategy of the observed player.
        p: Strategy of the other ``n - 1`` players.
        rounds: Number of independent games, at least 1.
        seed: 64-bit stream key.
        shards: Number of independent substreams.

    Returns:
        A :class:`SimulationStats` with per-number conditional win
        estimates and the overall win-rate estimate.
    """
    if pi.n != p.n:
        raise ValueError(f"strategies disagree on n: {pi.n} vs {p.n}")
    if int(rounds) != rounds or rounds < 1:
        raise ValueError(f"rounds must be a positive integer, got {rounds}")
    if int(shards) != shards or shards < 1:
        raise ValueError(f"shards must be a positive integer, got {shards}")
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise ValueError("seed must be an integer in [0, 2^64)")
    n = p.n

    cum_p = np.cumsum(p.probs)
    cum_pi = np.cumsum(pi.probs)
    cum_p[-1] = cum_pi[-1] = 1.0  # close the last interval exactly

    win_counts = np.zeros(n, dtype=np.int64)
    chosen_counts = np.zeros(n, dtype=np.int64)
    total_wins = 0

    base_rounds, extra = divmod(rounds, shards)
    for shard in range(shards):
        shard_rounds = base_rounds + (1 if shard < extra else 0)
        if shard_rounds == 0:
            continue
        key = np.array([seed, shard], dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        done = 0
        while done < shard_rounds:
            block = min(_BLOCK_ROUNDS, shard_rounds - done)
            u = rng.random((block, n))
            picks = np.empty((block, n), dtype=np.int64)
            picks[:, : n - 1] = np.searchsorted(cum_p, 1.0 - u[:, : n - 1], side="left")
            picks[:, n - 1] = np.searchsorted(cum_pi, 1.0 - u[:, n - 1], side="left")

            has_winner, winning_number = _round_winners(picks, n)
            observed = picks[:, n - 1]
            observed_won = has_winner & (winning_number == observed)

            chosen_counts += np.bincount(observed, minlength=n)
            win_counts += np.bincount(observed[observed_won], minlength=n)
            total_wins += int(observed_won.sum())
            done += block

    est: list[float | None] = []
    err: list[float | None] = []
    for k in range(n):
        if chosen_counts[k] == 0:
            est.append(None)
            err.append(None)
            continue
        rate = win_counts[k] / chosen_counts[k]
        est.append(float(rate))
        err.append(float(math.sqrt(rate * (1.0 - rate) / chosen_counts[k])))

    w = total_wins / rounds
    return SimulationStats(
        rounds=rounds,
        win_counts=[int(v) for v in win_counts],
        est_ci=est,
        std_err=err,
        seed=int(seed),
        shards=int(shards),
        generator=GENERATOR_NAME,
        w_estimate=float(w),
        w_std_err=float(math.sqrt(w * (1.0 - w) / rounds)),
    )
