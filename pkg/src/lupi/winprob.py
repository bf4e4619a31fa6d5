"""Closed-form win probabilities, payoffs, and gradients.

Scalable counterpart of the exact layer in :mod:`lupi.polynomials`. The
chance that a focal player wins with number ``i``, when the other ``n - 1``
players draw independently from ``p``, is an inclusion-exclusion sum over
which numbers below ``i`` end up picked exactly once:

    c_i(p) = sum over S subset of {1..i-1} of
             (-1)^|S| (n-1)(n-2)...(n-|S|) prod_{j in S} p_j
             (1 - p_i - sum_{j in S} p_j)^(n-1-|S|)

The falling factorial counts the ordered assignments of distinct opponents
to the uniquely picked numbers in ``S``; the power is the mass left to the
remaining opponents once ``S`` and ``i`` are excluded. The sum has
``2^(i-1)`` terms but no dependence on ``n`` beyond arithmetic, so small
``i`` works for arbitrarily large games. This closed form is not taken on
faith: the test suite derives it against the exact polynomial layer and the
enumeration oracle before anything else trusts it.

Terms alternate in sign, so sums are accumulated with ``math.fsum``
(exactly rounded compensated summation) over fixed-shape blocks; results do
not depend on how blocks would be scheduled across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .config import ResourceLimitError, subset_cap
from .game import Strategy

# Subsets are enumerated in bitmask order, materialized in blocks of at most
# 2^_BLOCK_BITS entries to keep memory flat at large indices.
_BLOCK_BITS = 18

_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class WinProbVector:
    """Per-number win chances ``values[i-1] = c_i(p)`` for one strategy."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if np.any(arr < -1e-9) or np.any(arr > 1.0 + 1e-9):
            raise ValueError("win probabilities must lie in [0, 1]")
        arr = np.clip(arr, 0.0, 1.0)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    def to_json_obj(self) -> dict:
        return {"values": [float(v) for v in self.values]}


@dataclass(frozen=True)
class PayoffReport:
    """Expected payoff of a focal player mixing with ``pi`` against ``p``.

    ``w`` is the expected win rate, the probability-weighted average of the
    per-number win chances actually used.
    """

    w: float
    per_number: WinProbVector

    def to_json_obj(self) -> dict:
        return {"w": self.w, "per_number": self.per_number.to_json_obj()}


# ---------------------------------------------------------------------------
# subset machinery
# ---------------------------------------------------------------------------


def _signed_falling(n: int, m: int) -> np.ndarray:
    """``coef[s] = (-1)^s (n-1)(n-2)...(n-s)`` for ``s = 0..m``.

    Built incrementally so large ``n`` never forms a full factorial.
    """
    out = np.empty(m + 1)
    acc = 1.0
    out[0] = acc
    for s in range(1, m + 1):
        acc *= -(n - s)
        out[s] = acc
    return out


def _subset_blocks(weights: np.ndarray) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(prod, total, size)`` over all subsets of ``weights``.

    Subset ``S`` is the bitmask of positions; arrays cover masks in
    increasing order, split into fixed blocks on the high bits.
    """
    m = len(weights)
    lo = min(m, _BLOCK_BITS)
    size_lo = 1 << lo
    prod = np.ones(size_lo)
    total = np.zeros(size_lo)
    size = np.zeros(size_lo, dtype=np.int64)
    for b in range(lo):
        half = 1 << b
        w = float(weights[b])
        prod[half : 2 * half] = prod[:half] * w
        total[half : 2 * half] = total[:half] + w
        size[half : 2 * half] = size[:half] + 1
    if m == lo:
        yield prod, total, size
        return
    for high_mask in range(1 << (m - lo)):
        hp, ht, hs = 1.0, 0.0, 0
        for b in range(m - lo):
            if high_mask >> b & 1:
                w = float(weights[lo + b])
                hp *= w
                ht += w
                hs += 1
        yield prod * hp, total + ht, size + hs


def _check_i(i: int, n: int) -> None:
    if int(i) != i or not 1 <= i <= n:
        raise ValueError(f"number index {i} outside 1..{n}")


def _check_cap(i: int, cap: int | None) -> None:
    limit = subset_cap(cap)
    if i - 1 > limit:
        raise ResourceLimitError(
            f"win probability for number {i} enumerates 2^{i - 1} subsets, "
            f"above the cap of 2^{limit}; raise LUPI_SUBSET_CAP to force it"
        )


def _ci_raw(i: int, probs: np.ndarray, n: int, cap: int | None = None) -> float:
    """The closed form at raw coordinates: no simplex validation.

    Only ``probs[0..i-1]`` are read; the tail enters through the total mass
    implied by ``1 - p_i - sum(S)``.
    """
    _check_cap(i, cap)
    coef = _signed_falling(n, i - 1)
    pi_val = float(probs[i - 1])
    parts = []
    for prod, total, size in _subset_blocks(probs[: i - 1]):
        base = 1.0 - pi_val - total
        term = coef[size] * prod * np.power(base, n - 1 - size)
        parts.append(math.fsum(term))
    return math.fsum(parts)


def _ci_raw_grid(
    i: int, prefix: np.ndarray, pi_values: np.ndarray, n: int, cap: int | None = None
) -> np.ndarray:
    """The closed form at many candidate values of ``p_i`` at once.

    ``prefix`` holds ``p_1..p_{i-1}``. Used by the sequential solver for
    sign scans; accuracy there is detection-grade, final roots are polished
    with the scalar evaluator.
    """
    _check_cap(i, cap)
    coef = _signed_falling(n, i - 1)
    pts = np.asarray(pi_values, dtype=float)
    out = np.zeros(pts.shape)
    for prod, total, size in _subset_blocks(np.asarray(prefix, dtype=float)):
        weight = (coef[size] * prod)[:, None]
        expo = (n - 1 - size)[:, None]
        # keep the (subsets x points) work matrix around 2^22 entries
        chunk = max(1, (1 << 22) // max(1, prod.size))
        for start in range(0, pts.size, chunk):
            stop = min(start + chunk, pts.size)
            base = 1.0 - total[:, None] - pts[None, start:stop]
            out[start:stop] += np.sum(weight * np.power(base, expo), axis=0)
    return out


def _c_vector_raw(probs: np.ndarray, n: int, cap: int | None = None) -> np.ndarray:
    """All of ``c_1..c_n`` at raw coordinates.

    One subset table over the first ``n - 1`` entries serves every index:
    the subsets of ``{1..i-1}`` are exactly the masks below ``2^(i-1)``, so
    each ``c_i`` is a prefix slice. Falls back to per-index evaluation when
    the table would not fit in one block.
    """
    _check_cap(n, cap)
    if n - 1 > _BLOCK_BITS:
        return np.array([_ci_raw(i, probs, n, cap) for i in range(1, n + 1)])
    coef = _signed_falling(n, n - 1)
    (prod, total, size), = _subset_blocks(np.asarray(probs[: n - 1], dtype=float))
    out = np.empty(n)
    for i in range(1, n + 1):
        k = 1 << (i - 1)
        base = 1.0 - float(probs[i - 1]) - total[:k]
        term = coef[size[:k]] * prod[:k] * np.power(base, n - 1 - size[:k])
        out[i - 1] = math.fsum(term)
    return out


def _c_matrix_raw(points: np.ndarray, n: int, cap: int | None = None) -> np.ndarray:
    """All of ``c_1..c_n`` for a batch of raw coordinate vectors.

    ``points`` has shape ``(k, n)``; returns the matching ``(k, n)`` matrix
    of win chances. Summation here is pairwise (``np.sum``), which is
    detection-grade: optimizer internals use this path, final reported
    values go through the compensated scalar path.
    """
    pts = np.asarray(points, dtype=float)
    k, width = pts.shape
    if width != n:
        raise ValueError(f"points have width {width}, expected {n}")
    _check_cap(n, cap)
    if n - 1 > _BLOCK_BITS or k * (1 << (n - 1)) > (1 << 24):
        return np.array([_c_vector_raw(row, n, cap) for row in pts])
    m = n - 1
    size_lo = 1 << m
    prod = np.ones((k, size_lo))
    total = np.zeros((k, size_lo))
    size = np.zeros(size_lo, dtype=np.int64)
    for b in range(m):
        half = 1 << b
        w = pts[:, b : b + 1]
        prod[:, half : 2 * half] = prod[:, :half] * w
        total[:, half : 2 * half] = total[:, :half] + w
        size[half : 2 * half] = size[:half] + 1
    coef = _signed_falling(n, m)
    out = np.empty((k, n))
    for i in range(1, n + 1):
        cols = 1 << (i - 1)
        base = 1.0 - pts[:, i - 1 : i] - total[:, :cols]
        expo = n - 1 - size[:cols]
        out[:, i - 1] = np.sum(coef[size[:cols]] * prod[:, :cols] * np.power(base, expo), axis=1)
    return out


def _ci_gradient_raw(i: int, probs: np.ndarray, n: int, cap: int | None = None) -> np.ndarray:
    """Gradient of the closed form at raw coordinates.

    The expression references only ``p_1..p_i``, so entries ``j > i`` are
    identically zero. Entry ``i`` differentiates the power factor; entries
    ``j < i`` use the product rule over the subsets containing ``j``,
    re-enumerated without ``j`` so no division by ``p_j`` is ever needed.
    """
    _check_cap(i, cap)
    out = np.zeros(len(probs))
    coef = _signed_falling(n, i - 1)
    pi_val = float(probs[i - 1])
    prefix = np.asarray(probs[: i - 1], dtype=float)

    parts = []
    for prod, total, size in _subset_blocks(prefix):
        base = 1.0 - pi_val - total
        factor = (n - 1 - size).astype(float)
        expo = np.maximum(n - 2 - size, 0)  # factor is 0 where the clamp bites
        parts.append(math.fsum(-coef[size] * prod * factor * np.power(base, expo)))
    out[i - 1] = math.fsum(parts)

    for j in range(i - 1):
        pj = float(prefix[j])
        others = np.delete(prefix, j)
        parts = []
        for prod, total, size in _subset_blocks(others):
            s = size + 1
            base = 1.0 - pi_val - pj - total
            factor = (n - 1 - s).astype(float)
            expo = np.maximum(n - 2 - s, 0)
            term = coef[s] * prod * (
                np.power(base, n - 1 - s) - pj * factor * np.power(base, expo)
            )
            parts.append(math.fsum(term))
        out[j] = math.fsum(parts)
    return out


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def win_prob(i: int, p: Strategy, *, cap: int | None = None) -> float:
    """Chance of winning with number ``i`` against ``n - 1`` players on ``p``.

    Cost is ``O(2^(i-1))``; refuses ``i - 1`` above the subset cap
    (default 25, env ``LUPI_SUBSET_CAP``).
    """
    _check_i(i, p.n)
    return _ci_raw(i, p.probs, p.n, cap)


def win_prob_vector(p: Strategy, *, cap: int | None = None) -> WinProbVector:
    """All per-number win chances ``c_1..c_n`` for strategy ``p``."""
    return WinProbVector(_c_vector_raw(p.probs, p.n, cap))


def expected_payoff(pi: Strategy, p: Strategy, *, cap: int | None = None) -> PayoffReport:
    """Expected win rate of a focal player mixing with ``pi`` while the
    others play ``p``: the ``pi``-weighted average of the ``c_i(p)``."""
    if pi.n != p.n:
        raise ValueError(f"strategies disagree on n: {pi.n} vs {p.n}")
    per = win_prob_vector(p, cap=cap)
    w = math.fsum(c * q for c, q in zip(per.values, pi.probs))
    return PayoffReport(w=w, per_number=per)


def symmetric_payoff(p: Strategy, *, cap: int | None = None) -> float:
    """Expected win rate when every player, focal included, uses ``p``."""
    return expected_payoff(p, p, cap=cap).w


def uniform_asymptotic_win_prob(i: int) -> float:
    """Large-game limit of ``c_i`` under uniform play:
    ``e^-1 (1 - e^-1)^(i-1)``."""
    if int(i) != i or i < 1:
        raise ValueError(f"number index {i} must be >= 1")
    return _INV_E * (1.0 - _INV_E) ** (i - 1)


def win_prob_gradient(i: int, p: Strategy, *, cap: int | None = None) -> np.ndarray:
    """Partial derivatives of ``win_prob(i, .)`` in all ``n`` coordinates.

    Derivatives are of the closed-form expression as written, without
    re-imposing the sum-to-one constraint; entries ``j > i`` are zero
    because the expression never references those coordinates. Simplex
    tangential derivatives are a caller-side chain rule.
    """
    _check_i(i, p.n)
    return _ci_gradient_raw(i, p.probs, p.n, cap)
