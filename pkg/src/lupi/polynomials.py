"""Exact sparse polynomials over the choice probabilities ``p_1..p_n``.

This is the ground-truth layer behind the floating-point evaluator in
:mod:`lupi.winprob`. Everything here uses arbitrary-precision rational
coefficients: the alternating-sign structure of the win-probability
construction invites catastrophic cancellation, and the symbolic layer is
what the fast path is validated against, so it must be exact.

The construction works on the generating polynomial of the opponents'
outcomes, ``(p_1 + ... + p_n)^(n-1)``, whose expanded terms enumerate every
way the other ``n - 1`` players can distribute their picks. Three operators
drive it, all indexed by a 1-based variable position ``i``:

* ``differentiate``: partial derivative with respect to ``p_i``;
* ``eliminate``: substitute ``p_i = 0``, dropping every term containing it;
* ``project_linear``: keep exactly the terms linear in ``p_i`` (the rounds
  where number ``i`` is picked exactly once), realized as
  ``p_i * eliminate(differentiate(q, i), i)``.

Subtracting the linear projection index by index removes every "someone
wins at a number <= k" outcome, and eliminating ``p_i`` from the result
gives the exact polynomial for the chance of winning with number ``i``.

Expansion size grows like the central binomial coefficient, so builders
refuse ``n`` above a configurable cap (default 8, env ``LUPI_N_MAX_SYMBOLIC``);
larger games belong to the closed-form evaluator.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from .config import ResourceLimitError, n_max_symbolic

Exponents = tuple[int, ...]


class SparsePolynomial:
    """Polynomial in ``p_1..p_nvars`` stored as ``{exponent tuple: coefficient}``.

    Coefficients are exact :class:`fractions.Fraction` values; terms with a
    zero coefficient are never stored. Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponents, object] | None = None) -> None:
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != nvars:
                raise ValueError(f"exponent tuple {key} has length {len(key)}, expected {nvars}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            c = Fraction(coeff)
            if c:
                clean[key] = c
        self.nvars = int(nvars)
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePolynomial":
        """The monomial ``p_i`` (``i`` is 1-based)."""
        _check_index(nvars, i)
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    # -- ring arithmetic -------------------------------------------------

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return SparsePolynomial(self.nvars, out)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) - c
        return SparsePolynomial(self.nvars, out)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def scale(self, factor) -> "SparsePolynomial":
        f = Fraction(factor)
        return SparsePolynomial(self.nvars, {e: c * f for e, c in self.terms.items()})

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check_compatible(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SparsePolynomial(self.nvars, out)

    def __pow__(self, power: int) -> "SparsePolynomial":
        if power < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePolynomial.constant(self.nvars, 1)
        base = self
        k = power
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries ----------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient_sum(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def evaluate(self, values: Iterable) -> Fraction | float:
        """Evaluate at a point; exact when every value is int or Fraction."""
        vals = list(values)
        if len(vals) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(vals)}")
        total = Fraction(0) if all(isinstance(v, (int, Fraction)) for v in vals) else 0.0
        for exps, coeff in self.terms.items():
            term = coeff if isinstance(total, Fraction) else float(coeff)
            for v, e in zip(vals, exps):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded lexicographic order: total degree first, ties broken
        lexicographically on the exponent tuple, both descending."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def canonical_text(self) -> str:
        """Canonical serialization: one ``num/den * p1^e1 ... pn^en`` line per
        term, in graded-lex order. The zero polynomial serializes to ''."""
        lines = []
        for exps, coeff in self.sorted_terms():
            monomial = " ".join(f"p{j + 1}^{e}" for j, e in enumerate(exps))
            lines.append(f"{coeff.numerator}/{coeff.denominator} * {monomial}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        if not self.terms:
            return f"SparsePolynomial(nvars={self.nvars}, 0)"
        parts = []
        for exps, coeff in self.sorted_terms()[:6]:
            mono = "".join(f"*p{j + 1}^{e}" for j, e in enumerate(exps) if e)
            parts.append(f"{coeff}{mono}")
        more = " + ..." if len(self.terms) > 6 else ""
        return f"SparsePolynomial(nvars={self.nvars}, {' + '.join(parts)}{more})"

    def _check_compatible(self, other: "SparsePolynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"mixing polynomials in {self.nvars} and {other.nvars} variables")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def differentiate(q: SparsePolynomial, i: int) -> SparsePolynomial:
    """Exact partial derivative with respect to ``p_i`` (1-based)."""
    _check_index(q.nvars, i)
    j = i - 1
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in q.terms.items():
        e = exps[j]
        if e == 0:
            continue
        key = exps[:j] + (e - 1,) + exps[j + 1 :]
        out[key] = out.get(key, Fraction(0)) + coeff * e
    return SparsePolynomial(q.nvars, out)


def eliminate(q: SparsePolynomial, i: int) -> SparsePolynomial:
    """Substitute ``p_i = 0``: drop every term containing ``p_i``."""
    _check_index(q.nvars, i)
    j = i - 1
    return SparsePolynomial(q.nvars, {e: c for e, c in q.terms.items() if e[j] == 0})


def project_linear(q: SparsePolynomial, i: int) -> SparsePolynomial:
    """Keep exactly the terms linear in ``p_i``.

    Acts on a monomial ``a * p_i^m`` as ``a * p_i`` when ``m == 1`` and as 0
    otherwise; equivalently ``p_i * eliminate(differentiate(q, i), i)``.
    """
    _check_index(q.nvars, i)
    j = i - 1
    reduced = eliminate(differentiate(q, i), i)
    out = {}
    for exps, coeff in reduced.terms.items():
        out[exps[:j] + (1,) + exps[j + 1 :]] = coeff
    return SparsePolynomial(q.nvars, out)


# ---------------------------------------------------------------------------
# game polynomials
# ---------------------------------------------------------------------------


def _compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``slots`` non-negative
    integers."""
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def opponents_outcome_poly(n: int, *, limit: int | None = None) -> SparsePolynomial:
    """Fully expanded ``(p_1 + ... + p_n)^(n-1)``.

    Each term is one multiset of picks the ``n - 1`` opponents can produce,
    weighted by its multinomial count; the coefficients sum to ``n^(n-1)``.
    """
    _check_symbolic_n(n, limit)
    fact = factorial(n - 1)
    terms: dict[Exponents, Fraction] = {}
    for exps in _compositions(n - 1, n):
        weight = fact
        for e in exps:
            weight //= factorial(e)
        terms[exps] = Fraction(weight)
    return SparsePolynomial(n, terms)


def no_winner_poly(n: int, k: int, *, limit: int | None = None) -> SparsePolynomial:
    """Outcome polynomial with every "winner at a number <= k" term removed.

    Built by the recursion that subtracts the linear-in-``p_i`` part index by
    index; after step ``i`` no surviving term is linear in ``p_1..p_i``.
    ``k = 0`` returns the raw outcome polynomial.
    """
    _check_k(n, k)
    q = opponents_outcome_poly(n, limit=limit)
    for i in range(1, k + 1):
        q = q - project_linear(q, i)
    return q


def no_winner_poly_by_subsets(n: int, k: int, *, limit: int | None = None) -> SparsePolynomial:
    """Same polynomial as :func:`no_winner_poly`, built the other way.

    Expands the product of ``(1 - projection)`` factors by
    inclusion-exclusion over subsets of ``{1..k}`` and applies each operator
    chain to the outcome polynomial independently. Exact agreement with the
    recursion is a correctness check on both routes.
    """
    _check_k(n, k)
    z0 = opponents_outcome_poly(n, limit=limit)
    total = SparsePolynomial(n)
    for mask in range(1 << k):
        q = z0
        bits = 0
        for i in range(1, k + 1):
            if mask >> (i - 1) & 1:
                q = project_linear(q, i)
                bits += 1
        total = total + (q if bits % 2 == 0 else -q)
    return total


def win_prob_poly(n: int, i: int, *, limit: int | None = None) -> SparsePolynomial:
    """Exact polynomial for the chance of winning with number ``i``.

    The focal player wins with ``i`` when, among the opponents, no number
    below ``i`` is picked exactly once and nobody picks ``i``: eliminate
    ``p_i`` from the no-winner polynomial of depth ``i - 1``. The result
    contains no ``p_i`` at all.
    """
    _check_index(n, i)
    return eliminate(no_winner_poly(n, i - 1, limit=limit), i)


def expansion_term_count(n: int) -> int:
    """Number of terms in the expanded outcome polynomial."""
    return comb(2 * n - 2, n - 1)


def _check_index(nvars: int, i: int) -> None:
    if int(i) != i or not 1 <= i <= nvars:
        raise ValueError(f"variable index {i} outside 1..{nvars}")


def _check_k(n: int, k: int) -> None:
    if int(k) != k or not 0 <= k <= n:
        raise ValueError(f"projection depth {k} outside 0..{n}")


def _check_symbolic_n(n: int, limit: int | None) -> None:
    if int(n) != n or n < 3:
        raise ValueError(f"the game is defined for n >= 3 players, got n={n}")
    cap = n_max_symbolic(limit)
    if n > cap:
        raise ResourceLimitError(
            f"symbolic expansion for n={n} has {expansion_term_count(n)} terms, "
            f"above the cap n={cap}; raise LUPI_N_MAX_SYMBOLIC or use the "
            f"closed-form evaluator"
        )
