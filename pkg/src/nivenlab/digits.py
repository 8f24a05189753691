"""Base-g digit arithmetic, Niven predicates and centred expansions.

Everything here works on exact rationals (``fractions.Fraction``); float
inputs are rejected because the digit-weight functions are discontinuous and
a rounded argument would silently change their value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _as_rational(alpha) -> Fraction:
    if isinstance(alpha, float):
        raise TypeError("exact rational required, got float")
    if isinstance(alpha, Rational):
        return Fraction(alpha)
    raise TypeError(f"exact rational required, got {type(alpha).__name__}")


def canonical_angle(alpha) -> Fraction:
    """Reduce an exact rational to its representative in [0, 1)."""
    return _as_rational(alpha) % 1


@dataclass(frozen=True)
class ProblemInstance:
    """A (g, K, M) problem size.

    ``M``, when present, must lie in (g**(K-1), g**K].  The derived
    statistics are recomputed on access so they can never go stale.
    """

    g: int
    K: int
    M: int | None = None

    def __post_init__(self):
        if self.g < 2:
            raise ValueError("base must be at least 2")
        if self.K < 1:
            raise ValueError("digit length must be at least 1")
        if self.M is not None:
            if not (self.g ** (self.K - 1) < self.M <= self.g**self.K):
                raise ValueError(
                    f"M={self.M} outside (g^(K-1), g^K] for g={self.g}, K={self.K}")

    @property
    def mean_digit_sum(self) -> Fraction:
        return Fraction((self.g - 1) * self.K, 2)

    @property
    def digit_variance(self) -> Fraction:
        return Fraction(self.g**2 - 1, 12)


def digit_sum(n: int, g: int) -> int:
    """Sum of the base-g digits of n >= 0."""
    if g < 2:
        raise ValueError("base must be at least 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    s = 0
    while n:
        n, d = divmod(n, g)
        s += d
    return s


def is_niven(n: int, g: int = 10) -> bool:
    """True iff n is divisible by its base-g digit sum (n >= 1)."""
    if n < 1:
        raise ValueError("Niven predicate undefined for n < 1")
    return n % digit_sum(n, g) == 0


def digit_range(g: int) -> tuple[int, int]:
    """Centred digit alphabet: [-(g-1)/2, (g-1)/2] for odd g,
    [-(g-2)/2, g/2] for even g."""
    if g % 2:
        return (-(g - 1) // 2, (g - 1) // 2)
    return (-(g - 2) // 2, g // 2)


def expansion_interval(g: int) -> tuple[Fraction, Fraction]:
    """Left-open, right-closed interval on which the centred expansion has no
    integer part."""
    if g % 2:
        return (Fraction(-1, 2), Fraction(1, 2))
    return (Fraction(-(g - 2), 2 * (g - 1)), Fraction(g, 2 * (g - 1)))


def reduce_to_interval(alpha, g: int) -> Fraction:
    """Translate an exact rational by an integer into the expansion interval.

    Reduces mod 1 into [0, 1) first, then subtracts 1 when the result exceeds
    the right endpoint; boundary ties follow the half-open convention.  (In
    base 2 the interval is (0, 1], so integers land on the all-ones
    representative 1.)
    """
    alpha = canonical_angle(alpha)
    _, hi = expansion_interval(g)
    if alpha > hi:
        return alpha - 1
    if alpha <= hi - 1:
        return alpha + 1
    return alpha


@dataclass(frozen=True)
class CenteredExpansion:
    """First K centred base-g digits of a rational in the expansion interval.

    ``exact`` is True iff the K digits reproduce the source exactly;
    ``nonzero_indices`` are the 1-based positions of the non-zero digits.
    """

    g: int
    digits: tuple[int, ...]
    nonzero_indices: tuple[int, ...]
    exact: bool

    def weight(self) -> int:
        return len(self.nonzero_indices)

    def partial_value(self) -> Fraction:
        g = self.g
        acc = Fraction(0)
        scale = Fraction(1)
        for d in self.digits:
            scale /= g
            acc += d * scale
        return acc


def _expand(alpha: Fraction, g: int, count: int) -> tuple[list[int], Fraction]:
    """Greedy digit extraction keeping every remainder inside the expansion
    interval; returns (digits, final remainder).  The left-open boundary makes
    the digit choice at ambiguous points deterministic."""
    lo, hi = expansion_interval(g)
    dlo, dhi = digit_range(g)
    r = alpha
    digits = []
    for _ in range(count):
        x = g * r
        eps = math.ceil(x - hi)
        r = x - eps
        if not (lo < r <= hi):  # pragma: no cover - guards the derivation
            raise AssertionError("remainder escaped the expansion interval")
        if not (dlo <= eps <= dhi):  # pragma: no cover
            raise AssertionError("digit escaped the centred alphabet")
        digits.append(eps)
    return digits, r


def centered_expand(alpha, g: int, K: int) -> CenteredExpansion:
    """Centred base-g expansion of an exact rational in the expansion
    interval, truncated to K digits."""
    alpha = _as_rational(alpha)
    if g < 2:
        raise ValueError("base must be at least 2")
    if K < 0:
        raise ValueError("K must be non-negative")
    lo, hi = expansion_interval(g)
    if not (lo < alpha <= hi):
        raise ValueError(
            f"{alpha} outside expansion interval ({lo}, {hi}]; reduce first")
    digits, rem = _expand(alpha, g, K)
    return CenteredExpansion(
        g=g,
        digits=tuple(digits),
        nonzero_indices=tuple(i for i, d in enumerate(digits, 1) if d),
        exact=(rem == 0),
    )


def nonzero_count(alpha, g: int, K: int) -> int:
    """Number of non-zero digits among the first K centred base-g digits,
    after canonical reduction into the expansion interval."""
    return centered_expand(reduce_to_interval(alpha, g), g, K).weight()


def alternation_count(alpha, K: int) -> int:
    """Number of adjacent unequal pairs among the first K+1 binary digits of
    alpha mod 1, with the non-terminating convention for dyadic rationals
    (so e.g. one half is taken as 0.0111...)."""
    r = canonical_angle(alpha)
    if r == 0:
        return 0
    # r in (0, 1]; digit 1 iff doubling exceeds 1 keeps the tail all-ones form
    digits = []
    for _ in range(K + 1):
        x = 2 * r
        d = 0 if x <= 1 else 1
        r = x - d
        digits.append(d)
    return sum(1 for i in range(K) if digits[i] != digits[i + 1])


def frac_norm_sq_sum(alpha, g: int, K: int) -> Fraction:
    """Exact value of sum_{i=0}^{K-1} ||g**i * alpha||^2, where ||x|| is the
    distance from x to the nearest integer."""
    alpha = _as_rational(alpha)
    q = alpha.denominator
    p = alpha.numerator % q
    total = 0
    for _ in range(K):
        m = min(p, q - p)
        total += m * m
        p = (p * g) % q
    return Fraction(total, q * q)


@dataclass(frozen=True)
class WeightNormReport:
    lhs: Fraction
    mid: Fraction
    rhs: Fraction
    holds: bool


def weight_norm_check(alpha, g: int, K: int) -> WeightNormReport:
    """Exact check of w/(16 g^2) <= sum ||g^i alpha||^2 <= w with w the
    non-zero digit count; valid for g >= 3 only."""
    if g == 2:
        raise ValueError("the weight/norm sandwich fails in base 2")
    if g < 2:
        raise ValueError("base must be at least 2")
    w = nonzero_count(alpha, g, K)
    mid = frac_norm_sq_sum(alpha, g, K)
    lhs = Fraction(w, 16 * g * g)
    rhs = Fraction(w)
    return WeightNormReport(lhs, mid, rhs, lhs <= mid <= rhs)


@dataclass(frozen=True)
class SubadditivityReport:
    w_diff: int
    w_a: int
    w_b: int
    bound: int
    holds: bool


def weight_subadditivity_check(alpha, beta, g: int, K: int) -> SubadditivityReport:
    """Checks w(alpha - beta) <= 48 g^2 (w(alpha) + w(beta)); the constant
    chains the 16 g^2 sandwich with (a+b)^2 <= 3a^2 + 3b^2."""
    wa = nonzero_count(alpha, g, K)
    wb = nonzero_count(beta, g, K)
    wd = nonzero_count(_as_rational(alpha) - _as_rational(beta), g, K)
    bound = 48 * g * g * (wa + wb)
    return SubadditivityReport(wd, wa, wb, bound, wd <= bound)


@dataclass(frozen=True)
class ReciprocalWeightReport:
    weight: int
    bound: Fraction
    holds: bool


def reciprocal_weight_check(j: int, k: int, g: int, K: int) -> ReciprocalWeightReport:
    """For (k, g) = 1 and k not dividing j, the centred expansion of j/k must
    have more than K/ceil(log_g k) - 1 non-zero digits in its first K."""
    if math.gcd(k, g) != 1:
        raise ValueError("k must be coprime to g")
    if j % k == 0:
        raise ValueError("j must not be divisible by k")
    w = nonzero_count(Fraction(j, k), g, K)
    # ceil(log_g k) computed exactly: least e with g**e >= k
    e = 0
    power = 1
    while power < k:
        power *= g
        e += 1
    bound = Fraction(K, max(e, 1)) - 1
    return ReciprocalWeightReport(w, bound, w > bound)
