"""Digit-sum-restricted exponential sums and their certificates.

Angles are exact rationals throughout: for theta = p/q every phase that
enters a kernel is reduced mod 1 in integer arithmetic, once per (digit
position, digit value) pair, and only then converted to floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .counting import ENUM_BUDGET, count_fixed_sum, count_niven_fixed_sum, digit_sums_vector
from .digits import ProblemInstance, canonical_angle, frac_norm_sq_sum
from .errors import BudgetExceededError


@dataclass(frozen=True)
class SetSpec:
    """Digit-sum-restricted set: {n < g**K : digit_sum(n) = k}, optionally
    cut down to its Niven members (k | n)."""

    instance: ProblemInstance
    k: int
    niven: bool = False

    def __post_init__(self):
        if not 0 <= self.k <= (self.g - 1) * self.K:
            raise ValueError("digit-sum target outside [0, (g-1)K]")
        if self.niven and self.k < 1:
            raise ValueError("Niven restriction needs k >= 1")

    @property
    def g(self) -> int:
        return self.instance.g

    @property
    def K(self) -> int:
        return self.instance.K

    def size(self) -> int:
        if self.niven:
            return count_niven_fixed_sum(self.g, self.K, self.k)
        return count_fixed_sum(self.g, self.K, self.k)


@dataclass(frozen=True)
class PhaseEvaluation:
    theta: Fraction
    value: complex
    method: str
    certified_abs_bound: float | None = None


def e_of(frac: Fraction) -> complex:
    """e(x) = exp(2 pi i x) for an exact rational, reduced mod 1 first."""
    t = frac % 1
    return cmath.exp(2j * math.pi * (t.numerator / t.denominator))


def digit_phase_fracs(theta: Fraction, g: int, K: int) -> np.ndarray:
    """(K, g) table of exactly reduced fractions frac(d * g**nu * theta)."""
    q = theta.denominator
    p = theta.numerator % q
    out = np.empty((K, g), dtype=np.float64)
    r = p
    for nu in range(K):
        for d in range(g):
            out[nu, d] = ((d * r) % q) / q
        r = (r * g) % q
    return out


def exp_sum(spec: SetSpec, theta) -> PhaseEvaluation:
    """Sum of e(n theta) over the spec's set, by polynomial DP over digit
    positions (Niven specs go through the divisor translate identity)."""
    theta = canonical_angle(theta)
    if spec.niven:
        return niven_exp_sum(spec, theta)
    fracs = digit_phase_fracs(theta, spec.g, spec.K)
    value = complex(_kernels.phase_dp_batch(fracs[None, :, :], spec.k)[0])
    assert abs(value) <= spec.size() + 1e-9 * spec.g**spec.K
    return PhaseEvaluation(theta=theta, value=value, method="polynomial-dp")


def exp_sum_batch(spec: SetSpec, thetas) -> np.ndarray:
    """Vectorised plain exponential sums for many angles."""
    if spec.niven:
        raise ValueError("batch route covers plain digit-sum sets only")
    g, K = spec.g, spec.K
    thetas = [canonical_angle(t) for t in thetas]
    fracs = np.empty((len(thetas), K, g), dtype=np.float64)
    for i, t in enumerate(thetas):
        fracs[i] = digit_phase_fracs(t, g, K)
    return _kernels.phase_dp_batch(fracs, spec.k)


def exp_sum_enum(spec: SetSpec, theta) -> PhaseEvaluation:
    """Direct enumeration oracle (budgeted)."""
    g, K = spec.g, spec.K
    if g**K > ENUM_BUDGET:
        raise BudgetExceededError(f"enumeration over {g**K} elements refused")
    theta = canonical_angle(theta)
    ds = digit_sums_vector(g, K)
    n = np.flatnonzero(ds == spec.k).astype(np.int64)
    if spec.niven:
        n = n[(n % spec.k == 0) & (n > 0)]
    q, p = theta.denominator, theta.numerator % theta.denominator
    if p and n.size and int(n.max()) * p >= 2**62:
        residues = [(int(v) * p) % q for v in n]  # exact path for huge q
        fr = np.array(residues, dtype=np.float64) / q
    else:
        fr = ((n * p) % q) / q
    value = complex(np.exp(2j * np.pi * fr).sum()) if n.size else 0j
    return PhaseEvaluation(theta=theta, value=value, method="enumeration")


def niven_exp_sum(spec: SetSpec, theta) -> PhaseEvaluation:
    """Niven-restricted sum via the divisor orthogonality identity:
    (1/k) sum_{j<k} f(theta + j/k)."""
    if not spec.niven:
        spec = SetSpec(spec.instance, spec.k, niven=True)
    theta = canonical_angle(theta)
    plain = SetSpec(spec.instance, spec.k, niven=False)
    k = spec.k
    translates = [theta + Fraction(j, k) for j in range(k)]
    vals = exp_sum_batch(plain, translates)
    value = complex(vals.sum()) / k
    assert abs(value) <= spec.size() + 1e-9 * spec.g**spec.K
    return PhaseEvaluation(theta=theta, value=value, method="divisor-translates")


@dataclass(frozen=True)
class TranslationReport:
    lhs: complex
    rhs: complex
    diff: float
    tol: float
    holds: bool


def translation_check(spec: SetSpec, theta, x: int) -> TranslationReport:
    """f(theta + x/(g-1)) must equal e(k x / (g-1)) f(theta)."""
    theta = canonical_angle(theta)
    g = spec.g
    lhs = exp_sum(spec, theta + Fraction(x, g - 1)).value
    rhs = e_of(Fraction(spec.k * x, g - 1)) * exp_sum(spec, theta).value
    tol = 1e-9 * g**spec.K
    diff = abs(lhs - rhs)
    return TranslationReport(lhs, rhs, diff, tol, diff <= tol)


def geometric_phase_sum(alpha, g: int) -> complex:
    """U(alpha) = sum_{j<g} e(j alpha), by the closed geometric form with the
    integer-alpha branch exact."""
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        a = canonical_angle(Fraction(alpha))
        if a == 0:
            return complex(g)
        num = e_of(Fraction(g) * a) - 1
        den = e_of(a) - 1
        return num / den
    a = float(alpha) % 1.0
    z = cmath.exp(2j * math.pi * a)
    if abs(z - 1) < 1e-9:
        return complex(sum(cmath.exp(2j * math.pi * ((j * a) % 1.0)) for j in range(g)))
    return (z**g - 1) / (z - 1)


def _norm_dist(x) -> float:
    if isinstance(x, Fraction) or isinstance(x, int):
        t = canonical_angle(Fraction(x))
        return float(min(t, 1 - t))
    t = float(x) % 1.0
    return min(t, 1.0 - t)


@dataclass(frozen=True)
class PairBoundReport:
    lhs: float
    rhs: float
    holds: bool


def phase_pair_check(t, t0, g: int) -> PairBoundReport:
    """|U(t) U(t+t0)| <= g^2 exp(-||t0||^2 / g)."""
    lhs = abs(geometric_phase_sum(t, g) * geometric_phase_sum(
        t + t0 if isinstance(t, Fraction) else float(t) + float(t0), g))
    d = _norm_dist(t0)
    rhs = g * g * math.exp(-d * d / g)
    return PairBoundReport(lhs, rhs, lhs <= rhs + 1e-12 * g * g)


@dataclass(frozen=True)
class DecayCertificate:
    theta: Fraction
    lhs: float
    rhs: float
    norm_sum: Fraction
    slack: float
    holds: bool

    @property
    def margin(self) -> float:
        return self.rhs + self.slack - self.lhs


def _certificate(spec: SetSpec, theta: Fraction, abs_value: float) -> DecayCertificate:
    g, K = spec.g, spec.K
    s = frac_norm_sq_sum((g - 1) * theta, g, K)
    rhs = g**K * math.exp(-float(s) / (2 * g))
    slack = 1e-6 * g**K
    return DecayCertificate(theta=theta, lhs=abs_value, rhs=rhs, norm_sum=s,
                            slack=slack, holds=abs_value <= rhs + slack)


def decay_certificate(spec: SetSpec, theta) -> DecayCertificate:
    """Unconditional upper bound |f(theta)| <= g^K exp(-(1/2g) sum_i
    ||g^i (g-1) theta||^2), with the norm sum evaluated exactly."""
    theta = canonical_angle(theta)
    return _certificate(spec, theta, abs(exp_sum(spec, theta).value))


def digit_phase_average(g: int, m: int, theta, r: int) -> complex:
    """Average of e(g^{m-1} Y beta) over the centred digit Y, where
    beta = theta - r/(g-1)."""
    beta = canonical_angle(theta) - Fraction(r, g - 1)
    scale = Fraction(g ** (m - 1), 2)
    acc = 0j
    for d in range(g):
        acc += e_of(scale * (2 * d - (g - 1)) * beta)
    return acc / g


def block_phase_average(g: int, m: int, T: int, theta, r: int) -> complex:
    """Average of e(sum_{j=m-T}^{m-1} Y_j g^j beta) over T i.i.d. centred
    digits, by the closed geometric-sum form."""
    if T < 0 or T > m:
        raise ValueError("need 0 <= T <= m")
    if T == 0:
        return 1 + 0j
    beta = canonical_angle(theta) - Fraction(r, g - 1)
    base = g ** (m - T)
    gamma = e_of(-Fraction(base * (g**T - 1), 2) * beta)
    step = canonical_angle(base * beta)
    if step == 0:
        return gamma
    num = e_of(Fraction(g**T) * step) - 1
    den = e_of(step) - 1
    return gamma * num / (g**T * den)


def block_phase_average_enum(g: int, m: int, T: int, theta, r: int,
                             budget: int = 200_000) -> complex:
    """Brute-force average over all g**T digit blocks (oracle)."""
    if g**T > budget:
        raise BudgetExceededError(f"{g**T} digit blocks exceed budget")
    if T == 0:
        return 1 + 0j
    beta = canonical_angle(theta) - Fraction(r, g - 1)
    acc = 0j
    for b in range(g**T):
        phase = Fraction(0)
        v = b
        for j in range(m - T, m):
            v, d = divmod(v, g)
            phase += Fraction(g**j * (2 * d - (g - 1)), 2) * beta
        acc += e_of(phase)
    return acc / g**T


def block_phase_bound(g: int, T: int) -> float:
    """Explicit cancellation bound 4 / (delta_g g^T) with
    delta_g = |1 - e(1/(g-1))|."""
    delta = abs(1 - cmath.exp(2j * math.pi / (g - 1)))
    return 4.0 / (delta * g**T)
