"""Exact set and representation counts plus their main-term predictors.

All counts are arbitrary-precision integers.  The triple-representation DP
runs modulo a vector of 30-bit primes inside a numpy/numba kernel and is
reconstructed exactly by CRT; the prime budget is sized from the trivial
bound g**(3K) so overflow is structurally impossible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import _kernels
from .errors import BudgetExceededError
from .llt import exact_pmf, sigma_sq

ENUM_BUDGET = 20_000_000         # largest g**K any enumeration oracle accepts
CONVOLUTION_BUDGET = 4_000_000   # largest g**K for the Niven triple-count route


def count_fixed_sum(g: int, K: int, k: int) -> int:
    """Number of K-digit base-g strings (leading zeros allowed) with digit
    sum exactly k."""
    if not 0 <= k <= (g - 1) * K:
        raise ValueError("digit-sum target outside [0, (g-1)K]")
    return exact_pmf(g, K).raw[k]


def digit_sums_vector(g: int, K: int) -> np.ndarray:
    """Digit sums of 0..g**K-1 as an int16 array (enumeration helper)."""
    n = g**K
    if n > ENUM_BUDGET:
        raise BudgetExceededError(f"enumeration over {n} elements refused")
    tmp = np.arange(n, dtype=np.int64)
    ds = np.zeros(n, dtype=np.int16)
    for _ in range(K):
        ds += (tmp % g).astype(np.int16)
        tmp //= g
    return ds


def count_fixed_sum_enum(g: int, K: int, k: int) -> int:
    return int(np.count_nonzero(digit_sums_vector(g, K) == k))


@lru_cache(maxsize=4096)
def count_niven_fixed_sum(g: int, K: int, k: int) -> int:
    """Number of n < g**K with digit sum k and k | n, by DP over
    (position, partial digit sum, partial residue mod k)."""
    if k < 1:
        raise ValueError("divisibility target k must be positive")
    if k > (g - 1) * K:
        return 0
    # table[s][rho] = count of prefixes with digit sum s, value residue rho
    table = [[0] * k for _ in range(k + 1)]
    table[0][0] = 1
    power = 1 % k
    for _ in range(K):
        new = [[0] * k for _ in range(k + 1)]
        for s in range(k + 1):
            row = table[s]
            for rho in range(k):
                c = row[rho]
                if c:
                    for d in range(min(g - 1, k - s) + 1):
                        new[s + d][(rho + d * power) % k] += c
        table = new
        power = (power * g) % k
    return table[k][0]


def count_niven_fixed_sum_enum(g: int, K: int, k: int) -> int:
    ds = digit_sums_vector(g, K)
    n = np.arange(len(ds), dtype=np.int64)
    return int(np.count_nonzero((ds == k) & (n % k == 0) & (n > 0)))


def _m_digits(M: int, g: int, K: int) -> list[int] | None:
    """LSB-first digits of M padded to K+1 positions; None when the final
    carry can never match (count is zero)."""
    digs = []
    m = M
    for _ in range(K):
        m, d = divmod(m, g)
        digs.append(d)
    if m > 2:
        return None
    digs.append(m)
    return digs


def count_triple_reps(g: int, K: int, k_triple, M: int) -> int:
    """Exact |{(a,b,c) in S1 x S2 x S3 : a+b+c = M}| where S_i is the set of
    n < g**K with digit sum k_i."""
    k1, k2, k3 = k_triple
    if M < 0:
        raise ValueError("M must be non-negative")
    for k in (k1, k2, k3):
        if not 0 <= k <= (g - 1) * K:
            return 0
    digs = _m_digits(M, g, K)
    if digs is None:
        return 0
    n_primes = (3 * K * max(1, math.ceil(math.log2(g)))) // 29 + 2
    primes = _kernels.crt_primes(n_primes)
    res = _kernels.reps_dp(np.array(digs, dtype=np.int64), g, k1, k2, k3,
                           np.array(primes, dtype=np.int64))
    return _kernels.crt_combine(res, primes)


def count_triple_reps_ref(g: int, K: int, k_triple, M: int) -> int:
    """Pure-Python dict DP; reference oracle for the modular kernel."""
    k1, k2, k3 = k_triple
    digs = _m_digits(M, g, K)
    if digs is None:
        return 0
    states = {(0, 0, 0, 0): 1}
    for j in range(K):
        mj = digs[j]
        new = {}
        for (cin, s1, s2, s3), c in states.items():
            for a in range(min(g - 1, k1 - s1) + 1):
                for b in range(min(g - 1, k2 - s2) + 1):
                    c3 = (mj - a - b - cin) % g
                    if s3 + c3 > k3:
                        continue
                    cout = (a + b + c3 + cin - mj) // g
                    key = (cout, s1 + a, s2 + b, s3 + c3)
                    new[key] = new.get(key, 0) + c
        states = new
    return states.get((digs[K], k1, k2, k3), 0)


def count_triple_reps_enum(g: int, K: int, k_triple, M: int) -> int:
    """Brute-force oracle: enumerate two sets, finish by membership lookup."""
    ds = digit_sums_vector(g, K)
    sets = [np.flatnonzero(ds == k).astype(np.int64) for k in k_triple]
    member3 = np.zeros(g**K, dtype=bool)
    member3[sets[2]] = True
    total = 0
    for n1 in sets[0]:
        rest = M - int(n1) - sets[1]
        ok = (rest >= 0) & (rest < g**K)
        total += int(np.count_nonzero(member3[rest[ok]]))
    return total


def count_niven_triple_reps(g: int, K: int, k_triple, M: int,
                            budget: int = CONVOLUTION_BUDGET) -> int:
    """Exact |{(a,b,c) in N1 x N2 x N3 : a+b+c = M}|, N_i the Niven members
    of S_i, via the indicator arrays of the three sets."""
    if any(k < 1 for k in k_triple):
        raise ValueError("Niven targets must be positive")
    n = g**K
    if n > budget:
        raise BudgetExceededError(
            f"g**K = {n} exceeds the convolution budget {budget}; reduce K")
    ds = digit_sums_vector(g, K)
    idx = np.arange(n, dtype=np.int64)
    sets = [idx[(ds == k) & (idx % k == 0) & (idx > 0)] for k in k_triple]
    member3 = np.zeros(n, dtype=bool)
    member3[sets[2]] = True
    total = 0
    for n1 in sets[0]:
        rest = M - int(n1) - sets[1]
        ok = (rest >= 0) & (rest < n)
        total += int(np.count_nonzero(member3[rest[ok]]))
    return total


def density_constant(k_triple, g: int) -> Fraction:
    """4/(g-1)^2 times the product of gcd(g-1, k_i)."""
    c = Fraction(4, (g - 1) ** 2)
    for k in k_triple:
        c *= math.gcd(g - 1, k)
    return c


def triple_main_term(g: int, K: int, M: int) -> float:
    """(g-1) M^2 / (2 (2 pi sigma^2 K)^{3/2}) at working precision well above
    double, so the K^{9/2}-scale products stay stable."""
    with mpmath.workdps(40):
        var = mpmath.mpf(sigma_sq(g).numerator) / sigma_sq(g).denominator
        val = (g - 1) * mpmath.mpf(M) ** 2 / (2 * (2 * mpmath.pi * var * K) ** mpmath.mpf("1.5"))
        return float(val)


def niven_triple_main_term(g: int, K: int, k_triple, M: int) -> float:
    """c * M^2 / ((2 pi sigma^2)^{3/2} K^{9/2}) with c the gcd density
    constant."""
    c = density_constant(k_triple, g)
    with mpmath.workdps(40):
        var = mpmath.mpf(sigma_sq(g).numerator) / sigma_sq(g).denominator
        cc = mpmath.mpf(c.numerator) / c.denominator
        val = cc * mpmath.mpf(M) ** 2 / ((2 * mpmath.pi * var) ** mpmath.mpf("1.5")
                                         * mpmath.mpf(K) ** mpmath.mpf("4.5"))
        return float(val)


def fixed_sum_size_estimate(g: int, K: int) -> float:
    """g**K / sqrt(2 pi sigma^2 K)."""
    with mpmath.workdps(40):
        var = mpmath.mpf(sigma_sq(g).numerator) / sigma_sq(g).denominator
        return float(mpmath.mpf(g) ** K / mpmath.sqrt(2 * mpmath.pi * var * K))


def niven_size_estimate(g: int, K: int, k: int) -> float:
    """Predicted |N| = (gcd(k, g-1)/k) |S|."""
    return float(Fraction(math.gcd(k, g - 1), k) * count_fixed_sum(g, K, k))
