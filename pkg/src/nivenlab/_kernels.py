"""Hot numeric kernels, in numba and pure-numpy variants.

Two inner loops dominate the runtime of scans and sweeps:

* ``phase_dp_batch`` -- extracts the coefficient of ``x**k`` from the
  digit-position product ``prod_nu sum_d e(frac[nu,d]) x**d`` for a batch of
  angle tables.  This is the workhorse behind every exponential-sum
  evaluation.
* ``reps_dp`` -- counts, modulo a vector of primes, the ordered triples of
  K-digit strings with prescribed digit sums adding up to a target integer.
  Exact values are recovered by CRT in the caller.

Both kernels have bit-identical numpy fallbacks; ``nivenlab._backend``
decides which variant is exported as the unsuffixed name.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._backend import USE_NUMBA

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# phase-polynomial DP
# ---------------------------------------------------------------------------

def phase_dp_batch_np(fracs: np.ndarray, k: int) -> np.ndarray:
    """Pure-numpy variant.  ``fracs`` has shape (B, K, g) and holds exact
    mod-1 reduced phase fractions; returns shape (B,) complex values."""
    B, K, g = fracs.shape
    ph = np.exp(2j * np.pi * fracs)
    cur = np.zeros((B, k + 1), dtype=np.complex128)
    cur[:, 0] = 1.0
    for nu in range(K):
        new = np.zeros_like(cur)
        for d in range(min(g, k + 1)):
            new[:, d:] += ph[:, nu, d][:, None] * cur[:, : k + 1 - d]
        cur = new
    return cur[:, k].copy()


if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _phase_dp_batch_nb(fracs, k):  # pragma: no cover - jitted
        B, K, g = fracs.shape
        out = np.empty(B, dtype=np.complex128)
        for b in range(B):
            cur = np.zeros(k + 1, dtype=np.complex128)
            cur[0] = 1.0
            for nu in range(K):
                new = np.zeros(k + 1, dtype=np.complex128)
                for d in range(g):
                    if d > k:
                        break
                    ph = np.exp(2j * np.pi * fracs[b, nu, d])
                    for s in range(d, k + 1):
                        new[s] += ph * cur[s - d]
                cur = new
            out[b] = cur[k]
        return out

    def phase_dp_batch(fracs: np.ndarray, k: int) -> np.ndarray:
        return _phase_dp_batch_nb(np.ascontiguousarray(fracs, dtype=np.float64), k)

else:
    phase_dp_batch = phase_dp_batch_np


# ---------------------------------------------------------------------------
# triple-representation counting DP (modular)
# ---------------------------------------------------------------------------

def reps_dp_np(m_digits: np.ndarray, g: int, k1: int, k2: int, k3: int,
               primes: np.ndarray) -> np.ndarray:
    """Count mod each prime the triples (a, b, c) of K-digit base-g strings
    with digit sums (k1, k2, k3) whose values sum to the integer with LSB-first
    digits ``m_digits`` (length K+1; the final digit absorbs the carry)."""
    primes = np.asarray(primes, dtype=np.int64)
    K = len(m_digits) - 1
    tab = np.zeros((3, k1 + 1, k2 + 1, k3 + 1, len(primes)), dtype=np.int64)
    tab[0, 0, 0, 0, :] = 1
    for j in range(K):
        mj = int(m_digits[j])
        new = np.zeros_like(tab)
        for cin in range(3):
            for a in range(min(g, k1 + 1)):
                for b in range(min(g, k2 + 1)):
                    c3 = (mj - a - b - cin) % g
                    if c3 > k3:
                        continue
                    cout = (a + b + c3 + cin - mj) // g
                    new[cout, a:, b:, c3:, :] += \
                        tab[cin, : k1 + 1 - a, : k2 + 1 - b, : k3 + 1 - c3, :]
        new %= primes
        tab = new
    return tab[int(m_digits[K]), k1, k2, k3, :] % primes


if USE_NUMBA:

    @njit(cache=True)
    def _reps_dp_nb(m_digits, g, k1, k2, k3, primes):  # pragma: no cover - jitted
        P = primes.shape[0]
        K = m_digits.shape[0] - 1
        tab = np.zeros((3, k1 + 1, k2 + 1, k3 + 1, P), dtype=np.int64)
        for p in range(P):
            tab[0, 0, 0, 0, p] = 1
        for j in range(K):
            mj = m_digits[j]
            new = np.zeros_like(tab)
            for cin in range(3):
                for a in range(g):
                    if a > k1:
                        break
                    for b in range(g):
                        if b > k2:
                            break
                        c3 = (mj - a - b - cin) % g
                        if c3 > k3:
                            continue
                        cout = (a + b + c3 + cin - mj) // g
                        for s1 in range(k1 + 1 - a):
                            for s2 in range(k2 + 1 - b):
                                for s3 in range(k3 + 1 - c3):
                                    for p in range(P):
                                        new[cout, s1 + a, s2 + b, s3 + c3, p] += \
                                            tab[cin, s1, s2, s3, p]
            for p in range(P):
                pr = primes[p]
                for c in range(3):
                    for s1 in range(k1 + 1):
                        for s2 in range(k2 + 1):
                            for s3 in range(k3 + 1):
                                new[c, s1, s2, s3, p] %= pr
            tab = new
        out = np.empty(P, dtype=np.int64)
        for p in range(P):
            out[p] = tab[m_digits[K], k1, k2, k3, p] % primes[p]
        return out

    def reps_dp(m_digits, g, k1, k2, k3, primes):
        return _reps_dp_nb(np.asarray(m_digits, dtype=np.int64), g, k1, k2, k3,
                           np.asarray(primes, dtype=np.int64))

else:
    reps_dp = reps_dp_np


# ---------------------------------------------------------------------------
# CRT support
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def crt_primes(count: int) -> tuple[int, ...]:
    """First ``count`` primes descending from 2**30 (products of pairs stay
    inside int64 during the modular DP)."""
    primes = []
    n = 2**30 - 1
    while len(primes) < count:
        if _is_prime(n):
            primes.append(n)
        n -= 2
    return tuple(primes)


def crt_combine(residues, primes) -> int:
    """Reconstruct the unique integer in [0, prod primes) with the given
    residues."""
    x, m = 0, 1
    for r, p in zip(residues, primes):
        t = ((int(r) - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x
