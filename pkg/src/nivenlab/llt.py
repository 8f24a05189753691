"""Exact distribution of sums of centred uniform digits and its Gaussian
local-limit comparison.

A single index convention is used package-wide for centred sums: for odd g
the key of a centred sum nu is nu itself; for even g (where nu is
half-integral) the key is 2*nu, so keys are always integers.  Internally
tables are stored over the raw digit total t = nu + T(g-1)/2 in
{0, ..., T(g-1)}, which sidesteps parity cases entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def key_units(g: int) -> int:
    """Scale between a centred-sum key and its value: key = units * nu."""
    return 1 if g % 2 else 2


def key_from_raw(g: int, T: int, t: int) -> int:
    span = T * (g - 1)
    return t - span // 2 if g % 2 else 2 * t - span


def raw_from_key(g: int, T: int, key: int) -> int | None:
    """Raw index for a key, or None when the key has the wrong parity or
    falls outside the support."""
    span = T * (g - 1)
    if g % 2:
        t = key + span // 2
    else:
        if (key + span) % 2:
            return None
        t = (key + span) // 2
    return t if 0 <= t <= span else None


@dataclass(frozen=True)
class PmfTable:
    """Exact integer counts of digit totals for T i.i.d. uniform base-g
    digits.  ``raw[t]`` counts strings with plain digit total t; centred-sum
    accessors translate through the key convention."""

    g: int
    T: int
    raw: tuple[int, ...]

    def total(self) -> int:
        return self.g**self.T

    def count(self, key: int) -> int:
        t = raw_from_key(self.g, self.T, key)
        return 0 if t is None else self.raw[t]

    def prob(self, key: int) -> Fraction:
        return Fraction(self.count(key), self.total())

    def keys(self):
        for t in range(len(self.raw)):
            yield key_from_raw(self.g, self.T, t)

    def items(self):
        for t, c in enumerate(self.raw):
            yield key_from_raw(self.g, self.T, t), c

    def max_abs_key(self) -> int:
        return self.T * (self.g - 1) if self.g % 2 == 0 else self.T * (self.g - 1) // 2


@lru_cache(maxsize=256)
def exact_pmf(g: int, T: int) -> PmfTable:
    """Integer convolution of T copies of the uniform distribution on g
    consecutive centred values; T = 0 is the point mass at zero."""
    if g < 2:
        raise ValueError("base must be at least 2")
    if T < 0:
        raise ValueError("T must be non-negative")
    counts = [1]
    for _ in range(T):
        # convolve with the length-g all-ones window via prefix sums
        prefix = [0]
        for c in counts:
            prefix.append(prefix[-1] + c)
        new_len = len(counts) + g - 1
        new = []
        for t in range(new_len):
            lo = max(0, t - g + 1)
            hi = min(t, len(counts) - 1)
            new.append(prefix[hi + 1] - prefix[lo])
        counts = new
    return PmfTable(g=g, T=T, raw=tuple(counts))


def sigma_sq(g: int) -> Fraction:
    return Fraction(g * g - 1, 12)


def gaussian_density(g: int, T: int, key: int) -> float:
    """Leading local-limit term exp(-x^2/2)/sqrt(2 pi sigma^2 T) with
    x = nu/sqrt(sigma^2 T)."""
    if T < 1:
        raise ValueError("T must be positive")
    nu = key / key_units(g)
    var = float(sigma_sq(g)) * T
    x = nu / math.sqrt(var)
    return math.exp(-x * x / 2) / math.sqrt(2 * math.pi * var)


@dataclass(frozen=True)
class GaussianErrorRow:
    T: int
    max_abs_err: float
    scaled: float  # max_abs_err * T**1.5


def gaussian_error_profile(g: int, T_list) -> list[GaussianErrorRow]:
    """Worst-case |exact - Gaussian| over the whole support, and the same
    deviation scaled by T^{3/2} (the empirical constant of the error term)."""
    rows = []
    for T in T_list:
        table = exact_pmf(g, T)
        worst = 0.0
        for key, _ in table.items():
            p = float(table.prob(key))
            err = abs(p - gaussian_density(g, T, key))
            if err > worst:
                worst = err
        rows.append(GaussianErrorRow(T=T, max_abs_err=worst, scaled=worst * T**1.5))
    return rows


def char_fn(g: int, z: float) -> float:
    """Characteristic function E exp(izY) of a centred uniform digit; real
    by the symmetry of the support."""
    if g < 2:
        raise ValueError("base must be at least 2")
    if g % 2:
        acc = 1.0
        for j in range(1, (g - 1) // 2 + 1):
            acc += 2.0 * math.cos(j * z)
        return acc / g
    acc = 0.0
    for j in range((g - 2) // 2 + 1):
        acc += math.cos((2 * j + 1) / 2 * z)
    return 2.0 * acc / g


def char_fn_numeric(g: int, z: float) -> complex:
    """Direct average of exp(izY) over the g support points (oracle)."""
    acc = 0.0 + 0.0j
    for d in range(g):
        y = d - (g - 1) / 2
        acc += complex(math.cos(z * y), math.sin(z * y))
    return acc / g


def default_taylor_radius(g: int) -> float:
    """Largest z with cos(jz) >= 1/2 for every index j <= g/2."""
    return (math.pi / 3) / (g / 2)


@dataclass(frozen=True)
class TaylorCheckRow:
    z: float
    phi: float
    remainder: float
    quartic_ratio: float


@dataclass(frozen=True)
class TaylorCheckReport:
    rows: list[TaylorCheckRow]
    min_phi: float
    max_quartic_ratio: float
    ge_half: bool


def char_fn_taylor_check(g: int, z_grid=None, radius: float | None = None
                         ) -> TaylorCheckReport:
    """Verifies phi(z) >= 1/2 near zero and that the deviation from the
    quadratic Taylor term is quartic in z."""
    if radius is None:
        radius = default_taylor_radius(g)
    if z_grid is None:
        n = 64
        z_grid = [radius * i / n for i in range(-n, n + 1)]
    var = float(sigma_sq(g))
    rows = []
    for z in z_grid:
        if abs(z) > radius * (1 + 1e-12):
            raise ValueError(f"grid point {z} outside radius {radius}")
        phi = char_fn(g, z)
        rem = abs(phi - (1 - var * z * z / 2))
        ratio = rem / z**4 if z else 0.0
        rows.append(TaylorCheckRow(z=z, phi=phi, remainder=rem, quartic_ratio=ratio))
    return TaylorCheckReport(
        rows=rows,
        min_phi=min(r.phi for r in rows),
        max_quartic_ratio=max(r.quartic_ratio for r in rows),
        ge_half=all(r.phi >= 0.5 for r in rows),
    )
