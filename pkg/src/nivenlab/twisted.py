"""Root-of-unity-weighted digit-sum distributions, evaluated exactly by two
independent routes.

The object of interest generalises the exact pmf of a centred digit sum: the
digits are split into blocks indexed s = 0..g-2 of sizes a_s, and block s is
weighted by the s-th power of omega = e(1/(g-1)) raised to the block's
centred digit sum.  Values are represented exactly as integer counts per
root-of-unity class over a power-of-g denominator, so the two evaluation
routes can be compared without tolerances.

Half-integral exponents (even g with odd block sizes) are handled by tracking
exponents in half-steps over the 2(g-1)-th roots of unity throughout and
reducing only at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import BudgetExceededError
from .llt import exact_pmf, key_units

DIRECT_BUDGET = 10_000_000


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(_cyclotomic(d)))
    return tuple(poly)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (monic divisor, zero remainder)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert all(v == 0 for v in num), "non-exact polynomial division"
    return out


def _poly_rem(coeffs: list[int], mod: tuple[int, ...]) -> tuple[int, ...]:
    """Remainder of an integer polynomial modulo a monic integer polynomial."""
    coeffs = list(coeffs)
    deg = len(mod) - 1
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            for j in range(deg + 1):
                coeffs[i - deg + j] -= c * mod[j]
    coeffs = coeffs[:deg]
    while len(coeffs) < deg:
        coeffs.append(0)
    return tuple(coeffs)


@dataclass(frozen=True)
class CycloVector:
    """Exact sum of 2(g-1)-th roots of unity over a power-of-g denominator.

    ``half_counts[h]`` is the integer coefficient of e(h / (2(g-1))); the
    represented value is sum_h half_counts[h] e(h/(2(g-1))) / g**denom_exp.
    Equality reduces both sides modulo the 2(g-1)-th cyclotomic polynomial,
    which subsumes the vanishing of the full root-of-unity sum.
    """

    g: int
    half_counts: tuple[int, ...]
    denom_exp: int

    def __post_init__(self):
        if len(self.half_counts) != 2 * (self.g - 1):
            raise ValueError("half_counts must have length 2(g-1)")

    def canonical(self) -> tuple[int, ...]:
        return _poly_rem(list(self.half_counts), _cyclotomic(2 * (self.g - 1)))

    def __eq__(self, other):
        if not isinstance(other, CycloVector):
            return NotImplemented
        if self.g != other.g:
            return False
        e = max(self.denom_exp, other.denom_exp)
        a = [c * self.g ** (e - self.denom_exp) for c in self.half_counts]
        b = [c * other.g ** (e - other.denom_exp) for c in other.half_counts]
        mod = _cyclotomic(2 * (self.g - 1))
        return _poly_rem(a, mod) == _poly_rem(b, mod)

    def __hash__(self):
        return hash((self.g, self.denom_exp, self.canonical()))

    def omega_counts(self) -> tuple[int, ...] | None:
        """Counts over the (g-1)-th root classes, or None when genuinely
        half-integral exponents are present."""
        if any(self.half_counts[h] for h in range(1, 2 * (self.g - 1), 2)):
            return None
        return tuple(self.half_counts[2 * r] for r in range(self.g - 1))

    def value(self) -> complex:
        denom = self.g**self.denom_exp
        acc = 0j
        for h, c in enumerate(self.half_counts):
            if c:
                ang = math.pi * h / (self.g - 1)
                acc += float(Fraction(c, denom)) * complex(math.cos(ang), math.sin(ang))
        return acc

    def abs_bound(self) -> float:
        return float(Fraction(sum(abs(c) for c in self.half_counts),
                              self.g**self.denom_exp))

    def is_structurally_zero(self) -> bool:
        return not any(self.half_counts)


def _doubled_key(key: int, g: int) -> int:
    return key if key_units(g) == 2 else 2 * key


def _validate_tuple(a, g: int) -> tuple[int, ...]:
    if g < 3:
        raise ValueError("root-weighted masses need base g >= 3")
    a = tuple(int(x) for x in a)
    if len(a) != g - 1:
        raise ValueError(f"block-size tuple must have length g-1 = {g - 1}")
    if any(x < 0 for x in a):
        raise ValueError("block sizes must be non-negative")
    return a


@lru_cache(maxsize=512)
def _direct_profile(a: tuple[int, ...], g: int, budget: int):
    """Enumerates the block digit-sum tuples of slots 1..g-2 once, grouping
    the probability-count products by (exponent class, doubled sum)."""
    spans = [x * (g - 1) for x in a]
    size = 1
    for sp in spans[1:]:
        size *= sp + 1
        if size > budget:
            raise BudgetExceededError(
                f"direct enumeration of {size}+ tuples exceeds budget {budget}")
    pmfs = [exact_pmf(g, x) for x in a]
    mod2 = 2 * (g - 1)
    profile: dict[tuple[int, int], int] = {}
    for ts in product(*[range(sp + 1) for sp in spans[1:]]):
        weight = 1
        H = 0
        d2 = 0
        for s, t in enumerate(ts, start=1):
            weight *= pmfs[s].raw[t]
            dj = 2 * t - spans[s]
            H += s * dj
            d2 += dj
        key = (H % mod2, d2)
        profile[key] = profile.get(key, 0) + weight
    return tuple(profile.items())


def twisted_mass_direct(a, key: int, g: int,
                        budget: int = DIRECT_BUDGET) -> CycloVector:
    """Direct summation over block digit-sum tuples (the defining series).

    Refuses (BudgetExceededError) when the tuple enumeration would exceed
    ``budget``; the dynamic-programming route has no such limit.
    """
    a = _validate_tuple(a, g)
    span0 = a[0] * (g - 1)
    pmf0 = exact_pmf(g, a[0])
    mod2 = 2 * (g - 1)
    dkey = _doubled_key(key, g)
    half = [0] * mod2
    for (H, d2), weight in _direct_profile(a, g, budget):
        num = dkey - d2 + span0
        if num % 2 or num < 0 or num > 2 * span0:
            continue
        half[H] += weight * pmf0.raw[num // 2]
    return CycloVector(g=g, half_counts=tuple(half), denom_exp=sum(a))


def twisted_mass_dp(a, key: int, g: int) -> CycloVector:
    """Dynamic program over (partial digit total, weighted exponent class);
    counts digit strings exactly and must agree with the direct route."""
    a = _validate_tuple(a, g)
    mod2 = 2 * (g - 1)
    dkey = _doubled_key(key, g)

    # block 0 carries no root weight: seed from its plain pmf
    pmf0 = exact_pmf(g, a[0])
    span = a[0] * (g - 1)
    dp = [[0] * mod2 for _ in range(span + 1)]
    for t, c in enumerate(pmf0.raw):
        dp[t][0] = c

    for s in range(1, g - 1):
        for _ in range(a[s]):
            new_span = span + (g - 1)
            new = [[0] * mod2 for _ in range(new_span + 1)]
            for t in range(span + 1):
                row = dp[t]
                for h in range(mod2):
                    c = row[h]
                    if c:
                        for d in range(g):
                            h2 = (h + s * (2 * d - (g - 1))) % mod2
                            new[t + d][h2] += c
            dp, span = new, new_span
    total_span = sum(x * (g - 1) for x in a)
    assert span == total_span
    num = dkey + total_span
    if num % 2 or num < 0 or num > 2 * total_span:
        half = (0,) * mod2
    else:
        half = tuple(dp[num // 2])
    return CycloVector(g=g, half_counts=half, denom_exp=sum(a))


@dataclass(frozen=True)
class SmoothnessRow:
    key: int
    deviation: float
    scaled: float  # deviation * a0^{3/2} / max(nu^2, 1)


def smoothness_scan(a, keys, g: int) -> list[SmoothnessRow]:
    """Deviation of the mass at nu from the mass at 0, scaled by the
    local-limit prediction a0^{-3/2} nu^2; requires a0 >= a_s for all s."""
    a = _validate_tuple(a, g)
    if any(x > a[0] for x in a[1:]):
        raise ValueError("first block must be the largest")
    base = twisted_mass_dp(a, 0, g).value()
    rows = []
    for key in keys:
        nu = key / key_units(g)
        dev = abs(twisted_mass_dp(a, key, g).value() - base)
        rows.append(SmoothnessRow(
            key=key, deviation=dev,
            scaled=dev * a[0] ** 1.5 / max(nu * nu, 1.0)))
    return rows


@dataclass(frozen=True)
class PaddingDecayReport:
    mass_abs: float
    leading: float        # g**-m
    c_needed: float       # smallest C making the bound hold
    m: int
    slot: int


def padding_decay_check(a, m: int, slot: int, g: int) -> PaddingDecayReport:
    """Pads block ``slot`` with m extra digits and measures the decay of the
    zero-sum mass: |mass| <= g**-m + C m^2 a0^{-3/2}."""
    a = _validate_tuple(a, g)
    if not 1 <= slot <= g - 2:
        raise ValueError("slot must be in 1..g-2")
    if any(x > a[0] for x in a[1:]):
        raise ValueError("first block must be the largest")
    if m < 0:
        raise ValueError("padding must be non-negative")
    padded = list(a)
    padded[slot] += m
    mass = abs(twisted_mass_dp(tuple(padded), 0, g).value())
    leading = float(g) ** (-m)
    if m == 0:
        c_needed = 0.0 if mass <= 1.0 else math.inf
    else:
        c_needed = max(0.0, (mass - leading) * a[0] ** 1.5 / (m * m))
    return PaddingDecayReport(mass_abs=mass, leading=leading,
                              c_needed=c_needed, m=m, slot=slot)
