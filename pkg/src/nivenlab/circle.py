"""Arc decomposition, major-arc quadrature, minor-arc scanning and the
translate-overlap machinery.

The major-arc half-width K^{3/4} g^{-K} / (g-1) is irrational; membership
tests compare fourth powers, which are exact rationals, and quadrature
endpoints use a rational upper proxy accurate to 2^-48.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counting import fixed_sum_size_estimate
from .digits import (CenteredExpansion, ProblemInstance, _expand, canonical_angle,
                     digit_range, expansion_interval, nonzero_count,
                     reciprocal_weight_check, weight_subadditivity_check)
from .expsum import SetSpec, _certificate, e_of, exp_sum, exp_sum_batch


def default_ell(g: int, K: int) -> int:
    """ceil(384 g^3 log K); the 384/32 = 12 bookkeeping makes the weight
    threshold beat K^-12."""
    if K < 2:
        raise ValueError("K must be at least 2")
    return math.ceil(384 * g**3 * math.log(K))


def _fourth_root_ceil(x: int) -> int:
    r = math.isqrt(math.isqrt(x))
    while r**4 < x:
        r += 1
    return r


def rational_eps(g: int, K: int, bits: int = 48) -> Fraction:
    """Rational upper bound for the arc half-width, within 2^-bits relative."""
    r = _fourth_root_ceil(K**3 * 2 ** (4 * bits))
    return Fraction(r, 2**bits) / (g**K * (g - 1))


class ArcPartition:
    """Major arcs of exact-rational fourth-power half-width around the
    rationals j/(g-1)."""

    def __init__(self, instance: ProblemInstance, ell: int | None = None):
        self.instance = instance
        g, K = instance.g, instance.K
        if g < 3:
            raise ValueError("arc decomposition needs g >= 3")
        self.eps4 = Fraction(K**3, g ** (4 * K) * (g - 1) ** 4)
        # disjointness: 2 eps < 1/(g-1), i.e. 16 K^3 < g^{4K}
        if 16 * K**3 >= g ** (4 * K):
            raise ValueError("major arcs overlap at this (g, K)")
        self.ell = default_ell(g, K) if ell is None else ell

    @property
    def g(self) -> int:
        return self.instance.g

    @property
    def K(self) -> int:
        return self.instance.K

    def grid_distance(self, theta) -> Fraction:
        """Exact distance from theta to the nearest j/(g-1)."""
        t = canonical_angle((self.g - 1) * canonical_angle(theta))
        return min(t, 1 - t) / (self.g - 1)

    def is_major(self, theta) -> bool:
        return self.grid_distance(theta) ** 4 <= self.eps4

    def major_measure(self) -> float:
        """Total measure 2 K^{3/4} g^{-K} of the major arcs."""
        g, K = self.g, self.K
        return math.exp(math.log(2) + 0.75 * math.log(K) - K * math.log(g))


def triple_uniform_density(u: float) -> float:
    """Density of the sum of three independent uniform [0,1] variables."""
    if 0 <= u <= 1:
        return u * u / 2
    if 1 < u <= 2:
        return (-2 * u * u + 6 * u - 3) / 2
    if 2 < u <= 3:
        return (3 - u) ** 2 / 2
    return 0.0


def singular_quadrature(u: float, eta_max: float = 1e3, n: int = 1 << 18) -> float:
    """Simpson quadrature of the extended singular integral
    int (int_0^1 e(eta x) dx)^3 e(-u eta) d eta over |eta| <= eta_max."""
    eta = np.linspace(-eta_max, eta_max, 2 * n + 1)
    inner = np.exp(1j * np.pi * eta) * np.sinc(eta)
    vals = inner**3 * np.exp(-2j * np.pi * u * eta)
    w = np.ones(2 * n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = eta_max / n
    return float((h / 3 * (w * vals).sum()).real)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    evaluations: int
    base_intervals: int


def major_arc_integral(instance: ProblemInstance, k_triple,
                       points_per_cycle: int = 32, rel_tol: float = 1e-3,
                       max_doublings: int = 8) -> IntegralResult:
    """(g-1) * integral over |theta| <= eps of f1 f2 f3 e(-M theta), by
    composite Simpson with step-halving until the Richardson estimate is
    below ``rel_tol``.  The base grid resolves every oscillation of the
    integrand (bandwidth M + 3 g^K) with ``points_per_cycle`` samples."""
    g, K, M = instance.g, instance.K, instance.M
    if M is None:
        raise ValueError("instance must carry a target M")
    if (sum(k_triple) - M) % (g - 1):
        import warnings

        warnings.warn("digit-sum triple incongruent with M mod g-1; "
                      "the arc translates will not add constructively")
    eps = rational_eps(g, K)
    cycles = float(2 * eps * (M + 3 * (g**K - 1)))
    N = 64
    while N < points_per_cycle * cycles:
        N *= 2

    specs = {k: SetSpec(instance, k) for k in set(k_triple)}
    cache: dict[Fraction, complex] = {}

    def fill(thetas):
        missing = [t for t in thetas if t not in cache]
        if not missing:
            return
        vals = {k: exp_sum_batch(spec, missing) for k, spec in specs.items()}
        for i, t in enumerate(missing):
            prod = vals[k_triple[0]][i] * vals[k_triple[1]][i] * vals[k_triple[2]][i]
            cache[t] = complex(prod) * e_of(-M * t)

    def simpson(n):
        nodes = [eps * Fraction(j, n) for j in range(-n, n + 1)]
        fill(nodes)
        h = float(eps / n)
        acc = cache[nodes[0]] + cache[nodes[-1]]
        acc += 4 * sum(cache[nodes[j]] for j in range(1, 2 * n, 2))
        acc += 2 * sum(cache[nodes[j]] for j in range(2, 2 * n, 2))
        return (g - 1) * acc * h / 3

    prev = simpson(N)
    err = math.inf
    for _ in range(max_doublings):
        N *= 2
        cur = simpson(N)
        err = abs(cur - prev) / 15
        prev = cur
        if err <= rel_tol * max(abs(cur), 1e-300):
            break
    return IntegralResult(value=prev, error_estimate=err,
                          evaluations=len(cache), base_intervals=N)


@dataclass(frozen=True)
class PointwiseReport:
    f_value: complex
    main_value: complex
    deviation: float
    scaled: float
    ell: int


def major_arc_pointwise_check(spec: SetSpec, theta, ell: int | None = None
                              ) -> PointwiseReport:
    """Compares f(theta) with the near-zero asymptotic
    g^K (2 pi sigma^2 K)^{-1/2} * (e(g^K theta) - 1)/(2 pi i g^K theta);
    valid for ||theta|| <= g^{-K+2 ell^2}/(g-1)."""
    g, K = spec.g, spec.K
    if ell is None:
        ell = default_ell(g, K)
    theta = canonical_angle(theta)
    signed = theta if theta <= Fraction(1, 2) else theta - 1
    if 2 * ell * ell < K:  # otherwise the radius bound holds trivially
        if abs(signed) * (g - 1) > Fraction(1, g ** (K - 2 * ell * ell)):
            raise ValueError("theta outside the asymptotic radius for this ell")
    size = fixed_sum_size_estimate(g, K)
    if signed == 0:
        integral = 1 + 0j
    else:
        t = float(g**K * signed)
        integral = (e_of(Fraction(g**K) * signed) - 1) / (2j * math.pi * t)
    main = size * integral
    f = exp_sum(spec, theta).value
    dev = abs(f - main)
    return PointwiseReport(f_value=f, main_value=main, deviation=dev,
                           scaled=dev * K**1.5 / (ell**4 * g**K), ell=ell)


@dataclass(frozen=True)
class MinorArcRow:
    theta: Fraction
    abs_f: float
    scaled: float
    weight: int
    fm_holds: bool
    fm_margin: float


@dataclass(frozen=True)
class MinorArcScan:
    rows: list[MinorArcRow]
    max_scaled: float
    fm_violations: int
    min_weight: int
    seed: int


def minor_arc_scan(spec: SetSpec, samples: int, seed: int,
                   ell: int | None = None) -> MinorArcScan:
    """Seeded scan of rational minor-arc points: records the scaled sup
    statistic |f| K^{5/4} g^{-K}, the decay certificate margin, and the
    non-zero digit weight of (g-1)theta.  Boundary probes just outside each
    major arc are always included."""
    g, K = spec.g, spec.K
    arcs = ArcPartition(spec.instance, ell)
    eps_hi = rational_eps(g, K)
    thetas = []
    for j in range(g - 1):
        for sgn in (1, -1):
            thetas.append(canonical_angle(Fraction(j, g - 1) + 2 * sgn * eps_hi))
    rng = random.Random(seed)
    qmax = g ** (K + 2)
    while len(thetas) < samples:
        q = rng.randint(2, qmax)
        theta = Fraction(rng.randint(0, q - 1), q)
        if not arcs.is_major(theta):
            thetas.append(theta)

    values = exp_sum_batch(spec, thetas)
    rows = []
    for theta, val in zip(thetas, values):
        cert = _certificate(spec, theta, abs(val))
        w = nonzero_count((g - 1) * theta, g, K)
        rows.append(MinorArcRow(
            theta=theta, abs_f=abs(val),
            scaled=abs(val) * K**1.25 / g**K,
            weight=w, fm_holds=cert.holds, fm_margin=cert.margin))
    return MinorArcScan(
        rows=rows,
        max_scaled=max(r.scaled for r in rows),
        fm_violations=sum(not r.fm_holds for r in rows),
        min_weight=min(r.weight for r in rows),
        seed=seed)


@dataclass(frozen=True)
class DecouplingPlan:
    """Digit-position bookkeeping for a rational angle: windows left of the
    non-zero digits of (g-1)theta, and the remaining positions classed by
    prefix digit-sum residue."""

    theta: Fraction
    g: int
    K: int
    R: int
    expansion: CenteredExpansion
    next_nonzero: int | None
    tail: Fraction
    window: frozenset[int]
    classes: tuple[tuple[int, ...], ...]
    top_class: int
    class_sizes: tuple[int, ...]


def decoupling_plan(theta, g: int, K: int, R: int) -> DecouplingPlan:
    """Builds the window/class partition of {0..K-1} for an exact rational
    theta in the (g-1)-scaled expansion interval."""
    theta = Fraction(theta)
    alpha = (g - 1) * theta
    lo, hi = expansion_interval(g)
    if not (lo < alpha <= hi):
        raise ValueError("(g-1) theta outside the expansion interval; reduce first")
    digits, rem = _expand(alpha, g, K)
    nonzero = [i for i, d in enumerate(digits, 1) if d]
    expansion = CenteredExpansion(g=g, digits=tuple(digits),
                                  nonzero_indices=tuple(nonzero), exact=(rem == 0))
    tail = rem / Fraction(g) ** K

    nxt = None
    if rem != 0:
        r = rem
        pos = K
        while True:
            pos += 1
            digs, r = _expand(r, g, 1)
            if digs[0]:
                nxt = pos
                break

    window = set()
    for n in nonzero + ([nxt] if nxt is not None else []):
        window.update(range(max(0, n - R), min(K, n)))
    window = frozenset(window)

    prefix = 0
    classes: list[list[int]] = [[] for _ in range(g - 1)]
    csum = 0
    for i in range(K):
        # digit at expansion position i (1-based index i) enters the prefix
        if i >= 1:
            csum += digits[i - 1]
        if i not in window:
            classes[csum % (g - 1)].append(i)
    sizes = [len(c) for c in classes]
    top = max(range(g - 1), key=lambda r: (sizes[r], -r))
    rotated = tuple(sizes[(top + j) % (g - 1)] for j in range(g - 1))
    assert len(window) + sum(sizes) == K
    assert len(window) <= (len(nonzero) + 1) * R
    return DecouplingPlan(theta=theta, g=g, K=K, R=R, expansion=expansion,
                          next_nonzero=nxt, tail=tail, window=window,
                          classes=tuple(tuple(c) for c in classes),
                          top_class=top, class_sizes=rotated)


@dataclass(frozen=True)
class StructuredRow:
    theta: Fraction
    nonzero_digits: int
    ratio: float     # |f(theta)| / g^K
    scaled: float    # ratio * K^{3/2} / (|xi| + L R)^2


def structured_theta_scan(instance: ProblemInstance, xi: int, L: int, R: int,
                          samples: int, seed: int) -> list[StructuredRow]:
    """Evaluates the normalised sum at angles built from at most L non-zero
    centred digits of (g-1)theta, subject to ||(g-1)theta|| >= g^{-K+2LR}."""
    g, K = instance.g, instance.K
    mu2 = (g - 1) * K
    if mu2 % 2:
        raise ValueError("mean digit sum not integral; choose (g-1)K even")
    k = mu2 // 2 + xi
    spec = SetSpec(instance, k)
    rng = random.Random(seed)
    dlo, dhi = digit_range(g)
    nonzero_digits = [d for d in range(dlo, dhi + 1) if d]
    floor_norm = Fraction(1, g ** (K - 2 * L * R)) if 2 * L * R < K else None
    rows = []
    attempts = 0
    while len(rows) < samples and attempts < 50 * samples:
        attempts += 1
        t = rng.randint(1, L)
        positions = sorted(rng.sample(range(1, K + 1), t))
        alpha = sum(Fraction(rng.choice(nonzero_digits), g**p) for p in positions)
        norm = min(alpha % 1, 1 - alpha % 1)
        if floor_norm is not None and norm < floor_norm:
            continue
        theta = alpha / (g - 1)
        ratio = abs(exp_sum(spec, theta).value) / g**K
        rows.append(StructuredRow(
            theta=theta, nonzero_digits=t, ratio=ratio,
            scaled=ratio * K**1.5 / (abs(xi) + L * R) ** 2))
    return rows


class DivisibilityGrid:
    """Translate tuples (j1, j2, j3) whose shifts by j_i/k_i reduce to the
    plain sum: j_i an integer multiple of k_i/(g-1)."""

    def __init__(self, k_triple, g: int):
        self.k_triple = tuple(k_triple)
        self.g = g
        self.j_sets = []
        for k in self.k_triple:
            js = sorted({m * k // (g - 1) for m in range(g - 1)
                         if (m * k) % (g - 1) == 0})
            self.j_sets.append(tuple(js))
        size = 1
        for k in self.k_triple:
            size *= math.gcd(g - 1, k)
        assert size == self.size()

    def size(self) -> int:
        n = 1
        for js in self.j_sets:
            n *= len(js)
        return n

    def __contains__(self, j_triple) -> bool:
        return all(j in js for j, js in zip(j_triple, self.j_sets))


@dataclass(frozen=True)
class OverlapReport:
    skipped: bool
    reason: str | None
    weights: list[tuple[int, int, int]]
    min_pair_max: int | None
    reciprocal_checks: list
    subadditivity_ok: bool
    ell: int


def translate_overlap_check(instance: ProblemInstance, k_triple, j_triple,
                            ell: int | None = None, samples: int = 16,
                            seed: int = 0) -> OverlapReport:
    """Measures the non-zero digit weights of the three translates
    (g-1)(theta + j_i/k_i) on sampled rationals, and asserts the exact
    reciprocal-weight and subadditivity bounds that forbid all translates
    from being digit-sparse simultaneously."""
    g, K = instance.g, instance.K
    failures = []
    for i, (j, k) in enumerate(zip(j_triple, k_triple)):
        if not 0 <= j < k:
            failures.append(f"j{i + 1}={j} outside [0, k{i + 1})")
    for i, k in enumerate(k_triple):
        if math.gcd(k, g) != 1:
            failures.append(f"gcd(k{i + 1}, g) = {math.gcd(k, g)} != 1")
    pairs = [(0, 1), (0, 2), (1, 2)]
    for s, t in pairs:
        if math.gcd(k_triple[s], k_triple[t]) != 1:
            failures.append(f"gcd(k{s + 1}, k{t + 1}) != 1")
    if failures:
        raise ValueError("; ".join(failures))
    ell = default_ell(g, K) if ell is None else ell

    grid = DivisibilityGrid(k_triple, g)
    if tuple(j_triple) in grid:
        return OverlapReport(skipped=True,
                             reason="translate tuple lies on the divisibility "
                                    "grid; the shifted sums equal the plain sum",
                             weights=[], min_pair_max=None,
                             reciprocal_checks=[], subadditivity_ok=True, ell=ell)

    rng = random.Random(seed)
    weights = []
    sub_ok = True
    for _ in range(samples):
        q = rng.randint(2, g ** (K + 2))
        theta = Fraction(rng.randint(0, q - 1), q)
        ws = tuple(nonzero_count((g - 1) * (theta + Fraction(j, k)), g, K)
                   for j, k in zip(j_triple, k_triple))
        weights.append(ws)
        for s, t in pairs:
            a1 = (g - 1) * (theta + Fraction(j_triple[s], k_triple[s]))
            a2 = (g - 1) * (theta + Fraction(j_triple[t], k_triple[t]))
            if not weight_subadditivity_check(a1, a2, g, K).holds:
                sub_ok = False

    rec_checks = []
    for s, t in pairs:
        jd = (g - 1) * (j_triple[s] * k_triple[t] - j_triple[t] * k_triple[s])
        kk = k_triple[s] * k_triple[t]
        if jd % kk:
            rec_checks.append(((s + 1, t + 1), reciprocal_weight_check(jd, kk, g, K)))
    min_pair_max = min(max(ws[s], ws[t]) for ws in weights for s, t in pairs)
    return OverlapReport(skipped=False, reason=None, weights=weights,
                         min_pair_max=min_pair_max, reciprocal_checks=rec_checks,
                         subadditivity_ok=sub_ok, ell=ell)
