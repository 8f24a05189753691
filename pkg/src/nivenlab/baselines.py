"""Recorded empirical constants.

Unconditional inequalities are asserted outright; quantities whose constants
the analysis leaves unspecified are regression-tested against values recorded
in a versioned JSON file.  ``--record-baselines`` on the CLI re-measures and
rewrites the file; ordinary runs only compare.

Every measurement below is deterministic: seeded generators, fixed configs
(the config is part of the key).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

MEASUREMENT_SEED = 20250101


def default_path() -> Path:
    return Path(resources.files("nivenlab") / "baselines.json")


class Baselines:
    def __init__(self, data: dict, path: Path | None = None):
        self.data = data
        self.path = path

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Baselines":
        p = Path(path) if path else default_path()
        if p.exists():
            data = json.loads(p.read_text())
        else:
            data = {"version": 1, "entries": {}}
        return cls(data, p)

    @property
    def entries(self) -> dict:
        return self.data.setdefault("entries", {})

    def get(self, key: str):
        if key not in self.entries:
            raise KeyError(f"no recorded baseline for {key!r}; "
                           f"run with --record-baselines first")
        return self.entries[key]

    def set(self, key: str, value):
        self.entries[key] = value

    def save(self, path: str | Path | None = None):
        p = Path(path) if path else self.path
        p.write_text(json.dumps(self.data, indent=2, sort_keys=True) + "\n")

    def check_max(self, key: str, observed: float, factor: float = 1.2
                  ) -> "BaselineCheck":
        base = float(self.get(key))
        return BaselineCheck(key=key, observed=observed, baseline=base,
                             factor=factor, ok=observed <= base * factor)

    def check_band(self, key: str, observed: float, slack: float = 1.25
                   ) -> "BaselineCheck":
        band = self.get(key)
        lo, hi = float(band["lo"]), float(band["hi"])
        ok = lo / slack <= observed <= hi * slack
        return BaselineCheck(key=key, observed=observed, baseline=hi,
                             factor=slack, ok=ok)


@dataclass(frozen=True)
class BaselineCheck:
    key: str
    observed: float
    baseline: float
    factor: float
    ok: bool


# ---------------------------------------------------------------------------
# measurements (config is frozen into the key)
# ---------------------------------------------------------------------------

def measure_alternation_band(n: int = 1000, K: int = 60, seed: int = MEASUREMENT_SEED):
    """Band of frac_norm_sq_sum(alpha, 2, K) / max(alternations, 1) over
    seeded random rationals."""
    from .digits import alternation_count, frac_norm_sq_sum

    rng = random.Random(seed)
    lo, hi = float("inf"), 0.0
    for _ in range(n):
        q = rng.randint(2, 2**40)
        alpha = Fraction(rng.randint(1, q - 1), q)
        ratio = float(frac_norm_sq_sum(alpha, 2, K)) / max(
            alternation_count(alpha, K), 1)
        lo, hi = min(lo, ratio), max(hi, ratio)
    return {"lo": lo, "hi": hi}


def measure_cor31_window_c(g: int, T_list=(25, 50, 100)) -> float:
    """Constant in |P(T,nu) - (2 pi sigma^2 T)^{-1/2}| <=
    C max(x^2 T^{-1/2}, T^{-3/2}) over the window |x| < 1/2."""
    import math

    from .llt import exact_pmf, key_units, sigma_sq

    worst = 0.0
    for T in T_list:
        table = exact_pmf(g, T)
        var = float(sigma_sq(g)) * T
        centre = 1 / math.sqrt(2 * math.pi * var)
        for key, _ in table.items():
            nu = key / key_units(g)
            x = nu / math.sqrt(var)
            if abs(x) >= 0.5:
                continue
            err = abs(float(table.prob(key)) - centre)
            denom = max(x * x / math.sqrt(T), T**-1.5)
            worst = max(worst, err / denom)
    return worst


def measure_charfn_quartic_c(g: int) -> float:
    from .llt import char_fn_taylor_check

    return char_fn_taylor_check(g).max_quartic_ratio


SMOOTHNESS_CASES = {
    # (400, 100) exercises the deep-cancellation regime; (400, 1) the regime
    # where the nu-dependence of the mass is actually visible at full size
    3: (((400, 100), (1, 2, 3, 4)), ((400, 1), (1, 2, 3, 4))),
    4: (((256, 16, 16), (2,)),),
}


def measure_smoothness_c(g: int) -> float:
    from .llt import key_units
    from .twisted import smoothness_scan

    worst = 0.0
    for a, nus in SMOOTHNESS_CASES[g]:
        keys = [nu * key_units(g) for nu in nus]
        rows = smoothness_scan(a, keys, g)
        worst = max(worst, max(r.scaled for r in rows))
    return worst


PADDING_CASE = ((400, 0), (1, 2, 3, 4, 5))


def measure_padding_c(g: int = 3) -> float:
    from .twisted import padding_decay_check

    a, ms = PADDING_CASE
    return max(padding_decay_check(a, m, 1, g).c_needed for m in ms)


def measure_digit_phase_c(g: int = 3, samples: int = 64,
                          seed: int = MEASUREMENT_SEED) -> float:
    """Constant in |digit average| <= C g^-T over constructed angles whose
    (g-1)theta has a non-zero digit at m followed by a T-digit zero gap."""
    from .digits import digit_range
    from .expsum import digit_phase_average

    rng = random.Random(seed)
    dlo, dhi = digit_range(g)
    nonzero = [d for d in range(dlo, dhi + 1) if d]
    worst = 0.0
    for _ in range(samples):
        m = rng.randint(1, 6)
        T = rng.randint(0, 6)
        eps_m = rng.choice(nonzero)
        alpha = Fraction(eps_m, g**m)
        # generic digits strictly after the gap
        for extra in range(m + T + 1, m + T + 1 + rng.randint(1, 4)):
            alpha += Fraction(rng.choice(nonzero + [0]), g**extra)
        r = eps_m % (g - 1)
        theta = alpha / (g - 1)
        worst = max(worst, abs(digit_phase_average(g, m, theta, r)) * g**T)
    return worst


MINOR_SCAN_CASE = dict(g=3, K=14, k=14, samples=10_000)


def measure_minor_scaled_max(seed: int = MEASUREMENT_SEED) -> float:
    from .circle import minor_arc_scan
    from .digits import ProblemInstance
    from .expsum import SetSpec

    cfg = MINOR_SCAN_CASE
    spec = SetSpec(ProblemInstance(cfg["g"], cfg["K"]), cfg["k"])
    return minor_arc_scan(spec, cfg["samples"], seed).max_scaled


POINTWISE_CASES = {
    "inner": dict(g=3, K=30, k=30, ell=3, theta=Fraction(1, 3**29)),
    # just inside the arc edge: K^{3/4} g^-K / (g-1) with K^{3/4} ~ 12.818
    "edge": dict(g=3, K=30, k=30, ell=3,
                 theta=Fraction(1281, 100) / (2 * Fraction(3) ** 30)),
}


def measure_pointwise_dev(case: str) -> float:
    from .circle import major_arc_pointwise_check
    from .digits import ProblemInstance
    from .expsum import SetSpec

    cfg = POINTWISE_CASES[case]
    spec = SetSpec(ProblemInstance(cfg["g"], cfg["K"]), cfg["k"])
    return major_arc_pointwise_check(spec, cfg["theta"], ell=cfg["ell"]).scaled


STRUCTURED_CASE = dict(g=3, K=40, xi=0, L=3, R=2, samples=200)


def measure_structured_max(seed: int = MEASUREMENT_SEED) -> float:
    from .circle import structured_theta_scan
    from .digits import ProblemInstance

    cfg = STRUCTURED_CASE
    rows = structured_theta_scan(ProblemInstance(cfg["g"], cfg["K"]),
                                 cfg["xi"], cfg["L"], cfg["R"],
                                 cfg["samples"], seed)
    return max(r.scaled for r in rows)


MAJOR_DEV_KS = (12, 16, 20, 24)


def measure_major_reldev(K: int) -> float:
    from .circle import major_arc_integral
    from .counting import count_triple_reps
    from .digits import ProblemInstance
    from .kselect import search_triple

    M = 3**K
    kt = search_triple(3, K, M, 40)
    exact = count_triple_reps(3, K, kt, M)
    res = major_arc_integral(ProblemInstance(3, K, M), kt)
    return abs(res.value.real - exact) / exact


def recorders() -> dict:
    rec = {
        "digits.alternation_ratio_band.g2.K60.n1000": measure_alternation_band,
        "twisted.padding_c.g3.a400.m1-5": measure_padding_c,
        "expsum.digit_phase_c.g3.n64": measure_digit_phase_c,
        "circle.minor_scaled_max.g3.K14.n10000": measure_minor_scaled_max,
        "circle.structured_scaled_max.g3.K40.xi0.L3.R2.n200": measure_structured_max,
    }
    for g in (3, 4, 5):
        rec[f"llt.cor31_window_c.g{g}"] = (lambda gg: lambda: measure_cor31_window_c(gg))(g)
        rec[f"llt.charfn_quartic_c.g{g}"] = (lambda gg: lambda: measure_charfn_quartic_c(gg))(g)
    for g in SMOOTHNESS_CASES:
        rec[f"twisted.smoothness_c.g{g}"] = (lambda gg: lambda: measure_smoothness_c(gg))(g)
    for case in POINTWISE_CASES:
        rec[f"circle.pointwise_dev.{case}"] = (lambda c: lambda: measure_pointwise_dev(c))(case)
    for K in MAJOR_DEV_KS:
        rec[f"circle.major_reldev.g3.K{K}"] = (lambda kk: lambda: measure_major_reldev(kk))(K)
    return rec


def record_all(baselines: Baselines, verbose: bool = True) -> None:
    for key, fn in recorders().items():
        value = fn()
        baselines.set(key, value)
        if verbose:
            print(f"recorded {key} = {value}")
