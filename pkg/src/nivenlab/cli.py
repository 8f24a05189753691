"""Batch experiment driver.

Every subcommand writes one CSV table (single header row, stable column
names; units/scaling spelled out in the names) and one JSON summary holding
the resolved config, the results, the baselines consulted and the seed.
Identical config + seed produces byte-identical outputs.

Exit codes: 0 success, 1 assertion failure (the failing invariant is named),
2 config error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import baselines as bl
from ._backend import backend_name
from .errors import BudgetExceededError, TripleSearchError

EXIT_OK, EXIT_ASSERTION, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


def fmt(x) -> str:
    if isinstance(x, float):
        return "%.12g" % x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def parallel_map(fn, items):
    """Order-preserving map honouring the NIVENLAB_THREADS override."""
    threads = int(os.environ.get("NIVENLAB_THREADS", "1"))
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class Run:
    """Aggregation point for one subcommand invocation; files are written
    once, at the end, so outputs are never interleaved."""

    def __init__(self, name: str, args, config: dict):
        self.name = name
        self.outdir = Path(args.out)
        self.config = config
        self.seed = args.seed
        self.baselines = bl.Baselines.load(args.baselines)
        self.baselines_used: dict = {}
        self.failures: list[str] = []

    def check_max(self, key: str, observed: float, factor: float = 1.2):
        try:
            chk = self.baselines.check_max(key, observed, factor)
        except KeyError:
            self.baselines_used[key] = "absent (not compared)"
            return
        self.baselines_used[key] = chk.baseline
        if not chk.ok:
            self.failures.append(
                f"baseline regression {key}: observed {observed:.6g} > "
                f"{factor} x recorded {chk.baseline:.6g}")

    def require(self, ok: bool, invariant: str):
        if not ok:
            self.failures.append(invariant)

    def finish(self, header, rows, results: dict) -> int:
        self.outdir.mkdir(parents=True, exist_ok=True)
        csv_path = self.outdir / f"{self.name}.csv"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(c) for c in row])
        summary = {
            "subcommand": self.name,
            "config": self.config,
            "seed": self.seed,
            "backend": backend_name(),
            "results": results,
            "baselines_used": self.baselines_used,
            "failures": self.failures,
        }
        (self.outdir / f"{self.name}.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n")
        for f in self.failures:
            print(f"FAIL {f}")
        print(f"wrote {csv_path}")
        return EXIT_ASSERTION if self.failures else EXIT_OK


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_sweep(text: str) -> list[int]:
    """'12..28:4' -> [12,16,20,24,28]; '12,16' -> [12,16]; '12' -> [12]."""
    if ".." in text:
        lo, rest = text.split("..")
        hi, _, step = rest.partition(":")
        return list(range(int(lo), int(hi) + 1, int(step or 1)))
    return [int(t) for t in text.split(",")]


def resolve_m(rule: str, g: int, K: int, rng: random.Random) -> int:
    if rule == "g^K":
        return g**K
    if rule == "random":
        return rng.randint(g ** (K - 1) + 1, g**K)
    return int(rule)


def resolve_triple(selector: str, g: int, K: int, M: int):
    if selector == "construct":
        from .kselect import construct_triple

        return construct_triple(g, K, M % (g - 1)).triple
    if selector.startswith("practical:"):
        from .kselect import search_triple

        return search_triple(g, K, M, int(selector.split(":", 1)[1]))
    if selector.startswith("explicit:"):
        parts = selector.split(":", 1)[1].split(",")
        if len(parts) != 3:
            raise ValueError("explicit selector needs k1,k2,k3")
        return tuple(int(p) for p in parts)
    raise ValueError(f"unknown selector {selector!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_count(args) -> int:
    from .counting import (count_niven_triple_reps, count_triple_reps,
                           niven_triple_main_term, triple_main_term)

    run = Run("count", args, vars(args).copy())
    rng = random.Random(args.seed)
    header = ["K", "M", "k1", "k2", "k3", "exact_count", "main_term",
              "ratio_exact_over_main", "kind"]

    # M values are drawn sequentially so a threaded sweep stays deterministic
    jobs = []
    for K in parse_sweep(args.K):
        M = resolve_m(args.M, args.g, K, rng)
        jobs.append((K, M, resolve_triple(args.selector, args.g, K, M)))

    def one(job):
        K, M, kt = job
        if args.niven:
            exact = count_niven_triple_reps(args.g, K, kt, M)
            main = niven_triple_main_term(args.g, K, kt, M)
            kind = "N-sum"
        else:
            exact = count_triple_reps(args.g, K, kt, M)
            main = triple_main_term(args.g, K, M)
            kind = "S-sum"
        return [K, M, *kt, exact, main, exact / main, kind]

    rows = parallel_map(one, jobs)
    results = {"ratios": {str(r[0]): r[7] for r in rows}}
    return run.finish(header, rows, results)


def cmd_size(args) -> int:
    from .counting import count_fixed_sum, fixed_sum_size_estimate

    run = Run("size", args, vars(args).copy())
    header = ["K", "k", "exact_size", "gaussian_estimate",
              "rel_deviation_abs"]
    rows = []
    for K in parse_sweep(args.K):
        k = (args.g - 1) * K // 2
        exact = count_fixed_sum(args.g, K, k)
        est = fixed_sum_size_estimate(args.g, K)
        rows.append([K, k, exact, est, abs(exact - est) / est])
    results = {"deviations": {str(r[0]): r[4] for r in rows}}
    return run.finish(header, rows, results)


def cmd_llt_profile(args) -> int:
    from .llt import gaussian_error_profile

    run = Run("llt-profile", args, vars(args).copy())
    rows_raw = gaussian_error_profile(args.g, parse_sweep(args.T))
    header = ["T", "max_abs_error", "scaled_error_T32"]
    rows = [[r.T, r.max_abs_err, r.scaled] for r in rows_raw]
    by_T = {r.T: r.scaled for r in rows_raw}
    if 50 in by_T and 200 in by_T:
        run.require(by_T[200] <= 1.5 * by_T[50],
                    "llt scaling: scaled error at T=200 exceeds 1.5x T=50")
    return run.finish(header, rows, {"scaled": {str(r.T): r.scaled for r in rows_raw}})


def cmd_psi_check(args) -> int:
    from .llt import key_units
    from .twisted import padding_decay_check, twisted_mass_direct, twisted_mass_dp

    run = Run("psi-check", args, vars(args).copy())
    rng = random.Random(args.seed)
    g = args.g
    header = ["a_tuple", "nu_key", "routes_equal", "abs_value"]
    rows = []
    mismatches = 0
    for _ in range(args.tuples):
        a = tuple(rng.randint(0, 4) for _ in range(g - 1))
        span = sum(a) * (g - 1)
        keys = range(-span, span + 1) if key_units(g) == 2 else \
            range(-span // 2, span // 2 + 1)
        for key in keys:
            direct = twisted_mass_direct(a, key, g)
            dp = twisted_mass_dp(a, key, g)
            equal = direct == dp
            mismatches += not equal
            rows.append(["|".join(map(str, a)), key, int(equal),
                         abs(dp.value())])
    run.require(mismatches == 0,
                f"psi two-route exactness: {mismatches} mismatching tuples")
    if g == 3:
        a, ms = bl.PADDING_CASE
        worst = max(padding_decay_check(a, m, 1, g).c_needed for m in ms)
        run.check_max("twisted.padding_c.g3.a400.m1-5", worst, 1.2)
    return run.finish(header, rows, {"mismatches": mismatches})


def cmd_fm_scan(args) -> int:
    from .digits import ProblemInstance
    from .expsum import SetSpec, _certificate, exp_sum_batch

    run = Run("fm-scan", args, vars(args).copy())
    g, K = args.g, args.K
    k = args.k if args.k is not None else (g - 1) * K // 2
    spec = SetSpec(ProblemInstance(g, K), k)
    rng = random.Random(args.seed)
    thetas = []
    for _ in range(args.samples):
        q = rng.randint(2, g ** (K + 2))
        thetas.append(Fraction(rng.randint(0, q - 1), q))
    values = exp_sum_batch(spec, thetas)
    header = ["theta_num", "theta_den", "abs_f", "certificate_rhs", "holds"]
    rows = []
    violations = 0
    for theta, val in zip(thetas, values):
        cert = _certificate(spec, theta, abs(val))
        violations += not cert.holds
        rows.append([theta.numerator, theta.denominator, abs(val), cert.rhs,
                     int(cert.holds)])
    run.require(violations == 0,
                f"decay certificate: {violations} violations (must be zero)")
    return run.finish(header, rows, {"violations": violations,
                                     "samples": args.samples})


def cmd_major_arc(args) -> int:
    from .circle import major_arc_integral
    from .counting import count_triple_reps
    from .digits import ProblemInstance

    run = Run("major-arc", args, vars(args).copy())
    rng = random.Random(args.seed)
    header = ["K", "M", "k1", "k2", "k3", "exact_count", "quadrature_real",
              "quadrature_error_estimate", "rel_deviation_abs"]
    rows = []
    for K in parse_sweep(args.K):
        M = resolve_m(args.M, args.g, K, rng)
        kt = resolve_triple(args.selector, args.g, K, M)
        exact = count_triple_reps(args.g, K, kt, M)
        res = major_arc_integral(ProblemInstance(args.g, K, M), kt)
        rel = abs(res.value.real - exact) / exact
        rows.append([K, M, *kt, exact, res.value.real, res.error_estimate, rel])
        if args.g == 3 and args.M == "g^K" and args.selector == "practical:40":
            run.check_max(f"circle.major_reldev.g3.K{K}", rel, 1.5)
    return run.finish(header, rows,
                      {"rel_deviation": {str(r[0]): r[8] for r in rows}})


def cmd_minor_arc(args) -> int:
    from .circle import minor_arc_scan
    from .digits import ProblemInstance
    from .expsum import SetSpec

    run = Run("minor-arc", args, vars(args).copy())
    g, K = args.g, args.K
    k = args.k if args.k is not None else (g - 1) * K // 2
    spec = SetSpec(ProblemInstance(g, K), k)
    scan = minor_arc_scan(spec, args.samples, args.seed, args.ell)
    header = ["theta_num", "theta_den", "abs_f", "scaled_sup_stat_K54",
              "weight_nonzero_digits", "fm_holds", "fm_margin"]
    rows = [[r.theta.numerator, r.theta.denominator, r.abs_f, r.scaled,
             r.weight, int(r.fm_holds), r.fm_margin] for r in scan.rows]
    run.require(scan.fm_violations == 0,
                f"decay certificate on minor arcs: {scan.fm_violations} violations")
    run.require(scan.min_weight > 0,
                "minor-arc point with zero non-zero digit weight")
    cfg = bl.MINOR_SCAN_CASE
    if (g, K, k, args.samples, args.seed) == (cfg["g"], cfg["K"], cfg["k"],
                                              cfg["samples"], bl.MEASUREMENT_SEED):
        run.check_max("circle.minor_scaled_max.g3.K14.n10000", scan.max_scaled, 1.2)
    return run.finish(header, rows, {"max_scaled": scan.max_scaled,
                                     "fm_violations": scan.fm_violations,
                                     "min_weight": scan.min_weight})


def cmd_overlap_check(args) -> int:
    from .circle import translate_overlap_check
    from .digits import ProblemInstance

    run = Run("overlap-check", args, vars(args).copy())
    kt = tuple(int(x) for x in args.ktriple.split(","))
    jt = tuple(int(x) for x in args.jtriple.split(","))
    report = translate_overlap_check(ProblemInstance(args.g, args.K), kt, jt,
                                     ell=args.ell, samples=args.samples,
                                     seed=args.seed)
    header = ["w1", "w2", "w3"]
    rows = [list(w) for w in report.weights]
    if not report.skipped:
        for pair, chk in report.reciprocal_checks:
            run.require(chk.holds,
                        f"reciprocal weight bound failed for pair {pair}")
        run.require(report.subadditivity_ok, "weight subadditivity bound failed")
    return run.finish(header, rows, {
        "skipped": report.skipped,
        "reason": report.reason,
        "min_pair_max_weight": report.min_pair_max,
        "ell": report.ell,
    })


def cmd_kselect(args) -> int:
    from .kselect import construct_triple, verify_triple

    run = Run("kselect", args, vars(args).copy())
    g, K = args.g, int(args.K)
    rng = random.Random(args.seed)
    header = ["selector", "k1", "k2", "k3", "all_conditions_pass"]
    rows = []
    results = {}
    if args.selector.startswith("practical:"):
        M = resolve_m(args.M, g, K, rng)
        kt = resolve_triple(args.selector, g, K, M)
        cl = verify_triple(kt, g, K, M, bound=int(args.selector.split(":")[1]))
        rows.append([args.selector, *kt, int(cl.all_pass())])
        results["practical"] = {"triple": list(kt), "checklist": cl.to_dict()}
        run.require(cl.all_pass(), "practical triple failed verification")
    elif args.selector == "construct":
        # K may be astronomically large here; M must be an explicit integer
        # (only its residue mod g-1 matters)
        if args.M in ("g^K", "random"):
            raise ValueError("the construction selector needs an explicit --M "
                             "(its residue mod g-1 is what matters)")
        tc = construct_triple(g, K, int(args.M) % (g - 1))
        rows.append(["construct", *tc.triple, int(tc.checklist.all_pass())])
        results["construction"] = {
            "triple": [str(k) for k in tc.triple],
            "offsets": list(tc.offsets), "lambda": tc.lam, "a": tc.a,
            "checklist": tc.checklist.to_dict(),
        }
        run.require(tc.checklist.all_pass(), "constructed triple failed verification")
    else:
        raise ValueError(f"unknown selector {args.selector!r}")
    return run.finish(header, rows, results)


def cmd_verify_all(args) -> int:
    run = Run("verify-all", args, vars(args).copy())
    rng = random.Random(args.seed)
    rows = []

    def check(name, fn):
        try:
            fn()
            rows.append([name, "PASS"])
            print(f"PASS {name}")
        except AssertionError as e:
            rows.append([name, f"FAIL: {e}"])
            run.failures.append(f"{name}: {e}")
            print(f"FAIL {name}: {e}")

    def digit_congruence():
        from .digits import digit_sum

        for g in (3, 4, 5):
            for n in range(g**4):
                assert digit_sum(n, g) % (g - 1) == n % (g - 1)

    def centred_replay():
        from .digits import centered_expand, digit_range, expansion_interval

        for g in (3, 4, 5):
            lo, hi = expansion_interval(g)
            for _ in range(100):
                q = rng.randint(2, 10**6)
                alpha = Fraction(rng.randint(0, q), q) * (hi - lo) + lo
                if not lo < alpha <= hi:
                    continue
                exp = centered_expand(alpha, g, 12)
                bound = Fraction(digit_range(g)[1], g - 1) / g**12
                assert abs(alpha - exp.partial_value()) <= bound

    def weight_norm():
        from .digits import weight_norm_check

        for g in (3, 10):
            for _ in range(100):
                q = rng.randint(2, 10**9)
                assert weight_norm_check(Fraction(rng.randint(0, q - 1), q),
                                         g, 30).holds

    def pmf_identities():
        from .llt import exact_pmf

        for g, T in ((3, 40), (4, 25), (10, 12)):
            t = exact_pmf(g, T)
            assert sum(t.raw) == g**T
            assert t.raw == t.raw[::-1]
        a, b = exact_pmf(3, 16), exact_pmf(3, 8)
        conv = [sum(b.raw[i] * b.raw[t - i] for i in range(max(0, t - len(b.raw) + 1), min(t + 1, len(b.raw)))) for t in range(len(a.raw))]
        assert tuple(conv) == a.raw

    def psi_two_route():
        from .llt import key_units
        from .twisted import twisted_mass_direct, twisted_mass_dp

        for g in (3, 4):
            for _ in range(15):
                a = tuple(rng.randint(0, 3) for _ in range(g - 1))
                span = sum(a) * (g - 1)
                keys = range(-span, span + 1, 1 if key_units(g) == 2 else 1)
                for key in keys:
                    assert twisted_mass_direct(a, key, g) == twisted_mass_dp(a, key, g)

    def fm_certificates():
        from .digits import ProblemInstance
        from .expsum import SetSpec, _certificate, exp_sum_batch

        spec = SetSpec(ProblemInstance(3, 10), 10)
        thetas = [Fraction(rng.randint(0, 3**12), 3**12 + rng.randint(1, 999))
                  for _ in range(500)]
        for theta, val in zip(thetas, exp_sum_batch(spec, thetas)):
            assert _certificate(spec, theta, abs(val)).holds

    def translation():
        from .digits import ProblemInstance
        from .expsum import SetSpec, translation_check

        spec = SetSpec(ProblemInstance(3, 6), 7)
        for _ in range(100):
            q = rng.randint(2, 10**6)
            theta = Fraction(rng.randint(0, q - 1), q)
            assert translation_check(spec, theta, rng.randint(-6, 6)).holds

    def counting_oracles():
        from .counting import (count_fixed_sum, count_fixed_sum_enum,
                               count_triple_reps, count_triple_reps_enum)

        for g, K in ((3, 5), (4, 4)):
            for k in range(0, (g - 1) * K + 1):
                assert count_fixed_sum(g, K, k) == count_fixed_sum_enum(g, K, k)
        for _ in range(10):
            kt = tuple(rng.randint(1, 8) for _ in range(3))
            M = rng.randint(0, 3 * 3**4)
            assert count_triple_reps(3, 4, kt, M) == count_triple_reps_enum(3, 4, kt, M)

    def singular_density():
        from .circle import singular_quadrature, triple_uniform_density

        for i in range(1, 50):
            u = 1 / 3 + i * (1 - 1 / 3) / 50
            assert triple_uniform_density(u) == u * u / 2
        assert abs(singular_quadrature(1.0) - 0.5) < 1e-3

    def kselect_checks():
        from .kselect import construct_triple, window_constant

        for g in (3, 4):
            tc = construct_triple(g, 2 * window_constant(g), rng.randrange(g - 1))
            assert tc.checklist.all_pass()
            assert tc.triple[2] % g == 1 % g

    def weight_lemmas():
        from .digits import reciprocal_weight_check, weight_subadditivity_check

        for _ in range(100):
            k = rng.randint(2, 10**6)
            while math.gcd(k, 3) != 1:
                k = rng.randint(2, 10**6)
            j = rng.randint(1, k - 1)
            assert reciprocal_weight_check(j, k, 3, 60).holds
        for _ in range(100):
            qa, qb = rng.randint(2, 10**9), rng.randint(2, 10**9)
            a = Fraction(rng.randint(0, qa - 1), qa)
            b = Fraction(rng.randint(0, qb - 1), qb)
            assert weight_subadditivity_check(a, b, 3, 50).holds

    def block_phases():
        from .expsum import (block_phase_average, block_phase_average_enum,
                             block_phase_bound)

        for _ in range(20):
            g = rng.choice((3, 4))
            T = rng.randint(0, 3)
            m = rng.randint(T, T + 4)
            q = rng.randint(2, 10**6)
            theta = Fraction(rng.randint(0, q - 1), q)
            r = rng.randrange(g - 1)
            a = block_phase_average(g, m, T, theta, r)
            b = block_phase_average_enum(g, m, T, theta, r)
            assert abs(a - b) < 1e-11
            assert abs(a) <= 1 + 1e-12
        assert block_phase_bound(3, 0) == 2.0

    def minor_mini():
        from .circle import minor_arc_scan
        from .digits import ProblemInstance
        from .expsum import SetSpec

        scan = minor_arc_scan(SetSpec(ProblemInstance(3, 12), 12), 300, args.seed)
        assert scan.fm_violations == 0
        assert scan.min_weight > 0

    check("digit-sum congruence mod g-1", digit_congruence)
    check("centred expansion replay brackets the source", centred_replay)
    check("weight/norm sandwich (exact)", weight_norm)
    check("pmf totals, symmetry, self-convolution", pmf_identities)
    check("root-weighted mass: two routes agree exactly", psi_two_route)
    check("decay certificate unconditional", fm_certificates)
    check("translation identity", translation)
    check("counting DP vs enumeration oracles", counting_oracles)
    check("singular density closed form + quadrature", singular_density)
    check("triple construction verifies", kselect_checks)
    check("reciprocal weight + subadditivity bounds", weight_lemmas)
    check("block phase closed form vs brute force", block_phases)
    check("minor-arc mini scan clean", minor_mini)

    return run.finish(["check", "status"], rows,
                      {"checks": len(rows),
                       "failures": len(run.failures)})


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=bl.MEASUREMENT_SEED)
    common.add_argument("--baselines", default=None,
                        help="baselines JSON path (default: packaged file)")
    common.add_argument("--record-baselines", action="store_true",
                        help="re-measure and rewrite the baselines file first")
    common.add_argument("--config", default=None,
                        help="JSON file of option defaults")

    p = argparse.ArgumentParser(prog="nivenlab", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("count", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", default="12..28:4")
    sp.add_argument("--M", default="g^K")
    sp.add_argument("--selector", default="practical:40")
    sp.add_argument("--niven", action="store_true")
    sp.set_defaults(fn=cmd_count)

    sp = sub.add_parser("size", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", default="10..40:10")
    sp.set_defaults(fn=cmd_size)

    sp = sub.add_parser("llt-profile", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--T", default="1,2,5,10,20,50,100,200")
    sp.set_defaults(fn=cmd_llt_profile)

    sp = sub.add_parser("psi-check", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--tuples", type=int, default=40)
    sp.set_defaults(fn=cmd_psi_check)

    sp = sub.add_parser("fm-scan", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", type=int, default=12)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--samples", type=int, default=10000)
    sp.set_defaults(fn=cmd_fm_scan)

    sp = sub.add_parser("major-arc", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", default="12..24:4")
    sp.add_argument("--M", default="g^K")
    sp.add_argument("--selector", default="practical:40")
    sp.set_defaults(fn=cmd_major_arc)

    sp = sub.add_parser("minor-arc", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", type=int, default=14)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--ell", type=int, default=None)
    sp.set_defaults(fn=cmd_minor_arc)

    sp = sub.add_parser("overlap-check", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", type=int, default=20)
    sp.add_argument("--ktriple", required=True)
    sp.add_argument("--jtriple", required=True)
    sp.add_argument("--samples", type=int, default=16)
    sp.add_argument("--ell", type=int, default=None)
    sp.set_defaults(fn=cmd_overlap_check)

    sp = sub.add_parser("kselect", parents=[common])
    sp.add_argument("--g", type=int, default=3)
    sp.add_argument("--K", type=int, default=12)
    sp.add_argument("--M", default="g^K")
    sp.add_argument("--selector", default="practical:40")
    sp.set_defaults(fn=cmd_kselect)

    sp = sub.add_parser("verify-all", parents=[common])
    sp.set_defaults(fn=cmd_verify_all)

    return p


def apply_config_file(args):
    if args.config:
        overrides = json.loads(Path(args.config).read_text())
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise ValueError(f"unknown config key {key!r}")
            setattr(args, attr, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        apply_config_file(args)
        if args.record_baselines:
            b = bl.Baselines.load(args.baselines)
            bl.record_all(b)
            b.save()
        return args.fn(args)
    except BudgetExceededError as e:
        print(f"BUDGET {e}", file=sys.stderr)
        return EXIT_BUDGET
    except TripleSearchError as e:
        print(f"CONFIG {e} ({e.report})", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"CONFIG {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
