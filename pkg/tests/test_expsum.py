import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fraction
from nivenlab import expsum as E
from nivenlab.counting import count_fixed_sum
from nivenlab.digits import ProblemInstance, digit_range, reduce_to_interval
from nivenlab.errors import BudgetExceededError


def spec_of(g, K, k, niven=False):
    return E.SetSpec(ProblemInstance(g, K), k, niven=niven)


class TestExpSum:
    def test_at_zero_counts_the_set(self):
        s = spec_of(3, 2, 2)
        v = E.exp_sum(s, F(0)).value
        assert v == pytest.approx(3)  # {2, 4, 6}

    def test_half_and_third(self):
        s = spec_of(3, 2, 2)
        assert E.exp_sum(s, F(1, 2)).value == pytest.approx(3)
        assert abs(E.exp_sum(s, F(1, 3)).value) < 1e-12

    def test_method_tags(self):
        s = spec_of(3, 2, 2)
        assert E.exp_sum(s, F(0)).method == "polynomial-dp"
        assert E.exp_sum_enum(s, F(0)).method == "enumeration"

    def test_dp_matches_enumeration(self, rng):
        for g in (3, 4, 5):
            for K in (1, 3, 5, 8):
                ks = sorted({0, (g - 1) * K // 2, (g - 1) * K,
                             rng.randint(0, (g - 1) * K)})
                for k in ks:
                    s = spec_of(g, K, k)
                    for _ in range(5):
                        theta = random_fraction(rng, 10**6)
                        a = E.exp_sum(s, theta).value
                        b = E.exp_sum_enum(s, theta).value
                        assert abs(a - b) <= 1e-9 * g**K

    def test_conjugate_symmetry(self, rng):
        s = spec_of(3, 6, 7)
        for _ in range(50):
            theta = random_fraction(rng, 10**6)
            assert E.exp_sum(s, -theta).value == pytest.approx(
                E.exp_sum(s, theta).value.conjugate(), abs=1e-9)

    def test_value_at_zero_real_and_counts(self):
        for g, K, k in ((3, 8, 9), (4, 6, 8), (5, 5, 11)):
            s = spec_of(g, K, k)
            v = E.exp_sum(s, F(0)).value
            assert v.imag == pytest.approx(0.0, abs=1e-9)
            assert v.real == pytest.approx(count_fixed_sum(g, K, k), rel=1e-12)

    def test_parseval_exact_grid(self):
        # averaging |f|^2 over q >= 2 g^K - 1 points recovers the set size
        for g, K, k in ((3, 5, 5), (3, 6, 6), (4, 4, 6)):
            s = spec_of(g, K, k)
            q = 3 * g**K
            vals = E.exp_sum_batch(s, [F(j, q) for j in range(q)])
            mean_sq = float(np.mean(np.abs(vals) ** 2))
            assert abs(mean_sq - count_fixed_sum(g, K, k)) <= 1e-9 * g**K


class TestNivenTransform:
    def test_examples(self):
        assert E.exp_sum(spec_of(3, 2, 2, True), F(0)).value == pytest.approx(3)
        assert E.exp_sum(spec_of(10, 2, 9, True), F(0)).value == pytest.approx(10)

    def test_translate_identity_replay(self):
        s = spec_of(3, 2, 2)
        f0 = E.exp_sum(s, F(0)).value
        fh = E.exp_sum(s, F(1, 2)).value
        assert (f0 + fh) / 2 == pytest.approx(3)

    def test_matches_enumeration(self, rng):
        for g, K in ((3, 4), (3, 5), (10, 3)):
            for k in range(1, (g - 1) * K + 1, 3):
                s = spec_of(g, K, k, niven=True)
                for theta in (F(0), random_fraction(rng, 500)):
                    a = E.exp_sum(s, theta).value
                    b = E.exp_sum_enum(s, theta).value
                    assert abs(a - b) <= 1e-9 * g**K


class TestTranslation:
    @given(num=st.integers(0, 10**6), den=st.integers(1, 10**6),
           x=st.integers(-8, 8))
    @settings(max_examples=100, deadline=None)
    def test_property(self, num, den, x):
        rep = E.translation_check(spec_of(3, 5, 5), F(num, den), x)
        assert rep.holds

    def test_spec_cases(self):
        assert E.translation_check(spec_of(3, 2, 2), F(1, 7), 1).holds
        assert E.translation_check(spec_of(4, 3, 4), F(1, 5), 1).holds
        assert E.translation_check(spec_of(3, 5, 5), F(0), 1).holds

    def test_bulk_random(self, rng):
        s = spec_of(4, 4, 6)
        for _ in range(1000):
            rep = E.translation_check(s, random_fraction(rng, 10**4),
                                      rng.randint(-10, 10))
            assert rep.holds


class TestGeometricPhaseSum:
    def test_integer_branch(self):
        assert E.geometric_phase_sum(F(0), 3) == 3
        assert E.geometric_phase_sum(F(2), 5) == 5

    def test_half_base3(self):
        assert E.geometric_phase_sum(F(1, 2), 3) == pytest.approx(1)

    def test_matches_direct_sum(self, rng):
        for _ in range(200):
            g = rng.choice((3, 4, 5, 10))
            alpha = random_fraction(rng, 10**6)
            direct = sum(cmath.exp(2j * math.pi * float((j * alpha) % 1))
                         for j in range(g))
            assert E.geometric_phase_sum(alpha, g) == pytest.approx(direct, abs=1e-9)
            assert E.geometric_phase_sum(float(alpha), g) == pytest.approx(
                direct, abs=1e-7)

    def test_pair_bound(self, rng):
        rep = E.phase_pair_check(F(0), F(1, 2), 3)
        assert rep.holds
        assert rep.lhs == pytest.approx(3.0)
        assert rep.rhs == pytest.approx(9 * math.exp(-1 / 12))
        for _ in range(300):
            g = rng.choice((3, 4, 5))
            assert E.phase_pair_check(random_fraction(rng),
                                      random_fraction(rng), g).holds


class TestDecayCertificate:
    def test_trivial_points(self):
        s = spec_of(3, 12, 12)
        c = E.decay_certificate(s, F(0))
        assert c.holds and c.rhs == pytest.approx(3.0**12)
        c = E.decay_certificate(s, F(1, 2))
        assert c.holds and c.norm_sum == 0  # multiples of 1/(g-1) are blind spots

    def test_spec_case(self):
        c = E.decay_certificate(spec_of(3, 12, 12), F(1, 7))
        assert c.holds and c.lhs <= c.rhs

    def test_seeded_batch(self, rng):
        s = spec_of(3, 10, 10)
        thetas = [random_fraction(rng, 3**12) for _ in range(500)]
        vals = E.exp_sum_batch(s, thetas)
        for theta, v in zip(thetas, vals):
            assert E._certificate(s, theta, abs(v)).holds


class TestDigitPhaseAverage:
    def test_exact_zero_case(self):
        assert abs(E.digit_phase_average(3, 1, F(1, 6), 1)) < 1e-15

    def test_zero_phase(self):
        assert E.digit_phase_average(3, 1, F(1, 2), 1) == pytest.approx(1)

    def test_gap_bound_with_baseline(self, baselines):
        base = float(baselines.get("expsum.digit_phase_c.g3.n64"))
        # non-zero digit at position 1, then a 1-digit zero gap: theta from
        # (g-1)theta = 1/3 + 1/27 (digits 1, 0, 1)
        theta = (F(1, 3) + F(1, 27)) / 2
        v = E.digit_phase_average(3, 1, theta, 1)
        assert abs(v) <= base * 1.2 / 3

    def test_average_is_real_for_symmetric_support(self):
        # the centred digit support is symmetric, so the average at any
        # rational angle has magnitude <= 1
        assert abs(E.digit_phase_average(5, 3, F(3, 11), 2)) <= 1 + 1e-12


class TestBlockPhaseAverage:
    def test_empty_block(self):
        assert E.block_phase_average(3, 4, 0, F(1, 7), 0) == 1

    def test_closed_form_matches_enumeration(self, rng):
        for _ in range(60):
            g = rng.choice((3, 4))
            T = rng.randint(0, 3)
            m = rng.randint(max(T, 1), T + 5)
            theta = random_fraction(rng, 10**6)
            r = rng.randrange(g - 1)
            a = E.block_phase_average(g, m, T, theta, r)
            b = E.block_phase_average_enum(g, m, T, theta, r)
            assert abs(a - b) < 1e-12

    def test_explicit_bound_when_hypotheses_hold(self, rng):
        # (g-1)theta with a zero block at positions m-T..m-1 and a prefix
        # digit sum not congruent to r
        lo_hi = {}
        for _ in range(200):
            g = rng.choice((3, 4, 5))
            T = rng.randint(2, 4)
            m = rng.randint(T, T + 6)
            lo, hi = lo_hi.setdefault(g, digit_range(g))
            digs = {j: rng.randint(lo, hi) for j in range(1, m - T)}
            for j in range(m, m + rng.randint(1, 3)):
                digs[j] = rng.randint(lo, hi)
            alpha = sum(F(d, g**j) for j, d in digs.items())
            if reduce_to_interval(alpha, g) != alpha:
                continue
            prefix = sum(digs.get(j, 0) for j in range(1, m))
            bad = [r for r in range(g - 1) if (prefix - r) % (g - 1)]
            if not bad:
                continue
            r = rng.choice(bad)
            avg = E.block_phase_average(g, m, T, alpha / (g - 1), r)
            assert abs(avg) <= E.block_phase_bound(g, T)

    def test_bound_value(self):
        # delta_3 = |1 - e(1/2)| = 2
        assert E.block_phase_bound(3, 0) == pytest.approx(2.0)
        assert E.block_phase_bound(3, 3) == pytest.approx(2.0 / 27)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            E.block_phase_average_enum(5, 20, 12, F(1, 7), 0)

    def test_block_longer_than_prefix_rejected(self):
        with pytest.raises(ValueError):
            E.block_phase_average(3, 2, 3, F(1, 7), 0)


class TestSetSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            spec_of(3, 2, 5)
        with pytest.raises(ValueError):
            spec_of(3, 2, 0, niven=True)

    def test_sizes(self):
        assert spec_of(3, 2, 2).size() == 3
        assert spec_of(10, 2, 9, niven=True).size() == 10
