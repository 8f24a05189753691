import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fraction
from nivenlab import digits as D
from nivenlab.counting import digit_sums_vector


class TestDigitSum:
    def test_examples(self):
        assert D.digit_sum(0, 3) == 0
        assert D.digit_sum(1234, 10) == 10
        assert D.digit_sum(6, 3) == 2  # 6 = 20_3

    def test_invalid_base(self):
        with pytest.raises(ValueError):
            D.digit_sum(5, 1)

    def test_congruence_exhaustive(self):
        # digit_sum(n, g) = n (mod g-1) for every n < g^6, g = 2..10
        for g in range(2, 11):
            ds = digit_sums_vector(g, 6).astype(np.int64)
            n = np.arange(g**6, dtype=np.int64)
            assert np.all(ds % (g - 1) == n % (g - 1))


class TestNiven:
    def test_examples(self):
        assert D.is_niven(12, 10)
        assert not D.is_niven(13, 10)
        assert D.is_niven(6, 3)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            D.is_niven(0, 10)

    def test_against_enumeration(self):
        for n in range(1, 500):
            expected = n % sum(int(c) for c in str(n)) == 0
            assert D.is_niven(n, 10) == expected


class TestCenteredExpansion:
    def test_zero(self):
        e = D.centered_expand(F(0), 3, 5)
        assert e.digits == (0, 0, 0, 0, 0)
        assert e.exact and e.nonzero_indices == ()

    def test_half_all_ones(self):
        e = D.centered_expand(F(1, 2), 3, 4)
        assert e.digits == (1, 1, 1, 1)
        assert not e.exact

    def test_four_ninths(self):
        e = D.centered_expand(F(4, 9), 3, 3)
        assert e.digits == (1, 1, 0)
        assert e.exact

    def test_out_of_interval(self):
        with pytest.raises(ValueError):
            D.centered_expand(F(2, 3), 3, 4)
        with pytest.raises(ValueError):
            D.centered_expand(F(-1, 2), 3, 4)  # left endpoint is open

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            D.centered_expand(0.5, 3, 4)

    @given(num=st.integers(0, 10**6), den=st.integers(1, 10**6),
           g=st.integers(2, 9), K=st.integers(1, 24))
    @settings(max_examples=150, deadline=None)
    def test_replay_property(self, num, den, g, K):
        alpha = D.reduce_to_interval(F(num, den), g)
        exp = D.centered_expand(alpha, g, K)
        lo, hi = D.digit_range(g)
        assert all(lo <= d <= hi for d in exp.digits)
        assert exp.nonzero_indices == tuple(
            i for i, d in enumerate(exp.digits, 1) if d)
        replay = exp.partial_value()
        bound = F(hi, g - 1) / F(g) ** K
        assert abs(alpha - replay) <= bound
        assert exp.exact == (replay == alpha)


class TestReduceToInterval:
    def test_odd_base_boundaries(self):
        assert D.reduce_to_interval(F(1, 2), 3) == F(1, 2)
        assert D.reduce_to_interval(F(3, 4), 3) == F(-1, 4)
        assert D.reduce_to_interval(F(7, 2), 3) == F(1, 2)

    def test_even_base_boundaries(self):
        assert D.reduce_to_interval(F(2, 3), 4) == F(2, 3)      # right endpoint
        assert D.reduce_to_interval(F(7, 10), 4) == F(-3, 10)   # beyond it


class TestWeight:
    def test_examples(self):
        assert D.nonzero_count(F(0), 3, 10) == 0
        assert D.nonzero_count(F(1, 3), 3, 10) == 1
        assert D.nonzero_count(F(1, 2), 3, 10) == 10

    def test_zero_weight_iff_tiny_norm(self, rng):
        # w = 0 exactly when the reduced angle lies below the digit-tail bound
        g, K = 3, 12
        hi = D.digit_range(g)[1]
        threshold = F(hi, g - 1) / F(g) ** K
        for _ in range(1000):
            alpha = D.reduce_to_interval(random_fraction(rng), g)
            if abs(alpha) == threshold:
                continue  # measure-zero boundary, both digit choices valid
            w = D.nonzero_count(alpha, g, K)
            assert (w == 0) == (abs(alpha) < threshold)

    def test_weight_monotone_in_K(self, rng):
        for _ in range(50):
            alpha = random_fraction(rng, 10**6)
            assert D.nonzero_count(alpha, 3, 10) <= D.nonzero_count(alpha, 3, 20)


class TestAlternations:
    def test_examples(self):
        assert D.alternation_count(F(0), 8) == 0
        assert D.alternation_count(F(1, 3), 6) == 6   # 0.010101...
        assert D.alternation_count(F(1, 2), 4) == 1   # 0.0111... convention

    def test_band_regression(self, baselines, rng):
        # ratio of the squared-norm sum to the alternation count stays inside
        # the recorded band
        chk_lo = math.inf
        chk_hi = 0.0
        for _ in range(300):
            q = rng.randint(2, 2**40)
            alpha = F(rng.randint(1, q - 1), q)
            ratio = float(D.frac_norm_sq_sum(alpha, 2, 60)) / max(
                D.alternation_count(alpha, 60), 1)
            chk_lo, chk_hi = min(chk_lo, ratio), max(chk_hi, ratio)
        band = baselines.get("digits.alternation_ratio_band.g2.K60.n1000")
        assert band["lo"] / 1.25 <= chk_lo
        assert chk_hi <= band["hi"] * 1.25


class TestNormSum:
    def test_examples(self):
        assert D.frac_norm_sq_sum(F(0), 3, 7) == 0
        assert D.frac_norm_sq_sum(F(1, 2), 3, 2) == F(1, 2)
        assert D.frac_norm_sq_sum(F(1, 3), 3, 3) == F(1, 9)

    @given(num=st.integers(0, 10**9), den=st.integers(1, 10**9),
           g=st.integers(2, 9), K=st.integers(0, 40))
    @settings(max_examples=100, deadline=None)
    def test_additive_in_K(self, num, den, g, K):
        alpha = F(num, den)
        total = D.frac_norm_sq_sum(alpha, g, K)
        assert 0 <= total <= F(K, 4)
        head = D.frac_norm_sq_sum(alpha, g, K // 2)
        tail = D.frac_norm_sq_sum(alpha * g ** (K // 2), g, K - K // 2)
        assert head + tail == total


class TestWeightNormSandwich:
    def test_examples(self):
        r = D.weight_norm_check(F(0), 3, 5)
        assert (r.lhs, r.mid, r.rhs, r.holds) == (0, 0, 0, True)
        r = D.weight_norm_check(F(1, 2), 3, 4)
        assert (r.lhs, r.mid, r.rhs) == (F(4, 144), 1, 4) and r.holds
        r = D.weight_norm_check(F(1, 3), 3, 4)
        assert (r.lhs, r.mid, r.rhs) == (F(1, 144), F(1, 9), 1) and r.holds

    def test_base_two_rejected(self):
        with pytest.raises(ValueError):
            D.weight_norm_check(F(1, 3), 2, 10)

    def test_random(self, rng):
        for g in (3, 4, 5, 10):
            for _ in range(100):
                assert D.weight_norm_check(random_fraction(rng), g, 50).holds


class TestSubadditivity:
    def test_random_pairs(self, rng):
        for g in (3, 5):
            for _ in range(100):
                rep = D.weight_subadditivity_check(
                    random_fraction(rng), random_fraction(rng), g, 50)
                assert rep.holds
                assert rep.bound == 48 * g * g * (rep.w_a + rep.w_b)


class TestReciprocalWeight:
    def test_half_base_three(self):
        rep = D.reciprocal_weight_check(1, 2, 3, 20)
        assert rep.weight == 20 and rep.bound == 19 and rep.holds

    def test_preconditions(self):
        with pytest.raises(ValueError):
            D.reciprocal_weight_check(1, 6, 3, 10)   # gcd(k, g) != 1
        with pytest.raises(ValueError):
            D.reciprocal_weight_check(4, 2, 3, 10)   # k | j


class TestProblemInstance:
    def test_derived_stats(self):
        inst = D.ProblemInstance(3, 12, 3**12)
        assert inst.mean_digit_sum == 12
        assert inst.digit_variance == F(2, 3)

    def test_m_range(self):
        with pytest.raises(ValueError):
            D.ProblemInstance(3, 4, 3**4 + 1)
        with pytest.raises(ValueError):
            D.ProblemInstance(3, 4, 3**3)
        D.ProblemInstance(3, 4, 3**3 + 1)
