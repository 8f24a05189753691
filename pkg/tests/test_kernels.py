import os
import subprocess
import sys

import numpy as np
import pytest

from nivenlab import _kernels as K
from nivenlab._backend import USE_NUMBA


class TestPhaseDp:
    def test_theta_zero_counts_strings(self):
        fracs = np.zeros((1, 4, 3))
        # coefficient of x^4 in (1+x+x^2)^4
        assert K.phase_dp_batch(fracs, 4)[0] == pytest.approx(19)
        assert K.phase_dp_batch_np(fracs, 4)[0] == pytest.approx(19)

    def test_backends_agree(self, rng):
        fracs = np.array([[[rng.random() for _ in range(3)] for _ in range(8)]
                          for _ in range(16)])
        fracs[:, :, 0] = 0.0
        for k in (0, 5, 12):
            a = K.phase_dp_batch(fracs, k)
            b = K.phase_dp_batch_np(fracs, k)
            assert np.allclose(a, b, rtol=0, atol=1e-12)

    @pytest.mark.skipif(not USE_NUMBA, reason="numba backend not active")
    def test_numba_selected(self):
        assert K.phase_dp_batch is not K.phase_dp_batch_np


class TestRepsDp:
    def test_backends_agree_exactly(self, rng):
        primes = np.array(K.crt_primes(3), dtype=np.int64)
        for _ in range(10):
            g = rng.choice((3, 4))
            Kd = rng.randint(2, 5)
            kt = [rng.randint(0, (g - 1) * Kd) for _ in range(3)]
            M = rng.randint(0, 3 * g**Kd - 3)
            digs = []
            m = M
            for _ in range(Kd):
                m, d = divmod(m, g)
                digs.append(d)
            digs.append(m)
            md = np.array(digs, dtype=np.int64)
            a = K.reps_dp(md, g, *kt, primes)
            b = K.reps_dp_np(md, g, *kt, primes)
            assert np.array_equal(a, b)


class TestCrt:
    def test_primes_are_prime_and_distinct(self):
        ps = K.crt_primes(8)
        assert len(set(ps)) == 8
        for p in ps:
            assert K._is_prime(p)
            assert p < 2**30

    def test_combine_roundtrip(self, rng):
        ps = K.crt_primes(5)
        modulus = 1
        for p in ps:
            modulus *= p
        for _ in range(20):
            x = rng.randint(0, modulus - 1)
            assert K.crt_combine([x % p for p in ps], ps) == x


class TestEnvFlagFallback:
    def test_numpy_backend_via_env(self, tmp_path):
        script = tmp_path / "probe.py"
        script.write_text(
            "import numpy as np\n"
            "from nivenlab import backend_name\n"
            "from nivenlab import _kernels as K\n"
            "assert backend_name() == 'numpy'\n"
            "assert K.phase_dp_batch is K.phase_dp_batch_np\n"
            "assert K.reps_dp is K.reps_dp_np\n"
            "print('%.12f' % abs(K.phase_dp_batch(np.zeros((1, 2, 3)), 2)[0]))\n")
        env = dict(os.environ, NIVENLAB_NO_NUMBA="1")
        out = subprocess.run([sys.executable, str(script)], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "3.000000000000"
