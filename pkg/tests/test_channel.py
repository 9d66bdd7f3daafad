import numpy as np
import pytest
from scipy.stats import norm

from polarssc import FrameRng, awgn_llr, modulate, sigma_from_snr
from polarssc.channel import batch_channel, frame_uniforms


class TestModulate:
    def test_mapping(self):
        assert modulate([0, 1]).tolist() == [1.0, -1.0]

    def test_all_zero(self):
        assert modulate(np.zeros(8, np.int8)).tolist() == [1.0] * 8

    def test_elementwise(self):
        x = [1, 0, 0, 1, 1, 0, 0, 1]
        assert modulate(x).tolist() == [-1, 1, 1, -1, -1, 1, 1, -1]


class TestSigmaFromSnr:
    def test_zero_db_half_rate(self):
        p = sigma_from_snr(0.0, 0.5)
        assert p.sigma == pytest.approx(1.0)
        assert p.llr_scale == pytest.approx(2.0)

    def test_four_db(self):
        p = sigma_from_snr(4.0, 0.5)
        assert p.sigma ** 2 == pytest.approx(0.398107, abs=1e-5)
        assert p.sigma == pytest.approx(0.630957, abs=1e-5)

    def test_ten_db(self):
        p = sigma_from_snr(10.0, 0.5)
        assert p.sigma ** 2 == pytest.approx(0.1)

    def test_bad_rate(self):
        with pytest.raises(ValueError):
            sigma_from_snr(0.0, 0.0)
        with pytest.raises(ValueError):
            sigma_from_snr(0.0, 1.5)


class TestAwgnLlr:
    def test_zero_noise(self):
        p = sigma_from_snr(0.0, 0.5)
        y = awgn_llr(np.zeros(8, np.int8), p, rng=None)
        assert y.tolist() == [2.0] * 8

    def test_zero_noise_recovers_x(self):
        p = sigma_from_snr(0.0, 0.5)
        x = np.array([1, 0, 1, 1, 0, 0, 1, 0], np.int8)
        y = awgn_llr(x, p, rng=None)
        assert np.array_equal((y < 0).astype(np.int8), x)

    def test_empirical_mean(self):
        # y = 2(s + n) with s = +1, sigma = 1: mean 2, sd 2
        p = sigma_from_snr(0.0, 0.5)
        n_draws = 10 ** 6
        N = 1000
        total = 0.0
        for f in range(n_draws // N):
            total += awgn_llr(np.zeros(N, np.int8), p, FrameRng(7, f)).sum()
        assert total / n_draws == pytest.approx(2.0, abs=0.01)

    def test_sign_flip_rate(self):
        # P(y < 0 | bit 0) = P(n < -1) with sigma = 1
        p = sigma_from_snr(0.0, 0.5)
        n_draws = 10 ** 6
        N = 1000
        flips = 0
        for f in range(n_draws // N):
            flips += int((awgn_llr(np.zeros(N, np.int8), p, FrameRng(8, f)) < 0).sum())
        assert flips / n_draws == pytest.approx(norm.cdf(-1.0), abs=0.002)

    def test_all_finite(self):
        p = sigma_from_snr(-10.0, 0.5)
        y = awgn_llr(np.zeros(4096, np.int8), p, FrameRng(9, 0))
        assert np.isfinite(y).all()


class TestDeterminism:
    def test_same_seed_identical(self):
        a = frame_uniforms(42, 0, 100, 32)
        b = frame_uniforms(42, 0, 100, 32)
        assert np.array_equal(a, b)

    def test_chunking_invariant(self):
        # frames [0, 100) in one call == [0, 50) + [50, 100)
        whole = frame_uniforms(42, 0, 100, 32)
        parts = np.vstack([frame_uniforms(42, 0, 50, 32), frame_uniforms(42, 50, 50, 32)])
        assert np.array_equal(whole, parts)

    def test_batch_channel_chunking(self):
        info = np.arange(16)
        p = sigma_from_snr(2.0, 0.5)
        u1, y1 = batch_channel(32, info, p, 5, 0, 64)
        u2a, y2a = batch_channel(32, info, p, 5, 0, 20)
        u2b, y2b = batch_channel(32, info, p, 5, 20, 44)
        assert np.array_equal(u1, np.vstack([u2a, u2b]))
        assert np.array_equal(y1, np.vstack([y2a, y2b]))

    def test_frame_rng_matches_batch(self):
        info = np.arange(8)  # K = 8 of N = 16
        p = sigma_from_snr(1.0, 0.5)
        u, y = batch_channel(16, info, p, 11, 0, 5)
        r = FrameRng(11, 3)
        assert np.array_equal(u[3, info], r.message_bits(16, 8))
        x = u[3].copy()
        half = 1
        while half < 16:
            step = half * 2
            for base in range(0, 16, step):
                x[base : base + half] ^= x[base + half : base + step]
            half = step
        assert awgn_llr(x, p, r) == pytest.approx(y[3].tolist())
