"""BPSK over AWGN and LLR formation with a reproducible randomness contract.

The SNR axis is Eb/N0 in dB, so sigma^2 = 1 / (2 * rate * 10^(snr_db/10))
for unit-energy BPSK, and the matched-filter LLR is (2/sigma^2) * received.

Randomness is counter based: frame f of a run with master seed s draws its
uniforms from a PCG64(s) stream advanced to position f * 2N. Within the
2N-word frame block, words [0, N) drive the message bits (first K used) and
words [N, 2N) the noise samples. Any chunking of frames therefore reproduces
bit-identical data, independent of worker count.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri


@dataclass(frozen=True)
class ChannelParams:
    """Noise model for one operating point; sigma2 = 1/(2*rate*10^(snr_db/10))."""

    snr_db: float
    rate: float
    sigma: float
    llr_scale: float


def sigma_from_snr(snr_db: float, rate: float) -> ChannelParams:
    """Channel parameters for an Eb/N0 operating point at the given code rate."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    sigma2 = 1.0 / (2.0 * rate * 10.0 ** (snr_db / 10.0))
    sigma = float(np.sqrt(sigma2))
    return ChannelParams(
        snr_db=float(snr_db), rate=float(rate), sigma=sigma, llr_scale=2.0 / sigma2
    )


def modulate(x) -> np.ndarray:
    """BPSK map {0,1} -> {+1,-1}."""
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def frame_uniforms(master_seed: int, first_frame: int, nframes: int, N: int) -> np.ndarray:
    """Uniform draws for frames [first_frame, first_frame + nframes), shape (nframes, 2N)."""
    bg = np.random.PCG64(master_seed)
    bg.advance(first_frame * 2 * N)
    gen = np.random.Generator(bg)
    return gen.random((nframes, 2 * N))


def gaussian_from_uniform(u: np.ndarray) -> np.ndarray:
    """Standard normals via the inverse CDF; consumes one uniform per sample.

    The half-ulp offset keeps the argument strictly inside (0, 1) so the
    result is always finite.
    """
    return ndtri(u + 2.0 ** -54)


class FrameRng:
    """Deterministic per-frame random source: (master_seed, frame_index)."""

    def __init__(self, master_seed: int, frame_index: int = 0):
        self.master_seed = int(master_seed)
        self.frame_index = int(frame_index)

    def frame_block(self, N: int) -> np.ndarray:
        """The frame's 2N uniform words."""
        return frame_uniforms(self.master_seed, self.frame_index, 1, N)[0]

    def message_bits(self, N: int, K: int) -> np.ndarray:
        """K message bits from words [0, K) of the frame block."""
        return (self.frame_block(N)[:K] < 0.5).astype(np.int8)

    def noise(self, N: int, sigma: float) -> np.ndarray:
        """N Gaussian(0, sigma^2) samples from words [N, 2N) of the frame block."""
        return sigma * gaussian_from_uniform(self.frame_block(N)[N:])


def awgn_llr(x, params: ChannelParams, rng: FrameRng | None) -> np.ndarray:
    """Channel LLRs y = (2/sigma^2) * (modulate(x) + noise).

    `rng=None` selects the zero-noise mode used by deterministic tests.
    """
    s = modulate(x)
    if rng is None:
        noise = 0.0
    else:
        noise = rng.noise(s.shape[0], params.sigma)
    return params.llr_scale * (s + noise)


def batch_channel(
    code_N: int,
    info_indices: np.ndarray,
    params: ChannelParams,
    master_seed: int,
    first_frame: int,
    nframes: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Messages and channel LLRs for a contiguous frame range.

    Returns (u, llr): u is (nframes, N) int8 with random bits at the
    information positions, llr is (nframes, N) float64 for the transmitted
    codewords. Bit-identical for any chunking of the same frame range.
    """
    uni = frame_uniforms(master_seed, first_frame, nframes, code_N)
    u = np.zeros((nframes, code_N), dtype=np.int8)
    u[:, info_indices] = uni[:, : info_indices.shape[0]] < 0.5
    x = u.copy()
    half = 1
    while half < code_N:
        step = half << 1
        for base in range(0, code_N, step):
            x[:, base : base + half] ^= x[:, base + half : base + step]
        half = step
    s = 1.0 - 2.0 * x.astype(np.float64)
    noise = params.sigma * gaussian_from_uniform(uni[:, code_N:])
    llr = params.llr_scale * (s + noise)
    return u, llr
