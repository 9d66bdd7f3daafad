"""Successive syndrome-check decoding.

The decoder hardens the channel LLRs into a codeword estimate x, then loops:
check the syndrome; if nonzero, find the first violated frozen bit, compute
its LLR by a targeted right-to-left traversal (g nodes read their partial
sums from the hard values of x, so no bit-by-bit decision feedback is
needed), retrace left-to-right to build a sparse error vector, and refine
x by XOR. Bit operations are free under the latency model; only level
traversals cost time steps.

Two accounting modes are reported: "full-pass" charges n levels per
refinement round, "memoized" counts only the stage levels actually
recomputed (cached windows whose inputs did not change are reused).
"""

import numpy as np

from . import _kernels
from .code_model import PolarCode
from .sc_baseline import DecodeOutcome

LATENCY_MODES = ("full-pass", "memoized")


def harden(y) -> np.ndarray:
    """Elementwise hard decision: bit 0 iff the LLR is >= 0."""
    yv = np.asarray(y, dtype=np.float64)
    x = np.empty(yv.shape[0], dtype=np.int8)
    _kernels.harden_into(yv, x)
    return x


def first_violated_frozen(code: PolarCode, syn) -> int | None:
    """Smallest frozen index whose syndrome bit is 1, or None if clean."""
    sv = np.asarray(syn)
    nz = np.flatnonzero(sv != 0)
    if nz.shape[0] == 0:
        return None
    return int(code.frozen_indices[nz[0]])


class SscTraversal:
    """Stage cache and single-step operations of the syndrome-check decoder.

    Drives the same kernels as the batch decoder one step at a time; useful
    for traces, tests, and the CLI. Holds the current estimate `x`, the
    windowed intermediate LLRs with their window positions, and the
    per-stage hard values derived from x.
    """

    def __init__(self, code: PolarCode, y):
        self.code = code
        self.y = np.ascontiguousarray(np.asarray(y, dtype=np.float64))
        if self.y.shape != (code.N,):
            raise ValueError(f"LLR word must have length {code.N}")
        n, N = code.n, code.N
        self.x = harden(self.y)
        self.hard = np.empty((n + 1) * N, dtype=np.int8)
        _kernels.compute_hard_stages(self.x, self.hard, n, N)
        self.llr_w = np.zeros(max(N - 1, 1), dtype=np.float64)
        self.wbase = np.full(max(n, 1), -1, dtype=np.int64)

    @property
    def implied_message(self) -> np.ndarray:
        """x.G, read off stage 0 of the hard values."""
        return self.hard[: self.code.N].copy()

    @property
    def syndrome(self) -> np.ndarray:
        """Frozen-position restriction of the implied message."""
        return self.implied_message[self.code.frozen_indices]

    def targeted_llr(self, i: int) -> tuple[float, int]:
        """LLR of bit i given x; returns (llr, number of levels recomputed)."""
        if not 0 <= i < self.code.N:
            raise ValueError(f"bit index {i} out of range")
        llr, levels = _kernels.targeted_pass(
            self.y, i, self.code.n, self.code.N, self.llr_w, self.wbase, self.hard
        )
        return float(llr), int(levels).bit_count()

    def stage_llr(self, k: int, j: int) -> float:
        """Cached intermediate LLR at stage k, row j (stage n is the channel)."""
        n, N = self.code.n, self.code.N
        if k == n:
            return float(self.y[j])
        half = 1 << k
        return float(self.llr_w[half - 1 + (j & (half - 1))])

    def error_vector(self, i: int) -> np.ndarray:
        """Channel-side flip pattern for target i; needs a completed targeted_llr(i)."""
        n, N = self.code.n, self.code.N
        # guard: the retrace reads the windows of target i
        for k in range(n):
            base = (i >> k) << k
            if self.wbase[k] != base:
                raise ValueError(f"stage cache is not positioned for target {i}")
        rows = np.empty(N, dtype=np.int64)
        cnt = _kernels.build_error_vector(self.y, i, n, N, self.llr_w, rows)
        e = np.zeros(N, dtype=np.int8)
        e[rows[:cnt]] = 1
        return e

    def refine(self, e) -> None:
        """x ^= e; rebuilds the hard stages (cached windows stay valid)."""
        ev = np.asarray(e, dtype=np.int8)
        rows = np.flatnonzero(ev != 0).astype(np.int64)
        _kernels.apply_refine(
            self.x, rows, rows.shape[0], self.hard, self.code.n, self.code.N
        )


def _check_llr(code: PolarCode, y) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(y, dtype=np.float64))
    if arr.shape != (code.N,):
        raise ValueError(f"LLR word must have length {code.N}, got {arr.shape}")
    return arr


def _pick_steps(full, memo, latency_mode):
    if latency_mode == "full-pass":
        return int(full)
    if latency_mode == "memoized":
        return int(memo)
    raise ValueError(f"unknown latency mode {latency_mode!r}")


def ssc_decode(code: PolarCode, y, latency_mode: str = "full-pass") -> DecodeOutcome:
    """Syndrome-check decode; produces the SC result without decoding info bits."""
    yv = _check_llr(code, y)
    u, rounds, full, memo, ok = _kernels.ssc_decode_batch(
        yv[None, :], code.frozen_mask, code.n
    )
    if ok[0] == 0:
        raise RuntimeError("refinement loop exceeded its round guard")
    x_hat = u[0].copy()
    _kernels.transform_inplace(x_hat)
    return DecodeOutcome(
        u_hat=u[0],
        x_hat=x_hat,
        time_steps=_pick_steps(full[0], memo[0], latency_mode),
        rounds=int(rounds[0]),
        early_terminated=int(rounds[0]) == 0,
    )


def ssc_list_decode(
    code: PolarCode, y, list_size: int, latency_mode: str = "memoized"
) -> DecodeOutcome:
    """Syndrome-check list decode; stops once the best path is a codeword."""
    if list_size < 1:
        raise ValueError(f"list size must be >= 1, got {list_size}")
    yv = _check_llr(code, y)
    u, rounds, full, memo, ok = _kernels.ssc_list_decode_batch(
        yv[None, :], code.frozen_mask, list_size, code.n
    )
    if ok[0] == 0:
        raise RuntimeError("refinement loop exceeded its round guard")
    x_hat = u[0].copy()
    _kernels.transform_inplace(x_hat)
    return DecodeOutcome(
        u_hat=u[0],
        x_hat=x_hat,
        time_steps=_pick_steps(full[0], memo[0], latency_mode),
        rounds=int(rounds[0]),
        early_terminated=int(rounds[0]) == 0,
    )
