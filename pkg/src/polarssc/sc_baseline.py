"""Conventional SC and SCL decoders (min-sum), the correctness baselines.

The min-sum f rule is normative for every decoder in this package; the exact
boxplus `f_exact` exists only as a comparison oracle. Hard decisions map
LLR >= 0 to bit 0. Under the level-traversal latency model SC costs exactly
2N - 2 time steps and SCL costs 2N - 2 + K.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .code_model import PolarCode, encode


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one decode: message, codeword, and latency accounting."""

    u_hat: np.ndarray
    x_hat: np.ndarray
    time_steps: int
    rounds: int = 0
    early_terminated: bool = False


def f_exact(a: float, b: float) -> float:
    """Exact boxplus 2*atanh(tanh(a/2)*tanh(b/2)).

    Evaluated in the equivalent form min + log1p(e^-(|a|+|b|)) -
    log1p(e^-||a|-|b||), which stays accurate where tanh saturates.
    """
    s = min(abs(a), abs(b))
    v = s + np.log1p(np.exp(-(abs(a) + abs(b)))) - np.log1p(np.exp(-abs(abs(a) - abs(b))))
    return float(-v if (a < 0.0) != (b < 0.0) else v)


def f_min_sum(a: float, b: float) -> float:
    """Min-sum approximation sgn(a*b) * min(|a|, |b|)."""
    s = min(abs(a), abs(b))
    return -s if (a < 0.0) != (b < 0.0) else s


def g_update(a: float, b: float, ps: int) -> float:
    """Partial-sum update b + (-1)^ps * a."""
    return b + a if ps == 0 else b - a


def _check_llr(code: PolarCode, y) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(y, dtype=np.float64))
    if arr.shape != (code.N,):
        raise ValueError(f"LLR word must have length {code.N}, got {arr.shape}")
    return arr


def sc_decode(code: PolarCode, y) -> DecodeOutcome:
    """Successive-cancellation decode; 2N - 2 level traversals."""
    yv = _check_llr(code, y)
    u_hat = _kernels.sc_decode_batch(yv[None, :], code.frozen_mask, code.n)[0]
    return DecodeOutcome(
        u_hat=u_hat, x_hat=encode(code, u_hat), time_steps=2 * code.N - 2
    )


def scl_decode(code: PolarCode, y, list_size: int) -> DecodeOutcome:
    """SC list decode keeping the `list_size` best paths; 2N - 2 + K steps.

    Path metric: deciding bit value b at LLR l adds |l| when b contradicts
    the sign of l. Survivor ties break on parent path index, then bit value
    0; the winner is the smallest metric, ties on path index.
    """
    if list_size < 1:
        raise ValueError(f"list size must be >= 1, got {list_size}")
    yv = _check_llr(code, y)
    u_hat = _kernels.scl_decode_batch(yv[None, :], code.frozen_mask, list_size, code.n)[0]
    return DecodeOutcome(
        u_hat=u_hat, x_hat=encode(code, u_hat), time_steps=2 * code.N - 2 + code.K
    )
