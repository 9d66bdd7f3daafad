import numpy as np
import pytest

from polarssc import build_code

# worked example: P(8,4), frozen {0,1,2,4}, channel LLRs below harden to
# x = 00111001 with syndrome 0010; one refinement with e = 10100000 yields
# the codeword 10011001 and message 00000111
FIG_Y = np.array([0.77, 0.56, -0.08, -1.51, -1.44, 2.89, 2.33, -0.69])
FIG_X0 = np.array([0, 0, 1, 1, 1, 0, 0, 1], dtype=np.int8)
FIG_SYN = np.array([0, 0, 1, 0], dtype=np.int8)
FIG_E2 = np.array([1, 0, 1, 0, 0, 0, 0, 0], dtype=np.int8)
FIG_X1 = np.array([1, 0, 0, 1, 1, 0, 0, 1], dtype=np.int8)
FIG_U = np.array([0, 0, 0, 0, 0, 1, 1, 1], dtype=np.int8)


@pytest.fixture
def code84():
    return build_code(3, 4, "explicit", frozen=[0, 1, 2, 4])


@pytest.fixture
def fig_y():
    return FIG_Y.copy()


def minsum(a, b):
    s = min(abs(a), abs(b))
    return -s if (a < 0) != (b < 0) else s


def ref_sc(y, frozen, forced=None):
    """Textbook recursive min-sum SC, independent of the package kernels.

    Decisions: frozen -> 0; else sign of the LLR (>= 0 -> 0); `forced`
    overrides the decisions (for path-metric evaluation of a candidate u).
    Returns (u, x, decision llrs, path metric).
    """
    N = len(y)
    if N == 1:
        l = y[0]
        if frozen[0]:
            u = 0
        elif forced is not None:
            u = int(forced[0])
        else:
            u = 0 if l >= 0 else 1
        pay = abs(l) if u != (0 if l >= 0 else 1) else 0.0
        return [u], [u], [l], pay
    h = N // 2
    upper = [minsum(y[i], y[i + h]) for i in range(h)]
    fa = forced[:h] if forced is not None else None
    ua, xa, la, ma = ref_sc(upper, frozen[:h], fa)
    lower = [y[i + h] + (y[i] if xa[i] == 0 else -y[i]) for i in range(h)]
    fb = forced[h:] if forced is not None else None
    ub, xb, lb, mb = ref_sc(lower, frozen[h:], fb)
    x = [xa[i] ^ xb[i] for i in range(h)] + list(xb)
    return list(ua) + list(ub), x, list(la) + list(lb), ma + mb


def ref_path_metric(y, frozen, u):
    """Metric of a forced decision vector under the reference recursion."""
    _, _, _, metric = ref_sc(y, frozen, forced=list(u))
    return metric


def naive_transform(u):
    """O(N^2) GF(2) multiply by the Kronecker-power matrix (encode oracle)."""
    u = np.asarray(u, dtype=np.int64)
    N = u.shape[0]
    x = np.zeros(N, dtype=np.int64)
    for j in range(N):
        acc = 0
        for i in range(N):
            if (i & j) == j:  # matrix entry is 1 iff j's bits are a subset of i's
                acc ^= u[i]
        x[j] = acc
    return x.astype(np.int8)
