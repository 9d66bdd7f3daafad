"""GF(2) polar-code algebra: construction, encoding, matrices, syndromes.

A code of length N = 2^n is defined by which of the N transform inputs are
frozen to zero. The transform is the n-th Kronecker power of [[1, 0], [1, 1]]
in natural (non bit-reversed) row order, and it is an involution over GF(2),
so the same butterfly both encodes and recovers the message implied by a
codeword estimate.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

CONSTRUCTIONS = ("explicit", "rm", "bhattacharyya", "sequence-file")


@dataclass(frozen=True)
class PolarCode:
    """Block code P(N, K): the single source of truth for the frozen set.

    Attributes
    ----------
    n : int
        Stage count; N = 2^n.
    K : int
        Message length.
    frozen_mask : ndarray
        Length-N int8 array, 1 at frozen positions. Frozen values are zero.
    construction : str
        One of ``explicit``, ``rm``, ``bhattacharyya``, ``sequence-file``.
    """

    n: int
    K: int
    frozen_mask: np.ndarray
    construction: str = "explicit"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("stage count must be >= 0")
        N = 1 << self.n
        mask = np.ascontiguousarray(np.asarray(self.frozen_mask, dtype=np.int8))
        if mask.shape != (N,):
            raise ValueError(f"frozen_mask must have length {N}")
        if not np.all((mask == 0) | (mask == 1)):
            raise ValueError("frozen_mask entries must be 0 or 1")
        if int(mask.sum()) != N - self.K:
            raise ValueError(
                f"frozen_mask has {int(mask.sum())} ones, expected N-K = {N - self.K}"
            )
        mask.setflags(write=False)
        object.__setattr__(self, "frozen_mask", mask)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def frozen_indices(self) -> np.ndarray:
        """Frozen positions in ascending order."""
        return np.flatnonzero(self.frozen_mask == 1)

    @property
    def info_indices(self) -> np.ndarray:
        """Information positions in ascending order."""
        return np.flatnonzero(self.frozen_mask == 0)

    def parity_check_matrix(self) -> np.ndarray:
        if "H" not in self._cache:
            self._cache["H"] = parity_check_matrix(self)
        return self._cache["H"]


def _check_bits(bits, N, name="bits"):
    arr = np.ascontiguousarray(np.asarray(bits, dtype=np.int8))
    if arr.shape != (N,):
        raise ValueError(f"{name} must have length {N}, got {arr.shape}")
    return arr


def generator_matrix(n: int) -> np.ndarray:
    """N x N transform matrix: the n-th Kronecker power of [[1,0],[1,1]]."""
    if n < 0:
        raise ValueError("stage count must be >= 0")
    g = np.array([[1]], dtype=np.int8)
    base = np.array([[1, 0], [1, 1]], dtype=np.int8)
    for _ in range(n):
        g = np.kron(g, base)
    return g


def encode(code: PolarCode, u) -> np.ndarray:
    """x = u.G over GF(2) via the O(N log N) butterfly.

    Frozen positions of a message are expected to be zero, but this is the
    raw transform and does not enforce it.
    """
    x = _check_bits(u, code.N, "u").copy()
    _kernels.transform_inplace(x)
    return x


def implied_message(code: PolarCode, x) -> np.ndarray:
    """u = x.G over GF(2); inverts encode since the transform is an involution."""
    u = _check_bits(x, code.N, "x").copy()
    _kernels.transform_inplace(u)
    return u


def parity_check_matrix(code: PolarCode) -> np.ndarray:
    """N x (N-K) matrix: the transform columns at frozen indices, ascending."""
    g = generator_matrix(code.n)
    return np.ascontiguousarray(g[:, code.frozen_indices])


def syndrome(code: PolarCode, x) -> np.ndarray:
    """x.H over GF(2); bit j corresponds to the j-th smallest frozen index.

    Zero iff x is a codeword; equals the frozen-position restriction of x.G.
    """
    xv = _check_bits(x, code.N, "x")
    h = code.parity_check_matrix()
    return (xv.astype(np.int64) @ h.astype(np.int64) % 2).astype(np.int8)


def _rm_frozen(N: int, K: int) -> np.ndarray:
    # generator-row weight is 2^popcount(i): freeze the lightest rows,
    # ties freeze the smaller index
    idx = np.arange(N)
    pop = np.array([bin(i).count("1") for i in range(N)])
    order = np.lexsort((idx, pop))
    return order[: N - K]


def _bhattacharyya_frozen(N: int, K: int, design_snr_db: float) -> np.ndarray:
    # z-parameter recursion z -> (2z - z^2, z^2) per stage, natural index
    # order; freeze the largest-z channels, ties freeze the larger index
    z0 = float(np.exp(-(10.0 ** (design_snr_db / 10.0)) * K / N))
    z = np.array([z0], dtype=np.float64)
    while z.shape[0] < N:
        minus = 2.0 * z - z * z
        plus = z * z
        nz = np.empty(2 * z.shape[0], dtype=np.float64)
        nz[0::2] = minus
        nz[1::2] = plus
        z = nz
    order = np.lexsort((-np.arange(N), -z))
    return order[: N - K]


def _sequence_frozen(N: int, K: int, sequence) -> np.ndarray:
    seq = np.asarray(sequence, dtype=np.int64)
    seq = seq[seq < N]
    if np.unique(seq).shape[0] != seq.shape[0]:
        raise ValueError("reliability sequence contains duplicate indices")
    if seq.shape[0] < N - K:
        raise ValueError(
            f"reliability sequence has only {seq.shape[0]} entries below {N}"
        )
    return seq[: N - K]


def build_code(
    n: int,
    K: int,
    construction: str = "explicit",
    frozen=None,
    design_snr_db: float = 0.0,
    sequence=None,
) -> PolarCode:
    """Construct a PolarCode with a fully determined frozen set.

    Parameters
    ----------
    n, K : int
        Stage count (N = 2^n) and message length, 0 <= K <= N.
    construction : str
        "explicit" takes `frozen` (N-K indices); "rm" freezes the N-K
        smallest-popcount indices; "bhattacharyya" freezes the N-K least
        reliable channels of the z-parameter recursion at `design_snr_db`;
        "sequence-file" freezes the first N-K entries of `sequence`
        (ascending reliability, entries >= N ignored).
    """
    if n < 0:
        raise ValueError("stage count must be >= 0")
    N = 1 << n
    if not 0 <= K <= N:
        raise ValueError(f"K must be in [0, {N}], got {K}")

    if construction == "explicit":
        if frozen is None:
            frozen = []
        fr = np.asarray(sorted(int(i) for i in frozen), dtype=np.int64)
        if fr.shape[0] != N - K:
            raise ValueError(
                f"explicit frozen list must have {N - K} indices, got {fr.shape[0]}"
            )
        if fr.shape[0] > 0:
            if fr[0] < 0 or fr[-1] >= N:
                raise ValueError("frozen index out of range")
            if np.unique(fr).shape[0] != fr.shape[0]:
                raise ValueError("duplicate frozen index")
    elif construction == "rm":
        fr = _rm_frozen(N, K)
    elif construction == "bhattacharyya":
        fr = _bhattacharyya_frozen(N, K, design_snr_db)
    elif construction == "sequence-file":
        if sequence is None:
            raise ValueError("sequence-file construction requires a sequence")
        if isinstance(sequence, (str, bytes)) or hasattr(sequence, "__fspath__"):
            sequence = load_sequence_file(sequence)
        fr = _sequence_frozen(N, K, sequence)
    else:
        raise ValueError(f"unknown construction {construction!r}")

    mask = np.zeros(N, dtype=np.int8)
    mask[fr] = 1
    return PolarCode(n=n, K=K, frozen_mask=mask, construction=construction)


def load_sequence_file(path) -> np.ndarray:
    """Read a reliability-sequence file: one index per line, least reliable first."""
    try:
        seq = np.loadtxt(path, dtype=np.int64, ndmin=1)
    except FileNotFoundError:
        raise
    except OSError:
        raise
    return seq


def write_frozen_file(path, code: PolarCode) -> None:
    """Write a frozen-set file: first line "N K", second line the frozen indices."""
    with open(path, "w") as fh:
        fh.write(f"{code.N} {code.K}\n")
        fh.write(" ".join(str(int(i)) for i in code.frozen_indices) + "\n")


def load_frozen_file(path) -> PolarCode:
    """Build a code from a frozen-set file (see write_frozen_file)."""
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 2:
            raise ValueError("frozen-set file must start with a line 'N K'")
        N, K = int(head[0]), int(head[1])
        rest = fh.read().split()
    if N <= 0 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of 2, got {N}")
    frozen = [int(t) for t in rest]
    return build_code(N.bit_length() - 1, K, "explicit", frozen=frozen)
