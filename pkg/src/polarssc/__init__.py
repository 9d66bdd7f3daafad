"""Polar codes with successive syndrome-check decoding.

Encoding and code construction live in :mod:`polarssc.code_model`, the AWGN
channel in :mod:`polarssc.channel`, the conventional SC/SCL baselines in
:mod:`polarssc.sc_baseline`, the syndrome-check decoders in
:mod:`polarssc.ssc_decoder`, and the Monte Carlo sweep engine in
:mod:`polarssc.bench`.
"""

from ._accel import NUMBA_ENABLED, backend_name
from .bench import SweepPoint, compare_reference, run_point, run_sweep
from .channel import ChannelParams, FrameRng, awgn_llr, modulate, sigma_from_snr
from .code_model import (
    PolarCode,
    build_code,
    encode,
    generator_matrix,
    implied_message,
    load_frozen_file,
    load_sequence_file,
    parity_check_matrix,
    syndrome,
    write_frozen_file,
)
from .sc_baseline import DecodeOutcome, f_exact, f_min_sum, g_update, sc_decode, scl_decode
from .ssc_decoder import (
    SscTraversal,
    first_violated_frozen,
    harden,
    ssc_decode,
    ssc_list_decode,
)

__all__ = [
    "NUMBA_ENABLED",
    "backend_name",
    "PolarCode",
    "build_code",
    "encode",
    "generator_matrix",
    "implied_message",
    "parity_check_matrix",
    "syndrome",
    "load_frozen_file",
    "load_sequence_file",
    "write_frozen_file",
    "ChannelParams",
    "FrameRng",
    "awgn_llr",
    "modulate",
    "sigma_from_snr",
    "DecodeOutcome",
    "f_exact",
    "f_min_sum",
    "g_update",
    "sc_decode",
    "scl_decode",
    "SscTraversal",
    "harden",
    "first_violated_frozen",
    "ssc_decode",
    "ssc_list_decode",
    "SweepPoint",
    "run_point",
    "run_sweep",
    "compare_reference",
]

__version__ = "0.1.0"
