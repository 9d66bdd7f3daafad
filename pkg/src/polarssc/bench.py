"""Monte Carlo sweep engine: FER and average time-steps versus SNR.

Frames are independent and indexed globally per point; frame f draws its
message and noise from the counter-based stream of :mod:`polarssc.channel`,
so a point's results are bit-identical for any chunking or worker count.
A frame error is any difference between the decoded and transmitted message.
Stop rules are either a fixed frame count or a (min_errors, max_frames)
pair evaluated at fixed chunk boundaries.
"""

import csv
import io
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import batch_channel, sigma_from_snr
from .code_model import PolarCode
from .reference_curves import ReferenceCurve, get_reference

DECODERS = ("sc", "scl", "ssc", "ssc-list")
CSV_HEADER = "decoder,code,N,K,L,snr_db,latency_mode,frames,frame_errors,fer,ci95_fer,avg_time_steps,seed"

CHUNK_FRAMES = 8192


@dataclass(frozen=True)
class SweepPoint:
    """One (decoder, code, SNR) Monte Carlo result."""

    decoder: str
    code: str
    N: int
    K: int
    L: int
    snr_db: float
    latency_mode: str
    frames: int
    frame_errors: int
    fer: float
    ci95_fer: float
    avg_time_steps: float
    seed: int

    @property
    def low_confidence(self) -> bool:
        """Fewer than 20 observed errors: the normal-approximation CI is unreliable."""
        return self.frame_errors < 20


def _decode_chunk(llrs, frozen_mask, n, N, K, decoder, list_size):
    """Decode one chunk; returns (u_hats, steps_full_sum, steps_memo_sum)."""
    F = llrs.shape[0]
    if decoder == "sc":
        u_hats = _kernels.sc_decode_batch(llrs, frozen_mask, n)
        const = 2 * N - 2
        return u_hats, const * F, const * F
    if decoder == "scl":
        u_hats = _kernels.scl_decode_batch(llrs, frozen_mask, list_size, n)
        const = 2 * N - 2 + K
        return u_hats, const * F, const * F
    if decoder == "ssc":
        u_hats, _, full, memo, ok = _kernels.ssc_decode_batch(llrs, frozen_mask, n)
    elif decoder == "ssc-list":
        u_hats, _, full, memo, ok = _kernels.ssc_list_decode_batch(
            llrs, frozen_mask, list_size, n
        )
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    if ok.min() == 0:
        raise RuntimeError("refinement loop guard tripped during simulation")
    return u_hats, int(full.sum()), int(memo.sum())


def _run_chunk(args):
    (n, K, frozen_mask, decoder, list_size, snr_db, seed, first, count) = args
    N = 1 << n
    info = np.flatnonzero(frozen_mask == 0)
    params = sigma_from_snr(snr_db, K / N)
    u, llrs = batch_channel(N, info, params, seed, first, count)
    u_hats, full, memo = _decode_chunk(llrs, frozen_mask, n, N, K, decoder, list_size)
    errors = int((u_hats != u).any(axis=1).sum())
    return count, errors, full, memo


def run_point(
    code: PolarCode,
    decoder: str,
    snr_db: float,
    seed: int,
    frames: int | None = None,
    min_errors: int | None = None,
    max_frames: int | None = None,
    list_size: int = 1,
    latency_mode: str = "full-pass",
    code_id: str | None = None,
    workers: int = 1,
    chunk_frames: int = CHUNK_FRAMES,
) -> SweepPoint:
    """Simulate one (decoder, SNR) point.

    Exactly one stop rule applies: `frames=M`, or `min_errors=E` with
    `max_frames=M` (evaluated at chunk boundaries, so it is deterministic
    for any worker count).
    """
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    if decoder in ("scl", "ssc-list") and list_size < 1:
        raise ValueError("list decoders need list_size >= 1")
    if latency_mode not in ("full-pass", "memoized"):
        raise ValueError(f"unknown latency mode {latency_mode!r}")
    if frames is not None:
        if frames < 1:
            raise ValueError("frames must be >= 1")
        if min_errors is not None or max_frames is not None:
            raise ValueError("give either frames or (min_errors, max_frames)")
        total = frames
        stop_errors = None
    else:
        if min_errors is None or max_frames is None:
            raise ValueError("give either frames or (min_errors, max_frames)")
        if min_errors < 1 or max_frames < 1:
            raise ValueError("min_errors and max_frames must be >= 1")
        total = max_frames
        stop_errors = min_errors

    starts = list(range(0, total, chunk_frames))
    tasks = [
        (
            code.n,
            code.K,
            np.asarray(code.frozen_mask),
            decoder,
            list_size,
            float(snr_db),
            int(seed),
            first,
            min(chunk_frames, total - first),
        )
        for first in starts
    ]

    nframes = 0
    nerrors = 0
    sum_full = 0
    sum_memo = 0

    def _consume(results):
        nonlocal nframes, nerrors, sum_full, sum_memo
        for count, errors, full, memo in results:
            nframes += count
            nerrors += errors
            sum_full += full
            sum_memo += memo
            if stop_errors is not None and nerrors >= stop_errors:
                return True
        return False

    if workers <= 1:
        for task in tasks:
            if _consume([_run_chunk(task)]):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # waves keep the in-order stop rule while letting chunks run in parallel
            for w0 in range(0, len(tasks), workers):
                if _consume(pool.map(_run_chunk, tasks[w0 : w0 + workers])):
                    break

    fer = nerrors / nframes
    ci95 = 1.96 * float(np.sqrt(fer * (1.0 - fer) / nframes))
    steps = sum_full if latency_mode == "full-pass" else sum_memo
    point = SweepPoint(
        decoder=decoder,
        code=code_id or f"{code.construction}:{code.N}:{code.K}",
        N=code.N,
        K=code.K,
        L=list_size if decoder in ("scl", "ssc-list") else 1,
        snr_db=float(snr_db),
        latency_mode=latency_mode,
        frames=nframes,
        frame_errors=nerrors,
        fer=fer,
        ci95_fer=ci95,
        avg_time_steps=steps / nframes,
        seed=int(seed),
    )
    if point.low_confidence:
        warnings.warn(
            f"{point.decoder} @ {point.snr_db} dB: only {point.frame_errors} errors; "
            "FER estimate is low-confidence",
            stacklevel=2,
        )
    return point


def run_sweep(
    code: PolarCode,
    decoder: str,
    snr_list,
    seed: int,
    **kwargs,
) -> list[SweepPoint]:
    """One point per SNR, in input order."""
    snrs = list(snr_list)
    if not snrs:
        raise ValueError("SNR list must be nonempty")
    return [run_point(code, decoder, snr, seed, **kwargs) for snr in snrs]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def points_to_csv(points) -> str:
    """Render sweep points as CSV (exact header, 6 significant digits)."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for p in points:
        row = [
            p.decoder, p.code, p.N, p.K, p.L, _fmt(p.snr_db), p.latency_mode,
            p.frames, p.frame_errors, _fmt(p.fer), _fmt(p.ci95_fer),
            _fmt(p.avg_time_steps), p.seed,
        ]
        out.write(",".join(str(c) for c in row) + "\n")
    return out.getvalue()


def write_csv(path, points) -> None:
    with open(path, "w") as fh:
        fh.write(points_to_csv(points))


def read_csv(path) -> list[SweepPoint]:
    """Parse a sweep CSV back into points; '#' lines (e.g. appended reports) are skipped."""
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    return [
        SweepPoint(
            decoder=r["decoder"],
            code=r["code"],
            N=int(r["N"]),
            K=int(r["K"]),
            L=int(r["L"]),
            snr_db=float(r["snr_db"]),
            latency_mode=r["latency_mode"],
            frames=int(r["frames"]),
            frame_errors=int(r["frame_errors"]),
            fer=float(r["fer"]),
            ci95_fer=float(r["ci95_fer"]),
            avg_time_steps=float(r["avg_time_steps"]),
            seed=int(r["seed"]),
        )
        for r in rows
    ]


@dataclass(frozen=True)
class CompareRow:
    snr_db: float
    measured: float
    reference: float
    rel_deviation: float
    flagged: bool


@dataclass(frozen=True)
class CompareReport:
    """Per-point deviation of a sweep against a published reference series."""

    label: str
    field: str
    tolerance: float
    rows: tuple

    @property
    def flagged_rows(self) -> tuple:
        return tuple(r for r in self.rows if r.flagged)

    @property
    def passed(self) -> bool:
        return not self.flagged_rows

    def text(self) -> str:
        lines = [
            f"comparison against {self.label} ({self.field}), tolerance {self.tolerance:.0%}"
        ]
        for r in self.rows:
            mark = "FLAG" if r.flagged else "ok"
            lines.append(
                f"  snr {r.snr_db:+.6g} dB: measured {r.measured:.6g} vs {r.reference:.6g}"
                f" (dev {r.rel_deviation:+.1%}) {mark}"
            )
        n = len(self.flagged_rows)
        if n:
            lines.append(
                f"  {n}/{len(self.rows)} points beyond tolerance."
            )
            if self.field == "avg_time_steps":
                lines.append(
                    "  note: the published per-round time-step accounting is not fully"
                )
                lines.append(
                    "  specified; deviations here reflect the accounting mode"
                    f" (see the latency_mode column), not decode results."
                )
        else:
            lines.append("  all points within tolerance.")
        return "\n".join(lines)


def compare_reference(points, reference, tolerance: float = 0.3) -> CompareReport:
    """Relative deviation of each sweep point from a reference series.

    `reference` is a ReferenceCurve or a registry label. Reporting only;
    never raises on data (unknown labels do raise).
    """
    ref = reference if isinstance(reference, ReferenceCurve) else get_reference(reference)
    rows = []
    for p in points:
        measured = float(getattr(p, ref.field))
        expect = ref.value_at(p.snr_db)
        denom = abs(expect) if expect != 0.0 else 1.0
        dev = (measured - expect) / denom
        rows.append(
            CompareRow(
                snr_db=p.snr_db,
                measured=measured,
                reference=expect,
                rel_deviation=dev,
                flagged=abs(dev) > tolerance,
            )
        )
    return CompareReport(
        label=ref.label, field=ref.field, tolerance=tolerance, rows=tuple(rows)
    )
