"""Command-line interface: code construction, encoding, one-shot decoding, sweeps.

Code specs use `kind:N:K[:extra]` with kinds explicit / rm / bhatt / 5g,
e.g. `explicit:8:4:0,1,2,4`, `rm:128:64`, `bhatt:64:32:1.5`, `5g:128:64`.
The 5g kind reads a reliability-sequence file: `--sequence PATH`, else the
POLARSSC_SEQUENCE environment variable, else the packaged default table.
Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

import argparse
import os
import re
import sys
from importlib import resources

import numpy as np

from . import bench, code_model
from .bench import compare_reference, run_sweep, write_csv
from .reference_curves import get_reference
from .sc_baseline import sc_decode, scl_decode
from .ssc_decoder import SscTraversal, ssc_decode, ssc_list_decode

SEQUENCE_ENV = "POLARSSC_SEQUENCE"


class CliError(Exception):
    def __init__(self, message, exit_code=2):
        super().__init__(message)
        self.exit_code = exit_code


def default_sequence_path() -> str:
    return str(resources.files("polarssc").joinpath("data/pw_sequence_1024.txt"))


def _resolve_sequence(path_arg):
    if path_arg:
        return path_arg
    env = os.environ.get(SEQUENCE_ENV, "").strip()
    if env:
        return env
    return default_sequence_path()


def parse_code_spec(spec: str, sequence_path=None) -> code_model.PolarCode:
    parts = spec.split(":")
    if len(parts) < 3:
        raise CliError(f"code spec {spec!r} is not kind:N:K[:extra]")
    kind, n_str, k_str = parts[0], parts[1], parts[2]
    extra = parts[3] if len(parts) > 3 else None
    try:
        N = int(n_str)
        K = int(k_str)
    except ValueError:
        raise CliError(f"bad N or K in code spec {spec!r}")
    if N <= 0 or (N & (N - 1)) != 0:
        raise CliError(f"N must be a power of 2, got {N}")
    n = N.bit_length() - 1
    try:
        if kind == "explicit":
            frozen = []
            if extra:
                frozen = [int(t) for t in extra.split(",") if t != ""]
            return code_model.build_code(n, K, "explicit", frozen=frozen)
        if kind == "rm":
            return code_model.build_code(n, K, "rm")
        if kind == "bhatt":
            dsnr = float(extra) if extra is not None else 0.0
            return code_model.build_code(n, K, "bhattacharyya", design_snr_db=dsnr)
        if kind == "5g":
            path = _resolve_sequence(sequence_path)
            try:
                seq = code_model.load_sequence_file(path)
            except OSError as exc:
                raise CliError(f"cannot read sequence file {path}: {exc}", 3)
            return code_model.build_code(n, K, "sequence-file", sequence=seq)
    except ValueError as exc:
        raise CliError(str(exc))
    raise CliError(f"unknown code kind {kind!r} (explicit, rm, bhatt, 5g)")


def _load_code(args) -> code_model.PolarCode:
    if getattr(args, "frozen_file", None):
        if args.code:
            raise CliError("give either --code or --frozen-file, not both")
        try:
            return code_model.load_frozen_file(args.frozen_file)
        except OSError as exc:
            raise CliError(f"cannot read frozen-set file: {exc}", 3)
        except ValueError as exc:
            raise CliError(str(exc))
    if not args.code:
        raise CliError("a code is required (--code or --frozen-file)")
    return parse_code_spec(args.code, getattr(args, "sequence", None))


def read_llr_file(path, N: int) -> np.ndarray:
    try:
        with open(path) as fh:
            tokens = fh.read().split()
    except OSError as exc:
        raise CliError(f"cannot read LLR file: {exc}", 3)
    try:
        vals = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError:
        raise CliError(f"LLR file {path} contains non-numeric data")
    if vals.shape[0] != N:
        raise CliError(f"LLR file has {vals.shape[0]} values, expected {N}")
    return vals


def parse_snr_range(text: str) -> list:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError
    except ValueError:
        raise CliError(f"bad SNR range {text!r}; use START:STOP:STEP or a single value")
    if step <= 0:
        raise CliError("SNR step must be positive")
    out = []
    v = start
    while v <= stop + 1e-9:
        out.append(round(v, 10))
        v += step
    if not out:
        raise CliError("empty SNR range")
    return out


def _bits_str(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def _echo(args, fields):
    parts = [args.command]
    for key, val in fields:
        if val is not None:
            parts.append(f"--{key} {val}")
    print("# config:", " ".join(parts))


def cmd_construct(args) -> int:
    code = _load_code(args)
    _echo(args, [("code", args.code), ("sequence", getattr(args, "sequence", None)),
                 ("out", args.out)])
    if args.out:
        try:
            code_model.write_frozen_file(args.out, code)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", 3)
        print(f"wrote frozen-set file {args.out}")
    print(f"{code.N} {code.K}")
    print(" ".join(str(int(i)) for i in code.frozen_indices))
    return 0


def cmd_encode(args) -> int:
    code = _load_code(args)
    _echo(args, [("code", args.code), ("message", args.message)])
    msg = args.message.strip()
    if len(msg) != code.K or any(c not in "01" for c in msg):
        raise CliError(f"--message must be {code.K} bits of 0/1")
    u = np.zeros(code.N, dtype=np.int8)
    u[code.info_indices] = [int(c) for c in msg]
    x = code_model.encode(code, u)
    print("u:", _bits_str(u))
    print("x:", _bits_str(x))
    return 0


def _decode_once(code, y, decoder, list_size, latency_mode):
    if decoder == "sc":
        return sc_decode(code, y)
    if decoder == "scl":
        return scl_decode(code, y, list_size)
    if decoder == "ssc":
        return ssc_decode(code, y, latency_mode)
    if decoder == "ssc-list":
        return ssc_list_decode(code, y, list_size, latency_mode)
    raise CliError(f"unknown decoder {decoder!r}")


def cmd_decode(args) -> int:
    code = _load_code(args)
    decoder = args.decoder
    list_size = _resolve_list_size(args, decoder)
    latency_mode = _resolve_latency_mode(args, decoder)
    y = read_llr_file(args.llr, code.N)
    _echo(args, [("code", args.code), ("decoder", decoder),
                 ("list-size", list_size if decoder in ("scl", "ssc-list") else None),
                 ("latency-mode", latency_mode), ("llr", args.llr)])

    if decoder == "ssc":
        # replay round by round for the syndrome trace
        tr = SscTraversal(code, y)
        rnd = 0
        syn = tr.syndrome
        print(f"round {rnd}: x = {_bits_str(tr.x)}  syndrome = {_bits_str(syn)}")
        while syn.any():
            from .ssc_decoder import first_violated_frozen

            i = first_violated_frozen(code, syn)
            llr_i, _ = tr.targeted_llr(i)
            e = tr.error_vector(i)
            tr.refine(e)
            rnd += 1
            syn = tr.syndrome
            print(
                f"round {rnd}: target u_{i} llr {llr_i:+.6g}  e = {_bits_str(e)}  "
                f"x = {_bits_str(tr.x)}  syndrome = {_bits_str(syn)}"
            )
    out = _decode_once(code, y, decoder, list_size, latency_mode)
    print("u_hat:", _bits_str(out.u_hat))
    print("x_hat:", _bits_str(out.x_hat))
    print("syndrome:", _bits_str(code_model.syndrome(code, out.x_hat)))
    print("rounds:", out.rounds)
    print("time_steps:", out.time_steps)
    print("early_terminated:", out.early_terminated)
    return 0


def _resolve_list_size(args, decoder):
    if decoder in ("scl", "ssc-list"):
        return args.list_size if args.list_size is not None else 8
    if args.list_size is not None:
        raise CliError(f"--list-size is only valid with list decoders, not {decoder}")
    return 1


def _resolve_latency_mode(args, decoder):
    if args.latency_mode is not None:
        return args.latency_mode
    return "memoized" if decoder == "ssc-list" else "full-pass"


def cmd_simulate(args) -> int:
    code = _load_code(args)
    decoder = args.decoder
    list_size = _resolve_list_size(args, decoder)
    latency_mode = _resolve_latency_mode(args, decoder)
    snrs = parse_snr_range(args.snr)
    if args.frames is not None and args.frames < 1:
        raise CliError("--frames must be >= 1")
    if args.frames is None and args.min_errors is None:
        raise CliError("give --frames or --min-errors/--max-frames")
    if args.frames is not None and (args.min_errors or args.max_frames):
        raise CliError("give either --frames or --min-errors/--max-frames, not both")
    if args.min_errors is not None and args.max_frames is None:
        raise CliError("--min-errors needs --max-frames")
    if args.workers < 1:
        raise CliError("--workers must be >= 1")
    _echo(args, [
        ("code", args.code), ("decoder", decoder),
        ("list-size", list_size if decoder in ("scl", "ssc-list") else None),
        ("snr", args.snr), ("frames", args.frames),
        ("min-errors", args.min_errors), ("max-frames", args.max_frames),
        ("seed", args.seed), ("latency-mode", latency_mode),
        ("workers", args.workers), ("out", args.out),
    ])

    ref = None
    if args.compare:
        try:
            ref = get_reference(args.compare)
        except KeyError as exc:
            raise CliError(str(exc.args[0]))

    try:
        points = run_sweep(
            code,
            decoder,
            snrs,
            seed=args.seed,
            frames=args.frames,
            min_errors=args.min_errors,
            max_frames=args.max_frames,
            list_size=list_size,
            latency_mode=latency_mode,
            code_id=args.code or f"file:{args.frozen_file}",
            workers=args.workers,
        )
    except ValueError as exc:
        raise CliError(str(exc))

    report_text = None
    if ref is not None:
        report_text = compare_reference(points, ref, args.tol).text()

    try:
        write_csv(args.out, points)
        if report_text is not None:
            with open(args.out, "a") as fh:
                for line in report_text.splitlines():
                    fh.write(f"# {line}\n")
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", 3)

    low = [p for p in points if p.low_confidence]
    print(f"wrote {len(points)} points to {args.out}")
    if low:
        print(f"note: {len(low)} points have < 20 errors (low-confidence FER)")
    if report_text is not None:
        print(report_text)
    return 0


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept values like "-3:10:1" (e.g. for --snr) instead of reading
        # them as option flags
        self._negative_number_matcher = re.compile(r"^-\d+[\d.:]*$")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="polarssc",
        description="Polar codes with successive syndrome-check decoding",
    )
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_code_opts(p):
        p.add_argument("--code", help="code spec kind:N:K[:extra]")
        p.add_argument("--frozen-file", help="frozen-set file ('N K' + indices)")
        p.add_argument("--sequence", help="reliability-sequence file for 5g codes")

    p = sub.add_parser("construct", help="build a code and print/write its frozen set")
    add_code_opts(p)
    p.add_argument("--out", help="write a frozen-set file here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a K-bit message")
    add_code_opts(p)
    p.add_argument("--message", required=True, help="K message bits, e.g. 0111")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode one LLR word from a file")
    add_code_opts(p)
    p.add_argument("--decoder", choices=bench.DECODERS, default="ssc")
    p.add_argument("--list-size", type=int, default=None)
    p.add_argument("--latency-mode", choices=("full-pass", "memoized"), default=None)
    p.add_argument("--llr", required=True, help="file with N whitespace-separated LLRs")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo sweep to CSV")
    add_code_opts(p)
    p.add_argument("--decoder", choices=bench.DECODERS, required=True)
    p.add_argument("--list-size", type=int, default=None)
    p.add_argument("--snr", required=True, help="START:STOP:STEP in dB, or one value")
    p.add_argument("--frames", type=int, default=None, help="frames per point")
    p.add_argument("--min-errors", type=int, default=None)
    p.add_argument("--max-frames", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--latency-mode", choices=("full-pass", "memoized"), default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--compare", help="reference label, e.g. fig5-proposed")
    p.add_argument("--tol", type=float, default=0.3)
    p.set_defaults(func=cmd_simulate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
