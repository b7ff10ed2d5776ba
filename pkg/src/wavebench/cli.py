"""Command-line front end: ``wavebench {verify,spectrum,leakage,papr-sweep}``.

All quantities at this surface are normalized with T = 1: times in units of
T, frequencies and bandwidths as fT = omega T / (2 pi).

Exit status: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import oqpsk, psf, spectral
from .errors import DomainError, PrecisionError
from .psf import Kind, PhaseFunction, PulseShape

DEFAULT_ALPHAS = (2.0, 3.0)
DEFAULT_FMAX = 20.0
DEFAULT_DF = 0.01
DEFAULT_WMAX = 100.0
DEFAULT_DOMEGA = 0.005
DB_FLOOR = -160.0

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Table:
    command: str
    columns: list
    rows: list
    metadata: dict


def _cell(value):
    """Reals are rounded to 6 decimals once, so CSV and JSON agree exactly."""
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
        return float(f"{float(value):.6f}")
    return str(value)


def _csv_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    for key, val in table.metadata.items():
        buf.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_csv_text(_cell(row.get(c))) for c in table.columns])
    return buf.getvalue()


def render_json(table: Table) -> str:
    rows = [{c: _cell(row.get(c)) for c in table.columns} for row in table.rows]
    doc = {"command": table.command, "metadata": table.metadata,
           "columns": table.columns, "rows": rows}
    return json.dumps(doc, indent=1) + "\n"


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _shapes(args) -> list:
    kinds = args.kind or [k.value for k in Kind]
    alphas = args.alpha if args.alpha is not None else list(DEFAULT_ALPHAS)
    shapes = []
    for kind in kinds:
        if kind == Kind.ALPHA_HALF_SINE.value:
            if not alphas:
                raise UsageError("--kind alpha-half-sine needs at least one --alpha value")
            for a in alphas:
                if not (math.isfinite(a) and a > 0):
                    raise UsageError(f"--alpha values must be positive, got {a}")
                shapes.append(PulseShape.alpha_half_sine(a))
        else:
            shapes.append(PulseShape(Kind(kind)))
    return shapes


def _shape_cols(shape: PulseShape) -> dict:
    return {"shape": shape.kind.value, "alpha": shape.alpha}


def _require(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


def run_verify(args) -> tuple[Table, int]:
    _require(args.grid_points >= 16, f"--grid-points must be >= 16, got {args.grid_points}")
    _require(args.ce_tol > 0 and args.smooth_tol > 0, "tolerances must be positive")
    targets = []
    if args.custom_g:
        _require(args.parity is not None, "--custom-g requires --parity {even,odd}")
        try:
            phase = PhaseFunction.from_csv(args.custom_g, args.parity)
        except (OSError, DomainError) as exc:
            raise UsageError(f"--custom-g: {exc}")
        targets.append(({"shape": "custom", "alpha": None, "name": phase.name}, phase))
        if args.kind:
            targets += [({**_shape_cols(s), "name": s.label}, s) for s in _shapes(args)]
    else:
        _require(args.parity is None, "--parity only applies with --custom-g")
        targets = [({**_shape_cols(s), "name": s.label}, s) for s in _shapes(args)]

    rows = []
    all_pass = True
    for cols, target in targets:
        rep = psf.verify_ce(target, args.grid_points, args.ce_tol)
        sm = psf.classify_smoothness(target, args.smooth_tol)
        all_pass &= rep.passed
        rows.append({
            **cols,
            "passed": rep.passed,
            "max_deviation": rep.max_deviation,
            "detected_k": rep.detected_k,
            "endpoint_ok": rep.endpoint_ok,
            "smoothness": sm.verdict.value,
            "edge_derivative_limit": sm.edge_derivative_limit,
            "reason": rep.reason,
        })
    columns = ["name", "shape", "alpha", "passed", "max_deviation", "detected_k",
               "endpoint_ok", "smoothness", "edge_derivative_limit", "reason"]
    meta = {"T": 1.0, "grid_points": args.grid_points, "ce_tolerance": args.ce_tol,
            "smooth_tolerance": args.smooth_tol}
    return Table("verify", columns, rows, meta), EXIT_OK if all_pass else EXIT_FAIL


def _check_dt(dt):
    _require(dt > 0, f"--dt must be positive, got {dt}")
    _require(dt <= 1 / 64, f"--dt={dt:g} is coarser than T/64 (quadrature precision limit)")


def spectrum_grid(fmax: float, df: float) -> np.ndarray:
    n = int(round(fmax / df))
    _require(n >= 1 and math.isclose(n * df, fmax, rel_tol=1e-9),
             f"--fmax={fmax:g} must be a positive multiple of --df={df:g}")
    return np.arange(n + 1) * df


def run_spectrum(args) -> tuple[Table, int]:
    _check_dt(args.dt)
    _require(args.df > 0 and args.fmax > 0, "--df and --fmax must be positive")
    f = spectrum_grid(args.fmax, args.df)
    shapes = _shapes(args)
    rows = []
    for s in shapes:
        try:
            spec = spectral.transform(s, spectral.from_normalized(f), args.dt)
        except PrecisionError as exc:
            raise UsageError(f"--dt: {exc}")
        p_db = spectral.power_db(spectral.power_spectrum(spec), DB_FLOOR)
        rows += [{**_shape_cols(s), "f_normalized": fi, "P_db": pi} for fi, pi in zip(f, p_db)]
    meta = {"T": 1.0, "dt": args.dt, "df": args.df, "fmax": args.fmax, "db_floor": DB_FLOOR,
            "frequency": "normalized fT = omega T / (2 pi)"}
    return Table("spectrum", ["shape", "alpha", "f_normalized", "P_db"], rows, meta), EXIT_OK


def leakage_grid(wmax: float) -> np.ndarray:
    """0.01 steps up to fT = 4, then 0.5 steps, always ending at wmax."""
    fine = np.arange(1, 401) * 0.01
    coarse = 4.0 + np.arange(1, int(math.floor((wmax - 4.0) / 0.5)) + 1) * 0.5
    grid = np.concatenate([fine[fine < wmax], coarse[coarse < wmax], [wmax]])
    return np.round(grid, 10)


def run_leakage(args) -> tuple[Table, int]:
    _check_dt(args.dt)
    _require(args.domega > 0 and args.wmax > 0, "--domega and --wmax must be positive")
    m = int(round(args.wmax / args.domega))
    _require(m >= 1 and math.isclose(m * args.domega, args.wmax, rel_tol=1e-9),
             f"--wmax={args.wmax:g} must be a multiple of --domega={args.domega:g}")
    W = leakage_grid(args.wmax)
    shapes = _shapes(args)
    rows = []
    snaps = {}
    for s in shapes:
        try:
            curve = spectral.leakage_curve(
                s, spectral.from_normalized(W), spectral.from_normalized(args.wmax),
                args.dt, spectral.from_normalized(args.domega))
        except PrecisionError as exc:
            raise UsageError(f"--dt: {exc}")
        snaps[s.label] = float(spectral.to_normalized(curve.snap_distance).max())
        rows += [{**_shape_cols(s), "W_normalized": w, "R_o": r} for w, r in zip(W, curve.leakage)]
    meta = {"T": 1.0, "wmax": args.wmax, "dt": args.dt, "domega": args.domega,
            "max_snap_distance": snaps, "bandwidth": "normalized W T / (2 pi)"}
    return Table("leakage", ["shape", "alpha", "W_normalized", "R_o"], rows, meta), EXIT_OK


def run_papr_sweep(args) -> tuple[Table, int]:
    for N in args.n:
        _require(N >= 4 and N % 2 == 0,
                 f"--n value {N} rejected: N must be even and >= 4 because the Q branch "
                 "is offset by T = N/2 samples")
    _require(args.n0 >= 2, f"--n0 must be >= 2, got {args.n0}")
    _require(args.k >= 1, f"--k must be >= 1, got {args.k}")
    _require(args.seed >= 0, f"--seed must be non-negative, got {args.seed}")
    if args.bits_file:
        try:
            bits = oqpsk.read_bits(args.bits_file)
        except (OSError, DomainError) as exc:
            raise UsageError(f"--bits-file: {exc}")
    else:
        bits = oqpsk.random_bits(args.bits, args.seed)
    _require(bits.size >= 2 and bits.size % 2 == 0, f"bit count must be even and >= 2, got {bits.size}")
    # the shortest signal must leave MIN_PAPR_SAMPLES after edge discard
    pairs = bits.size // 2
    for N in args.n:
        total = (pairs * N + N // 2 - 1) * args.n0 + 1 + 2 * args.k
        kept = total - 4 * (args.k + N * args.n0)
        _require(kept >= oqpsk.MIN_PAPR_SAMPLES,
                 f"--bits too small for N={N}: only {kept} samples would remain for PAPR")
    shapes = _shapes(args)
    lpf = oqpsk.lpf_taps(args.n0, args.k)
    table = oqpsk.papr_sweep(shapes, args.n, lpf, bits=bits, seed=args.seed)
    seed = None if args.bits_file else args.seed
    rows = [{**_shape_cols(r.shape), "N": r.N, "N0": args.n0, "K": args.k, "bits": int(bits.size),
             "seed": seed, "papr_db": r.report.papr_db} for r in table]
    meta = {"T": 1.0, "bit_generator": None if args.bits_file else oqpsk.BIT_GENERATOR,
            "bits_file": args.bits_file, "papr": "complex envelope |s|^2"}
    cols = ["shape", "alpha", "N", "N0", "K", "bits", "seed", "papr_db"]
    return Table("papr-sweep", cols, rows, meta), EXIT_OK


COMMANDS = {"verify": run_verify, "spectrum": run_spectrum, "leakage": run_leakage,
            "papr-sweep": run_papr_sweep}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults; flags override it")
    common.add_argument("--kind", action="append", choices=[k.value for k in Kind],
                        help="pulse kind (repeatable); default: all kinds")
    common.add_argument("--alpha", type=_float_list, help="comma-separated alpha values")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = _Parser(prog="wavebench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    parser.commands = sub.choices

    p = sub.add_parser("verify", parents=[common], help="check the constant-envelope conditions")
    p.add_argument("--custom-g", help="two-column CSV (t, g) of a phase function on [0, 1)")
    p.add_argument("--parity", choices=["even", "odd", "unknown"])
    p.add_argument("--grid-points", type=int, default=2048)
    p.add_argument("--ce-tol", type=float, default=psf.CE_TOLERANCE)
    p.add_argument("--smooth-tol", type=float, default=psf.SMOOTH_TOLERANCE)

    p = sub.add_parser("spectrum", parents=[common], help="power spectra in dB")
    p.add_argument("--dt", type=float, default=spectral.DT_PER_T)
    p.add_argument("--fmax", type=float, default=DEFAULT_FMAX)
    p.add_argument("--df", type=float, default=DEFAULT_DF)

    p = sub.add_parser("leakage", parents=[common], help="out-of-band leakage curves")
    p.add_argument("--dt", type=float, default=spectral.DT_PER_T)
    p.add_argument("--domega", type=float, default=DEFAULT_DOMEGA,
                   help="frequency step, normalized fT units")
    p.add_argument("--wmax", type=float, default=DEFAULT_WMAX,
                   help="truncation bandwidth, normalized fT units")

    p = sub.add_parser("papr-sweep", parents=[common], help="PAPR after digital PSF and LPF")
    p.add_argument("--seed", type=int, default=oqpsk.DEFAULT_SEED)
    p.add_argument("--bits", type=int, default=2 * oqpsk.DEFAULT_PAIRS, help="bit count")
    p.add_argument("--bits-file", help="read bits from a '0'/'1' text file instead")
    p.add_argument("--n", type=_int_list, default=list(oqpsk.DEFAULT_N_VALUES))
    p.add_argument("--n0", type=int, default=oqpsk.DEFAULT_N0)
    p.add_argument("--k", type=int, default=oqpsk.DEFAULT_K)
    return parser


def _apply_config(subparser: argparse.ArgumentParser, config: dict):
    actions = {a.dest: a for a in subparser._actions if a.dest != "help"}
    defaults = {}
    for key, value in config.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in actions or dest == "config":
            raise UsageError(f"--config: unknown option {key!r}")
        conv = actions[dest].type
        try:
            if conv is not None and isinstance(value, str):
                value = conv(value)
            elif conv in (int, float) and not isinstance(value, (int, float)):
                raise ValueError(value)
        except (ValueError, argparse.ArgumentTypeError):
            raise UsageError(f"--config: bad value for {key!r}: {value!r}")
        if actions[dest].choices is not None:
            vals = value if isinstance(value, list) else [value]
            if any(v not in actions[dest].choices for v in vals):
                raise UsageError(f"--config: bad value for {key!r}: {value!r}")
        defaults[dest] = value
    subparser.set_defaults(**defaults)


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"--config: {exc}")
        if not isinstance(config, dict):
            raise UsageError("--config must hold a JSON object")
        # config values become defaults; explicit flags parsed again on top
        _apply_config(parser.commands[args.command], config)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        table, status = COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"wavebench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_json(table) if args.format == "json" else render_csv(table)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
