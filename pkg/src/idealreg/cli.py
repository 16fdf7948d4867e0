"""Command-line interface: ``idealreg <subcommand> ...``.

Exit codes are 0 on success, 1 on a domain error (reported as a JSON object
on standard error) and 2 on a usage error.  Structured results are JSON,
sweep tables are CSV.  Set ``IDEALREG_LOG`` to ``error``, ``info`` or
``debug`` to control logging on standard error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import genericity, saturation, series, ssa
from .cumulants import EpochData
from .errors import IdealRegError, InvalidArgumentError
from .polyspace import poly_from_json

DEFAULT_SEED = ssa.DEFAULT_SEED
LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("idealreg")


def _csv_list(convert, what):
    def parse(text: str):
        try:
            values = [convert(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {what}, got {text!r}") from None
        if not values:
            raise argparse.ArgumentTypeError(f"expected at least one {what[:-1]}")
        return values

    return parse


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _dump(obj, stream) -> None:
    # json writes floats with repr, the shortest string that round-trips exactly
    stream.write(json.dumps(saturation._jsonable(obj), separators=(",", ":")))
    stream.write("\n")


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- subcommands -----------------------------------------------------------------

def cmd_degree_bound(args) -> dict:
    return series.degree_bound_report(args.degrees, args.D, args.d).as_dict()


def _load_polys(path: str):
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise InvalidArgumentError("polynomial input must be a non-empty JSON list")
    return [poly_from_json(obj) for obj in data]


def cmd_saturate(args) -> dict:
    polys = _load_polys(args.input)
    if args.mode == "linear":
        result = saturation.munchhausen(polys, args.dim, args.degree_bound)
    else:
        N = args.degree_bound
        if N is None:
            N = series.degree_bound(
                [p.degree for p in polys], polys[0].D, args.dim if args.dim is not None else 0
            )
        result = saturation.approx_saturation(polys, N, tau=args.threshold)
    return result.to_json()


def _load_epochs(paths: Sequence[str]) -> list[EpochData]:
    if len(paths) == 1 and paths[0].endswith(".json"):
        data = json.loads(Path(paths[0]).read_text())
        if not isinstance(data, list):
            raise InvalidArgumentError("epoch JSON must be a list of {mean, covariance} objects")
        try:
            return [EpochData.from_moments(e["mean"], e["covariance"]) for e in data]
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed epoch object: {exc}") from None
    return [EpochData.from_samples(np.loadtxt(p, delimiter=",", ndmin=2)) for p in paths]


def cmd_ssa(args) -> dict:
    epochs = _load_epochs(args.epochs)
    return ssa.estimate_projection(epochs, args.dim, args.orders, args.pairing).to_json()


def cmd_simulate(args) -> None:
    rows = ssa.run_sweep(
        args.sigma,
        args.trials,
        D=args.D,
        epochs=args.epochs,
        seed=args.seed,
        d=args.d,
        jobs=args.jobs,
        timing=args.timing,
    )
    _write_text(ssa.rows_to_csv(rows), args.out)
    if args.summary:
        with open(args.summary, "w") as fh:
            _dump(ssa.summarize(rows), fh)
    return None


def cmd_froberg(args) -> dict:
    table = genericity.froberg_table(args.degrees, args.D, args.d, args.kmax, seed=args.seed, exact=args.exact)
    return {
        "degrees": args.degrees,
        "D": args.D,
        "d": args.d,
        "exact": args.exact,
        "all_verified": all(c.verified for c in table),
        "cells": [c.as_dict() for c in table],
    }


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idealreg", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")
    ints = _csv_list(int, "integers")
    floats = _csv_list(float, "numbers")

    p = sub.add_parser("degree-bound", help="degree N from the Hilbert-series bound", allow_abbrev=False)
    p.add_argument("--degrees", type=ints, required=True, help="input degrees, e.g. 2,2,2,2,2")
    p.add_argument("--D", type=int, metavar="D", required=True, help="number of variables")
    p.add_argument("--d", type=int, metavar="d", required=True, help="subspace dimension")
    p.set_defaults(func=cmd_degree_bound)

    p = sub.add_parser("saturate", help="linear generators from polynomial JSON", allow_abbrev=False)
    p.add_argument("--input", required=True, help="JSON list of polynomials")
    p.add_argument("--dim", type=int, help="subspace dimension d (required for --mode linear)")
    p.add_argument("--degree-bound", type=int, help="degree N to multiply up to")
    p.add_argument("--threshold", type=float, help="relative rank threshold (general mode only)")
    p.add_argument("--mode", choices=("linear", "general"), default="linear")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("ssa", help="common-marginal subspace from epoch files", allow_abbrev=False)
    p.add_argument("--epochs", nargs="+", required=True, help="CSV sample files, or one JSON file of moments")
    p.add_argument("--dim", type=int, required=True, help="subspace dimension d")
    p.add_argument("--orders", type=ints, default=[2], help="cumulant orders, subset of 1,2")
    p.add_argument("--pairing", choices=("reference", "all"), default="reference")
    p.set_defaults(func=cmd_ssa)

    p = sub.add_parser("simulate", help="synthetic noise sweep, CSV output", allow_abbrev=False)
    p.add_argument("--D", type=int, metavar="D", default=10)
    p.add_argument("--d", type=int, metavar="d", default=None, help="fixed subspace dimension (default: uniform in 1..D-1)")
    p.add_argument("--epochs", type=int, default=26)
    p.add_argument("--sigma", type=floats, default=[0.0], help="noise levels, e.g. 1e-6,1e-4")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    p.add_argument("--summary", default=None, help="write per-sigma medians and quartiles as JSON")
    p.add_argument("--timing", action="store_true", help="record wall-clock runtimes (not reproducible)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("froberg", help="check predicted Macaulay ranks on random inputs", allow_abbrev=False)
    p.add_argument("--degrees", type=ints, required=True)
    p.add_argument("--D", type=int, metavar="D", required=True)
    p.add_argument("--d", type=int, metavar="d", required=True)
    p.add_argument("--kmax", type=int, default=None, help="largest degree (default: the predicted N)")
    p.add_argument("--exact", action="store_true", help="exact integer ranks instead of SVD")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_froberg)
    return parser


def _check_usage(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "saturate":
        if args.mode == "linear" and args.dim is None:
            parser.error("saturate --mode linear requires --dim")
        if args.mode == "linear" and args.threshold is not None:
            parser.error("--threshold only applies to --mode general")
        if args.threshold is None:
            args.threshold = 1e-8
    if args.command == "simulate":
        if args.trials < 0:
            parser.error("--trials must be non-negative")
        if args.jobs < 1:
            parser.error("--jobs must be at least 1")


def _configure_logging() -> None:
    level = os.environ.get("IDEALREG_LOG", "error").lower()
    logging.basicConfig(stream=sys.stderr, level=LOG_LEVELS.get(level, logging.ERROR), format="%(name)s: %(message)s")
    if level not in LOG_LEVELS:
        log.warning("ignoring unknown IDEALREG_LOG value %r", level)


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_usage(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except IdealRegError as exc:
        err = {"error": exc.kind, "message": str(exc)}
        if getattr(exc, "diagnostics", None):
            err["diagnostics"] = exc.diagnostics
        _dump(err, sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        _dump({"error": "io-error" if isinstance(exc, OSError) else "invalid-input", "message": str(exc)}, sys.stderr)
        return 1
    if result is not None:
        _dump(result, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
