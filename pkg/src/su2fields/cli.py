"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 parse error,
3 band limit above the cap, 4 invalid generator spec.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
from typing import Dict, List, Optional

from . import __version__
from .errors import BandLimitExceededError, InvalidSpecError, NearZeroError
from .group import EulerAngles, su2_from_euler, su2_new
from .harmonic import build_grid, coefficient_indices
from .random_fields import correlate, draw_samples, spin_measure_statistics
from .specs import load_spec
from .tables import table_to_csv, table_to_json
from .verification import results_to_csv, results_to_dict, run_checks
from .wigner import BAND_LIMIT_CAP, wigner_matrix

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_BAND_LIMIT, EXIT_SPEC = 0, 1, 2, 3, 4

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def parse_angle(text: str) -> float:
    """Radians as a decimal or an arithmetic expression in ``pi`` ("pi/2", "-3*pi/4", "2pi")."""
    src = text.strip().replace("π", "pi")
    # allow "2pi" as shorthand for "2*pi"
    for digit in "0123456789":
        src = src.replace(digit + "pi", digit + "*pi")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(text)

    try:
        value = ev(ast.parse(src, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite angle: {text!r}")
    return value


def parse_complex(text: str) -> complex:
    try:
        z = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    return z


def parse_override(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold for {key!r} is not a number: {value!r}")


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return n


def _pos_int(text: str) -> int:
    n = _nonneg_int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="su2fields", description="Harmonic analysis and random fields on SU(2).")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output_flags(q, default_format="csv"):
        q.add_argument("--out", help="output path (default: stdout)")
        q.add_argument("--format", choices=("csv", "json"), default=default_format)

    q = sub.add_parser("wigner-table", help="dump D^l at one group element")
    q.add_argument("--two-ell", type=_nonneg_int, required=True, help="doubled degree 2l")
    where = q.add_mutually_exclusive_group(required=True)
    where.add_argument("--euler", nargs=3, type=parse_angle, metavar=("PHI", "THETA", "PSI"))
    where.add_argument("--alpha-beta", nargs=2, type=parse_complex, metavar=("ALPHA", "BETA"))
    output_flags(q)

    q = sub.add_parser("grid", help="dump the quadrature grid")
    q.add_argument("--band-limit-doubled", type=_nonneg_int, required=True)
    output_flags(q)

    q = sub.add_parser("verify", help="run the deterministic self-check suite")
    q.add_argument("--band-limit-doubled", type=_nonneg_int, default=4)
    q.add_argument("--seed", type=_nonneg_int, default=0)
    q.add_argument("--tol-override", type=parse_override, action="append", default=[], metavar="KEY=VALUE")
    output_flags(q)

    for name, help_text in (
        ("field-sample", "draw coefficient samples"),
        ("mc-correlations", "Monte Carlo correlations against closed forms"),
        ("spin-spectra", "weak and strong spin measures"),
    ):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("--spec", required=True, help="generator spec JSON")
        q.add_argument("--seed", type=_nonneg_int)
        q.add_argument("--samples", type=_pos_int)
        q.add_argument("--threads", type=_pos_int, default=1)
        output_flags(q, "json")
    return p


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _check_cap(two_L: int) -> None:
    if two_L > BAND_LIMIT_CAP:
        raise BandLimitExceededError(f"band limit {two_L} exceeds the cap {BAND_LIMIT_CAP}")


def cmd_wigner_table(args) -> int:
    _check_cap(args.two_ell)
    if args.euler is not None:
        g = su2_from_euler(EulerAngles(*args.euler))
    else:
        g = su2_new(*args.alpha_beta)
    D = wigner_matrix(args.two_ell, g)
    _write(table_to_csv(args.two_ell, D) if args.format == "csv" else table_to_json(args.two_ell, D) + "\n", args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    grid = build_grid(args.band_limit_doubled)
    if args.format == "csv":
        _write(grid.to_csv(), args.out)
    else:
        nodes = [list(map(float, row)) for row in zip(grid.phi, grid.theta, grid.psi, grid.weights)]
        _write(json.dumps({"band_limit_doubled": grid.two_L, "columns": ["phi", "theta", "psi", "weight"], "nodes": nodes}) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_cap(args.band_limit_doubled)
    overrides: Dict[str, float] = dict(args.tol_override)
    try:
        results = run_checks(args.band_limit_doubled, args.seed, overrides)
    except KeyError as exc:
        print(f"su2fields: error: --tol-override: {exc.args[0]}", file=sys.stderr)
        return EXIT_PARSE
    text = results_to_csv(results) if args.format == "csv" else json.dumps(results_to_dict(results), indent=1) + "\n"
    _write(text, args.out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"su2fields: verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _load(args):
    cfg = load_spec(args.spec)
    seed = cfg.seed if args.seed is None else args.seed
    samples = cfg.samples if args.samples is None else args.samples
    return cfg, seed, samples


def cmd_field_sample(args) -> int:
    cfg, seed, samples = _load(args)
    draws = draw_samples(cfg.draw, samples, seed, args.threads)
    if args.format == "json":
        body = {"generator": cfg.name, "seed": seed, "samples": [draws[k].to_dict() for k in range(samples)]}
        _write(json.dumps(body) + "\n", args.out)
    else:
        lines = ["sample,two_ell,two_m,two_s,re,im"]
        labels = coefficient_indices(draws.two_L)
        flat = draws.flat()
        for k in range(samples):
            for (n, tm, ts), z in zip(labels, flat[k]):
                lines.append(f"{k},{n},{tm},{ts},{z.real!r},{z.imag!r}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_mc_correlations(args) -> int:
    cfg, seed, samples = _load(args)
    if samples < 100:
        raise InvalidSpecError("Monte Carlo estimates need at least 100 samples")
    report = correlate(draw_samples(cfg.draw, samples, seed, args.threads), cfg.targets, cfg.model.predict)
    _write(report.to_csv() if args.format == "csv" else report.to_json() + "\n", args.out)
    if not report.passed:
        print(f"su2fields: {len(report.failures())} correlation rows outside 5 standard errors", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _spin_rows(est) -> List[str]:
    rows = []
    for name in ("total", "left", "right", "bi"):
        values, errors = getattr(est.measures, name), getattr(est.stderr, name)
        for key, v in values.items():
            label = ":".join(map(str, key)) if isinstance(key, tuple) else str(key)
            rows.append(f"{est.mode},{name},{label},{v!r},{errors[key]!r}")
    return rows


def cmd_spin_spectra(args) -> int:
    cfg, seed, samples = _load(args)
    if samples < 100:
        raise InvalidSpecError("spin spectra estimates need at least 100 samples")
    draws = draw_samples(cfg.draw, samples, seed, args.threads)
    weak = spin_measure_statistics(draws, "weak", cfg.degree)
    strong = spin_measure_statistics(draws, "strong", cfg.degree)
    if args.format == "json":
        _write(json.dumps({"weak": weak.to_dict(), "strong": strong.to_dict()}, indent=1) + "\n", args.out)
    else:
        lines = ["mode,measure,key,value,stderr"] + _spin_rows(weak) + _spin_rows(strong)
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "wigner-table": cmd_wigner_table,
    "grid": cmd_grid,
    "verify": cmd_verify,
    "field-sample": cmd_field_sample,
    "mc-correlations": cmd_mc_correlations,
    "spin-spectra": cmd_spin_spectra,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BandLimitExceededError as exc:
        print(f"su2fields: error: {exc}", file=sys.stderr)
        return EXIT_BAND_LIMIT
    except InvalidSpecError as exc:
        print(f"su2fields: error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except NearZeroError as exc:
        print(f"su2fields: error: --alpha-beta: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
