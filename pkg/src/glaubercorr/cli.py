"""Command-line front end: ``value``, ``sweep``, ``figure`` and ``verify``.

Exit codes: 0 success, 1 usage or I/O error, 2 oracle-consistency failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from . import channel, measures, model, sweep, verify
from .errors import GlauberCorrError
from .model import ModelParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ORACLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 is reserved for oracle failures here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple:
    try:
        values = tuple(sorted({int(v) for v in text.split(",") if v.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def _add_gamma_options(p: argparse.ArgumentParser, grid: bool) -> None:
    g = p.add_mutually_exclusive_group()
    if grid:
        g.add_argument("--gamma-grid", help="dephasing grid start:stop:step (inclusive) or comma list")
        g.add_argument("--time-grid", help="time grid start:stop:step; needs --decay-rate")
    else:
        g.add_argument("--gamma", type=float, help="dephasing probability in [0, 1]")
        g.add_argument("--time", type=float, help="evolution time; needs --decay-rate")
    p.add_argument("--decay-rate", type=float, help="dephasing rate; gamma = 1 - exp(-rate * t)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glaubercorr", description="Fisher information and local quantum correlations of coherent-state probes.")
    sub = parser.add_subparsers(dest="command", metavar="{value,sweep,figure,verify}")
    sub.required = True

    pv = sub.add_parser("value", help="evaluate one quantity at one parameter point")
    pv.add_argument("--quantity", required=True, choices=sweep.QUANTITIES)
    src = pv.add_mutually_exclusive_group(required=True)
    src.add_argument("--p", type=float, help="overlap p = exp(-2|alpha|^2) in [0, 1]")
    src.add_argument("--alpha", type=float, help="coherent amplitude |alpha|")
    pv.add_argument("--n", type=int, required=True, help="number of modes")
    pv.add_argument("--m", type=int, required=True, choices=(0, 1), help="parity of the superposition")
    pv.add_argument("--method", choices=sweep.METHODS, default="numeric")
    _add_gamma_options(pv, grid=False)
    pv.add_argument("--split-k", type=int, help="use the pure k | n-k split state instead of the reduced state")
    pv.add_argument("--generator", choices=tuple(measures.AXES), default="z", help="qubit-A Pauli axis for qfi")
    pv.add_argument("--strict", action="store_true", help="cross-check the numeric value against independent oracles")

    ps = sub.add_parser("sweep", help="evaluate a quantity over a parameter grid and write CSV or JSON")
    ps.add_argument("--quantity", required=True, choices=sweep.QUANTITIES)
    ps.add_argument("--method", choices=sweep.METHODS, default="numeric")
    ps.add_argument("--p-grid", default="0:1:0.01", help="start:stop:step (inclusive) or comma list")
    _add_gamma_options(ps, grid=True)
    ps.add_argument("--n", type=_int_list, required=True, help="comma-separated mode counts")
    ps.add_argument("--m", type=_int_list, default=(0,), help="comma-separated parities (default 0)")
    ps.add_argument("--generator", choices=tuple(measures.AXES), default="z")
    ps.add_argument("--output", required=True, help="output path, or - for stdout")
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.add_argument("--workers", type=int, default=sweep.default_workers())

    pf = sub.add_parser("figure", help="write the CSV grid behind one figure")
    pf.add_argument("id", help="fig1 ... fig8, or all")
    pf.add_argument("--outdir", default="figures")
    pf.add_argument("--resolution", type=int, default=101, help="points per axis")
    pf.add_argument("--workers", type=int, default=sweep.default_workers())

    pc = sub.add_parser("verify", help="run the oracle cross-checks and the printed-formula comparison")
    pc.add_argument("--grid", choices=tuple(verify.GRIDS), default="coarse")
    pc.add_argument("--report", default="verify_report.json", help="JSON report path, or - for stdout")
    pc.add_argument("--strict", action="store_true", help="also run the seeded random-state checks")
    pc.add_argument("--workers", type=int, default=1)
    return parser


# ---------------------------------------------------------------------------


def _gamma_from_args(args) -> Optional[float]:
    if args.time is not None:
        if args.decay_rate is None:
            raise UsageError("--time needs --decay-rate")
        return channel.gamma_of_time(args.decay_rate, args.time)
    if args.decay_rate is not None:
        raise UsageError("--decay-rate needs --time")
    return args.gamma


def _params_from_args(args) -> ModelParams:
    if args.alpha is not None:
        return ModelParams.from_alpha(args.alpha, args.n, args.m)
    return ModelParams(args.p, args.n, args.m)


def _strict_errors(quantity: str, params: ModelParams, gamma, split_k, generator: str) -> list:
    """Messages for every independent oracle that disagrees with the spectral value."""
    rho = sweep.state_matrix(params, gamma, split_k)
    problems = []
    if quantity == "qfi":
        h = measures.axis_generator(generator)
        f = measures.qfi(rho, h)
        sld = measures.qfi_via_sld(rho, h)
        if abs(f - sld) > verify.TOLERANCES["qfi-vs-sld"]:
            problems.append(f"qfi {f!r} disagrees with the SLD route {sld!r}")
        if split_k is not None and gamma is None:
            var = measures.pure_qfi_variance(model.pure_split_state(params, split_k).vector, h)
            if abs(f - var) > verify.TOLERANCES["pure-qfi-variance"]:
                problems.append(f"qfi {f!r} disagrees with 4 Var(H) = {var!r}")
        return problems
    q = measures.lqfi(rho).value
    u = measures.lqu(rho).value
    q_bf = measures.lqfi_bruteforce(rho)
    u_bf = measures.lqu_bruteforce(rho)
    for name, val, brute in (("lqfi", q, q_bf), ("lqu", u, u_bf)):
        tol = verify.TOLERANCES[f"{name}-spectral-vs-bruteforce"]
        if abs(val - brute) > tol or val > brute + verify.BRACKET_SLACK:
            problems.append(f"{name} {val!r} disagrees with the direction scan {brute!r}")
    gap = float(verify.luo_violation(np.array(q), np.array(u)))
    if gap > verify.TOLERANCES["luo-sandwich"]:
        problems.append(f"U <= Q <= 2U violated by {gap:.3e} (Q = {q!r}, U = {u!r})")
    return problems


def cmd_value(args) -> int:
    params = _params_from_args(args)
    gamma = _gamma_from_args(args)
    if args.quantity in sweep.DEPHASED and gamma is None:
        raise UsageError(f"{args.quantity} needs --gamma or --decay-rate/--time")
    if args.quantity in ("lqfi", "lqu") and gamma is not None:
        raise UsageError(f"{args.quantity} is undephased; use {args.quantity}-dc for a dephased state")
    if args.split_k is None and params.n < 3:
        raise UsageError("the reduced two-mode state needs --n >= 3")
    methods = ("numeric", "paper") if args.method == "both" else (args.method,)
    values = {}
    if "numeric" in methods:
        values["numeric"] = sweep.numeric_value(args.quantity, params, gamma, args.split_k, args.generator)
    if "paper" in methods:
        values["paper"] = sweep.paper_value(args.quantity, params, gamma, args.split_k)
    if args.strict:
        problems = _strict_errors(args.quantity, params, gamma, args.split_k, args.generator)
        if problems:
            for msg in problems:
                print(f"oracle check failed: {msg}", file=sys.stderr)
            return EXIT_ORACLE
    if len(methods) == 1:
        print(sweep.format_value(values[methods[0]]))
    else:
        for method in methods:
            print(f"{method} {sweep.format_value(values[method])}")
    return EXIT_OK


def _emit(text: str, target: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        sweep.write_text(target, text)


def cmd_sweep(args) -> int:
    gamma_values = None
    if args.gamma_grid is not None:
        if args.decay_rate is not None:
            raise UsageError("--decay-rate goes with --time-grid, not --gamma-grid")
        gamma_values = sweep.parse_grid(args.gamma_grid)
    elif args.time_grid is not None:
        if args.decay_rate is None:
            raise UsageError("--time-grid needs --decay-rate")
        times = sweep.parse_grid(args.time_grid, lo=0.0, hi=None)
        gamma_values = tuple(sorted({channel.gamma_of_time(args.decay_rate, t) for t in times}))
    elif args.decay_rate is not None:
        raise UsageError("--decay-rate needs --time-grid")
    spec = sweep.SweepSpec(
        quantity=args.quantity,
        method=args.method,
        p_values=sweep.parse_grid(args.p_grid),
        n_values=args.n,
        m_values=args.m,
        gamma_values=gamma_values,
        generator=args.generator,
    )
    rows = sweep.run_sweep(spec, workers=max(1, args.workers))
    text = sweep.rows_to_csv(rows) if args.format == "csv" else sweep.rows_to_json(rows)
    _emit(text, args.output)
    return EXIT_OK


def cmd_figure(args) -> int:
    ids = list(sweep.FIGURES) if args.id == "all" else [args.id]
    for fig_id in ids:
        for path in sweep.run_figure(fig_id, args.outdir, args.resolution, workers=max(1, args.workers)):
            print(path)
    return EXIT_OK


def cmd_verify(args) -> int:
    outcome = verify.run_verify(args.grid, strict=args.strict, workers=max(1, args.workers))
    _emit(verify.report_to_json(outcome.report), args.report)
    print(outcome.summary, file=sys.stderr if args.report == "-" else sys.stdout)
    return outcome.exit_code


COMMANDS = {"value": cmd_value, "sweep": cmd_sweep, "figure": cmd_figure, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0; usage errors exit EXIT_USAGE via _Parser.error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GlauberCorrError) as exc:
        print(f"glaubercorr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"glaubercorr {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
