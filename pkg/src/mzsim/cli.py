"""Command-line front end.

Subcommands: run, trace, sweep, mc, threshold, figures.  Standard output
carries data only; diagnostics go to standard error.  Exit codes: 0 ok,
2 usage or parse error, 3 strict-mode norm violation, 4 pipeline vs
closed-form disagreement.  Identical invocations produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import analysis
from .analysis import SweepSource
from .dsl import CircuitSpec, parse_circuit

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_STRICT_NORM = 3
EXIT_ORACLE_MISMATCH = 4

STRICT_NORM_LIMIT = 1e-9
ORACLE_MISMATCH_LIMIT = 1e-9

SWEEP_CSV_HEADER = "beta,delta,phi,p_d1,p_d2,p_abs,source"

FIG2_POINTS = 201
FIG3_POINTS = 101


class UsageError(Exception):
    """Bad flag values; reported on stderr with exit code 2."""


def _fmt(value: float) -> str:
    """12 significant digits, negative zero normalized away."""
    return format(float(value) + 0.0, ".12g")


def _fmt_complex(value: complex) -> str:
    real = value.real + 0.0
    imag = value.imag + 0.0
    sign = "+" if imag >= 0 else "-"
    return f"{_fmt(real)}{sign}{_fmt(abs(imag))}j"


def parse_grid(text: str) -> list[float]:
    """Parse a grid flag: either a single number or start:stop:count."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be 'start:stop:count', got {text!r}")
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"malformed grid {text!r}") from None
        if count < 1:
            raise UsageError(f"grid count must be >= 1, got {count}")
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(text)]
    except ValueError:
        raise UsageError(f"malformed grid value {text!r}") from None


def _read_source(input_path: Optional[str]) -> str:
    if input_path is None:
        return sys.stdin.read()
    try:
        return Path(input_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {input_path}: {exc.strerror or exc}") from None


def _parse_or_fail(source: str) -> CircuitSpec:
    result = parse_circuit(source)
    for diagnostic in result.diagnostics:
        print(diagnostic, file=sys.stderr)
    if result.circuit is None:
        raise _ParseFailure()
    return result.circuit


class _ParseFailure(Exception):
    pass


def _write_lines(lines: Sequence[str], output_path: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if output_path is None:
        sys.stdout.write(text)
    else:
        with open(output_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _report_lines(dist: analysis.OutcomeDistribution) -> list[str]:
    return [
        f"p_d1 = {_fmt(dist.p_d1)}",
        f"p_d2 = {_fmt(dist.p_d2)}",
        f"p_abs = {_fmt(dist.p_abs)}",
        f"norm_deficit = {_fmt(dist.norm_deficit)}",
    ]


def _strict_violation(norm_deficit: float) -> None:
    print(
        f"error: norm deficit {_fmt(norm_deficit)} exceeds strict limit {STRICT_NORM_LIMIT:g}",
        file=sys.stderr,
    )


def cmd_run(args: argparse.Namespace) -> int:
    circuit = _parse_or_fail(_read_source(args.input))
    dist = analysis.outcome_distribution(analysis.run_circuit(circuit))
    _write_lines(_report_lines(dist), args.output)
    if args.strict and dist.norm_deficit > STRICT_NORM_LIMIT:
        _strict_violation(dist.norm_deficit)
        return EXIT_STRICT_NORM
    return EXIT_OK


def cmd_trace(args: argparse.Namespace) -> int:
    circuit = _parse_or_fail(_read_source(args.input))
    records = analysis.trace_states(circuit)
    lines = []
    for record in records:
        amps = ", ".join(_fmt_complex(a) for a in record.state.amplitudes)
        lines.append(f"{record.stage_name} | {amps} | norm2={_fmt(record.state.squared_norm())}")
    _write_lines(lines, args.output)
    deficit = abs(records[-1].state.squared_norm() - 1.0)
    if args.strict and deficit > STRICT_NORM_LIMIT:
        _strict_violation(deficit)
        return EXIT_STRICT_NORM
    return EXIT_OK


def _sweep_csv_row(row: analysis.SweepRow) -> str:
    d = row.distribution
    return (
        f"{_fmt(row.beta)},{_fmt(row.delta)},{_fmt(row.phi)},"
        f"{_fmt(d.p_d1)},{_fmt(d.p_d2)},{_fmt(d.p_abs)},{row.source.value}"
    )


def max_disagreement(
    pipeline_rows: Sequence[analysis.SweepRow], closed_rows: Sequence[analysis.SweepRow]
) -> float:
    """Largest componentwise probability gap between paired sweep rows."""
    worst = 0.0
    for pipeline_row, closed_row in zip(pipeline_rows, closed_rows):
        a, b = pipeline_row.distribution, closed_row.distribution
        worst = max(
            worst,
            abs(a.p_d1 - b.p_d1),
            abs(a.p_d2 - b.p_d2),
            abs(a.p_abs - b.p_abs),
        )
    return worst


def cmd_sweep(args: argparse.Namespace) -> int:
    betas = parse_grid(args.beta)
    deltas = parse_grid(args.delta)
    pipeline_rows = analysis.sweep(betas, deltas, args.phi, SweepSource.PIPELINE)
    lines = [SWEEP_CSV_HEADER]
    if args.check:
        closed_rows = analysis.sweep(betas, deltas, args.phi, SweepSource.CLOSED_FORM)
        for pipeline_row, closed_row in zip(pipeline_rows, closed_rows):
            lines.append(_sweep_csv_row(pipeline_row))
            lines.append(_sweep_csv_row(closed_row))
        worst = max_disagreement(pipeline_rows, closed_rows)
    else:
        lines.extend(_sweep_csv_row(row) for row in pipeline_rows)
        worst = 0.0
    _write_lines(lines, args.output)
    if worst > ORACLE_MISMATCH_LIMIT:
        print(
            f"error: pipeline and closed form disagree by {worst:.3e}"
            f" (limit {ORACLE_MISMATCH_LIMIT:g})",
            file=sys.stderr,
        )
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _default_seed() -> int:
    env = os.environ.get("MZSIM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"MZSIM_SEED must be an integer, got {env!r}") from None


def cmd_mc(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if seed < 0:
        raise UsageError(f"seed must be >= 0, got {seed}")
    dist = analysis.closed_form_obstacle(args.beta, args.delta)
    result = analysis.monte_carlo(dist, args.shots, seed)
    n_d1, n_d2, n_abs = result.counts
    lines = [
        f"shots = {result.shots}",
        f"seed = {result.seed}",
        f"n_d1 = {n_d1}",
        f"n_d2 = {n_d2}",
        f"n_abs = {n_abs}",
        f"f_d1 = {_fmt(n_d1 / result.shots)}",
        f"f_d2 = {_fmt(n_d2 / result.shots)}",
        f"f_abs = {_fmt(n_abs / result.shots)}",
        f"chi_square = {_fmt(result.chi_square)}",
    ]
    _write_lines(lines, args.output)
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    beta_star = analysis.success_threshold(args.delta)
    line = "none" if beta_star is None else f"{beta_star:.10f}"
    _write_lines([line], args.output)
    return EXIT_OK


def figure_files(directory: Path) -> dict[str, Path]:
    return {
        "fig2a": directory / "fig2a.csv",
        "fig2b": directory / "fig2b.csv",
        "fig3_d1": directory / "fig3_d1.csv",
        "fig3_d2": directory / "fig3_d2.csv",
    }


def cmd_figures(args: argparse.Namespace) -> int:
    directory = Path(args.output)
    directory.mkdir(parents=True, exist_ok=True)
    paths = figure_files(directory)

    betas_fig2 = [float(v) for v in np.linspace(0.0, 1.0, FIG2_POINTS)]
    for name, delta in (("fig2a", 0.0), ("fig2b", math.pi / 2.0)):
        rows = analysis.sweep(betas_fig2, [delta], 0.0, SweepSource.CLOSED_FORM)
        lines = [SWEEP_CSV_HEADER] + [_sweep_csv_row(row) for row in rows]
        _write_lines(lines, str(paths[name]))
        print(f"wrote {paths[name]}", file=sys.stderr)

    betas_fig3 = [float(v) for v in np.linspace(0.0, 1.0, FIG3_POINTS)]
    deltas_fig3 = [float(v) for v in np.linspace(-math.pi, math.pi, FIG3_POINTS)]
    surfaces = {"fig3_d1": [], "fig3_d2": []}
    for beta in betas_fig3:
        for delta in deltas_fig3:
            dist = analysis.closed_form_obstacle(beta, delta)
            prefix = f"{_fmt(beta)},{_fmt(delta)}"
            surfaces["fig3_d1"].append(f"{prefix},{_fmt(dist.p_d1)}")
            surfaces["fig3_d2"].append(f"{prefix},{_fmt(dist.p_d2)}")
    for name, quantity in (("fig3_d1", "p_d1"), ("fig3_d2", "p_d2")):
        lines = [f"beta,delta,{quantity}"] + surfaces[name]
        _write_lines(lines, str(paths[name]))
        print(f"wrote {paths[name]}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzsim",
        description="Mach-Zehnder interferometer simulator with a semitransparent obstacle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, with_strict: bool = False) -> None:
        p.add_argument("--input", help="circuit file (.mz); standard input when omitted")
        p.add_argument("--output", help="output file; standard output when omitted")
        if with_strict:
            p.add_argument(
                "--strict",
                action="store_true",
                help=f"fail (exit 3) if the norm deficit exceeds {STRICT_NORM_LIMIT:g}",
            )

    p_run = sub.add_parser("run", help="run a circuit and report outcome probabilities")
    add_io(p_run, with_strict=True)
    p_run.set_defaults(handler=cmd_run)

    p_trace = sub.add_parser("trace", help="print the state after each circuit stage")
    add_io(p_trace, with_strict=True)
    p_trace.set_defaults(handler=cmd_trace)

    p_sweep = sub.add_parser("sweep", help="sweep the obstructed circuit over a (beta, delta) grid")
    p_sweep.add_argument("--beta", required=True, help="beta grid: number or start:stop:count")
    p_sweep.add_argument("--delta", required=True, help="delta grid: number or start:stop:count")
    p_sweep.add_argument("--phi", type=float, default=0.0, help="interferometer phase (default 0)")
    p_sweep.add_argument(
        "--check",
        action="store_true",
        help="emit closed-form rows alongside pipeline rows and exit 4 on disagreement",
    )
    p_sweep.add_argument("--output", help="CSV file; standard output when omitted")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_mc = sub.add_parser("mc", help="sample detector counts from the closed-form distribution")
    p_mc.add_argument("--beta", type=float, default=0.0, help="obstacle transparency (default 0)")
    p_mc.add_argument("--delta", type=float, default=0.0, help="theta - phi in radians (default 0)")
    p_mc.add_argument("--shots", type=int, default=10000, help="number of samples (default 10000)")
    p_mc.add_argument(
        "--seed", type=int, default=None,
        help="RNG seed; defaults to MZSIM_SEED from the environment, then 0",
    )
    p_mc.add_argument("--output", help="report file; standard output when omitted")
    p_mc.set_defaults(handler=cmd_mc)

    p_threshold = sub.add_parser(
        "threshold", help="smallest beta where the dark-port click beats absorption"
    )
    p_threshold.add_argument("--delta", type=float, required=True, help="theta - phi in radians")
    p_threshold.add_argument("--output", help="report file; standard output when omitted")
    p_threshold.set_defaults(handler=cmd_threshold)

    p_figures = sub.add_parser("figures", help="regenerate the pinned figure data CSVs")
    p_figures.add_argument("--output", default=".", help="output directory (default .)")
    p_figures.set_defaults(handler=cmd_figures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.handler(args)
    except _ParseFailure:
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
