"""Command-line entry point: ``censorgame <command> [options]``.

Exit status is 0 on success, 2 for bad flags or invalid configuration and 1
for I/O failures. Diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import PAPER_MIX_CSV, ConfigError, UtilityParams, load_mix


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="censorgame", description="Censor vs. traffic distributor blocking game.")
    parser.add_argument(
        "--seed-mix", choices=["paper"],
        help="print the built-in six-protocol mix as mix-CSV and exit",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, *, params=True, mix=True):
        if mix:
            p.add_argument("--mix", type=Path, required=True, help="mix-CSV file")
        if params:
            p.add_argument("--c", type=float, required=True, help="utility constant C (< 0)")
            p.add_argument("--d", type=float, required=True, help="utility constant D (> 0)")
        p.add_argument("--quantum", type=int, default=5, help="share step in percent (default 5)")

    p = sub.add_parser("curve", help="utility vs. false positives for fixed t values")
    common(p, mix=False)
    p.add_argument("--t-values", default="100,50,0", help="comma-separated t values")
    p.add_argument("--f-min", type=float, default=0.0)
    p.add_argument("--f-max", type=float, default=35.0)
    p.add_argument("--f-step", type=float, default=0.25)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("enumerate", help="list admissible distributor strategies")
    common(p, params=False)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--actions", action="store_true", help="list censor blocking sets instead")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("solve", help="find the equilibrium, emit equilibrium-JSON")
    common(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("grid", help="full utility grid as CSV and/or SVG heatmap")
    common(p)
    p.add_argument("--csv", type=Path)
    p.add_argument("--svg", type=Path)
    p.add_argument("--width", type=float, default=640)
    p.add_argument("--height", type=float, default=960)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("critical", help="protocols the censor will not block")
    common(p)
    return parser


def _read_mix(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"--mix: cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return load_mix(text)
    except ConfigError as exc:
        raise ConfigError(f"--mix {path}: {exc}") from None


def _params(args) -> UtilityParams:
    try:
        return UtilityParams(args.c, args.d, args.quantum)
    except ConfigError as exc:
        field = str(exc).split()[0]
        raise ConfigError(f"--{field}: {exc}") from None


def _check_quantum(quantum: int) -> None:
    if quantum <= 0 or 100 % quantum:
        raise ConfigError(f"--quantum: must be a positive divisor of 100, got {quantum}")


def _cmd_curve(args) -> dict:
    from .utility import CurveSpec, utility_curve, write_curve_csv

    params = _params(args)
    try:
        t_values = tuple(float(x) for x in args.t_values.split(","))
    except ValueError:
        raise ConfigError(f"--t-values: expected comma-separated numbers, got {args.t_values!r}")
    try:
        spec = CurveSpec(t_values, args.f_min, args.f_max, args.f_step)
    except ConfigError as exc:
        raise ConfigError(f"curve options: {exc}") from None
    return {args.out: write_curve_csv(utility_curve(params, spec))}


def _cmd_enumerate(args) -> dict:
    from .enumeration import enumerate_censor_actions, enumerate_distributor_strategies

    _check_quantum(args.quantum)
    mix = _read_mix(args.mix)
    if args.actions:
        items = [a.bitstring(len(mix)) for a in enumerate_censor_actions(mix)]
    else:
        items = [s.label() for s in enumerate_distributor_strategies(mix, args.quantum)]
    text = f"{len(items)}\n" if args.count_only else "".join(f"{x}\n" for x in items)
    return {args.out: text}


def _cmd_solve(args) -> dict:
    from .game import find_equilibrium
    from .report import write_equilibrium_report

    params = _params(args)
    mix = _read_mix(args.mix)
    eq = find_equilibrium(mix, params, workers=args.workers)
    return {args.out: write_equilibrium_report(eq, mix, params)}


def _cmd_grid(args) -> dict:
    from .report import build_grid, render_heatmap_svg, write_grid_csv

    params = _params(args)
    if args.width <= 0 or args.height <= 0:
        raise ConfigError("--width/--height: must be positive")
    mix = _read_mix(args.mix)
    grid = build_grid(mix, params, workers=args.workers)
    outputs = {}
    if args.csv is not None or args.svg is None:
        outputs[args.csv] = write_grid_csv(grid)
    if args.svg is not None:
        outputs[args.svg] = render_heatmap_svg(grid, args.width, args.height)
    return outputs


def _cmd_critical(args) -> dict:
    from .game import find_critical_protocols

    params = _params(args)
    mix = _read_mix(args.mix)
    names = [mix[p].name for p in sorted(find_critical_protocols(mix, params))]
    return {None: "".join(f"{n}\n" for n in names)}


_COMMANDS = {
    "curve": _cmd_curve,
    "enumerate": _cmd_enumerate,
    "solve": _cmd_solve,
    "grid": _cmd_grid,
    "critical": _cmd_critical,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed_mix:
            stdout.write(PAPER_MIX_CSV)
            return 0
        if args.command is None:
            raise UsageError(parser.format_usage() + "censorgame: error: a command is required")
        # everything is rendered before any file is touched
        outputs = _COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 2
    except ConfigError as exc:
        stderr.write(f"censorgame: error: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"censorgame: error: {exc}\n")
        return 1

    try:
        for path, text in outputs.items():
            if path is None:
                stdout.write(text)
            else:
                path.write_text(text, encoding="utf-8")
    except OSError as exc:
        stderr.write(f"censorgame: error: cannot write output: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
