"""Command-line front end.

Subcommands mirror the pipeline stages: gen-field, prescribe, attack,
harvest, report, optimize, and reproduce-paper. Pipeline intermediates
(field, prescription, applied-rate grids) are written at full precision
so stages compose without rounding drift; report outputs apply display
rounding.

Exit codes: 0 success, 1 usage error, 2 config or data error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import __version__
from .agronomy import _ordered_sum, harvest, prescribe_field
from .attacks import apply_attack, simulate_pass
from .config import RunConfig, load_run_config, resolve_scenario
from .field import FieldGrid, generate_field
from .gridio import read_field_csv, read_grid_csv, write_field_csv, write_grid_csv
from .optimizer import OptimizerConfig
from .report import ScenarioResult, emit_report, evaluate_run, money, tenth
from .reproduce import reproduce


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract reserves 2 for data."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="field generation seed (overrides the config's seed)")
    parser.add_argument("--config", type=Path, default=None, help="run config TOML")
    parser.add_argument("--out", type=Path, default=None, help="output file or directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="sidedress",
                     description="deterministic rate-tampering impact simulator")
    parser.add_argument("--version", action="version", version=f"sidedress {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-field", help="generate a field CSV from a seed")
    _add_common(p)
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--cols", type=int, default=None)
    p.set_defaults(func=_cmd_gen_field)

    p = sub.add_parser("prescribe", help="nitrogen prescription grids for a field")
    _add_common(p)
    p.add_argument("--field", type=Path, default=None, help="field CSV (alternative to --seed)")
    p.set_defaults(func=_cmd_prescribe)

    p = sub.add_parser("attack", help="apply a tampering scenario to the in-season pass")
    _add_common(p)
    p.add_argument("--field", type=Path, default=None, help="field CSV (alternative to --seed)")
    p.add_argument("--scenario", required=True,
                   help="identity, builtin:1..3, or a scenario TOML path")
    p.add_argument("--spoof", action="store_true",
                   help="force display spoofing regardless of the scenario document")
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("harvest", help="yields from a field and an applied-rate grid")
    _add_common(p)
    p.add_argument("--field", type=Path, default=None, help="field CSV (alternative to --seed)")
    p.add_argument("--applied", type=Path, required=True, help="total applied N grid CSV")
    p.set_defaults(func=_cmd_harvest)

    p = sub.add_parser("report", help="evaluate all configured scenarios and emit a report")
    _add_common(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("optimize", help="worst-case stealthy attack search plus report")
    _add_common(p)
    p.add_argument("--field", type=Path, default=None, help="field CSV (alternative to --seed)")
    p.add_argument("--multipliers", default=None,
                   help="comma-separated multiplier set, e.g. 0,0.5,1,1.5,2")
    p.add_argument("--budget", default=None,
                   help="net-delta stealth budget in lb, or 'unbounded'")
    p.add_argument("--resolution", type=float, default=None, help="budget resolution in lb")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("reproduce-paper",
                       help="compare computed aggregates against the published case study")
    _add_common(p)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def _load_config(args) -> RunConfig | None:
    if args.config is None:
        return None
    return load_run_config(args.config)


def _effective_config(args) -> RunConfig:
    """Config document if given, else defaults; --seed always wins."""
    cfg = _load_config(args)
    if cfg is None:
        cfg = RunConfig(seed=args.seed if args.seed is not None else 42)
    elif args.seed is not None:
        if cfg.field_path is not None:
            raise ValueError("config reads the field from a file; --seed cannot override it")
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def _field_for(args, cfg: RunConfig) -> FieldGrid:
    field_arg = getattr(args, "field", None)
    if field_arg is not None:
        return read_field_csv(field_arg)
    if cfg.field_path is not None:
        return read_field_csv(cfg.field_path)
    return generate_field(cfg.seed, cfg.rows, cfg.cols, cfg.ranges)


def _out_dir(args, cfg: RunConfig | None = None) -> Path:
    if args.out is not None:
        return args.out
    if cfg is not None and cfg.output_dir is not None:
        return cfg.output_dir
    return Path("out")


def _reshape(values, rows: int, cols: int) -> list[list[float]]:
    flat = list(values)
    return [flat[r * cols : (r + 1) * cols] for r in range(rows)]


def _cmd_gen_field(args) -> int:
    cfg = _effective_config(args)
    if cfg.field_path is not None:
        raise ValueError("gen-field needs a seed, but the config reads the field from a file")
    rows = args.rows if args.rows is not None else cfg.rows
    cols = args.cols if args.cols is not None else cfg.cols
    field = generate_field(cfg.seed, rows, cols, cfg.ranges)
    out = args.out if args.out is not None else Path("field.csv")
    write_field_csv(out, field)
    print(f"wrote {out} ({rows}x{cols}, seed {cfg.seed})")
    return 0


def _cmd_prescribe(args) -> int:
    cfg = _effective_config(args)
    field = _field_for(args, cfg)
    prescription = prescribe_field(field, cfg.econ, cfg.split)
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    for name, values in (("n_rec", prescription.n_rec),
                         ("planting_n", prescription.planting),
                         ("inseason_n", prescription.inseason)):
        write_grid_csv(out / f"{name}.csv", _reshape(values, field.rows, field.cols))
    print(f"prescribed N total: {tenth(prescription.total)} lb "
          f"(planting {tenth(_ordered_sum(prescription.planting))}, "
          f"in-season {tenth(_ordered_sum(prescription.inseason))})")
    print(f"wrote {out}/n_rec.csv, planting_n.csv, inseason_n.csv")
    return 0


def _cmd_attack(args) -> int:
    cfg = _effective_config(args)
    field = _field_for(args, cfg)
    prescription = prescribe_field(field, cfg.econ, cfg.split)
    scenario = resolve_scenario(args.scenario, field.rows, field.cols, Path.cwd())
    if args.spoof and not scenario.spoof_display:
        scenario = dataclasses.replace(scenario, spoof_display=True)
    records, metrics = simulate_pass(prescription, scenario)
    applied_total = apply_attack(prescription, scenario)

    by_index = sorted(records, key=lambda r: (r.zone.row, r.zone.col))
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    rows, cols = field.rows, field.cols
    write_grid_csv(out / "applied_total_n.csv", _reshape(applied_total, rows, cols))
    write_grid_csv(out / "applied_inseason_n.csv",
                   _reshape([r.applied for r in by_index], rows, cols))
    write_grid_csv(out / "displayed_inseason_n.csv",
                   _reshape([r.displayed for r in by_index], rows, cols))
    print(f"scenario: {scenario.name} (spoof_display={scenario.spoof_display})")
    print(f"net in-season delta: {tenth(metrics.total_delta):+} lb")
    print(f"visible delta: {tenth(metrics.visible_delta):+} lb")
    print(f"max zone deviation: {round(100 * metrics.max_zone_deviation, 2)}%")
    print(f"wrote {out}/applied_total_n.csv, applied_inseason_n.csv, displayed_inseason_n.csv")
    return 0


def _cmd_harvest(args) -> int:
    cfg = _effective_config(args)
    field = _field_for(args, cfg)
    grid = read_grid_csv(args.applied)
    applied = [v for row in grid for v in row]
    result = harvest(field, applied, cfg.bounds, cfg.econ)
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    write_grid_csv(out / "yield.csv", _reshape(result.yields, field.rows, field.cols))
    print(f"yield total: {tenth(result.total)} bu")
    print(f"wrote {out}/yield.csv")
    return 0


def _summary_lines(results: list[ScenarioResult]) -> list[str]:
    header = f"{'scenario':<22} {'kind':<10} {'expected profit':>16} {'actual profit':>16} {'loss':>12}"
    lines = [header, "-" * len(header)]
    for r in results:
        lines.append(
            f"{r.name:<22} {r.kind:<10} "
            f"{money(r.ledger.expected_profit):>16,.2f} "
            f"{money(r.ledger.actual_profit):>16,.2f} "
            f"{money(r.ledger.profit_loss_gain):>12,.2f}"
        )
    return lines


def _cmd_report(args) -> int:
    cfg = _effective_config(args)
    out = _out_dir(args, cfg)
    results, _ = evaluate_run(cfg)
    paths = emit_report(cfg, results, out)
    for line in _summary_lines(results):
        print(line)
    print(f"report: {paths[0]}")
    return 0


def _cmd_optimize(args) -> int:
    cfg = _effective_config(args)
    opt = cfg.optimizer
    if args.multipliers is not None:
        try:
            mset = tuple(float(tok) for tok in args.multipliers.split(","))
        except ValueError:
            raise ValueError(f"bad multiplier set {args.multipliers!r}") from None
        budget = None
        if args.budget not in (None, "unbounded"):
            budget = float(args.budget)
        opt = OptimizerConfig(
            multiplier_set=mset,
            stealth_budget=budget,
            budget_resolution=args.resolution if args.resolution is not None else 1.0,
        )
    elif opt is None:
        raise ValueError("optimize needs [optimizer] in the config or --multipliers")
    elif args.budget is not None or args.resolution is not None:
        budget = opt.stealth_budget
        if args.budget is not None:
            budget = None if args.budget == "unbounded" else float(args.budget)
        opt = dataclasses.replace(
            opt,
            stealth_budget=budget,
            budget_resolution=args.resolution if args.resolution is not None
            else opt.budget_resolution,
        )

    if getattr(args, "field", None) is not None:
        cfg = dataclasses.replace(cfg, seed=None, field_path=args.field, optimizer=opt)
    else:
        cfg = dataclasses.replace(cfg, optimizer=opt)
    out = _out_dir(args, cfg)
    results, solution = evaluate_run(cfg)
    paths = emit_report(cfg, results, out)
    scenario = solution.scenario
    write_grid_csv(out / "optimized_multipliers.csv",
                   _reshape(scenario.multipliers, scenario.rows, scenario.cols))
    for line in _summary_lines(results):
        print(line)
    print(f"worst-case loss: {money(solution.loss):,.2f} "
          f"(net in-season delta {tenth(solution.net_fertilizer_delta):+} lb, "
          f"{solution.optimality})")
    print(f"report: {paths[0]}")
    return 0


def _cmd_reproduce(args) -> int:
    text, ok = reproduce()
    print(text, end="")
    if args.out is not None:
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        path = out / "reproduction.txt"
        path.write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {path}")
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - invariant violations only
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
