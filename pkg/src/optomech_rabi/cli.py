"""Command-line entry point: ``optomech-rabi <run|preset|plot|sweep|converge>``.

Exit codes: 0 success, 2 configuration/input error, 3 integration
instability, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import RunConfig, format_config, parse_config, preset, PRESETS
from .engine import convergence_check
from .errors import ConfigError, PlotError, UnstableIntegration
from .runner import run, sweep
from .svgplot import render_svg

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("optomech_rabi")


def _load_config(path: str, overrides: list[str]) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    cfg = parse_config(text)
    return _apply_overrides(cfg, overrides)


def _apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    if not overrides:
        return cfg
    return parse_config("\n".join(overrides), base=cfg)


def _plots_for(result, out_dir: Path) -> list[Path]:
    csv_path = result.csv_path
    name = result.config.name
    delta_cols = ["delta_p_num"]
    if result.eq8 is not None:
        delta_cols.append("delta_p_eq8")
    if result.eq9 is not None:
        delta_cols.append("delta_p_eq9")
    written = []
    for suffix, cols, title in (("delta_p", delta_cols, f"{name}: population inversion"),
                                ("n_b", ["n_b"], f"{name}: mean phonon number")):
        target = out_dir / f"{name}_{suffix}.svg"
        render_svg(csv_path, cols, target, title=title)
        written.append(target)
    return written


def cmd_run(args) -> int:
    cfg = _load_config(args.config, args.set)
    out = Path(args.out) if args.out else Path(cfg.out_dir)
    result = run(cfg, out)
    print(result.csv_path)
    if args.plot:
        for path in _plots_for(result, out):
            print(path)
    return EXIT_OK


def cmd_preset(args) -> int:
    cfg = _apply_overrides(preset(args.name), args.set)
    if args.config_only:
        sys.stdout.write(format_config(cfg, header=f"preset {args.name}"))
        return EXIT_OK
    out = Path(args.out) if args.out else Path(cfg.out_dir)
    result = run(cfg, out)
    print(result.csv_path)
    for path in _plots_for(result, out):
        print(path)
    return EXIT_OK


def cmd_plot(args) -> int:
    cols = [c.strip() for c in args.cols.split(",") if c.strip()]
    render_svg(args.csv, cols, args.out, title=args.title)
    print(args.out)
    return EXIT_OK


def _parse_values(text: str) -> list[float]:
    items = [v.strip() for v in text.split(",") if v.strip()]
    try:
        return [float(v) for v in items]
    except ValueError as exc:
        raise ConfigError(f"values: {exc}") from None


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config, args.set)
    rows = sweep(cfg, args.key, _parse_values(args.values), args.out, jobs=args.jobs)
    print(Path(args.out) / "summary.csv")
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"{args.key}={r.value:g}: {r.status}", file=sys.stderr)
    return EXIT_UNSTABLE if failed else EXIT_OK


def cmd_converge(args) -> int:
    cfg = _load_config(args.config, args.set)
    report = convergence_check(cfg.params(), cfg.evolution_spec(), args.dm_step,
                               eigensolver=cfg.eigensolver)
    print(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optomech-rabi",
        description="Modulated vacuum Rabi oscillation in an optomechanical cavity: "
                    "master-equation runs, analytic comparison, plots.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    set_help = "override a configuration key (repeatable), e.g. --set d_m=8"

    p = sub.add_parser("run", help="run a configuration file and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (default: out_dir from the config)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help=set_help)
    p.add_argument("--plot", action="store_true", help="also render SVG plots")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="run a figure preset and write CSV and SVG plots")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help=set_help)
    p.add_argument("--config-only", action="store_true",
                   help="print the preset as a configuration document and exit")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("plot", help="render CSV columns as an SVG line chart")
    p.add_argument("--csv", required=True)
    p.add_argument("--cols", required=True, help="comma-separated column names")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("sweep", help="run one configuration per value of a system parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help=set_help)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("converge", help="compare observables at d_m and d_m + step")
    p.add_argument("--config", required=True)
    p.add_argument("--dm-step", type=int, required=True)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help=set_help)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, PlotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnstableIntegration as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"error: {exc.strerror or exc}{where}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
