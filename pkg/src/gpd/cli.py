"""Command line front end.

    gpd <mode> [--config cfg.json] [--out path] [--format csv|json] [--plot]

Modes: exact, adiabatic, nonadiabatic, density, fig2, fig3 produce sweep
datasets (CSV with a '#' metadata header, or a JSON mirror); oracle runs the
independent numerical cross-checks and writes a JSON report.  --plot renders a
PNG figure next to the dataset.  Every default is overridable through the JSON
config (see `gpd.config`).

Exit codes: 0 success; 1 configuration/usage error; 2 oracle-check failure;
3 numerical-singularity abort (cutoff resonance at the requested parameters).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .bath import CutoffResonanceError
from .config import MODES, ConfigError, RunConfig, load_config
from .reports import BUILDERS, run_oracle_checks, write_csv, write_json

_MODE_HELP = {
    "exact": "dissipationless sweep: energies, tilt angle, geometric phases",
    "adiabatic": "slow-drive phase split and dephasing sweep",
    "nonadiabatic": "any-speed geometric phase and dephasing sweep",
    "density": "reduced-density time series",
    "oracle": "independent numerical cross-checks (JSON report)",
    "fig2": "slow-drive geometric phases vs theta for a cutoff set",
    "fig3": "geometric phases vs theta for a drive-speed set",
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; route those to the validation code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"gpd: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gpd", description=__doc__.split("\n\n")[1])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=_MODE_HELP[mode])
        p.add_argument("--config", type=Path, default=None, help="JSON run configuration")
        p.add_argument("--out", type=Path, default=None, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="dataset format (oracle reports are always JSON)")
        p.add_argument("--plot", action="store_true",
                       help="also render a PNG figure next to the output")
    return parser


def _merge(cfg: RunConfig, args) -> RunConfig:
    if cfg.mode is not None and cfg.mode != args.mode:
        raise ConfigError("mode", f"config says {cfg.mode!r} but the subcommand is {args.mode!r}")
    output = cfg.output
    if args.out is not None:
        output = dataclasses.replace(output, path=str(args.out))
    if args.format is not None:
        output = dataclasses.replace(output, format=args.format)
    if args.plot:
        output = dataclasses.replace(output, plot=True)
    return dataclasses.replace(cfg, mode=args.mode, output=output)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config is not None else RunConfig()
        cfg = _merge(cfg, args)
    except ConfigError as exc:
        print(f"gpd: config error: {exc}", file=sys.stderr)
        return 1

    if cfg.mode == "oracle":
        report = run_oracle_checks(cfg)
        out = Path(cfg.output.path or "oracle.json")
        out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        for check in report["checks"]:
            verdict = "pass" if check["passed"] else "FAIL"
            print(f"{verdict}  {check['name']}  ({check['elapsed_s']:.2f}s)")
        print(f"wrote {out}")
        return 0 if report["passed"] else 2

    try:
        report = BUILDERS[cfg.mode](cfg)
    except ConfigError as exc:
        print(f"gpd: config error: {exc}", file=sys.stderr)
        return 1
    except CutoffResonanceError as exc:
        print(f"gpd: numerical singularity: {exc}", file=sys.stderr)
        return 3

    fmt = cfg.output.format
    out = Path(cfg.output.path or f"{cfg.mode}.{fmt}")
    if fmt == "csv":
        write_csv(report, out)
    else:
        write_json(report, out)
    print(f"wrote {out} ({len(report.rows)} rows)")
    if cfg.output.plot:
        from . import plotting  # deferred: matplotlib is slow to import

        png = out.with_suffix(".png")
        plotting.render_report(report, png)
        print(f"wrote {png}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
