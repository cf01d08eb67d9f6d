"""Command-line front end.

Subcommands:
  run <config>       execute an experiment; write report + eigenvalue CSVs
  figure <spec>      render an eigenvalue CSV as an SVG scatter plot
  verify [--full]    run the acceptance checks (one pass/fail line each)
  list               enumerate experiments with what each one checks

Exit codes: 0 success, 1 assertion/convergence failure, 2 usage or
config error.  The SPARSESPECTRA_WORKERS environment variable sets the
trial worker count.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__, acceptance, config, reports, svgplot
from .errors import ConfigError, ContractError, ConvergenceError, SparseSpectraError
from .experiments import EXPERIMENTS, run_experiment

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsespectra",
        description="Monte-Carlo lab for spectra of sparse random matrices",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment from a config file")
    p_run.add_argument("config", help="path to a run-config file")
    p_run.add_argument("-o", "--out-dir", default=None, help="output directory")
    p_run.add_argument(
        "--seed", type=int, default=None, help="override the master seed"
    )

    p_fig = sub.add_parser("figure", help="render an eigenvalue CSV as SVG")
    p_fig.add_argument("spec", help="path to a figure-spec file")
    p_fig.add_argument("-o", "--output", default=None, help="override the SVG path")

    p_verify = sub.add_parser("verify", help="run the acceptance checks")
    p_verify.add_argument(
        "--full",
        action="store_true",
        help="include the full-scale trend criteria (4-6; tens of minutes)",
    )
    p_verify.add_argument(
        "--only",
        default=None,
        help="comma-separated criterion numbers to run (e.g. 1,2,3)",
    )

    sub.add_parser("list", help="enumerate experiments")
    return parser


def _cmd_run(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = config.parse_config(text)
    opts = config.parse_output_options(text)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            print("error: --seed must fit in 64 bits", file=sys.stderr)
            return EXIT_USAGE
        cfg = replace(cfg, master_seed=args.seed)
    report = run_experiment(cfg)
    out_dir = args.out_dir or opts.out_dir or os.path.join("runs", cfg.experiment)
    paths = reports.write_report_files(report, out_dir, opts.write_esd_csv)
    for row in report.summary:
        print("summary " + " ".join(f"{k}={v}" for k, v in row.items()))
    for flag in report.flags:
        status = "pass" if flag.passed else "FAIL"
        print(f"flag {flag.criterion}: {status} ({flag.detail})")
    print(f"wrote {len(paths)} files under {out_dir}")
    if report.failed:
        print("error: exceptional-trial rate exceeded the limit", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def _cmd_figure(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read figure spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    spec = svgplot.parse_figure_spec(text)
    if args.output is not None:
        spec.output = args.output
    svg = svgplot.render_scatter_svg(spec)
    if spec.output is None:
        sys.stdout.write(svg)
    else:
        with open(spec.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"wrote {spec.output}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    # Runtime budgets assume a small multicore desktop; use the available
    # cores unless the caller pinned a worker count.
    os.environ.setdefault(
        "SPARSESPECTRA_WORKERS", str(min(4, os.cpu_count() or 1))
    )
    if args.only is not None:
        try:
            ids = tuple(int(tok) for tok in args.only.split(","))
        except ValueError:
            print("error: --only expects comma-separated integers", file=sys.stderr)
            return EXIT_USAGE
        unknown = [i for i in ids if i not in acceptance.criterion_ids()]
        if unknown:
            print(f"error: unknown criteria {unknown}", file=sys.stderr)
            return EXIT_USAGE
    elif args.full:
        ids = acceptance.criterion_ids()
    else:
        ids = acceptance.FAST_CRITERIA
    results = acceptance.run_criteria(ids)
    failed = [r for r in results if not r.passed]
    print(
        f"{len(results) - len(failed)}/{len(results)} criteria passed"
        + ("" if not failed else f"; FAILED: {[r.criterion for r in failed]}")
    )
    return EXIT_OK if not failed else EXIT_ASSERTION


def _cmd_list() -> int:
    width = max(len(name) for name in EXPERIMENTS)
    for name, exp in EXPERIMENTS.items():
        print(f"{name:<{width}}  {exp.description}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_list()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except SparseSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
