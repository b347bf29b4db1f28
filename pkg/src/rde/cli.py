"""Command line entry point: ``rde run | compare | timing | ablate``.

Exit codes: 0 success, 1 a batch failed part-way (completed rows kept),
2 bad configuration or mismatched inputs.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiment as ex
from .core import ConfigurationError
from .optimizer import RDE_SPECIFIC

log = logging.getLogger("rde")

_FLAG_OFF = {
    "enable_ord_pbest": False,
    "enable_rsp": False,
    "enable_cauchy_perturb": False,
    "enable_lpsr": False,
    "rsp_scope": "r1r2",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", nargs="?", help="INI experiment config")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config value, e.g. D=10 or rde.k_r=0 (repeatable)")
    p.add_argument("--D", type=int, help="problem dimension")
    p.add_argument("--runs", type=int, help="independent runs per problem")
    p.add_argument("--seed", type=int, help="base seed; run r uses seed + r")
    p.add_argument("--problems", help="comma-separated problem names")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--out", help=f"output directory (default ${ex.OUTPUT_ENV} or ./results)")


def _load(args) -> ex.ExperimentConfig:
    overrides = ex.parse_overrides(args.overrides)
    for key in ("D", "runs", "seed", "problems", "jobs"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = str(val)
    if getattr(args, "algorithm", None):
        overrides["algorithm"] = args.algorithm
    return ex.load_config(args.config, overrides)


def cmd_run(args) -> int:
    cfg = _load(args)
    out = ex.output_dir(args.out)
    try:
        records = ex.run_batch(cfg, out)
    except ex.BatchError as err:
        print(f"error: {err}; partial results in {out}", file=sys.stderr)
        return 1
    print(f"{len(records)} runs written to {out / 'results.csv'}")
    for prob, errs in ex.samples_by_problem(records).items():
        mean, sd = ex.summarize(errs)
        print(f"  {prob:<12} mean {mean:.2E}  sd {sd:.2E}")
    return 0


def cmd_compare(args) -> int:
    a = ex.read_results(args.results_a)
    b = ex.read_results(args.results_b)
    names = tuple(args.names) if args.names else (Path(args.results_a).stem, Path(args.results_b).stem)
    try:
        rows, wtl = ex.comparison(a, b, args.alpha)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(ex.render_comparison(rows, wtl, names))
    if args.out:
        ex.write_comparison(args.out, rows, wtl, names)
    return 0


def cmd_timing(args) -> int:
    res = ex.timing(args.D, args.evals, args.repeats, args.problem)
    print(f"D={res.D}  T0={res.T0:.3f}s  T1={res.T1:.3f}s  T2_hat={res.T2_hat:.3f}s  "
          f"(T2_hat-T1)/T0={res.complexity:.2f}")
    return 0


def cmd_ablate(args) -> int:
    cfg = _load(args)
    if cfg.algorithm != "rde":
        raise ConfigurationError("ablation starts from algorithm = rde")
    flags = args.flags.split(",") if args.flags else list(_FLAG_OFF)
    for f in flags:
        if f not in _FLAG_OFF:
            raise ConfigurationError(f"cannot ablate {f!r}; choose from {', '.join(_FLAG_OFF)}")
    out = ex.output_dir(args.out)
    variants = {"full": {}}
    variants.update({f"no_{f}" if f != "rsp_scope" else "rsp_r1r2": {f: _FLAG_OFF[f]} for f in flags})
    variants["lshade_like"] = dict(RDE_SPECIFIC, rsp_scope="r1r2")
    results = {}
    try:
        for name, over in variants.items():
            vcfg = ex.ExperimentConfig(**{**cfg.__dict__, "rde": {**cfg.rde, **over}})
            results[name] = ex.run_batch(vcfg, out / name)
    except ex.BatchError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    with open(out / "ablation.csv", "w") as fh:
        fh.write("variant,full_wins,ties,full_losses\n")
        for name, recs in results.items():
            if name == "full":
                continue
            rows, wtl = ex.comparison(results["full"], recs, args.alpha)
            ex.write_comparison(out / f"full_vs_{name}.csv", rows, wtl, ("full", name))
            fh.write(f"{name},{wtl.wins},{wtl.ties},{wtl.losses}\n")
            print(f"full vs {name:<24} W/T/L {wtl}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rde", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a batch of experiments")
    _common(p)
    p.add_argument("--algorithm", choices=ex.ALGORITHMS)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="Wilcoxon comparison of two result sets")
    p.add_argument("results_a", help="results.csv (or its directory) of the reference algorithm")
    p.add_argument("results_b")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--names", nargs=2, metavar=("A", "B"))
    p.add_argument("--out", help="write the table as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("timing", help="algorithm complexity T0/T1/T2")
    p.add_argument("--D", type=int, default=30)
    p.add_argument("--evals", type=int, default=200_000)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--problem", default="hybrid")
    p.set_defaults(func=cmd_timing)

    p = sub.add_parser("ablate", help="full RDE against variants with flags switched off")
    _common(p)
    p.add_argument("--flags", help=f"comma-separated subset of {','.join(_FLAG_OFF)}")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, FileNotFoundError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
