"""Batch experiments: config files, seeded runs, CSV results, comparisons, timing.

A config is an INI file::

    [experiment]
    problems = rastrigin, ackley
    D = 10
    runs = 25
    seed = 1
    algorithm = rde          ; rde | lshade_like | de_rand1
    ; max_nfes defaults to 10000 * D

    [rde]                    ; RunConfig fields
    k_r = 3
    enable_cauchy_perturb = true

    [de_rand1]
    F = 0.5
    Cr = 0.9
    pop_factor = 5

Run ``r`` of every problem uses seed ``seed + r``.
"""
from __future__ import annotations

import configparser
import csv
import dataclasses
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baseline import baseline_de_rand1
from .benchmarks import PROBLEM_NAMES, make_problem
from .core import ConfigurationError
from .optimizer import RunConfig, RunResult, ablate, lshade_like, run
from .stats import ProblemComparison, WTL, compare_samples, summarize, wtl_table

log = logging.getLogger(__name__)

OUTPUT_ENV = "RDE_OUTPUT_DIR"
ALGORITHMS = ("rde", "lshade_like", "de_rand1")
RESULT_FIELDS = ("problem", "run", "seed", "final_error", "nfes", "wall_time")
SUMMARY_FIELDS = ("problem", "runs", "mean", "sd", "best", "median", "worst")
DEFAULT_RUNS = 25

_RUNCONFIG_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
_BASELINE_KEYS = {"F": float, "Cr": float, "pop_factor": int}


@dataclass
class ExperimentConfig:
    problems: list[str]
    D: int
    runs: int = DEFAULT_RUNS
    seed: int = 1
    algorithm: str = "rde"
    max_nfes: int | None = None
    jobs: int = 1
    rde: dict = field(default_factory=dict)
    de_rand1: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.problems:
            raise ConfigurationError("no problems listed")
        for p in self.problems:
            if p not in PROBLEM_NAMES:
                raise ConfigurationError(f"unknown problem {p!r}")
        if len(set(self.problems)) != len(self.problems):
            raise ConfigurationError("problem list has duplicates")
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"algorithm must be one of {ALGORITHMS}")
        if self.D < 1 or self.runs < 1 or self.jobs < 1:
            raise ConfigurationError("D, runs and jobs must be positive")

    @property
    def budget(self) -> int:
        return self.max_nfes if self.max_nfes is not None else 10000 * self.D

    def run_config(self, seed: int) -> RunConfig:
        cfg = RunConfig(D=self.D, max_nfes=self.budget, seed=seed)
        cfg = ablate(cfg, self.rde)
        return lshade_like(cfg) if self.algorithm == "lshade_like" else cfg


def _parse_value(raw: str, kind):
    raw = raw.strip()
    kind = kind if isinstance(kind, str) else getattr(kind, "__name__", str(kind))
    if "bool" in kind:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if "int" in kind and "float" not in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


def parse_overrides(pairs) -> dict[str, str]:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigurationError(f"override must look like key=value: {pair!r}")
        k, v = pair.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_config(path=None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Read an INI config; overrides are ``key`` or ``section.key`` to raw strings.

    Unqualified keys go to ``[experiment]`` when they name an experiment
    setting, otherwise to ``[rde]``.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            cp.read(path)
        except configparser.Error as exc:
            raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
    for sec in ("experiment", "rde", "de_rand1"):
        if not cp.has_section(sec):
            cp.add_section(sec)
    exp_keys = {f.name for f in dataclasses.fields(ExperimentConfig)} - {"rde", "de_rand1"}
    for key, val in (overrides or {}).items():
        if "." in key:
            sec, key = key.split(".", 1)
        else:
            sec = "experiment" if key in exp_keys else "rde"
        if not cp.has_section(sec):
            raise ConfigurationError(f"unknown section {sec!r}")
        cp.set(sec, key, val)

    unknown = set(cp.sections()) - {"experiment", "rde", "de_rand1"}
    if unknown:
        raise ConfigurationError(f"unknown section(s): {', '.join(sorted(unknown))}")
    e = cp["experiment"]
    try:
        if "problems" not in e or "D" not in e:
            raise ConfigurationError("[experiment] needs 'problems' and 'D'")
        bad = set(e) - exp_keys
        if bad:
            raise ConfigurationError(f"unknown experiment key(s): {', '.join(sorted(bad))}")
        rde = {}
        for k, v in cp["rde"].items():
            if k not in _RUNCONFIG_TYPES or k in ("D", "seed", "max_nfes"):
                raise ConfigurationError(f"unknown or reserved [rde] key {k!r}")
            rde[k] = _parse_value(v, _RUNCONFIG_TYPES[k])
        base = {}
        for k, v in cp["de_rand1"].items():
            if k not in _BASELINE_KEYS:
                raise ConfigurationError(f"unknown [de_rand1] key {k!r}")
            base[k] = _BASELINE_KEYS[k](v)
        max_nfes = e.get("max_nfes", "").strip()
        cfg = ExperimentConfig(
            problems=[p.strip() for p in e["problems"].split(",") if p.strip()],
            D=int(e["D"]),
            runs=int(e.get("runs", DEFAULT_RUNS)),
            seed=int(e.get("seed", 1)),
            algorithm=e.get("algorithm", "rde").strip(),
            max_nfes=int(max_nfes) if max_nfes else None,
            jobs=int(e.get("jobs", 1)),
            rde=rde,
            de_rand1=base,
        )
        cfg.run_config(cfg.seed)  # validates the [rde] section early
        return cfg
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from exc


@dataclass(frozen=True)
class RunRecord:
    problem: str
    run: int
    seed: int
    final_error: float
    nfes: int
    wall_time: float


def run_cell(cfg: ExperimentConfig, problem_name: str, run_index: int) -> tuple[RunRecord, RunResult]:
    seed = cfg.seed + run_index
    problem = make_problem(problem_name, cfg.D)
    t0 = time.perf_counter()
    if cfg.algorithm == "de_rand1":
        res = baseline_de_rand1(problem, cfg.D, cfg.budget, seed, **cfg.de_rand1)
    else:
        res = run(problem, cfg.run_config(seed))
    wall = time.perf_counter() - t0
    return RunRecord(problem_name, run_index, seed, res.error, res.nfes_used, wall), res


def _cell_record(args) -> RunRecord:
    cfg, prob, r = args
    return run_cell(cfg, prob, r)[0]


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_results(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        for rec in records:
            w.writerow([_fmt(getattr(rec, k)) for k in RESULT_FIELDS])


def read_results(path) -> list[RunRecord]:
    path = Path(path)
    if path.is_dir():
        path = path / "results.csv"
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append(RunRecord(r["problem"], int(r["run"]), int(r["seed"]), float(r["final_error"]),
                             int(r["nfes"]), float(r["wall_time"])))
    return out


def samples_by_problem(records) -> dict[str, list[float]]:
    out: dict[str, list[float]] = {}
    for rec in records:
        out.setdefault(rec.problem, []).append(rec.final_error)
    return out


def write_summary(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for prob, errs in samples_by_problem(records).items():
            mean, sd = summarize(errs)
            e = np.asarray(errs)
            w.writerow([prob, len(errs), _fmt(mean), _fmt(sd), _fmt(float(e.min())),
                        _fmt(float(np.median(e))), _fmt(float(e.max()))])


def output_dir(out=None) -> Path:
    d = Path(out) if out else Path(os.environ.get(OUTPUT_ENV, "results"))
    d.mkdir(parents=True, exist_ok=True)
    return d


class BatchError(RuntimeError):
    def __init__(self, msg, records):
        super().__init__(msg)
        self.records = records


def run_batch(cfg: ExperimentConfig, out_dir) -> list[RunRecord]:
    """Run every (problem, run) cell, writing results.csv and summary.csv.

    Rows are appended as cells finish (in batch order), so a failure leaves
    the completed rows on disk; :class:`BatchError` is raised in that case.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = [(cfg, p, r) for p in cfg.problems for r in range(cfg.runs)]
    records: list[RunRecord] = []
    results_path = out_dir / "results.csv"
    error = None
    with open(results_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        fh.flush()
        try:
            if cfg.jobs > 1:
                with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
                    stream = ex.map(_cell_record, cells)
                    for rec in stream:
                        records.append(rec)
                        w.writerow([_fmt(getattr(rec, k)) for k in RESULT_FIELDS])
                        fh.flush()
            else:
                for cell in cells:
                    rec = _cell_record(cell)
                    records.append(rec)
                    w.writerow([_fmt(getattr(rec, k)) for k in RESULT_FIELDS])
                    fh.flush()
                    log.info("%s run %d: error %.3e", rec.problem, rec.run, rec.final_error)
        except Exception as exc:  # noqa: BLE001 - keep partial results
            error = exc
    if records:
        write_summary(out_dir / "summary.csv", records)
    if error is not None:
        raise BatchError(f"batch stopped after {len(records)} cells: {error}", records) from error
    return records


def comparison(records_a, records_b, alpha: float = 0.05) -> tuple[list[ProblemComparison], WTL]:
    rows = compare_samples(samples_by_problem(records_a), samples_by_problem(records_b), alpha)
    return rows, wtl_table(r.verdict for r in rows)


def write_comparison(path, rows, wtl: WTL, names=("A", "B")) -> None:
    a, b = names
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["problem", f"{a}_mean", f"{a}_sd", f"{b}_mean", f"{b}_sd", "verdict"])
        for r in rows:
            w.writerow([r.problem, _fmt(r.mean_a), _fmt(r.sd_a), _fmt(r.mean_b), _fmt(r.sd_b), r.verdict])
        w.writerow(["W/T/L", "", "", "", "", str(wtl)])


def render_comparison(rows, wtl: WTL, names=("A", "B")) -> str:
    a, b = names
    head = f"{'problem':<12} {a + ' mean':>12} {a + ' sd':>10} {b + ' mean':>12} {b + ' sd':>10}  W"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.problem:<12} {r.mean_a:>12.2E} {r.sd_a:>10.2E} "
                     f"{r.mean_b:>12.2E} {r.sd_b:>10.2E}  {r.verdict}")
    lines.append("-" * len(head))
    lines.append(f"{'W/T/L':<12} {str(wtl):>48}")
    return "\n".join(lines)


# --- algorithm complexity ---------------------------------------------------

def reference_loop(iterations: int = 1_000_000) -> float:
    """The standard T0 reference program; returns seconds."""
    t0 = time.perf_counter()
    for _ in range(iterations):
        x = 0.55
        x = x + x
        x = x / 2
        x = x * x
        x = math.sqrt(x)
        x = math.log(x)
        x = math.exp(x)
        x = x / (x + 2)
    return time.perf_counter() - t0


@dataclass
class TimingResult:
    D: int
    T0: float
    T1: float
    T2: list[float]

    @property
    def T2_hat(self) -> float:
        return float(np.mean(self.T2))

    @property
    def complexity(self) -> float:
        return (self.T2_hat - self.T1) / self.T0


def timing(D: int = 30, evals: int = 200_000, repeats: int = 5, problem: str = "hybrid",
           t0_iterations: int = 1_000_000, seed: int = 0) -> TimingResult:
    """T0 reference loop, T1 bare evaluations, T2 full runs, all at ``evals`` evaluations.

    T1 evaluates in population-sized batches, matching how the optimizer
    calls the objective.
    """
    prob = make_problem(problem, D)
    T0 = reference_loop(t0_iterations)
    rng = np.random.default_rng(seed)
    batch = 18 * D
    t = time.perf_counter()
    done = 0
    while done < evals:
        m = min(batch, evals - done)
        prob.evaluate_batch(rng.uniform(prob.lower, prob.upper, size=(m, D)))
        done += m
    T1 = time.perf_counter() - t
    T2 = []
    for r in range(repeats):
        t = time.perf_counter()
        run(prob, RunConfig(D=D, max_nfes=evals, seed=seed + r))
        T2.append(time.perf_counter() - t)
    return TimingResult(D, T0, T1, T2)
