"""The sequential model-based optimization loop and its per-evaluation log.

A run spends its first evaluations on a Latin hypercube design, then repeats
fit / propose / evaluate until the total budget is exhausted, fitting a fresh
surrogate on all data at every iteration. Random-search runs share the same
design phase but never fit a model.

Seed scheme
-----------
Every random decision inside a run draws from its own stream derived as
``SeedSequence((run_seed, stream, iteration))`` with stream 0 for the initial
design, 1 for each model fit, and 2 for each proposal. Re-running a config
therefore reproduces the exact evaluation sequence, and streams stay
independent across purposes and iterations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .design import latin_hypercube
from .infill import InfillCriterion, propose
from .kriging import LIKELIHOOD_EVALS_PER_PARAM, Dataset, fit
from .testbed import evaluate, make_instance

_STREAM_DESIGN = 0
_STREAM_FIT = 1
_STREAM_PROPOSE = 2

# Proposals this close (max-norm) to an evaluated point are duplicates in the
# log's eyes; they are still evaluated and recorded, never silently replaced.
DUPLICATE_PROPOSAL_TOL = 1.0e-8


class EmptyArchive(Exception):
    """Nearest-neighbor distance is undefined without evaluated points."""


def substream_seed(run_seed: int, stream: int, iteration: int = 0) -> int:
    """Derived integer seed for one (purpose, iteration) stream of a run."""
    seq = np.random.SeedSequence((run_seed, stream, iteration))
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one optimization run."""

    function_id: int
    dimension: int
    instance_id: int
    infill: InfillCriterion
    total_budget: int = 300
    initial_design_size: int = 10
    seed: int = 0
    # Likelihood evaluations per model parameter in each fit; 500 is the
    # standard setting, smaller values give a cheaper desk-scale variant.
    mle_evals_per_param: int = LIKELIHOOD_EVALS_PER_PARAM

    def __post_init__(self):
        if not 1 <= self.initial_design_size < self.total_budget:
            raise ValueError("initial design must be smaller than the total budget")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.mle_evals_per_param < 1:
            raise ValueError("mle_evals_per_param must be positive")
        if not isinstance(self.infill, InfillCriterion):
            object.__setattr__(self, "infill", InfillCriterion(self.infill))


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """One objective evaluation: the decision, its outcome, and bookkeeping."""

    iteration: int  # 1-based evaluation index
    x: np.ndarray
    y: float
    gap: float  # y - f_opt
    best_gap: float  # smallest gap seen so far, non-increasing
    nn_distance: Optional[float]  # to the nearest earlier point; None for the first
    model_nll: Optional[float]  # fitted likelihood value; None when no model was fit
    wall_time_ms: float

    @property
    def best_so_far(self) -> float:
        return self.best_gap + (self.y - self.gap)


@dataclass(frozen=True, eq=False)
class RunLog:
    config: RunConfig
    f_opt: float
    records: tuple[IterationRecord, ...]
    degenerate_fallback: bool = False

    @property
    def best_gap_curve(self) -> np.ndarray:
        return np.array([r.best_gap for r in self.records])


def nearest_neighbor_distance(known: np.ndarray, x: np.ndarray) -> float:
    """Euclidean distance from x to its closest point in the archive."""
    known = np.atleast_2d(np.asarray(known, dtype=float))
    if known.size == 0:
        raise EmptyArchive("no evaluated points to measure against")
    deltas = known - np.asarray(x, dtype=float)
    return float(np.sqrt((deltas * deltas).sum(axis=1).min()))


def run(config: RunConfig) -> RunLog:
    """Execute one complete run; the log has exactly total_budget records."""
    func = make_instance(config.function_id, config.dimension, config.instance_id)
    bounds = func.bounds
    budget = config.total_budget
    n_init = config.initial_design_size

    points = np.empty((budget, config.dimension))
    values = np.empty(budget)
    records: list[IterationRecord] = []
    best_gap = np.inf

    def record_evaluation(k: int, x: np.ndarray, started: float, nll: Optional[float]):
        nonlocal best_gap
        nn = nearest_neighbor_distance(points[: k - 1], x) if k > 1 else None
        y = evaluate(func, x)
        points[k - 1] = x
        values[k - 1] = y
        gap = y - func.f_opt
        best_gap = min(best_gap, gap)
        records.append(
            IterationRecord(
                iteration=k,
                x=x.copy(),
                y=y,
                gap=gap,
                best_gap=best_gap,
                nn_distance=nn,
                model_nll=nll,
                wall_time_ms=(time.perf_counter() - started) * 1e3,
            )
        )

    design = latin_hypercube(n_init, bounds, substream_seed(config.seed, _STREAM_DESIGN))
    for k in range(1, n_init + 1):
        started = time.perf_counter()
        record_evaluation(k, design[k - 1], started, None)

    # A constant-valued design cannot identify a surrogate; such a run keeps
    # going on random proposals and says so in its log.
    degenerate = config.infill.model_based and float(np.ptp(values[:n_init])) == 0.0

    for k in range(n_init + 1, budget + 1):
        started = time.perf_counter()
        nll: Optional[float] = None
        if config.infill.model_based and not degenerate:
            model = fit(
                Dataset(points[: k - 1], values[: k - 1]),
                substream_seed(config.seed, _STREAM_FIT, k),
                evals_per_param=config.mle_evals_per_param,
            )
            y_best = float(values[: k - 1].min())
            x_next = propose(
                model, config.infill, bounds, y_best,
                substream_seed(config.seed, _STREAM_PROPOSE, k),
            )
            nll = model.neg_log_likelihood
        else:
            x_next = propose(
                None, InfillCriterion.RANDOM_SEARCH, bounds, np.nan,
                substream_seed(config.seed, _STREAM_PROPOSE, k),
            )
        record_evaluation(k, x_next, started, nll)

    return RunLog(
        config=config,
        f_opt=func.f_opt,
        records=tuple(records),
        degenerate_fallback=degenerate,
    )


# ---------------------------------------------------------------------------
# Run log serialization: one CSV per run, floats at 17 significant digits so
# values round-trip exactly. Missing nn_distance / model_nll become empty
# fields. The file name encodes the run coordinates.
# ---------------------------------------------------------------------------


def run_log_filename(config: RunConfig) -> str:
    return (
        f"f{config.function_id}_d{config.dimension}_i{config.instance_id}"
        f"_{config.infill.value}_s{config.seed}.csv"
    )


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else format(value, ".17g")


def write_run_log(log: RunLog, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / run_log_filename(log.config)
    d = log.config.dimension
    header = (
        ["iteration"]
        + [f"x_{i}" for i in range(1, d + 1)]
        + ["y", "gap", "best_gap", "nn_distance", "model_nll", "wall_time_ms"]
    )
    lines = [",".join(header)]
    for r in log.records:
        fields = (
            [str(r.iteration)]
            + [_fmt(v) for v in r.x]
            + [_fmt(r.y), _fmt(r.gap), _fmt(r.best_gap), _fmt(r.nn_distance),
               _fmt(r.model_nll), _fmt(r.wall_time_ms)]
        )
        lines.append(",".join(fields))
    path.write_text("\n".join(lines) + "\n")
    return path


def parse_run_log_filename(name: str) -> dict:
    stem = name[:-4] if name.endswith(".csv") else name
    parts = stem.split("_")
    if len(parts) != 5 or not all(p[0] in "fdis" or p in {"ei", "pm", "random"} for p in parts):
        raise ValueError(f"not a run log file name: {name!r}")
    return {
        "function_id": int(parts[0][1:]),
        "dimension": int(parts[1][1:]),
        "instance_id": int(parts[2][1:]),
        "infill": InfillCriterion(parts[3]),
        "seed": int(parts[4][1:]),
    }


def read_run_log(path) -> RunLog:
    """Parse a run CSV back into a RunLog.

    The run coordinates come from the file name; loop settings that the CSV
    does not carry (initial design size, fit budget) keep their defaults.
    """
    path = Path(path)
    meta = parse_run_log_filename(path.name)
    lines = path.read_text().strip().splitlines()
    records: list[IterationRecord] = []
    d = meta["dimension"]
    for line in lines[1:]:
        parts = line.split(",")
        records.append(
            IterationRecord(
                iteration=int(parts[0]),
                x=np.array([float(v) for v in parts[1 : 1 + d]]),
                y=float(parts[1 + d]),
                gap=float(parts[2 + d]),
                best_gap=float(parts[3 + d]),
                nn_distance=float(parts[4 + d]) if parts[4 + d] else None,
                model_nll=float(parts[5 + d]) if parts[5 + d] else None,
                wall_time_ms=float(parts[6 + d]),
            )
        )
    if not records:
        raise ValueError(f"run log {path} has no records")
    config = RunConfig(
        function_id=meta["function_id"],
        dimension=d,
        instance_id=meta["instance_id"],
        infill=meta["infill"],
        total_budget=len(records),
        initial_design_size=min(10, len(records) - 1),
        seed=meta["seed"],
    )
    f_opt = records[0].y - records[0].gap
    return RunLog(config=config, f_opt=f_opt, records=tuple(records))


def read_run_logs(directory) -> list[RunLog]:
    """All run logs in a directory, sorted by file name."""
    directory = Path(directory)
    logs = []
    for path in sorted(directory.glob("*.csv")):
        try:
            parse_run_log_filename(path.name)
        except ValueError:
            continue
        logs.append(read_run_log(path))
    return logs
