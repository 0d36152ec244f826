"""Campaign execution: expand a config grid into runs and execute them.

A campaign is the cross product (functions x dimensions x instances x
criteria x repeats); each cell becomes one run with a seed derived from the
campaign's base seed, one CSV log, and one manifest entry. Re-running skips
logs that already exist unless forced. Runs execute on a process pool; the
parent alone writes the manifest.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .infill import InfillCriterion
from .kriging import LIKELIHOOD_EVALS_PER_PARAM
from .smbo import RunConfig, run, run_log_filename, write_run_log
from .testbed import UnknownFunction, list_suite

WORKER_ENV_VAR = "INFILLBENCH_MAX_WORKERS"
MANIFEST_NAME = "manifest.json"

# Stable per-criterion codes for seed derivation; never reorder.
_CRITERION_CODES = {
    InfillCriterion.EXPECTED_IMPROVEMENT: 1,
    InfillCriterion.PREDICTED_VALUE: 2,
    InfillCriterion.RANDOM_SEARCH: 3,
}


class ConfigParseError(Exception):
    """Campaign configuration file is unreadable or invalid."""


@dataclass(frozen=True)
class CampaignConfig:
    functions: tuple[int, ...]
    dimensions: tuple[int, ...]
    criteria: tuple[InfillCriterion, ...]
    instances: tuple[int, ...] = tuple(range(1, 16))
    repeats: int = 1
    total_budget: int = 300
    initial_design_size: int = 10
    base_seed: int = 0
    workers: int = 1
    output_dir: str = "runs"
    mle_evals_per_param: int = LIKELIHOOD_EVALS_PER_PARAM

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(int(f) for f in self.functions))
        object.__setattr__(self, "dimensions", tuple(int(d) for d in self.dimensions))
        object.__setattr__(self, "instances", tuple(int(i) for i in self.instances))
        object.__setattr__(
            self, "criteria", tuple(InfillCriterion(c) for c in self.criteria)
        )
        if not self.functions or not self.dimensions or not self.criteria:
            raise ConfigParseError("functions, dimensions, and criteria must be non-empty")
        if self.repeats < 1 or self.workers < 1:
            raise ConfigParseError("repeats and workers must be positive")
        known = {entry.function_id for entry in list_suite()}
        unknown = sorted(set(self.functions) - known)
        if unknown:
            raise UnknownFunction(f"function ids {unknown} not in suite {sorted(known)}")

    def run_configs(self) -> list[RunConfig]:
        configs = []
        for function_id in self.functions:
            for dimension in self.dimensions:
                for instance_id in self.instances:
                    for criterion in self.criteria:
                        for repeat in range(self.repeats):
                            configs.append(
                                RunConfig(
                                    function_id=function_id,
                                    dimension=dimension,
                                    instance_id=instance_id,
                                    infill=criterion,
                                    total_budget=self.total_budget,
                                    initial_design_size=self.initial_design_size,
                                    seed=derive_run_seed(
                                        self.base_seed, function_id, dimension,
                                        instance_id, criterion, repeat,
                                    ),
                                    mle_evals_per_param=self.mle_evals_per_param,
                                )
                            )
        return configs


_CONFIG_KEYS = {
    "functions", "dimensions", "criteria", "instances", "repeats", "total_budget",
    "initial_design_size", "base_seed", "workers", "output_dir", "mle_evals_per_param",
}


def campaign_config_from_mapping(mapping: dict) -> CampaignConfig:
    unknown = sorted(set(mapping) - _CONFIG_KEYS)
    if unknown:
        raise ConfigParseError(f"unknown campaign keys {unknown}")
    try:
        return CampaignConfig(**mapping)
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(str(exc)) from None


def load_campaign_config(path) -> CampaignConfig:
    """Read a JSON campaign file; see README for the schema."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config file: {exc}") from None
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"config is not valid JSON: {exc}") from None
    if not isinstance(mapping, dict):
        raise ConfigParseError("config must be a JSON object")
    return campaign_config_from_mapping(mapping)


def derive_run_seed(
    base_seed: int,
    function_id: int,
    dimension: int,
    instance_id: int,
    criterion: InfillCriterion,
    repeat: int,
) -> int:
    """Deterministic 64-bit run seed from the campaign coordinates."""
    seq = np.random.SeedSequence(
        (base_seed, function_id, dimension, instance_id,
         _CRITERION_CODES[InfillCriterion(criterion)], repeat)
    )
    return int(seq.generate_state(1, np.uint64)[0])


def resolve_workers(requested: int) -> int:
    """Requested worker count capped by the INFILLBENCH_MAX_WORKERS variable."""
    cap = os.environ.get(WORKER_ENV_VAR)
    if cap is None:
        return max(1, requested)
    try:
        cap_value = int(cap)
    except ValueError:
        raise ConfigParseError(f"{WORKER_ENV_VAR} must be an integer, got {cap!r}") from None
    return max(1, min(requested, cap_value))


@dataclass
class CampaignResult:
    manifest_path: Path
    executed: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


def _log_is_complete(path: Path, total_budget: int) -> bool:
    if not path.is_file():
        return False
    with path.open() as handle:
        rows = sum(1 for line in handle if line.strip())
    return rows == total_budget + 1  # header plus one row per evaluation


def _execute_run(payload: tuple[RunConfig, str]) -> tuple[str, bool]:
    config, out_dir = payload
    log = run(config)
    write_run_log(log, out_dir)
    return run_log_filename(config), log.degenerate_fallback


def run_campaign(config: CampaignConfig, force: bool = False) -> CampaignResult:
    """Execute a campaign, writing one CSV per run plus ``manifest.json``.

    Existing complete logs are skipped unless ``force``; their manifest
    entries are carried over from the previous manifest when available.
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / MANIFEST_NAME

    previous_entries: dict[str, dict] = {}
    if manifest_path.is_file():
        try:
            previous = json.loads(manifest_path.read_text())
            previous_entries = {entry["file"]: entry for entry in previous.get("runs", [])}
        except (json.JSONDecodeError, KeyError, TypeError):
            previous_entries = {}

    plan = config.run_configs()
    pending: list[RunConfig] = []
    result = CampaignResult(manifest_path=manifest_path)
    for run_config in plan:
        filename = run_log_filename(run_config)
        if not force and _log_is_complete(out_dir / filename, config.total_budget):
            result.skipped.append(filename)
        else:
            pending.append(run_config)

    degenerate_flags: dict[str, bool] = {}
    workers = resolve_workers(config.workers)
    payloads = [(run_config, str(out_dir)) for run_config in pending]
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for filename, degenerate in pool.map(_execute_run, payloads):
                degenerate_flags[filename] = degenerate
                result.executed.append(filename)
    else:
        for payload in payloads:
            filename, degenerate = _execute_run(payload)
            degenerate_flags[filename] = degenerate
            result.executed.append(filename)

    entries = []
    for run_config in plan:
        filename = run_log_filename(run_config)
        if filename in degenerate_flags:
            degenerate = degenerate_flags[filename]
        else:
            degenerate = previous_entries.get(filename, {}).get("degenerate_fallback")
        entries.append(
            {
                "file": filename,
                "function_id": run_config.function_id,
                "dimension": run_config.dimension,
                "instance_id": run_config.instance_id,
                "criterion": run_config.infill.value,
                "seed": run_config.seed,
                "total_budget": run_config.total_budget,
                "degenerate_fallback": degenerate,
            }
        )

    manifest = {
        "campaign": {
            "functions": list(config.functions),
            "dimensions": list(config.dimensions),
            "criteria": [c.value for c in config.criteria],
            "instances": list(config.instances),
            "repeats": config.repeats,
            "total_budget": config.total_budget,
            "initial_design_size": config.initial_design_size,
            "base_seed": config.base_seed,
            "mle_evals_per_param": config.mle_evals_per_param,
        },
        "runs": entries,
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return result
