"""Monte-Carlo benchmark harness with CSV outputs.

A sweep is a grid of cells (algorithm, s, s_hat, gamma) run for a number
of trials each.  Every (s, trial) pair gets a fresh measurement matrix
and signal derived from the base seed by injective mixing, so the same
problem instance is fed to every algorithm, sparsity estimate, and
step-length in the sweep -- comparisons are paired -- and trials can run
in a thread pool with results identical to a serial run.

A trial is successful when the solver converged and the support of its
output (entries above 1e-9 in magnitude) equals the planted support
exactly.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from itertools import product
from typing import List, Optional, Sequence, Union

import numpy as np

from .reconstruct import ADAPTIVE, ALGORITHMS, SolverConfig, solve
from .sensing import (
    GAUSSIAN,
    EnsembleSpec,
    SignalSpec,
    generate_matrix,
    generate_sparse_signal,
    measure,
    mix_seed,
)
from .signals import SparseVector

__all__ = [
    "ExperimentSpec",
    "TrialRecord",
    "CellSummary",
    "run_experiment",
    "summarize",
    "emit_csv",
    "read_records",
    "emit_summary_csv",
    "emit_pivot_csv",
    "trial_success",
    "SUCCESS_ZERO_TOL",
    "RECORD_COLUMNS",
]

log = logging.getLogger(__name__)

# Entries at or below this magnitude do not count towards the recovered
# support; LS-refined outputs on the right support are exact to machine
# precision, so this only strips numerical dust.
SUCCESS_ZERO_TOL = 1e-9

RECORD_COLUMNS = (
    "algorithm", "n", "m", "s", "s_hat", "gamma", "trial", "seed",
    "success", "converged", "iterations", "final_residual", "wall_time_s",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """A full sweep definition for the benchmark harness."""

    n: int
    m: int
    s_values: tuple
    s_hat_values: tuple
    algorithms: tuple
    gamma_values: Union[tuple, str]
    trials: int
    base_seed: int
    tol: float = 1e-7
    max_iter: int = 1000
    noise_sigma: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "s_values", tuple(int(s) for s in self.s_values))
        object.__setattr__(self, "s_hat_values",
                           tuple(int(s) for s in self.s_hat_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.gamma_values != ADAPTIVE:
            object.__setattr__(self, "gamma_values",
                               tuple(float(g) for g in self.gamma_values))
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.s_values or not self.s_hat_values:
            raise ValueError("s_values and s_hat_values must be nonempty")
        if any(not 1 <= s <= self.n for s in self.s_values):
            raise ValueError("every s must satisfy 1 <= s <= n")
        if any(not 1 <= sh <= self.n for sh in self.s_hat_values):
            raise ValueError("every s_hat must satisfy 1 <= s_hat <= n")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}; expected {ALGORITHMS}")
        if self.gamma_values == ADAPTIVE:
            bad = [a for a in self.algorithms if a not in ("mfr_adaptive", "frame")]
            if bad:
                raise ValueError(
                    f"gamma='adaptive' only fits mfr_adaptive/frame, got {bad}"
                )
        elif any(g <= 0 or not math.isfinite(g) for g in self.gamma_values):
            raise ValueError("gamma values must be positive and finite")
        if self.noise_sigma is not None and self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one solver run on one seeded problem instance."""

    algorithm: str
    n: int
    m: int
    s: int
    s_hat: int
    gamma: Union[float, str]
    trial: int
    seed: int
    success: bool
    converged: bool
    iterations: int
    final_residual: float
    wall_time_s: float


@dataclass(frozen=True)
class CellSummary:
    algorithm: str
    n: int
    m: int
    s: int
    s_hat: int
    gamma: Union[float, str]
    trials: int
    successes: int
    success_rate: float  # percentage
    iterations_mean: float
    iterations_median: float
    iterations_q1: float
    iterations_q3: float
    wall_time_mean_s: float


def trial_success(x_hat: SparseVector, x_true: SparseVector,
                  zero_tol: float = SUCCESS_ZERO_TOL) -> bool:
    """Exact support-set equality after dropping entries below ``zero_tol``."""
    got = x_hat.support[np.abs(x_hat.values) > zero_tol]
    want = x_true.support[np.abs(x_true.values) > zero_tol]
    return got.size == want.size and bool(np.array_equal(got, want))


def _gammas_for(algo: str, spec: ExperimentSpec):
    if algo == "mfr_adaptive":
        return (ADAPTIVE,)
    if spec.gamma_values == ADAPTIVE:
        return (ADAPTIVE,)
    return spec.gamma_values


def _cells(spec: ExperimentSpec):
    for algo, s, s_hat in product(spec.algorithms, spec.s_values, spec.s_hat_values):
        for gamma in _gammas_for(algo, spec):
            yield algo, s, s_hat, gamma


def _instance(spec: ExperimentSpec, s: int, trial: int):
    """Problem instance shared by every cell touching (s, trial)."""
    inst_seed = mix_seed(spec.base_seed, spec.n, spec.m, s, trial)
    phi = generate_matrix(
        EnsembleSpec(GAUSSIAN, spec.m, spec.n, mix_seed(inst_seed, 1))
    )
    x = generate_sparse_signal(SignalSpec(spec.n, s, mix_seed(inst_seed, 2)))
    e = None
    if spec.noise_sigma:
        rng = np.random.default_rng(mix_seed(inst_seed, 3))
        e = rng.normal(0.0, spec.noise_sigma, size=spec.m)
    return inst_seed, phi, x, measure(phi, x, e)


def _run_trial(spec: ExperimentSpec, algo: str, s: int, s_hat: int,
               gamma, trial: int) -> TrialRecord:
    inst_seed, phi, x, y = _instance(spec, s, trial)
    cfg = SolverConfig(s_hat=s_hat, gamma=gamma, tol=spec.tol,
                       max_iter=spec.max_iter)
    start = time.perf_counter()
    try:
        result = solve(phi, y, cfg, algorithm=algo)
        wall = time.perf_counter() - start
        success = result.converged and trial_success(result.x_hat, x)
        return TrialRecord(
            algorithm=algo, n=spec.n, m=spec.m, s=s, s_hat=s_hat, gamma=gamma,
            trial=trial, seed=inst_seed, success=success,
            converged=result.converged, iterations=result.iterations,
            final_residual=result.residual_l2, wall_time_s=wall,
        )
    except (ValueError, np.linalg.LinAlgError) as exc:
        # A trial that cannot run is a failed trial, never a dead sweep.
        wall = time.perf_counter() - start
        log.debug("trial failed (%s s=%d s_hat=%d trial=%d): %s",
                  algo, s, s_hat, trial, exc)
        return TrialRecord(
            algorithm=algo, n=spec.n, m=spec.m, s=s, s_hat=s_hat, gamma=gamma,
            trial=trial, seed=inst_seed, success=False, converged=False,
            iterations=0, final_residual=float(np.linalg.norm(y.values)),
            wall_time_s=wall,
        )


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> List[TrialRecord]:
    """Run every cell of the sweep for every trial.

    ``workers > 1`` runs trials in a thread pool; records come back in
    the same deterministic (cell, trial) order either way.
    """
    jobs = [(algo, s, s_hat, gamma, trial)
            for (algo, s, s_hat, gamma) in _cells(spec)
            for trial in range(spec.trials)]
    if workers <= 1:
        return [_run_trial(spec, *job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: _run_trial(spec, *job), jobs))


def summarize(records: Sequence[TrialRecord]) -> List[CellSummary]:
    """Per-cell success percentage and iteration statistics."""
    if not records:
        raise ValueError("no records to summarize")
    groups = {}
    for rec in records:
        key = (rec.algorithm, rec.n, rec.m, rec.s, rec.s_hat, rec.gamma)
        groups.setdefault(key, []).append(rec)
    out = []
    for key, recs in groups.items():
        iters = np.asarray([r.iterations for r in recs], dtype=float)
        q1, med, q3 = np.percentile(iters, [25.0, 50.0, 75.0])
        successes = sum(r.success for r in recs)
        out.append(CellSummary(
            algorithm=key[0], n=key[1], m=key[2], s=key[3], s_hat=key[4],
            gamma=key[5], trials=len(recs), successes=successes,
            success_rate=100.0 * successes / len(recs),
            iterations_mean=float(iters.mean()),
            iterations_median=float(med),
            iterations_q1=float(q1),
            iterations_q3=float(q3),
            wall_time_mean_s=float(np.mean([r.wall_time_s for r in recs])),
        ))
    return out


# ---------------------------------------------------------------------------
# CSV

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_csv(records: Sequence[TrialRecord], path) -> None:
    """One row per record, fixed column order, 17-significant-digit floats."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(RECORD_COLUMNS) + "\n")
            for rec in records:
                fh.write(",".join(_fmt(getattr(rec, col))
                                  for col in RECORD_COLUMNS) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write records to {path}: {exc}") from exc


def read_records(path) -> List[TrialRecord]:
    """Inverse of :func:`emit_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != ",".join(RECORD_COLUMNS):
        raise ValueError(f"{path} does not look like a records CSV")
    out = []
    for ln in lines[1:]:
        tok = ln.split(",")
        row = dict(zip(RECORD_COLUMNS, tok))
        out.append(TrialRecord(
            algorithm=row["algorithm"],
            n=int(row["n"]), m=int(row["m"]), s=int(row["s"]),
            s_hat=int(row["s_hat"]),
            gamma=row["gamma"] if row["gamma"] == ADAPTIVE else float(row["gamma"]),
            trial=int(row["trial"]), seed=int(row["seed"]),
            success=row["success"] == "true",
            converged=row["converged"] == "true",
            iterations=int(row["iterations"]),
            final_residual=float(row["final_residual"]),
            wall_time_s=float(row["wall_time_s"]),
        ))
    return out


_SUMMARY_COLUMNS = tuple(f.name for f in fields(CellSummary))


def emit_summary_csv(summaries: Sequence[CellSummary], path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(_SUMMARY_COLUMNS) + "\n")
            for cell in summaries:
                fh.write(",".join(_fmt(getattr(cell, col))
                                  for col in _SUMMARY_COLUMNS) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc}") from exc


def emit_pivot_csv(summaries: Sequence[CellSummary], path) -> None:
    """Success-rate table with one row per s_hat and one column per s."""
    s_values = sorted({c.s for c in summaries})
    rows = {}
    for c in summaries:
        rows.setdefault((c.algorithm, c.gamma, c.s_hat), {})[c.s] = c.success_rate
    header = ["algorithm", "gamma", "s_hat"] + [f"s={s}" for s in s_values]
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for (algo, gamma, s_hat) in sorted(
                    rows, key=lambda k: (k[0], str(k[1]), k[2])):
                cells = rows[(algo, gamma, s_hat)]
                line = [algo, _fmt(gamma), str(s_hat)]
                line += [_fmt(cells[s]) if s in cells else "" for s in s_values]
                fh.write(",".join(line) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write pivot summary to {path}: {exc}") from exc
