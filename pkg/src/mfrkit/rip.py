"""Restricted-isometry constants, convergence-regime checks, and an l0 oracle.

The exact constant of order s is the max over all column subsets of size s
of how far the squared singular values of the submatrix stray from 1:

    delta_s = max_{|G|=s} max(1 - lmin(Phi_G^T Phi_G), lmax(Phi_G^T Phi_G) - 1)

Exact computation enumerates C(n, s) subsets, so it is only honest at toy
scale; the sampled variant gives a lower bound when enumeration is
infeasible.  Eigenvalues come from singular values of the thin submatrix
(squared), which is better conditioned than forming the Gram matrix.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .signals import SparseVector, as_dense_array, as_matrix_array

__all__ = [
    "BudgetExceededError",
    "RipEstimate",
    "RegimeReport",
    "rip_constant_exact",
    "rip_constant_sampled",
    "check_conditions",
    "l0_oracle",
    "DEFAULT_SUBSET_BUDGET",
]

log = logging.getLogger(__name__)

DEFAULT_SUBSET_BUDGET = 1_000_000

_SVD_CHUNK = 2048


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the allowed subset budget."""


@dataclass(frozen=True)
class RipEstimate:
    """A restricted isometry constant with its provenance."""

    order: int
    delta: float
    exact: bool
    subsets_examined: int


@dataclass(frozen=True)
class RegimeReport:
    """Which of the three step-length conditions hold for given constants.

    The deltas that produced the verdicts are stored so any true flag can
    be re-checked against the inequality it certifies.
    """

    condition_a: bool
    condition_b: bool
    condition_c: bool
    gamma: float
    alpha: float
    delta_s_plus_shat: float
    delta_s_plus_2shat: float
    delta_2s: float

    @property
    def any_condition(self) -> bool:
        return self.condition_a or self.condition_b or self.condition_c


def _subset_deviation(entries: np.ndarray, subsets: np.ndarray) -> float:
    """Max spectral deviation from an isometry over a batch of subsets."""
    worst = 0.0
    m = entries.shape[0]
    s = subsets.shape[1]
    for start in range(0, subsets.shape[0], _SVD_CHUNK):
        batch = subsets[start : start + _SVD_CHUNK]
        stacked = entries[:, batch].transpose(1, 0, 2)  # (b, m, s)
        sv = np.linalg.svd(stacked, compute_uv=False)
        lam_max = sv[:, 0] ** 2
        lam_min = sv[:, -1] ** 2 if s <= m else np.zeros(len(batch))
        worst = max(worst, float(np.max(lam_max - 1.0)), float(np.max(1.0 - lam_min)))
    return worst


def _enumerate_subsets(n: int, s: int) -> np.ndarray:
    return np.fromiter(
        (i for combo in combinations(range(n), s) for i in combo),
        dtype=np.int64,
    ).reshape(-1, s)


def rip_constant_exact(phi, s: int, subset_budget: int = DEFAULT_SUBSET_BUDGET) -> RipEstimate:
    """Exact delta_s by enumerating every size-s column subset.

    Raises :class:`BudgetExceededError` when C(n, s) exceeds
    ``subset_budget``; callers should fall back to
    :func:`rip_constant_sampled` in that case.
    """
    entries = as_matrix_array(phi)
    n = entries.shape[1]
    if not 1 <= s <= n:
        raise ValueError(f"order s must be in [1, {n}], got {s}")
    count = math.comb(n, s)
    if count > subset_budget:
        raise BudgetExceededError(
            f"C({n},{s}) = {count} subsets exceeds budget {subset_budget}"
        )
    delta = _subset_deviation(entries, _enumerate_subsets(n, s))
    return RipEstimate(order=s, delta=delta, exact=True, subsets_examined=count)


def rip_constant_sampled(phi, s: int, trials: int, seed: int = 0) -> RipEstimate:
    """Lower bound on delta_s from uniformly sampled subsets.

    The max over a sample of subsets never exceeds the max over all of
    them, so the estimate is a valid lower bound.  When ``trials`` covers
    every subset the enumeration is exhaustive (after dedup) and the value
    coincides with the exact constant.
    """
    entries = as_matrix_array(phi)
    n = entries.shape[1]
    if not 1 <= s <= n:
        raise ValueError(f"order s must be in [1, {n}], got {s}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    total = math.comb(n, s)
    if trials >= total:
        subsets = _enumerate_subsets(n, s)
    else:
        rng = np.random.default_rng(seed)
        seen = set()
        for _ in range(trials):
            seen.add(tuple(sorted(rng.choice(n, size=s, replace=False).tolist())))
        subsets = np.array(sorted(seen), dtype=np.int64)
    delta = _subset_deviation(entries, subsets)
    return RipEstimate(order=s, delta=delta, exact=False, subsets_examined=len(subsets))


def check_conditions(
    delta_s_plus_shat: float,
    delta_s_plus_2shat: float,
    delta_2s: float,
    gamma: float,
    alpha: float = 0.5,
) -> RegimeReport:
    """Evaluate the three sufficient step-length conditions.

    (a) gamma >= 1/(d2 - d1 + 1)  and  gamma * d2 <= 1/sqrt(32)
    (b) gamma <  1/(d2 - d1 + 1)  and  gamma * (1 - d1) >= 1 - 1/sqrt(32)
    (c) (1 - alpha/2)/(1 - delta_2s) < gamma < 1/(1 - delta_2s),
        requiring delta_2s < 1

    with d1 = delta_{s + s_hat} and d2 = delta_{s + 2 s_hat}.  Condition
    (c) with alpha = 1/2 gives the halving-per-iteration regime.
    """
    d1, d2, d2s = float(delta_s_plus_shat), float(delta_s_plus_2shat), float(delta_2s)
    if min(d1, d2, d2s) < 0:
        raise ValueError("RIP constants must be nonnegative")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    inv_root32 = 1.0 / math.sqrt(32.0)
    pivot = 1.0 / (d2 - d1 + 1.0)
    cond_a = gamma >= pivot and gamma * d2 <= inv_root32
    cond_b = gamma < pivot and gamma * (1.0 - d1) >= 1.0 - inv_root32
    if d2s < 1.0:
        lo = (1.0 - alpha / 2.0) / (1.0 - d2s)
        hi = 1.0 / (1.0 - d2s)
        cond_c = lo < gamma < hi
    else:
        cond_c = False
    return RegimeReport(
        condition_a=cond_a,
        condition_b=cond_b,
        condition_c=cond_c,
        gamma=float(gamma),
        alpha=float(alpha),
        delta_s_plus_shat=d1,
        delta_s_plus_2shat=d2,
        delta_2s=d2s,
    )


def l0_oracle(
    phi,
    y,
    s_max: int,
    residual_tol: float | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    counters: dict | None = None,
):
    """Brute-force sparsest solution of ``y = Phi x`` at toy scale.

    Enumerates supports in increasing size (lexicographic within a size)
    and solves least squares on each; returns the first support whose
    residual is within ``residual_tol`` (default ``1e-8 * ||y||_2``), so
    ties resolve to the lexicographically smallest support.  Returns None
    when nothing of size <= s_max fits.  Rank-deficient submatrices are
    skipped; pass a ``counters`` dict to collect how many.
    """
    entries = as_matrix_array(phi)
    yv = as_dense_array(y)
    m, n = entries.shape
    if yv.size != m:
        raise ValueError(f"y has dimension {yv.size}, expected {m}")
    if not 1 <= s_max <= n:
        raise ValueError(f"s_max must be in [1, {n}], got {s_max}")
    total = sum(math.comb(n, t) for t in range(s_max + 1))
    if total > subset_budget:
        raise BudgetExceededError(
            f"{total} supports of size <= {s_max} exceeds budget {subset_budget}"
        )
    ynorm = float(np.linalg.norm(yv))
    tol = 1e-8 * ynorm if residual_tol is None else float(residual_tol)
    skipped = 0
    try:
        if ynorm <= tol:
            return SparseVector(n, [], [])
        for t in range(1, s_max + 1):
            for combo in combinations(range(n), t):
                cols = entries[:, combo]
                z, _, rank, _ = np.linalg.lstsq(cols, yv, rcond=None)
                if rank < t:
                    skipped += 1
                    continue
                if np.linalg.norm(yv - cols @ z) <= tol:
                    return SparseVector(n, combo, z)
        return None
    finally:
        if skipped:
            log.debug("l0_oracle skipped %d rank-deficient supports", skipped)
        if counters is not None:
            counters["rank_deficient_skipped"] = (
                counters.get("rank_deficient_skipped", 0) + skipped
            )
