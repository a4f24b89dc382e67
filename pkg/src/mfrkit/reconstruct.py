"""Iterative hard-thresholding solvers with a frame-iteration backbone.

Every solver here repeats two moves: a gradient-like correction
``x + gamma * Phi^T (y - Phi x)`` and a pruning step that keeps the
``s_hat`` largest-magnitude entries.  Variants differ in how the
correction is built:

* ``mfr``                 -- plain fixed-step iteration.
* ``mfr_accelerated``     -- two-term Chebyshev recurrence over the
                             previous two iterates (or a fixed
                             second-order Richardson weight).
* ``mfr_least_squares``   -- re-solves least squares on the pruned
                             support whenever that support changes.
* ``mfr_adaptive``        -- picks the step-length each iteration by
                             minimizing the measurement-space residual.
* ``frame_reconstruct``   -- the classical unthresholded iteration for
                             full-column-rank systems.

All solvers start from x = 0 and stop when the iterate moves less than
``tol`` in l2 norm or the iteration cap is reached.  They are pure
functions of their inputs and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .signals import (
    DenseVector,
    SparseVector,
    as_dense_array,
    as_matrix_array,
    threshold_dense,
)

__all__ = [
    "ADAPTIVE",
    "ALGORITHMS",
    "RankDeficientError",
    "SolverConfig",
    "SolveResult",
    "IterationState",
    "FrameBounds",
    "chebyshev_omega",
    "richardson_omega",
    "spectral_extremes",
    "least_squares_on_support",
    "mfr",
    "mfr_accelerated",
    "mfr_least_squares",
    "mfr_least_squares_accelerated",
    "mfr_adaptive",
    "frame_reconstruct",
    "solve",
]

ADAPTIVE = "adaptive"

ALGORITHMS = ("mfr", "mfr_accel", "mfr_ls", "mfr_ls_accel", "mfr_adaptive", "frame")

_FULL_SVD_LIMIT = 2000


class RankDeficientError(ValueError):
    """A column submatrix was numerically rank deficient."""

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the solver family.

    ``gamma`` is either a positive step-length or the string
    ``"adaptive"``.  The ``gamma_grid`` / ``refine_steps`` knobs control
    the adaptive search: a coarse grid over [lo, hi] followed by
    golden-section refinement of the best bracket.
    """

    s_hat: int
    gamma: Union[float, str]
    tol: float = 1e-7
    max_iter: int = 1000
    accelerate: bool = False
    least_squares: bool = False
    richardson_fixed_omega: bool = False
    gamma_grid: tuple = (0.05, 2.0, 64)
    refine_steps: int = 20
    record_iterates: bool = False

    def __post_init__(self):
        if int(self.s_hat) < 1:
            raise ValueError("s_hat must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be >= 1")
        if isinstance(self.gamma, str):
            if self.gamma != ADAPTIVE:
                raise ValueError(f"gamma must be positive or {ADAPTIVE!r}")
        elif not (float(self.gamma) > 0 and math.isfinite(float(self.gamma))):
            raise ValueError("fixed gamma must be positive and finite")
        lo, hi, points = self.gamma_grid
        if not (0 <= lo < hi and int(points) >= 2):
            raise ValueError("gamma_grid must be (lo, hi, points) with lo < hi")

    @property
    def is_adaptive(self) -> bool:
        return self.gamma == ADAPTIVE

    def to_json_dict(self) -> dict:
        return {
            "s_hat": int(self.s_hat),
            "gamma": self.gamma if self.is_adaptive else float(self.gamma),
            "tol": float(self.tol),
            "max_iter": int(self.max_iter),
            "accelerate": bool(self.accelerate),
            "least_squares": bool(self.least_squares),
            "richardson_fixed_omega": bool(self.richardson_fixed_omega),
        }


@dataclass(frozen=True)
class FrameBounds:
    """Spectral bounds 0 < A <= B for Phi^T Phi, with contraction factor mu."""

    lower: float
    upper: float

    def __post_init__(self):
        if not 0 < self.lower <= self.upper:
            raise ValueError(f"need 0 < lower <= upper, got {self.lower}, {self.upper}")

    @property
    def mu(self) -> float:
        return (self.upper - self.lower) / (self.upper + self.lower)


@dataclass(frozen=True, eq=False)
class IterationState:
    """Snapshot of one solver iteration, passed to ``on_iteration`` hooks."""

    k: int
    x_k: SparseVector
    a_k: DenseVector
    residual: DenseVector
    support_k: np.ndarray
    omega_k: float
    x_prev: Optional[SparseVector]


@dataclass(eq=False)
class SolveResult:
    """Recovered vector plus the convergence trajectory."""

    algorithm: str
    config: SolverConfig
    x_hat: SparseVector
    iterations: int
    converged: bool
    residual_l2: float
    residual_trace: np.ndarray
    iterate_delta_trace: np.ndarray
    rank_deficient_events: int = 0
    iterates: Optional[list] = None

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "config": self.config.to_json_dict(),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "residual_l2": float(self.residual_l2),
            "residual_trace": [float(v) for v in self.residual_trace],
            "iterate_delta_trace": [float(v) for v in self.iterate_delta_trace],
            # 1-based indices, matching the on-disk sparse vector format
            "x_hat": {
                "dim": self.x_hat.dimension,
                "support": [int(i) + 1 for i in self.x_hat.support],
                "values": [float(v) for v in self.x_hat.values],
            },
        }


def chebyshev_omega(omega_prev: float, mu: float) -> float:
    """Next Chebyshev acceleration weight: 1 / (1 - omega_prev * mu^2 / 4).

    Starting from omega = 1 the sequence is nondecreasing and converges
    to the fixed Richardson weight 2 / (1 + sqrt(1 - mu^2)).
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu must lie in [0, 1), got {mu}")
    if omega_prev < 1.0:
        raise ValueError(f"omega_prev must be >= 1, got {omega_prev}")
    return 1.0 / (1.0 - omega_prev * mu * mu / 4.0)


def richardson_omega(mu: float) -> float:
    """Fixed second-order weight 2 / (1 + sqrt(1 - mu^2))."""
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu must lie in [0, 1), got {mu}")
    return 2.0 / (1.0 + math.sqrt(1.0 - mu * mu))


def spectral_extremes(phi) -> tuple:
    """(sigma_max, sigma_min) over the min(m, n) singular values of Phi.

    Uses a full decomposition up to size 2000 and shifted power
    iterations (tolerance 1e-10) beyond that.
    """
    a = as_matrix_array(phi)
    if min(a.shape) <= _FULL_SVD_LIMIT:
        sv = np.linalg.svd(a, compute_uv=False)
        return float(sv[0]), float(sv[-1])
    gram = a @ a.T if a.shape[0] <= a.shape[1] else a.T @ a
    lam_max = _power_iteration(gram)
    # Largest eigenvalue of (lam_max * I - G) recovers the smallest of G.
    lam_min = lam_max - _power_iteration(gram, shift=lam_max)
    return float(math.sqrt(lam_max)), float(math.sqrt(max(lam_min, 0.0)))


def _power_iteration(gram: np.ndarray, shift: float = 0.0, tol: float = 1e-10,
                     max_iter: int = 10_000) -> float:
    rng = np.random.default_rng(0)
    v = rng.normal(size=gram.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = shift * v - gram @ v if shift else gram @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v_new = w / norm_w
        lam_new = float(v_new @ (shift * v_new - gram @ v_new if shift else gram @ v_new))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam, v = lam_new, v_new
    return lam


def least_squares_on_support(phi, support, y) -> SparseVector:
    """Minimizer of ``||y - Phi_G z||_2`` embedded on the index set G.

    Raises :class:`RankDeficientError` (carrying the numerical rank) when
    the selected columns are not independent.
    """
    a = as_matrix_array(phi)
    yv = as_dense_array(y)
    m, n = a.shape
    if yv.size != m:
        raise ValueError(f"y has dimension {yv.size}, expected {m}")
    supp = np.unique(np.asarray(support, dtype=np.int64).reshape(-1))
    if supp.size and (supp[0] < 0 or supp[-1] >= n):
        raise ValueError("support indices out of range")
    if supp.size > m:
        raise ValueError(f"support size {supp.size} exceeds row count {m}")
    if supp.size == 0:
        return SparseVector(n, [], [])
    z, _, rank, _ = np.linalg.lstsq(a[:, supp], yv, rcond=None)
    if rank < supp.size:
        raise RankDeficientError(
            f"columns {supp.tolist()} have numerical rank {rank} < {supp.size}",
            rank=int(rank),
        )
    nz = z != 0.0
    return SparseVector(n, supp[nz], z[nz])


# ---------------------------------------------------------------------------
# shared loop plumbing

def _problem(phi, y):
    a = as_matrix_array(phi)
    yv = as_dense_array(y)
    if yv.size != a.shape[0]:
        raise ValueError(f"y has dimension {yv.size}, expected {a.shape[0]}")
    return a, yv


def _diverged(arr: np.ndarray) -> bool:
    """Unstable step-lengths can blow the iterate up; treat as non-converged."""
    return not np.all(np.isfinite(arr))


def _fixed_gamma(cfg: SolverConfig) -> float:
    if cfg.is_adaptive:
        raise ValueError("this solver needs a fixed gamma; use mfr_adaptive instead")
    return float(cfg.gamma)


def _check_s_hat(cfg: SolverConfig, n: int) -> int:
    if cfg.s_hat > n:
        raise ValueError(f"s_hat={cfg.s_hat} exceeds signal dimension {n}")
    return int(cfg.s_hat)


class _Trace:
    def __init__(self, record_iterates: bool):
        self.residuals = []
        self.deltas = []
        self.iterates = [] if record_iterates else None

    def record(self, residual: float, delta: float, x: np.ndarray):
        self.residuals.append(residual)
        self.deltas.append(delta)
        if self.iterates is not None:
            self.iterates.append(x.copy())


def _emit(on_iteration, k, x_new, supp, a, r, omega, x_prev, n):
    if on_iteration is None:
        return
    on_iteration(
        IterationState(
            k=k,
            x_k=SparseVector(n, supp, x_new[supp]),
            a_k=DenseVector(a),
            residual=DenseVector(r),
            support_k=supp,
            omega_k=omega,
            x_prev=None if x_prev is None else SparseVector.from_dense(x_prev),
        )
    )


def _finish(algorithm, cfg, x, trace, iterations, converged, n, rank_deficient=0):
    return SolveResult(
        algorithm=algorithm,
        config=cfg,
        x_hat=SparseVector.from_dense(x),
        iterations=iterations,
        converged=converged,
        residual_l2=trace.residuals[-1] if trace.residuals else float("nan"),
        residual_trace=np.asarray(trace.residuals),
        iterate_delta_trace=np.asarray(trace.deltas),
        rank_deficient_events=rank_deficient,
        iterates=trace.iterates,
    )


# ---------------------------------------------------------------------------
# solvers

def mfr(phi, y, cfg: SolverConfig, on_iteration: Callable = None) -> SolveResult:
    """Plain fixed-step iteration: threshold(x + gamma * Phi^T (y - Phi x))."""
    a_mat, yv = _problem(phi, y)
    gamma = _fixed_gamma(cfg)
    n = a_mat.shape[1]
    s_hat = _check_s_hat(cfg, n)
    x = np.zeros(n)
    r = yv.copy()
    trace = _Trace(cfg.record_iterates)
    converged = False
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.max_iter + 1):
            a = x + gamma * (a_mat.T @ r)
            if _diverged(a):
                break
            x_new, supp = threshold_dense(a, s_hat)
            delta = float(np.linalg.norm(x_new - x))
            r = yv - a_mat @ x_new
            trace.record(float(np.linalg.norm(r)), delta, x_new)
            _emit(on_iteration, k, x_new, supp, a, r, 1.0, x, n)
            x = x_new
            if delta < cfg.tol:
                converged = True
                break
    return _finish("mfr", cfg, x, trace, k, converged, n)


def mfr_accelerated(phi, y, cfg: SolverConfig, on_iteration: Callable = None) -> SolveResult:
    """Two-term polynomial-accelerated variant.

    The first step is threshold(Phi^T y); afterwards the update blends
    the previous two iterates with the Chebyshev weight sequence
    omega(1) = 1, omega(k+1) = 1 / (1 - omega(k) mu^2 / 4), where mu is
    the spectral spread (smax^2 - smin^2) / (smax^2 + smin^2) of Phi.
    With ``richardson_fixed_omega`` the limit weight is used throughout.
    """
    a_mat, yv = _problem(phi, y)
    gamma = _fixed_gamma(cfg)
    n = a_mat.shape[1]
    s_hat = _check_s_hat(cfg, n)
    smax, smin = spectral_extremes(a_mat)
    if smin <= smax * 1e-12:
        raise ValueError(
            "Phi is numerically rank deficient (mu = 1); acceleration is "
            "undefined here, use plain mfr instead"
        )
    mu = (smax * smax - smin * smin) / (smax * smax + smin * smin)
    fixed_w = richardson_omega(mu) if cfg.richardson_fixed_omega else None

    trace = _Trace(cfg.record_iterates)
    x_prev = np.zeros(n)
    a = a_mat.T @ yv
    x, supp = threshold_dense(a, s_hat)
    delta = float(np.linalg.norm(x))
    r = yv - a_mat @ x
    trace.record(float(np.linalg.norm(r)), delta, x)
    _emit(on_iteration, 1, x, supp, a, r, 1.0, x_prev, n)
    k = 1
    converged = delta < cfg.tol
    omega = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        while not converged and k < cfg.max_iter:
            k += 1
            omega = fixed_w if fixed_w is not None else chebyshev_omega(omega, mu)
            a = x_prev + omega * (gamma * (a_mat.T @ r) + x - x_prev)
            if _diverged(a):
                break
            x_new, supp = threshold_dense(a, s_hat)
            delta = float(np.linalg.norm(x_new - x))
            r = yv - a_mat @ x_new
            trace.record(float(np.linalg.norm(r)), delta, x_new)
            _emit(on_iteration, k, x_new, supp, a, r, omega, x, n)
            x_prev, x = x, x_new
            if delta < cfg.tol:
                converged = True
    return _finish("mfr_accel", cfg, x, trace, k, converged, n)


def _ls_refine(a_mat, yv, supp, pruned, ls_support):
    """Least-squares replacement step shared by the LS variants.

    Returns (iterate, fired, rank_deficient): ``fired`` is True when the
    solution was replaced by the LS solution on a new support;
    ``rank_deficient`` flags a fallback to the pruned iterate.
    """
    if ls_support is not None and np.array_equal(supp, ls_support):
        return pruned, False, False
    if supp.size == 0:
        return pruned, True, False
    z, _, rank, _ = np.linalg.lstsq(a_mat[:, supp], yv, rcond=None)
    if rank < supp.size:
        return pruned, False, True
    x_new = np.zeros(a_mat.shape[1])
    x_new[supp] = z
    return x_new, True, False


def mfr_least_squares(phi, y, cfg: SolverConfig, on_iteration: Callable = None) -> SolveResult:
    """Fixed-step iteration with a least-squares re-solve on support change.

    After each prune, when the kept support differs from the support of
    the previous LS solve, the iterate is replaced by the least-squares
    solution restricted to the new support.  Rank-deficient submatrices
    fall back to the pruned iterate and are counted on the result.
    """
    a_mat, yv = _problem(phi, y)
    gamma = _fixed_gamma(cfg)
    n = a_mat.shape[1]
    s_hat = _check_s_hat(cfg, n)
    x = np.zeros(n)
    r = yv.copy()
    ls_support = None
    rank_deficient = 0
    trace = _Trace(cfg.record_iterates)
    converged = False
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.max_iter + 1):
            a = x + gamma * (a_mat.T @ r)
            if _diverged(a):
                break
            pruned, supp = threshold_dense(a, s_hat)
            x_new, fired, bad = _ls_refine(a_mat, yv, supp, pruned, ls_support)
            if bad:
                rank_deficient += 1
            if fired:
                ls_support = supp
            delta = float(np.linalg.norm(x_new - x))
            r = yv - a_mat @ x_new
            trace.record(float(np.linalg.norm(r)), delta, x_new)
            _emit(on_iteration, k, x_new, np.flatnonzero(x_new), a, r, 1.0, x, n)
            x = x_new
            if delta < cfg.tol:
                converged = True
                break
    return _finish("mfr_ls", cfg, x, trace, k, converged, n, rank_deficient)


def mfr_least_squares_accelerated(phi, y, cfg: SolverConfig,
                                  on_iteration: Callable = None) -> SolveResult:
    """Polynomial acceleration combined with the least-squares re-solve.

    An LS replacement invalidates the two-term recurrence, so whenever
    one fires the acceleration state resets: omega returns to 1 and the
    momentum term restarts from the refined iterate.
    """
    a_mat, yv = _problem(phi, y)
    gamma = _fixed_gamma(cfg)
    n = a_mat.shape[1]
    s_hat = _check_s_hat(cfg, n)
    smax, smin = spectral_extremes(a_mat)
    if smin <= smax * 1e-12:
        raise ValueError(
            "Phi is numerically rank deficient (mu = 1); acceleration is "
            "undefined here, use mfr_ls instead"
        )
    mu = (smax * smax - smin * smin) / (smax * smax + smin * smin)
    fixed_w = richardson_omega(mu) if cfg.richardson_fixed_omega else None

    x_prev = np.zeros(n)
    x = np.zeros(n)
    r = yv.copy()
    omega = 1.0
    ls_support = None
    rank_deficient = 0
    trace = _Trace(cfg.record_iterates)
    converged = False
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.max_iter + 1):
            if k == 1:
                a = a_mat.T @ yv
            else:
                omega = fixed_w if fixed_w is not None else chebyshev_omega(omega, mu)
                a = x_prev + omega * (gamma * (a_mat.T @ r) + x - x_prev)
            if _diverged(a):
                break
            pruned, supp = threshold_dense(a, s_hat)
            x_new, fired, bad = _ls_refine(a_mat, yv, supp, pruned, ls_support)
            if bad:
                rank_deficient += 1
            if fired:
                ls_support = supp
                omega = 1.0
                x_prev = x_new
            else:
                x_prev = x
            delta = float(np.linalg.norm(x_new - x))
            r = yv - a_mat @ x_new
            trace.record(float(np.linalg.norm(r)), delta, x_new)
            _emit(on_iteration, k, x_new, np.flatnonzero(x_new), a, r, omega, x, n)
            x = x_new
            if delta < cfg.tol:
                converged = True
                break
    return _finish("mfr_ls_accel", cfg, x, trace, k, converged, n, rank_deficient)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, lo, hi, steps):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def mfr_adaptive(phi, y, cfg: SolverConfig, on_iteration: Callable = None) -> SolveResult:
    """Iteration with a per-step greedy step-length.

    Each iteration picks gamma minimizing the post-threshold residual
    ``||y - Phi * threshold(x + gamma * Phi^T (y - Phi x))||_2`` over a
    coarse grid followed by golden-section refinement.  The zero step is
    always admissible, so the recorded residual trace never increases.
    """
    a_mat, yv = _problem(phi, y)
    if not cfg.is_adaptive:
        raise ValueError("mfr_adaptive requires cfg.gamma == 'adaptive'")
    n = a_mat.shape[1]
    s_hat = _check_s_hat(cfg, n)
    lo, hi, points = cfg.gamma_grid
    grid = np.linspace(lo, hi, int(points))
    idx = np.arange(n)

    x = np.zeros(n)
    r = yv.copy()
    trace = _Trace(cfg.record_iterates)
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        g = a_mat.T @ r
        current = float(np.linalg.norm(r))

        def objective(gam):
            v = x + gam * g
            order = np.lexsort((idx, -np.abs(v)))[:s_hat]
            return float(np.linalg.norm(yv - a_mat[:, order] @ v[order]))

        values = [objective(gam) for gam in grid]
        best = int(np.argmin(values))
        bracket_lo = grid[max(best - 1, 0)]
        bracket_hi = grid[min(best + 1, grid.size - 1)]
        gam_star, f_star = _golden_section(objective, bracket_lo, bracket_hi,
                                           cfg.refine_steps)
        if values[best] < f_star:
            gam_star, f_star = float(grid[best]), values[best]
        if f_star >= current:
            # No step improves the residual; stand still (Lemma guard).
            gam_star = 0.0
            x_new, supp = x.copy(), np.flatnonzero(x)
        else:
            a = x + gam_star * g
            x_new, supp = threshold_dense(a, s_hat)
        delta = float(np.linalg.norm(x_new - x))
        r = yv - a_mat @ x_new
        trace.record(float(np.linalg.norm(r)), delta, x_new)
        _emit(on_iteration, k, x_new, supp, x + gam_star * g, r, 1.0, x, n)
        x = x_new
        if delta < cfg.tol:
            converged = True
            break
    return _finish("mfr_adaptive", cfg, x, trace, k, converged, n)


def frame_reconstruct(phi, y, bounds: FrameBounds = None, tol: float = 1e-7,
                      max_iter: int = 1000, record_iterates: bool = False,
                      on_iteration: Callable = None) -> SolveResult:
    """Classical frame iteration x <- x + (2 / (A + B)) Phi^T (y - Phi x).

    Requires Phi^T Phi positive definite (at least as many rows as
    columns, full column rank).  When ``bounds`` is omitted, A and B are
    derived from the extreme singular values; when supplied they must
    bracket the spectrum for the contraction guarantee to hold.  For
    ``y = Phi x`` the error decays like ((B - A) / (B + A))^k.
    """
    a_mat, yv = _problem(phi, y)
    m, n = a_mat.shape
    if n > m:
        raise ValueError("frame iteration needs at least as many rows as columns")
    if bounds is None:
        smax, smin = spectral_extremes(a_mat)
        if smin <= smax * 1e-12:
            raise ValueError("Phi^T Phi is not positive definite")
        bounds = FrameBounds(smin * smin, smax * smax)
    step = 2.0 / (bounds.lower + bounds.upper)

    x = np.zeros(n)
    r = yv.copy()
    trace = _Trace(record_iterates)
    converged = False
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_iter + 1):
            a = x + step * (a_mat.T @ r)
            if _diverged(a):
                break
            x_new = a
            delta = float(np.linalg.norm(x_new - x))
            r = yv - a_mat @ x_new
            trace.record(float(np.linalg.norm(r)), delta, x_new)
            _emit(on_iteration, k, x_new, np.flatnonzero(x_new), a, r, 1.0, x, n)
            x = x_new
            if delta < tol:
                converged = True
                break
    cfg = SolverConfig(s_hat=n, gamma=step, tol=tol, max_iter=max_iter,
                       record_iterates=record_iterates)
    return _finish("frame", cfg, x, trace, k, converged, n)


def solve(phi, y, cfg: SolverConfig, algorithm: str = None,
          on_iteration: Callable = None) -> SolveResult:
    """Dispatch to a solver by name, or by the config flags when omitted."""
    if algorithm is None:
        if cfg.is_adaptive:
            if cfg.accelerate or cfg.least_squares:
                raise ValueError("adaptive gamma cannot be combined with "
                                 "acceleration or least squares")
            algorithm = "mfr_adaptive"
        elif cfg.accelerate and cfg.least_squares:
            algorithm = "mfr_ls_accel"
        elif cfg.accelerate:
            algorithm = "mfr_accel"
        elif cfg.least_squares:
            algorithm = "mfr_ls"
        else:
            algorithm = "mfr"
    if algorithm == "mfr":
        return mfr(phi, y, cfg, on_iteration)
    if algorithm == "mfr_accel":
        return mfr_accelerated(phi, y, cfg, on_iteration)
    if algorithm == "mfr_ls":
        return mfr_least_squares(phi, y, cfg, on_iteration)
    if algorithm == "mfr_ls_accel":
        return mfr_least_squares_accelerated(phi, y, cfg, on_iteration)
    if algorithm == "mfr_adaptive":
        cfg_a = cfg if cfg.is_adaptive else replace(cfg, gamma=ADAPTIVE)
        return mfr_adaptive(phi, y, cfg_a, on_iteration)
    if algorithm == "frame":
        return frame_reconstruct(phi, y, None, cfg.tol, cfg.max_iter,
                                 cfg.record_iterates, on_iteration)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
