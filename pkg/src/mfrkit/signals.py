"""Core vector/matrix value types, norms, and hard thresholding.

Types are immutable after construction (arrays are marked read-only) and
all operations here are pure functions, so shared instances are safe to
use concurrently.  Indices are 0-based throughout the in-process API;
file formats use 1-based indices (see :mod:`mfrkit.sensing`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DenseVector",
    "SparseVector",
    "Matrix",
    "hard_threshold",
    "threshold_dense",
    "lp_norm",
    "l0_norm",
    "support_match",
    "as_dense_array",
    "as_matrix_array",
]


def _finite_float_array(values, name):
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


def as_dense_array(v) -> np.ndarray:
    """Return the underlying 1-D float array of a vector-like argument."""
    if isinstance(v, DenseVector):
        return v.values
    if isinstance(v, SparseVector):
        return v.densify().values
    return _finite_float_array(v, "vector")


def as_matrix_array(phi) -> np.ndarray:
    """Return the underlying 2-D float array of a matrix-like argument."""
    if isinstance(phi, Matrix):
        return phi.entries
    return Matrix(phi).entries


@dataclass(frozen=True, eq=False)
class DenseVector:
    """A fixed-length real signal; entries are finite and read-only."""

    values: np.ndarray

    def __init__(self, values):
        object.__setattr__(self, "values", _finite_float_array(values, "values"))

    @property
    def dim(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class SparseVector:
    """A vector stored as (dimension, support, values).

    The support holds the strictly increasing 0-based indices of the
    nonzero entries; ``values`` is aligned with it.
    """

    dimension: int
    support: np.ndarray
    values: np.ndarray

    def __init__(self, dimension, support, values):
        dimension = int(dimension)
        if dimension < 1:
            raise ValueError("dimension must be positive")
        supp = np.array(support, dtype=np.int64, copy=True).reshape(-1)
        vals = np.array(values, dtype=np.float64, copy=True).reshape(-1)
        if supp.size != vals.size:
            raise ValueError("support and values must have equal length")
        if supp.size:
            if supp[0] < 0 or supp[-1] >= dimension or np.any(np.diff(supp) <= 0):
                raise ValueError(
                    "support indices must be strictly increasing and in range"
                )
            if not np.all(np.isfinite(vals)):
                raise ValueError("values must be finite (no NaN/Inf)")
        supp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dense(cls, values, zero_tol: float = 0.0) -> "SparseVector":
        """Sparsify a dense array, dropping entries with ``|v| <= zero_tol``."""
        arr = as_dense_array(values)
        keep = np.flatnonzero(np.abs(arr) > zero_tol)
        return cls(arr.size, keep, arr[keep])

    def densify(self) -> DenseVector:
        out = np.zeros(self.dimension)
        out[self.support] = self.values
        return DenseVector(out)

    def to_dense_array(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.support] = self.values
        return out

    @property
    def nnz(self) -> int:
        return self.support.size

    def support_set(self) -> frozenset:
        return frozenset(int(i) for i in self.support)


@dataclass(frozen=True, eq=False)
class Matrix:
    """An m-by-n real matrix with finite, read-only entries."""

    entries: np.ndarray

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"entries must be 2-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("matrix must have at least one row and one column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite (no NaN/Inf)")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def column_submatrix(self, indices) -> np.ndarray:
        """Columns selected by ``indices``, preserving their given order."""
        idx = np.asarray(indices, dtype=np.int64).reshape(-1)
        if idx.size and (idx.min() < 0 or idx.max() >= self.cols):
            raise ValueError("column indices out of range")
        return self.entries[:, idx]


def threshold_dense(x: np.ndarray, tau: int):
    """Array-level worker behind :func:`hard_threshold`.

    Returns ``(thresholded, support)`` where ``thresholded`` is a dense
    copy of ``x`` with everything but the tau largest-magnitude entries
    zeroed, and ``support`` holds the sorted indices of the kept nonzero
    entries.  Magnitude ties keep the smaller index.
    """
    n = x.size
    if not 1 <= tau <= n:
        raise ValueError(f"tau must be in [1, {n}], got {tau}")
    if tau == n:
        out = x.copy()
        return out, np.flatnonzero(out != 0.0)
    # Stable selection: sort by descending magnitude, then ascending index.
    order = np.lexsort((np.arange(n), -np.abs(x)))
    kept = np.sort(order[:tau])
    out = np.zeros_like(x)
    out[kept] = x[kept]
    return out, kept[x[kept] != 0.0]


def hard_threshold(v, tau: int) -> SparseVector:
    """Best tau-sparse approximation of ``v`` under any finite lp norm.

    Keeps the tau largest-magnitude entries; on ties the smaller index
    wins, which makes the operator deterministic.  Exact zeros never
    enter the returned support, so the support may have fewer than tau
    entries when ``v`` has fewer than tau nonzeros.
    """
    x = as_dense_array(v)
    out, supp = threshold_dense(x, int(tau))
    return SparseVector(x.size, supp, out[supp])


def lp_norm(v, p: float = 2.0) -> float:
    """The lp norm (sum |v_i|^p)^(1/p) for finite p >= 1."""
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ValueError(f"p must be a finite real >= 1, got {p}")
    x = as_dense_array(v)
    if p == 2.0:
        return float(np.linalg.norm(x))
    if p == 1.0:
        return float(np.sum(np.abs(x)))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def l0_norm(v, zero_tol: float = 0.0) -> int:
    """Number of entries with magnitude strictly above ``zero_tol``."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    x = as_dense_array(v)
    return int(np.count_nonzero(np.abs(x) > zero_tol))


def support_match(a: SparseVector, b: SparseVector) -> bool:
    """True iff the two vectors have identical supports as index sets."""
    if a.dimension != b.dimension:
        raise ValueError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}"
        )
    return a.support.size == b.support.size and bool(
        np.array_equal(a.support, b.support)
    )
