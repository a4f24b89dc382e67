"""Seeded generation of measurement matrices and sparse test signals.

The forward model is ``y = Phi x + e`` with ``e`` optional (experiments
default to noiseless measurements).  Generation is deterministic given a
spec: the same spec always yields the same matrix or signal within one
build.  CSV helpers at the bottom use 1-based indices for sparse vectors;
everything in-process is 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import DenseVector, Matrix, SparseVector, as_dense_array, as_matrix_array

__all__ = [
    "GAUSSIAN",
    "UNIT_SPHERE_COLUMNS",
    "EnsembleSpec",
    "SignalSpec",
    "generate_matrix",
    "generate_sparse_signal",
    "measure",
    "suggest_measurements",
    "mix_seed",
    "save_matrix_csv",
    "load_matrix_csv",
    "save_vector_csv",
    "load_vector_csv",
    "save_sparse_csv",
    "load_sparse_csv",
]

GAUSSIAN = "gaussian"
UNIT_SPHERE_COLUMNS = "unit_sphere_columns"

_MASK64 = (1 << 64) - 1


def mix_seed(*parts) -> int:
    """Fold integers into one 64-bit seed (splitmix64-style mixing).

    Used to derive independent per-trial seeds from a base seed, so
    trials can run in any order or in parallel with identical results.
    """
    state = 0
    for part in parts:
        state = (state ^ (int(part) & _MASK64)) & _MASK64
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        state = z ^ (z >> 31)
    return state


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError("seed must fit in 64 unsigned bits")
    return seed


@dataclass(frozen=True)
class EnsembleSpec:
    """Which random matrix ensemble to draw, at what shape, from what seed."""

    kind: str
    m: int
    n: int
    seed: int

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, UNIT_SPHERE_COLUMNS):
            raise ValueError(f"unknown ensemble kind: {self.kind!r}")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        _check_seed(self.seed)


@dataclass(frozen=True)
class SignalSpec:
    """A random s-sparse signal: uniform support, Gaussian amplitudes."""

    n: int
    s: int
    seed: int
    amplitude_variance: float = 1.0

    def __post_init__(self):
        if not 1 <= self.s <= self.n:
            raise ValueError(f"need 1 <= s <= n, got s={self.s}, n={self.n}")
        if not (self.amplitude_variance > 0 and math.isfinite(self.amplitude_variance)):
            raise ValueError("amplitude_variance must be positive and finite")
        _check_seed(self.seed)


def generate_matrix(spec: EnsembleSpec) -> Matrix:
    """Draw a measurement matrix.

    ``gaussian``: i.i.d. entries with mean 0 and variance 1/m.
    ``unit_sphere_columns``: each column i.i.d. uniform on the unit
    sphere in R^m (normalized standard Gaussian columns).
    """
    rng = np.random.default_rng(spec.seed)
    if spec.kind == GAUSSIAN:
        entries = rng.normal(0.0, 1.0 / math.sqrt(spec.m), size=(spec.m, spec.n))
    else:
        entries = rng.normal(size=(spec.m, spec.n))
        entries /= np.linalg.norm(entries, axis=0)
    return Matrix(entries)


def generate_sparse_signal(spec: SignalSpec) -> SparseVector:
    """Draw an s-sparse signal: support uniform among s-subsets, then
    i.i.d. mean-0 Gaussian amplitudes with the configured variance."""
    rng = np.random.default_rng(spec.seed)
    support = np.sort(rng.choice(spec.n, size=spec.s, replace=False))
    values = rng.normal(0.0, math.sqrt(spec.amplitude_variance), size=spec.s)
    return SparseVector(spec.n, support, values)


def measure(phi, x, e=None) -> DenseVector:
    """Forward measurement ``y = Phi x + e`` (``e`` defaults to zero)."""
    a = as_matrix_array(phi)
    xd = as_dense_array(x)
    if xd.size != a.shape[1]:
        raise ValueError(f"signal dimension {xd.size} != matrix columns {a.shape[1]}")
    y = a @ xd
    if e is not None:
        ed = as_dense_array(e)
        if ed.size != a.shape[0]:
            raise ValueError(f"noise dimension {ed.size} != matrix rows {a.shape[0]}")
        y = y + ed
    return DenseVector(y)


def suggest_measurements(n: int, s: int) -> int:
    """Rule-of-thumb measurement count ceil(2 s ln n), clamped to [1, n]."""
    n = int(n)
    s = int(s)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got s={s}, n={n}")
    m = math.ceil(2.0 * s * math.log(n))
    return max(1, min(m, n))


# ---------------------------------------------------------------------------
# CSV serialization (external cross-checking format; 1-based indices)

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_matrix_csv(phi, path) -> None:
    """Row-major CSV, one matrix row per line."""
    a = as_matrix_array(phi)
    with open(path, "w", encoding="utf-8") as fh:
        for row in a:
            fh.write(",".join(_fmt(v) for v in row))
            fh.write("\n")


def load_matrix_csv(path) -> Matrix:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"no data in matrix file {path}")
    return Matrix(rows)


def save_vector_csv(v, path) -> None:
    """Dense vector CSV, one value per line."""
    x = as_dense_array(v)
    with open(path, "w", encoding="utf-8") as fh:
        for val in x:
            fh.write(_fmt(val))
            fh.write("\n")


def load_vector_csv(path) -> DenseVector:
    """Read a dense vector stored one-value-per-line or as a single row."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"no data in vector file {path}")
    if len(rows) == 1:
        return DenseVector(rows[0])
    if any(len(r) != 1 for r in rows):
        raise ValueError(f"{path} is neither a column nor a single row")
    return DenseVector([r[0] for r in rows])


def save_sparse_csv(v: SparseVector, path) -> None:
    """Sparse vector CSV: a ``dim,n`` header then 1-based ``index,value`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim,{v.dimension}\n")
        for i, val in zip(v.support, v.values):
            fh.write(f"{int(i) + 1},{_fmt(val)}\n")


def load_sparse_csv(path) -> SparseVector:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("dim,"):
        raise ValueError(f"{path} is missing the 'dim,n' header line")
    dim = int(lines[0].split(",")[1])
    idx, vals = [], []
    for ln in lines[1:]:
        i, v = ln.split(",")
        idx.append(int(i) - 1)
        vals.append(float(v))
    order = np.argsort(idx)
    return SparseVector(dim, np.asarray(idx)[order], np.asarray(vals)[order])
