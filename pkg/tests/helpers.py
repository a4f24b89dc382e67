"""Shared construction helpers for the test suite."""

from itertools import combinations

import numpy as np

from mfrkit import (
    GAUSSIAN,
    EnsembleSpec,
    Matrix,
    SignalSpec,
    generate_matrix,
    generate_sparse_signal,
    mix_seed,
)


def subset_spectrum_extremes(entries: np.ndarray, order: int):
    """Exact extreme eigenvalues of Phi_G^T Phi_G over all |G| = order."""
    lam_max, lam_min = -np.inf, np.inf
    for combo in combinations(range(entries.shape[1]), order):
        sv = np.linalg.svd(entries[:, combo], compute_uv=False)
        lam_max = max(lam_max, sv[0] ** 2)
        lam_min = min(lam_min, sv[-1] ** 2)
    return lam_max, lam_min


def well_conditioned_instance(seed: int, m: int, n: int, s: int):
    """A planted s-sparse problem whose exact delta_2s is small.

    A tall Gaussian matrix is rescaled so the order-2s subset spectrum is
    centered at 1, which makes the exact restricted-isometry constant of
    order 2s equal to the spectrum's relative half-width.
    """
    raw = generate_matrix(EnsembleSpec(GAUSSIAN, m, n, mix_seed(seed, 1)))
    lam_max, lam_min = subset_spectrum_extremes(raw.entries, 2 * s)
    phi = Matrix(raw.entries * np.sqrt(2.0 / (lam_max + lam_min)))
    x = generate_sparse_signal(SignalSpec(n, s, mix_seed(seed, 2)))
    return phi, x


def condition_c_gamma(delta: float, alpha: float = 0.5) -> float:
    """A step-length inside the condition-(c) interval that also keeps the
    per-iteration map contractive (gamma <= 1)."""
    lo = (1.0 - alpha / 2.0) / (1.0 - delta)
    hi = min(1.0, 1.0 / (1.0 - delta))
    assert lo < hi, f"need delta < {1 - (1 - alpha / 2):.2f}-ish, got {delta}"
    return 0.5 * (lo + hi)
