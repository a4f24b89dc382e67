import numpy as np
import pytest

from helpers import condition_c_gamma, well_conditioned_instance
from mfrkit import (
    ADAPTIVE,
    GAUSSIAN,
    DenseVector,
    EnsembleSpec,
    FrameBounds,
    Matrix,
    RankDeficientError,
    SignalSpec,
    SolverConfig,
    SparseVector,
    chebyshev_omega,
    frame_reconstruct,
    generate_matrix,
    generate_sparse_signal,
    least_squares_on_support,
    measure,
    mfr,
    mfr_accelerated,
    mfr_adaptive,
    mfr_least_squares,
    mfr_least_squares_accelerated,
    mix_seed,
    richardson_omega,
    rip_constant_exact,
    solve,
    spectral_extremes,
)


def planted_problem(seed, m, n, s):
    inst = mix_seed(seed, n, m, s, 0)
    phi = generate_matrix(EnsembleSpec(GAUSSIAN, m, n, mix_seed(inst, 1)))
    x = generate_sparse_signal(SignalSpec(n, s, mix_seed(inst, 2)))
    return phi, x, measure(phi, x)


# ---------------------------------------------------------------------------
# config and small operations

def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(s_hat=0, gamma=1.0)
    with pytest.raises(ValueError):
        SolverConfig(s_hat=2, gamma=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(s_hat=2, gamma="sometimes")
    with pytest.raises(ValueError):
        SolverConfig(s_hat=2, gamma=1.0, tol=0.0)
    cfg = SolverConfig(s_hat=2, gamma=ADAPTIVE)
    assert cfg.is_adaptive


def test_chebyshev_omega_examples():
    assert chebyshev_omega(1.0, 0.0) == pytest.approx(1.0)
    assert chebyshev_omega(1.0, 0.8) == pytest.approx(1.1904761904761905)
    assert chebyshev_omega(1.1904761904761905, 0.8) == pytest.approx(
        1.2352941176470589)
    with pytest.raises(ValueError):
        chebyshev_omega(1.0, 1.0)
    with pytest.raises(ValueError):
        chebyshev_omega(0.5, 0.5)


def test_chebyshev_sequence_converges_to_richardson_weight():
    mu = 0.8
    assert richardson_omega(mu) == pytest.approx(1.25)
    omega = 1.0
    seq = []
    for _ in range(60):
        omega = chebyshev_omega(omega, mu)
        seq.append(omega)
    assert all(b >= a - 1e-15 for a, b in zip(seq, seq[1:]))
    assert seq[-1] == pytest.approx(1.25, abs=1e-9)


def test_spectral_extremes_matches_svd_and_power_path():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(40, 25))
    sv = np.linalg.svd(a, compute_uv=False)
    smax, smin = spectral_extremes(a)
    assert smax == pytest.approx(sv[0], rel=1e-12)
    assert smin == pytest.approx(sv[-1], rel=1e-12)
    # Force the power-iteration path and compare against full SVD.
    import mfrkit.reconstruct as rec
    old = rec._FULL_SVD_LIMIT
    rec._FULL_SVD_LIMIT = 10
    try:
        smax2, smin2 = spectral_extremes(a)
    finally:
        rec._FULL_SVD_LIMIT = old
    assert smax2 == pytest.approx(sv[0], rel=1e-6)
    assert smin2 == pytest.approx(sv[-1], rel=1e-4)


def test_least_squares_on_support_identity():
    out = least_squares_on_support(np.eye(3), [1], [5.0, 7.0, 9.0])
    assert out.support.tolist() == [1]
    assert out.values[0] == pytest.approx(7.0)


def test_least_squares_on_support_hand_computed():
    phi = Matrix([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    out = least_squares_on_support(phi, [0, 1], [1.0, 1.0, 1.0])
    assert np.allclose(out.to_dense_array(), [2.0 / 3.0, 2.0 / 3.0])


def test_least_squares_on_support_exact_on_consistent_system():
    rng = np.random.default_rng(4)
    phi = rng.normal(size=(6, 10))
    z = np.array([1.5, -2.0])
    y = phi[:, [2, 7]] @ z
    out = least_squares_on_support(phi, [2, 7], y)
    assert np.allclose(out.values, z, atol=1e-10)
    resid = y - phi @ out.to_dense_array()
    assert np.linalg.norm(resid) < 1e-10


def test_least_squares_on_support_normal_equations():
    rng = np.random.default_rng(5)
    phi = rng.normal(size=(8, 12))
    y = rng.normal(size=8)
    supp = [1, 4, 9]
    out = least_squares_on_support(phi, supp, y)
    grad = phi[:, supp].T @ (y - phi @ out.to_dense_array())
    assert np.max(np.abs(grad)) < 1e-10 * np.linalg.norm(y)


def test_least_squares_on_support_rank_deficient():
    col = np.array([[1.0], [1.0], [0.0]])
    phi = np.hstack([col, col])
    with pytest.raises(RankDeficientError) as err:
        least_squares_on_support(phi, [0, 1], [1.0, 1.0, 0.0])
    assert err.value.rank == 1
    with pytest.raises(ValueError):
        # three columns cannot be independent with only two rows
        least_squares_on_support(np.ones((2, 4)), [0, 1, 2], [1.0, 1.0])


# ---------------------------------------------------------------------------
# plain solver

def test_mfr_identity_reaches_solution_in_one_update():
    x = SparseVector(6, [1, 4], [2.0, -3.0])
    y = measure(np.eye(6), x)
    cfg = SolverConfig(s_hat=2, gamma=1.0, record_iterates=True)
    res = mfr(np.eye(6), y, cfg)
    assert res.converged
    assert np.allclose(res.iterates[0], x.to_dense_array())
    assert res.iterations <= 2  # second pass certifies the stop rule
    assert np.array_equal(res.x_hat.support, x.support)


def test_mfr_zero_measurement():
    res = mfr(np.eye(5), np.zeros(5), SolverConfig(s_hat=2, gamma=1.0))
    assert res.converged
    assert res.iterations == 1
    assert res.x_hat.nnz == 0


def test_mfr_geometric_decay_under_condition_c():
    phi, x = well_conditioned_instance(4001, 600, 12, 2)
    delta = rip_constant_exact(phi, 4).delta
    gamma = condition_c_gamma(delta)
    res = mfr(phi, measure(phi, x),
              SolverConfig(s_hat=2, gamma=gamma, tol=1e-12, max_iter=200,
                           record_iterates=True))
    xd = x.to_dense_array()
    for k, xk in enumerate(res.iterates, start=1):
        assert np.linalg.norm(xd - xk) <= 0.5 ** k * np.linalg.norm(xd) + 1e-9


def test_mfr_nonconvergence_reported_not_raised():
    # A step far outside the stable region must not crash the solver.
    phi, x, y = planted_problem(3, 20, 60, 3)
    res = mfr(phi, y, SolverConfig(s_hat=3, gamma=50.0, max_iter=50))
    assert not res.converged
    assert res.iterations <= 50


def test_mfr_dimension_mismatch():
    with pytest.raises(ValueError):
        mfr(np.eye(4), np.ones(3), SolverConfig(s_hat=1, gamma=1.0))
    with pytest.raises(ValueError):
        mfr(np.eye(4), np.ones(4), SolverConfig(s_hat=9, gamma=1.0))


def test_mfr_requires_fixed_gamma():
    with pytest.raises(ValueError):
        mfr(np.eye(4), np.ones(4), SolverConfig(s_hat=2, gamma=ADAPTIVE))


def test_mfr_scaling_equivalence():
    # Rescaling (Phi, y) by 1/c is the same algorithm with gamma / c^2:
    # the update gamma * (Phi/c)^T (y/c - (Phi/c) x) == (gamma/c^2) * Phi^T (y - Phi x).
    phi, x, y = planted_problem(5, 8, 20, 2)
    c = 1.0 + rip_constant_exact(phi, 2).delta
    cfg_scaled = SolverConfig(s_hat=2, gamma=1.0, tol=1e-10, max_iter=60,
                              record_iterates=True)
    cfg_plain = SolverConfig(s_hat=2, gamma=1.0 / c ** 2, tol=1e-10, max_iter=60,
                             record_iterates=True)
    res_scaled = mfr(Matrix(phi.entries / c), DenseVector(y.values / c), cfg_scaled)
    res_plain = mfr(phi, y, cfg_plain)
    assert res_scaled.iterations == res_plain.iterations
    for u, v in zip(res_scaled.iterates, res_plain.iterates):
        assert np.allclose(u, v, atol=1e-10)


def test_mfr_converged_iterate_satisfies_restricted_normal_equations():
    phi, x, y = planted_problem(55, 60, 200, 4)
    res = mfr(phi, y, SolverConfig(s_hat=4, gamma=0.4, tol=1e-13, max_iter=5000))
    assert res.converged
    xh = res.x_hat.to_dense_array()
    proj = np.zeros(200)
    proj[res.x_hat.support] = 1.0
    gram = phi.entries.T @ phi.entries
    lhs = proj * (gram @ x.to_dense_array())
    rhs = proj * (gram @ (proj * xh))
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_solve_result_json_contract():
    phi, x, y = planted_problem(9, 10, 24, 2)
    res = mfr(phi, y, SolverConfig(s_hat=2, gamma=0.8))
    doc = res.to_json_dict()
    assert set(doc) == {"algorithm", "config", "iterations", "converged",
                        "residual_l2", "residual_trace",
                        "iterate_delta_trace", "x_hat"}
    assert doc["algorithm"] == "mfr"
    assert len(doc["residual_trace"]) == doc["iterations"]
    assert all(i >= 1 for i in doc["x_hat"]["support"])  # 1-based externally
    if res.converged:
        assert res.iterate_delta_trace[-1] < res.config.tol


# ---------------------------------------------------------------------------
# accelerated solver

def test_accelerated_reduces_to_plain_when_mu_is_zero():
    # Scaled orthogonal matrix: sigma_max == sigma_min, so mu == 0 and the
    # two-term recurrence collapses onto the plain iteration at gamma = 1.
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(12, 12)))
    phi = Matrix(0.8 * q)
    x = generate_sparse_signal(SignalSpec(12, 3, 9))
    y = measure(phi, x)
    cfg = SolverConfig(s_hat=3, gamma=1.0, tol=1e-10, max_iter=100,
                       record_iterates=True)
    plain = mfr(phi, y, cfg)
    accel = mfr_accelerated(phi, y, cfg)
    assert plain.iterations == accel.iterations
    for u, v in zip(plain.iterates, accel.iterates):
        assert np.allclose(u, v, atol=1e-9)


def test_accelerated_rejects_rank_deficient_matrix():
    bad = np.array([[1.0, 2.0, 0.5], [2.0, 4.0, 1.0], [3.0, 6.0, 1.5]])
    with pytest.raises(ValueError, match="plain mfr"):
        mfr_accelerated(bad, np.ones(3), SolverConfig(s_hat=1, gamma=0.5))


def test_accelerated_recovers_planted_signal():
    phi, x, y = planted_problem(21, 100, 200, 5)
    res = mfr_accelerated(phi, y, SolverConfig(s_hat=5, gamma=0.3, max_iter=2000))
    assert res.converged
    assert np.array_equal(res.x_hat.support, x.support)
    assert np.allclose(res.x_hat.values, x.values, atol=1e-5)


def test_accelerated_richardson_variant_also_converges():
    phi, x, y = planted_problem(22, 100, 200, 5)
    cfg = SolverConfig(s_hat=5, gamma=0.3, max_iter=2000,
                       richardson_fixed_omega=True)
    res = mfr_accelerated(phi, y, cfg)
    assert res.converged
    assert np.array_equal(res.x_hat.support, x.support)


def test_acceleration_speeds_up_unthresholded_least_squares():
    # With thresholding disabled (s_hat = n) the iteration is a linear
    # solver; on spread spectra (mu >= 0.5) the accelerated variant takes
    # no more iterations than the plain one at the same gamma.
    rng = np.random.default_rng(100)
    checked = 0
    for i in range(8):
        a = rng.normal(size=(60, 20)) / np.sqrt(60)
        sv = np.linalg.svd(a, compute_uv=False)
        mu = (sv[0] ** 2 - sv[-1] ** 2) / (sv[0] ** 2 + sv[-1] ** 2)
        if mu < 0.5:
            continue
        x = rng.normal(size=20)
        y = a @ x
        gamma = 2.0 / (sv[0] ** 2 + sv[-1] ** 2)
        cfg = SolverConfig(s_hat=20, gamma=gamma, tol=1e-10, max_iter=4000)
        assert mfr_accelerated(a, y, cfg).iterations <= mfr(a, y, cfg).iterations
        checked += 1
    assert checked >= 5


# ---------------------------------------------------------------------------
# least-squares variant

def test_ls_variant_matches_plain_on_identity():
    x = SparseVector(6, [0, 3], [1.5, -2.5])
    y = measure(np.eye(6), x)
    cfg = SolverConfig(s_hat=2, gamma=1.0)
    plain = mfr(np.eye(6), y, cfg)
    with_ls = mfr_least_squares(np.eye(6), y, cfg)
    assert np.array_equal(plain.x_hat.support, with_ls.x_hat.support)
    assert np.allclose(plain.x_hat.values, with_ls.x_hat.values, atol=1e-12)


def test_ls_variant_normal_equations_after_refit():
    phi, x, y = planted_problem(31, 50, 120, 4)
    states = []
    cfg = SolverConfig(s_hat=6, gamma=0.4, max_iter=500)
    res = mfr_least_squares(phi, y, cfg, on_iteration=states.append)
    assert res.converged
    # the final iterate came from an LS solve on its support
    xh = res.x_hat
    grad = phi.entries[:, xh.support].T @ (y.values
                                           - phi.entries[:, xh.support] @ xh.values)
    assert np.max(np.abs(grad)) <= 1e-8 * max(1.0, np.linalg.norm(y.values))


def test_ls_variant_counts_rank_deficient_fallbacks():
    col = np.array([[1.0], [2.0], [1.0], [0.5]])
    phi = Matrix(np.hstack([col, col, np.eye(4)[:, :2]]))
    y = [1.0, 2.0, 1.0, 0.5]
    res = mfr_least_squares(phi, y, SolverConfig(s_hat=2, gamma=0.3, max_iter=50))
    assert res.rank_deficient_events >= 1


def test_ls_variant_recovers_and_is_fast():
    phi, x, y = planted_problem(32, 100, 400, 8)
    res = mfr_least_squares(phi, y, SolverConfig(s_hat=8, gamma=0.65, max_iter=500))
    assert res.converged
    assert np.array_equal(res.x_hat.support, x.support)
    assert np.allclose(res.x_hat.values, x.values, atol=1e-9)
    assert res.iterations <= 20


def test_combined_ls_acceleration_recovers():
    phi, x, y = planted_problem(33, 100, 400, 8)
    res = mfr_least_squares_accelerated(
        phi, y, SolverConfig(s_hat=8, gamma=0.3, max_iter=1000))
    assert res.converged
    assert np.array_equal(res.x_hat.support, x.support)


# ---------------------------------------------------------------------------
# adaptive step-length

def test_adaptive_requires_adaptive_gamma():
    with pytest.raises(ValueError):
        mfr_adaptive(np.eye(4), np.ones(4), SolverConfig(s_hat=2, gamma=0.5))


def test_adaptive_identity_converges_immediately():
    x = SparseVector(8, [2, 5], [1.0, -4.0])
    y = measure(np.eye(8), x)
    res = mfr_adaptive(np.eye(8), y, SolverConfig(s_hat=2, gamma=ADAPTIVE,
                                                  record_iterates=True))
    assert res.converged
    assert np.allclose(res.iterates[0], x.to_dense_array(), atol=1e-6)
    assert res.iterations <= 3


def test_adaptive_residual_trace_never_increases():
    for seed in range(30):
        phi, x, y = planted_problem(600 + seed, 30, 100, 3)
        res = mfr_adaptive(phi, y, SolverConfig(s_hat=6, gamma=ADAPTIVE,
                                                max_iter=300))
        trace = res.residual_trace
        assert np.all(np.diff(trace) <= 1e-12)


def test_adaptive_beats_fixed_half_on_seeded_problem():
    phi, x, y = planted_problem(123, 100, 400, 6)
    adaptive = mfr_adaptive(phi, y, SolverConfig(s_hat=6, gamma=ADAPTIVE,
                                                 max_iter=3000))
    fixed = mfr(phi, y, SolverConfig(s_hat=6, gamma=0.5, max_iter=3000))
    assert adaptive.converged and fixed.converged
    assert adaptive.iterations <= fixed.iterations


# ---------------------------------------------------------------------------
# frame iteration

def test_frame_tight_frame_exact_in_one_update():
    rng = np.random.default_rng(8)
    q, _ = np.linalg.qr(rng.normal(size=(7, 7)))
    phi = Matrix(2.0 * q)  # A == B == 4
    x = rng.normal(size=7)
    y = phi.entries @ x
    res = frame_reconstruct(phi, y, record_iterates=True)
    assert res.converged
    assert np.allclose(res.iterates[0], x, atol=1e-12)


def test_frame_contraction_rate_with_known_spectrum():
    # Phi^T Phi with eigenvalues {1, 3}: contraction (B - A) / (B + A) = 1/2.
    rng = np.random.default_rng(9)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    phi = Matrix(q @ np.diag([1.0, np.sqrt(3.0)]) @ q.T)
    x = rng.normal(size=2)
    y = phi.entries @ x
    res = frame_reconstruct(phi, y, bounds=FrameBounds(1.0, 3.0),
                            tol=1e-13, max_iter=200, record_iterates=True)
    for k, xk in enumerate(res.iterates, start=1):
        assert np.linalg.norm(x - xk) <= 0.5 ** k * np.linalg.norm(x) + 1e-12


def test_frame_zero_measurement():
    res = frame_reconstruct(np.eye(4), np.zeros(4))
    assert res.converged
    assert res.x_hat.nnz == 0


def test_frame_rejects_wide_or_singular():
    with pytest.raises(ValueError):
        frame_reconstruct(np.ones((2, 3)), np.ones(2))
    singular = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        frame_reconstruct(singular, np.ones(2))


def test_frame_bounds_validation():
    with pytest.raises(ValueError):
        FrameBounds(0.0, 1.0)
    with pytest.raises(ValueError):
        FrameBounds(2.0, 1.0)
    assert FrameBounds(1.0, 3.0).mu == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# noise robustness and dispatch

def test_noise_bound_from_main_theorem():
    phi, x = well_conditioned_instance(4002, 600, 12, 2)
    delta = rip_constant_exact(phi, 4).delta
    gamma = condition_c_gamma(delta)
    rng = np.random.default_rng(17)
    e = rng.normal(0.0, 1e-3, size=600)
    y = measure(phi, x, e)
    res = mfr(phi, y, SolverConfig(s_hat=2, gamma=gamma, tol=1e-10, max_iter=200))
    err = np.linalg.norm(x.to_dense_array() - res.x_hat.to_dense_array())
    bound = (2.0 ** -res.iterations * np.linalg.norm(x.values)
             + 4.0 * gamma * np.sqrt(1 + delta) * np.linalg.norm(e))
    assert err <= bound * (1 + 1e-6)


def test_solve_dispatch_by_name_and_flags():
    phi, x, y = planted_problem(40, 30, 60, 3)
    cfg = SolverConfig(s_hat=3, gamma=0.5)
    assert solve(phi, y, cfg).algorithm == "mfr"
    assert solve(phi, y, cfg, algorithm="mfr_ls").algorithm == "mfr_ls"
    flags = SolverConfig(s_hat=3, gamma=0.5, accelerate=True, least_squares=True)
    assert solve(phi, y, flags).algorithm == "mfr_ls_accel"
    adaptive = SolverConfig(s_hat=3, gamma=ADAPTIVE)
    assert solve(phi, y, adaptive).algorithm == "mfr_adaptive"
    with pytest.raises(ValueError):
        solve(phi, y, cfg, algorithm="omp")
    tall = np.random.default_rng(1).normal(size=(12, 6))
    y_tall = tall @ np.ones(6)
    assert solve(tall, y_tall, SolverConfig(s_hat=6, gamma=0.5),
                 algorithm="frame").algorithm == "frame"


def test_iteration_state_residual_recomputable():
    phi, x, y = planted_problem(41, 20, 50, 2)
    states = []
    mfr(phi, y, SolverConfig(s_hat=2, gamma=0.5, max_iter=50),
        on_iteration=states.append)
    assert states
    for st in states[:5]:
        recomputed = y.values - phi.entries @ st.x_k.to_dense_array()
        assert np.allclose(recomputed, st.residual.values, atol=1e-12)
        assert st.support_k.size <= 2
