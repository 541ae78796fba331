import numpy as np
import pytest

import gramsketch as gs
from gramsketch.errors import ParamError


def measured_eps(a, spec):
    u, _, _ = np.linalg.svd(a, full_matrices=False)
    return gs.jlt_error(gs.apply_sketch(spec, u), u)


class TestRegressL2:
    def test_consistent_system_recovered(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((200, 6))
        x0 = rng.standard_normal(6)
        res = gs.sketch_regress_l2(a, a @ x0, gs.SketchSpec("srht", 64, seed=1))
        assert res.full_cost <= 1e-8

    def test_cost_ratio_bound(self):
        rng = np.random.default_rng(1)
        for seed in range(5):
            a = rng.standard_normal((500, 8))
            b = rng.standard_normal(500)
            spec = gs.SketchSpec("srht", 128, seed=seed)
            res = gs.sketch_regress_l2(a, b, spec)
            opt = np.linalg.norm(a @ np.linalg.lstsq(a, b, rcond=None)[0] - b) ** 2
            x_big = np.hstack([a, -b[:, None]])
            eps = gs.measure_l2_distortion(x_big, gs.gram_sqrt(x_big, spec))
            assert eps < 1.0
            assert res.full_cost <= (1.0 + eps) / (1.0 - eps) * opt + 1e-9

    def test_multiple_rhs_matches_per_column(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((120, 5))
        b = rng.standard_normal((120, 3))
        spec = gs.SketchSpec("identity", 120)
        joint = gs.sketch_regress_l2(a, b, spec)
        for j in range(3):
            single = gs.sketch_regress_l2(a, b[:, j], spec)
            assert np.abs(joint.x[:, j] - single.x).max() <= 1e-8

    def test_sandwich_on_sketched_cost(self):
        # the sketched solution is optimal for the sketched problem
        rng = np.random.default_rng(3)
        a = rng.standard_normal((150, 5))
        b = rng.standard_normal(150)
        spec = gs.SketchSpec("srht", 64, seed=4)
        res = gs.sketch_regress_l2(a, b, spec)
        x_star = np.linalg.lstsq(a, b, rcond=None)[0]
        x_big = np.hstack([a, -b[:, None]])
        stacked = gs.gram_sqrt(x_big, spec)
        a_t, b_t = stacked[:, :5], -stacked[:, 5]
        assert res.sketched_cost <= np.linalg.norm(a_t @ x_star - b_t) ** 2 + 1e-9

    def test_ridge_hook(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((100, 4))
        b = rng.standard_normal(100)
        res = gs.sketch_regress_l2(a, b, gs.SketchSpec("identity", 100),
                                   solver=gs.ridge_solver(2.0))
        # exact ridge solution via the normal equations
        x_ref = np.linalg.solve(a.T @ a + 2.0 * np.eye(4), a.T @ b)
        assert np.abs(res.x - x_ref).max() <= 1e-6

    def test_nonneg_hook(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((80, 3))
        x0 = np.array([1.0, 0.0, 2.0])
        res = gs.sketch_regress_l2(a, a @ x0, gs.SketchSpec("identity", 80),
                                   solver=gs.nonneg_solver)
        assert np.all(res.x >= 0.0)
        assert res.full_cost <= 1e-6


class TestApproxPca:
    def test_k_equals_d_is_exact(self):
        a = np.random.default_rng(6).standard_normal((60, 5))
        _, a_hat = gs.approx_pca(a, 5, gs.SketchSpec("srht", 32, seed=7))
        assert np.abs(a_hat - a).max() <= 1e-8

    def test_exact_rank_k(self):
        rng = np.random.default_rng(7)
        base = rng.standard_normal((50, 3)) @ rng.standard_normal((3, 8))
        _, a_hat = gs.approx_pca(base, 3, gs.SketchSpec("srht", 32, seed=8))
        assert np.linalg.norm(base - a_hat, 2) <= 1e-8 * np.linalg.norm(base, 2)

    def test_spectral_ratio_bound(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((512, 16))
        spec = gs.SketchSpec("srht", 128, seed=9)
        eps = measured_eps(a, spec)
        assert eps < 1.0
        s = np.linalg.svd(a, compute_uv=False)
        for k in (1, 4, 8):
            _, a_hat = gs.approx_pca(a, k, spec)
            err = np.linalg.norm(a - a_hat, 2) ** 2
            assert err <= (1.0 + eps) / (1.0 - eps) * s[k] ** 2 + 1e-9

    def test_monotone_in_k(self):
        a = np.random.default_rng(9).standard_normal((100, 8))
        spec = gs.SketchSpec("srht", 64, seed=10)
        errs = [np.linalg.norm(a - gs.approx_pca(a, k, spec)[1], 2)
                for k in range(1, 9)]
        assert all(e1 >= e2 - 1e-12 for e1, e2 in zip(errs, errs[1:]))

    def test_k_out_of_range(self):
        a = np.random.default_rng(10).standard_normal((20, 4))
        with pytest.raises(ParamError):
            gs.approx_pca(a, 0)
        with pytest.raises(ParamError):
            gs.approx_pca(a, 5)


class TestApproxLeverage:
    def test_orthonormal_exact(self):
        q, _ = np.linalg.qr(np.random.default_rng(11).standard_normal((40, 6)))
        scores = gs.approx_leverage(q, spec=gs.SketchSpec("identity", 40))
        assert np.abs(scores.tau - (q * q).sum(1)).max() <= 1e-12

    def test_trace_is_d(self):
        a = np.random.default_rng(12).standard_normal((80, 7))
        scores = gs.approx_leverage(a, spec=gs.SketchSpec("identity", 80))
        assert scores.tau.sum() == pytest.approx(7.0, abs=1e-8)
        assert np.all(scores.tau >= 0.0)

    def test_relative_error_bound_with_measured_eps(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((400, 8))
        spec = gs.SketchSpec("srht", 128, seed=14)
        eps = measured_eps(a, spec)
        assert eps < 1.0
        scores = gs.approx_leverage(a, spec=spec)
        u, _, _ = np.linalg.svd(a, full_matrices=False)
        tau = (u * u).sum(1)
        rel = np.abs(scores.tau - tau) / tau
        assert rel.max() <= eps / (1.0 - eps) + 1e-8

    def test_gaussian_compression_close(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal((300, 5))
        spec = gs.SketchSpec("identity", 300)
        exact = gs.approx_leverage(a, spec=spec).tau
        noisy = gs.approx_leverage(a, spec=spec, jl_cols=4000,
                                   rng=gs.Rng(15)).tau
        assert np.all(noisy >= 0.0)
        assert np.abs(noisy - exact).max() <= 0.25 * exact.max()

    def test_sum_window(self):
        a = np.random.default_rng(15).standard_normal((128, 6))
        spec = gs.SketchSpec("srht", 64, seed=16)
        eps = measured_eps(a, spec)
        scores = gs.approx_leverage(a, eps=eps, spec=spec)
        total = scores.tau.sum()
        assert 6.0 * (1.0 - 3.0 * eps) <= total <= 6.0 * (1.0 + 3.0 * eps)

    def test_quarter_eps_default_bound(self):
        # with the default quarter-distortion sketch the relative error
        # stays below eps/(1-eps) = 1/3
        a = np.random.default_rng(16).standard_normal((2000, 10))
        scores = gs.approx_leverage(a, eps=0.25, jl_cols=0)
        u, _, _ = np.linalg.svd(a, full_matrices=False)
        tau = (u * u).sum(1)
        assert (np.abs(scores.tau - tau) / tau).max() <= 1.0 / 3.0

    def test_jl_col_defaults(self):
        assert gs.default_jl_cols(0.25, 1000) == 8 * int(np.ceil(np.log(1000) / 0.0625))
        assert gs.lewis_jl_cols(1000) == int(np.ceil(300 * np.log(1000)))
        with pytest.raises(ParamError):
            gs.default_jl_cols(1.5, 100)
