import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxem.errors import DegenerateStatistics, DimensionMismatch, InvalidConfig, SingularCovariance
from approxem.experiments import make_family
from approxem.models import (
    BetaGaussian1D,
    BetaGaussian2D,
    BetaGaussParams1D,
    BetaGaussParams2D,
    Dataset,
    GaussianMixture,
    GmmParams,
    bg_complete_likelihood,
    gmm_m_step,
    gmm_neg_log_likelihood,
    gmm_responsibilities,
    params_from_text,
    params_to_text,
    read_dataset_csv,
    simulate,
    write_dataset_csv,
)
from approxem.rng import make_rng

from conftest import random_gmm

LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def gmm_1d(w, mu, var):
    return GmmParams(w, np.array(mu, dtype=float)[:, None], np.array(var, dtype=float)[:, None, None])


class TestResponsibilities:
    def test_identical_components(self):
        theta = gmm_1d([0.5, 0.5], [1.0, 1.0], [2.0, 2.0])
        np.testing.assert_allclose(gmm_responsibilities(theta, Dataset(np.linspace(-3, 3, 7))), 0.5, atol=1e-15)

    def test_single_component(self):
        theta = gmm_1d([1.0], [0.0], [1.0])
        np.testing.assert_array_equal(gmm_responsibilities(theta, Dataset(np.array([-5.0, 0.0, 7.0]))), 1.0)

    def test_density_ratio(self):
        theta = gmm_1d([0.5, 0.5], [0.0, 4.0], [1.0, 1.0])
        r = gmm_responsibilities(theta, Dataset(np.array([2.0, 0.0])))
        np.testing.assert_allclose(r[0], [0.5, 0.5], atol=1e-15)
        e = math.exp(-8.0)
        np.testing.assert_allclose(r[1], [1 / (1 + e), e / (1 + e)], rtol=1e-14)

    def test_far_points_do_not_underflow(self):
        theta = gmm_1d([0.5, 0.5], [0.0, 1.0], [1e-2, 1e-2])
        r = gmm_responsibilities(theta, Dataset(np.array([500.0])))
        assert np.all(np.isfinite(r)) and r[0, 1] == pytest.approx(1.0)

    def test_singular_covariance(self):
        theta = GmmParams([1.0], [[0.0, 0.0]], [[[1.0, 1.0], [1.0, 1.0]]])
        with pytest.raises(SingularCovariance):
            gmm_responsibilities(theta, Dataset(np.zeros((2, 2))))

    def test_dimension_mismatch(self):
        theta = GmmParams([1.0], [[0.0, 0.0]], [np.eye(2)])
        with pytest.raises(DimensionMismatch):
            gmm_responsibilities(theta, Dataset(np.zeros((2, 3))))


@given(seed=st.integers(0, 10**6), K=st.integers(1, 6), p=st.integers(1, 3))
def test_responsibility_rows_sum_to_one(seed, K, p):
    rng = make_rng(seed, 0)
    theta = random_gmm(rng, K, p)
    x = rng.normal(0, 6, (50, p))
    np.testing.assert_allclose(gmm_responsibilities(theta, Dataset(x)).sum(axis=1), 1.0, atol=1e-12)


class TestMStep:
    def test_single_column(self):
        rng = make_rng(1, 0)
        x = rng.standard_normal((40, 2))
        out = gmm_m_step(np.ones((40, 1)), Dataset(x))
        np.testing.assert_allclose(out.means[0], x.mean(axis=0), atol=1e-14)
        np.testing.assert_allclose(out.covariances[0], np.cov(x, rowvar=False, bias=True), atol=1e-14)

    def test_hard_assignments(self):
        rng = make_rng(2, 0)
        x = rng.standard_normal((30, 2))
        lab = np.arange(30) % 3
        out = gmm_m_step(np.eye(3)[lab], Dataset(x))
        for k in range(3):
            xs = x[lab == k]
            np.testing.assert_allclose(out.means[k], xs.mean(axis=0), atol=1e-14)
            np.testing.assert_allclose(out.covariances[k], np.cov(xs, rowvar=False, bias=True), atol=1e-14)
            assert out.weights[k] == pytest.approx(1 / 3)

    def test_weighted_moment_oracle(self):
        rng = make_rng(3, 0)
        x = rng.standard_normal(5)
        a = rng.random(5)
        resp = np.column_stack([a, 1 - a])
        out = gmm_m_step(resp, Dataset(x))
        for k in range(2):
            r = resp[:, k]
            nk = 0.0
            sx = 0.0
            for ri, xi in zip(r, x):
                nk += ri
                sx += ri * xi
            m = sx / nk
            v = sum(ri * (xi - m) ** 2 for ri, xi in zip(r, x)) / nk
            assert out.weights[k] == pytest.approx(nk / 5, abs=1e-12)
            assert out.means[k, 0] == pytest.approx(m, abs=1e-12)
            assert out.covariances[k, 0, 0] == pytest.approx(v, abs=1e-12)

    def test_empty_column_is_degenerate(self):
        resp = np.column_stack([np.ones(4), np.zeros(4)])
        with pytest.raises(DegenerateStatistics):
            gmm_m_step(resp, Dataset(np.arange(4.0)))

    def test_eigenvalue_floor(self):
        resp = np.column_stack([np.ones(3), np.full(3, 1e-3)])
        resp /= resp.sum(axis=1, keepdims=True)
        with pytest.raises(DegenerateStatistics):
            gmm_m_step(resp, Dataset(np.ones(3)))

    def test_stationary_point_of_expected_loglik(self):
        rng = make_rng(4, 0)
        x = rng.standard_normal((60, 2))
        resp = rng.dirichlet(np.ones(3), 60)
        model = GaussianMixture(3, 2)
        s = model.expected_stat_from_weights(resp, Dataset(x))
        best = gmm_m_step(resp, Dataset(x))

        def q(theta):
            return model.psi(theta) + s @ model.phi(theta)

        base = q(best)
        v = best.flat()
        for i in range(v.size):
            for h in (1e-4, -1e-4):
                w = v.copy()
                w[i] += h
                th = model.param_from_flat(w)
                if i < 3:  # keep the weights on the simplex
                    th = GmmParams(th.weights / th.weights.sum(), th.means, th.covariances)
                assert q(th) <= base + 1e-12


class TestGmmNll:
    def test_standard_normal_at_mode(self):
        assert gmm_neg_log_likelihood(gmm_1d([1.0], [0.0], [1.0]), Dataset(np.array([0.0]))) == pytest.approx(
            LOG_SQRT_2PI, abs=1e-15)

    def test_duplicate_component(self):
        x = Dataset(make_rng(5, 0).standard_normal(20))
        one = gmm_1d([1.0], [0.3], [1.7])
        two = gmm_1d([0.5, 0.5], [0.3, 0.3], [1.7, 1.7])
        assert gmm_neg_log_likelihood(two, x) == pytest.approx(gmm_neg_log_likelihood(one, x), abs=1e-12)

    def test_direct_sum_oracle(self):
        truth = make_family(1)
        data = simulate(truth, 500, make_rng(7, 0))
        total = 0.0
        for xi in data.x:
            dens = 0.0
            for k in range(3):
                d = xi - truth.means[k]
                S = truth.covariances[k]
                dens += truth.weights[k] * math.exp(-0.5 * d @ np.linalg.solve(S, d)) / (
                    2 * math.pi * math.sqrt(np.linalg.det(S)))
            total -= math.log(dens)
        assert gmm_neg_log_likelihood(truth, data) == pytest.approx(total, abs=1e-10)


@given(seed=st.integers(0, 10**6), K=st.integers(1, 5), p=st.integers(1, 3))
def test_gmm_exponential_family_split(seed, K, p):
    rng = make_rng(seed, 0)
    theta = random_gmm(rng, K, p)
    model = GaussianMixture(K, p)
    for _ in range(5):
        z = int(rng.integers(K))
        x = rng.normal(0, 3, p)
        split = model.psi(theta) + model.sufficient_stat(z, x) @ model.phi(theta)
        assert split == pytest.approx(model.log_complete_likelihood_direct(z, theta, x), abs=1e-10)


@given(seed=st.integers(0, 10**6), K=st.integers(1, 4), p=st.integers(1, 2))
def test_generic_statistics_match_specialised_m_step(seed, K, p):
    rng = make_rng(seed, 0)
    theta = random_gmm(rng, K, p)
    data = Dataset(rng.normal(0, 4, (80, p)))
    model = GaussianMixture(K, p)
    generic = model.m_step(model.exact_expected_stat(theta, data))
    direct = gmm_m_step(gmm_responsibilities(theta, data), data)
    np.testing.assert_allclose(generic.flat(), direct.flat(), rtol=0, atol=1e-12)


class TestBetaGaussLikelihood:
    def test_uniform_prior_standard_normal(self):
        th = BetaGaussParams1D(1.0, 0.0, 1.0)
        np.testing.assert_allclose(bg_complete_likelihood(th, np.array([0.0, 0.3, 1.0]), 0.0), -LOG_SQRT_2PI)

    def test_plug_in(self):
        assert bg_complete_likelihood(BetaGaussParams1D(2.0, 0.0, 1.0), 1.0, 0.0) == pytest.approx(
            math.log(2) - LOG_SQRT_2PI, abs=1e-15)

    def test_high_precision_value(self, oracle_quadrature):
        got = bg_complete_likelihood(BetaGaussParams1D(2.0, 5.0, 2.25), 0.3, 1.2)
        assert got == pytest.approx(oracle_quadrature["log_h_2_5_1.5_z0.3_x1.2"], abs=1e-14)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidConfig):
            BetaGaussParams1D(-1.0, 0.0, 1.0).validate()


@given(
    alpha=st.floats(0.1, 10), lam=st.floats(-10, 10), s2=st.floats(0.05, 20),
    z=st.floats(1e-6, 1.0), x=st.floats(-20, 20),
)
def test_bg1d_exponential_family_split(alpha, lam, s2, z, x):
    model = BetaGaussian1D()
    th = BetaGaussParams1D(alpha, lam, s2)
    split = model.psi(th) + model.sufficient_stat(z, x) @ model.phi(th)
    assert split == pytest.approx(model.log_complete_likelihood_direct(z, th, x), abs=1e-9)


@given(
    a=st.tuples(st.floats(0.1, 8), st.floats(0.1, 8)), lam=st.tuples(st.floats(-10, 10), st.floats(-10, 10)),
    s2=st.tuples(st.floats(0.1, 10), st.floats(0.1, 10)), z=st.tuples(st.floats(1e-4, 1), st.floats(1e-4, 1)),
    x=st.tuples(st.floats(-15, 15), st.floats(-15, 15)),
)
def test_bg2d_exponential_family_split(a, lam, s2, z, x):
    model = BetaGaussian2D()
    th = BetaGaussParams2D(a[0], a[1], lam[0], lam[1], s2[0], s2[1])
    split = model.psi(th) + model.sufficient_stat(z, np.array(x)) @ model.phi(th)
    assert split == pytest.approx(model.log_complete_likelihood_direct(z, th, np.array(x)), abs=1e-9)


class TestBetaGaussMStep:
    def test_complete_data_maximum_likelihood(self):
        rng = make_rng(8, 0)
        z = rng.random(300) ** 0.5
        x = 5 * z + 1.5 * rng.standard_normal(300)
        s = np.mean([BetaGaussian1D().sufficient_stat(zi, xi) for zi, xi in zip(z, x)], axis=0)
        th = BetaGaussian1D().m_step(s)
        lam = np.sum(x * z) / np.sum(z * z)
        assert th.alpha == pytest.approx(-1 / np.mean(np.log(z)), rel=1e-12)
        assert th.lam == pytest.approx(lam, rel=1e-12)
        assert th.sigma2 == pytest.approx(np.mean((x - lam * z) ** 2), rel=1e-10)

    def test_bad_statistics(self):
        with pytest.raises(DegenerateStatistics):
            BetaGaussian1D().m_step(np.array([0.1, 1.0, 0.5, 2.0]))

    def test_2d_complete_data(self):
        rng = make_rng(9, 0)
        z1, z2 = rng.random(200), rng.random(200) ** (1 / 3)
        x1 = 4 * z1 + z2 + 0.5 * rng.standard_normal(200)
        x2 = z1 - 2 * z2 + 0.7 * rng.standard_normal(200)
        m = BetaGaussian2D()
        s = np.mean([m.sufficient_stat((a, b), np.array([c, d])) for a, b, c, d in zip(z1, z2, x1, x2)], axis=0)
        th = m.m_step(s)
        lam1 = np.sum((x1 - z2) * z1) / np.sum(z1 * z1)
        lam2 = np.sum((x2 - z1) * z2) / np.sum(z2 * z2)
        assert th.lam1 == pytest.approx(lam1, rel=1e-12)
        assert th.lam2 == pytest.approx(lam2, rel=1e-12)
        assert th.sigma2_1 == pytest.approx(np.mean((x1 - lam1 * z1 - z2) ** 2), rel=1e-10)
        assert th.sigma2_2 == pytest.approx(np.mean((x2 - z1 - lam2 * z2) ** 2), rel=1e-10)
        assert th.alpha2 == pytest.approx(-1 / np.mean(np.log(z2)), rel=1e-12)


class TestBetaGaussNll:
    @pytest.mark.parametrize("alpha", [0.1, 0.7, 2.0, 6.0])
    def test_1d_against_adaptive_quadrature(self, alpha):
        from scipy.integrate import quad

        th = BetaGaussParams1D(alpha, 4.0, 1.3)
        xs = np.array([-1.0, 0.5, 2.0, 4.5])
        ref = 0.0
        for x in xs:
            f = lambda z: math.exp(float(bg_complete_likelihood(th, z, x)))  # noqa: E731
            val, _ = quad(f, 0, 1, limit=200, points=[1e-8, 1e-4, 1e-2])
            ref -= math.log(val)
        assert BetaGaussian1D().observed_neg_log_lik(th, Dataset(xs)) == pytest.approx(ref, rel=1e-9)

    def test_2d_against_adaptive_quadrature(self):
        from scipy.integrate import dblquad

        from approxem.models import bg2d_complete_likelihood

        th = BetaGaussParams2D(1.5, 3.0, 10.0, -10.0, 4.0, 9.0)
        x = (2.0, -2.0)
        val, _ = dblquad(lambda z2, z1: math.exp(float(bg2d_complete_likelihood(th, z1, z2, *x))), 0, 1, 0, 1,
                         epsabs=1e-13, epsrel=1e-11)
        got = BetaGaussian2D().observed_neg_log_lik(th, Dataset(np.array([x])))
        assert got == pytest.approx(-math.log(val), rel=1e-8)


class TestSimulate:
    def test_deterministic(self):
        th = make_family(2)
        a = simulate(th, 300, make_rng(42, 0, 0))
        b = simulate(th, 300, make_rng(42, 0, 0))
        assert a.x.tobytes() == b.x.tobytes() and a.labels.tobytes() == b.labels.tobytes()

    def test_class_frequencies(self):
        th = make_family(1)
        d = simulate(th, 10**5, make_rng(1, 0))
        freq = np.bincount(d.labels, minlength=3) / d.N
        band = 4 * np.sqrt(th.weights * (1 - th.weights) / d.N)
        assert np.all(np.abs(freq - th.weights) < band)

    def test_beta_mean(self):
        d = simulate(BetaGaussParams1D(2.0, 1.0, 1e-12), 10**5, make_rng(2, 0))
        # with σ → 0 the observations are λ z, so their mean estimates α / (α + 1)
        se = np.sqrt(1 / 18 / 10**5)  # Beta(2, 1) variance is 1/18
        assert abs(d.x.mean() - 2 / 3) < 4 * se

    def test_concentration(self):
        d = simulate(BetaGaussParams1D(1e6, 3.0, 1e-12), 1000, make_rng(3, 0))
        np.testing.assert_allclose(d.x, 3.0, atol=1e-4)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            simulate(make_family(1), 0, make_rng(0))

    def test_2d_shape(self):
        d = simulate(BetaGaussParams2D(1, 3, 10, -10, 4, 9), 50, make_rng(4, 0))
        assert d.x.shape == (50, 2)


class TestSerialisation:
    def test_dataset_csv_round_trip(self, tmp_path):
        d = simulate(make_family(3), 25, make_rng(5, 0))
        path = str(tmp_path / "d.csv")
        write_dataset_csv(d, path)
        assert open(path).readline() == "# dim=2\n"
        np.testing.assert_array_equal(read_dataset_csv(path).x, d.x)

    @pytest.mark.parametrize("theta", [
        make_family(1),
        BetaGaussParams1D(2.0, 5.0, 2.25),
        BetaGaussParams2D(1.0, 3.0, 10.0, -10.0, 4.0, 9.0),
    ])
    def test_params_round_trip(self, theta):
        back = params_from_text(params_to_text(theta))
        assert type(back) is type(theta)
        np.testing.assert_array_equal(back.flat(), theta.flat())

    def test_dataset_rejects_non_finite(self):
        with pytest.raises(InvalidConfig):
            Dataset(np.array([1.0, np.nan]))
