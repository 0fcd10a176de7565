import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from crossig.transforms import (DFTTransform, ICAConvergenceWarning, IdentityTransform,
                                LinearTransform, SeasonalTrendTransform, SingularMatrixError,
                                TransformError, amari_index, conjugate_pairs, dft_forward,
                                dft_inverse, dft_inverse_complex, fit_fastica, linear_forward,
                                linear_inverse, onesided, stl_decompose, stl_inverse,
                                transform_from_json, transform_to_json)


def brute_dft(x):
    n = len(x)
    return np.array([sum(x[m] * np.exp(-2j * np.pi * k * m / n) for m in range(n))
                     for k in range(n)]) / np.sqrt(n)


def brute_idft_real(z):
    n = len(z)
    return np.array([sum(z[k] * np.exp(2j * np.pi * k * m / n) for k in range(n))
                     for m in range(n)]).real / np.sqrt(n)


# --- DFT ---------------------------------------------------------------------

def test_dft_impulse_and_dc():
    np.testing.assert_allclose(dft_forward([1, 0, 0, 0]).values, [0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(dft_forward([1, 1, 1, 1]).values, [2, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(dft_inverse([2, 0, 0, 0]), [1, 1, 1, 1])


def test_dft_labels_in_hz():
    z = dft_forward(np.zeros(128), fs=32.0)
    assert z.labels[4] == "1.00Hz"
    assert z.labels[16] == "4.00Hz"
    assert len(z.labels) == 128 and z.domain == "dft"


def test_dft_matches_direct_summation(rng):
    x = rng.normal(size=17)
    np.testing.assert_allclose(dft_forward(x).values, brute_dft(x), atol=1e-12)


def test_non_hermitian_inverse_matches_direct_summation():
    z = np.array([0, 1j, 0, 0])
    np.testing.assert_allclose(dft_inverse(z), brute_idft_real(z), atol=1e-15)
    # Re(j e^{2πjm/4})/2 for m = 0..3
    np.testing.assert_allclose(dft_inverse(z), [0, -0.5, 0, 0.5], atol=1e-15)


def test_dft_roundtrip_and_parseval(rng):
    for _ in range(100):
        x = rng.normal(size=128)
        z = dft_forward(x).values
        assert np.max(np.abs(dft_inverse(z) - x)) <= 1e-10
        assert abs(np.linalg.norm(z) - np.linalg.norm(x)) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(2, 64), elements=st.floats(-1e3, 1e3)),
       st.floats(0, 1))
def test_real_projection_is_lossless_on_path(x, t):
    x_hat = np.roll(x, 1) * 0.5
    z = dft_forward(x_hat).values + t * (dft_forward(x).values - dft_forward(x_hat).values)
    pre = dft_inverse_complex(z)
    assert np.max(np.abs(pre.imag)) <= 1e-12 * max(1.0, np.max(np.abs(x)))


def test_conjugate_pairs():
    assert conjugate_pairs(4) == [(0,), (1, 3), (2,)]
    assert conjugate_pairs(5) == [(0,), (1, 4), (2, 3)]
    freqs, merged = onesided(np.arange(4.0), fs=4.0)
    np.testing.assert_array_equal(merged, [0, 4, 2])
    np.testing.assert_array_equal(freqs, [0, 1, 2])


def test_dft_length_checks():
    with pytest.raises(TransformError):
        dft_forward([1.0])
    with pytest.raises(TransformError):
        DFTTransform(n=8).forward(np.zeros(9))


# --- linear ------------------------------------------------------------------

def test_linear_identity_and_diagonal():
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(linear_forward(x, np.eye(2)).values, x)
    np.testing.assert_array_equal(linear_forward([[1.0], [1.0]], [[2, 0], [0, 1]]).values,
                                  [[2.0], [1.0]])
    assert linear_forward(x, np.eye(2)).labels == ("IC0", "IC1")


def test_linear_roundtrip(rng):
    W = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    t = LinearTransform(W)
    assert np.max(np.abs(t.W @ t.A - np.eye(4))) <= 1e-8
    for _ in range(100):
        x = rng.normal(size=(4, 50))
        assert np.max(np.abs(linear_inverse(t.forward(x), t.A) - x)) <= 1e-10


def test_singular_unmixing_rejected():
    with pytest.raises(SingularMatrixError):
        LinearTransform([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        LinearTransform(np.eye(2), A=2 * np.eye(2))


def _product_grid_sources(c, m=14):
    # every combination of a standardized grid: an exactly independent, white sample
    grid = np.linspace(-1, 1, m)
    grid = (grid - grid.mean()) / grid.std()
    mesh = np.meshgrid(*([grid] * c), indexing="ij")
    return np.stack([g.reshape(-1) for g in mesh])


def test_fastica_white_independent_data_converges_immediately():
    S = _product_grid_sources(3)
    t = fit_fastica(S, w_init=np.eye(3))
    assert t.meta["n_iter"] <= 2 and t.meta["status"] == "ok"
    P = np.abs(t.W)
    np.testing.assert_allclose(P, np.eye(3), atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_fastica_two_uniform_sources(seed):
    A = np.array([[2.0, 1.0], [1.0, 1.0]])
    S = np.random.default_rng(100 + seed).uniform(-1, 1, size=(2, 4000))
    t = fit_fastica(A @ S, seed=seed)
    assert t.converged
    assert amari_index(t.W, A) <= 0.05
    # the inverse reconstructs the raw signal
    np.testing.assert_allclose(t.inverse(t.forward(A @ S).values), A @ S, atol=1e-10)


def test_fastica_matches_sklearn_up_to_permutation():
    from sklearn.decomposition import FastICA

    A = np.array([[2.0, 1.0, 0.3], [1.0, 1.0, -0.5], [0.2, -1.0, 1.0]])
    S = np.random.default_rng(5).laplace(size=(3, 5000))
    X = A @ S
    ours = fit_fastica(X, seed=1)
    sk = FastICA(n_components=3, algorithm="parallel", fun="logcosh", whiten="unit-variance",
                 max_iter=30000, tol=1e-8, random_state=1).fit(X.T)
    # both unmixings must agree up to scaled permutation
    assert amari_index(ours.W, np.linalg.inv(sk.components_)) <= 0.02


def test_fastica_deterministic():
    X = np.random.default_rng(2).uniform(size=(3, 2000))
    X[1] += X[0]
    a, b = fit_fastica(X, seed=4), fit_fastica(X, seed=4)
    assert np.array_equal(a.W, b.W)


def test_fastica_flags_gaussian_sources():
    X = np.random.default_rng(5).normal(size=(3, 4000))
    with pytest.warns(ICAConvergenceWarning):
        t = fit_fastica(X, seed=1, max_iter=500)
    assert t.meta["status"] in ("not_converged", "unidentifiable")


def test_fastica_rank_deficient():
    x = np.random.default_rng(0).normal(size=2000)
    with pytest.raises(SingularMatrixError):
        fit_fastica(np.stack([x, 2 * x]))


def test_amari_index_values():
    assert amari_index(np.eye(3), np.eye(3)) == 0.0
    assert amari_index([[0, 2.0], [-3.0, 0]], np.eye(2)) == 0.0
    # uniform mixing: each row/col contributes (n-1)
    assert amari_index(np.ones((2, 2)), np.eye(2)) == pytest.approx(1.0)


# --- seasonal-trend ----------------------------------------------------------

def _moving_average_oracle(x, period):
    n = len(x)
    half = period // 2
    w = np.ones(period + (1 - period % 2))
    if period % 2 == 0:
        w[0] = w[-1] = 0.5
    w /= period

    def at(i):  # point reflection about the end samples
        if i < 0:
            return 2 * x[0] - x[-i]
        if i >= n:
            return 2 * x[-1] - x[2 * (n - 1) - i]
        return x[i]

    return np.array([sum(w[j] * at(i - half + j) for j in range(len(w))) for i in range(n)])


@pytest.mark.parametrize("period", [2, 5, 8, 12])
def test_trend_matches_loop_oracle(rng, period):
    x = rng.normal(size=40)
    np.testing.assert_allclose(stl_decompose(x, period).values[0],
                               _moving_average_oracle(x, period), atol=1e-12)


def test_seasonal_components_constant_and_ramp():
    comp = stl_decompose(np.full(24, 3.0), 6).values
    np.testing.assert_allclose(comp[0], 3.0)
    np.testing.assert_allclose(comp[1:], 0.0, atol=1e-15)
    ramp = stl_decompose(np.arange(64.0) * 0.7 - 2, 8).values
    assert np.max(np.abs(ramp[1])) <= 1e-8


def test_seasonal_recovers_pure_periodic_pattern():
    pattern = np.array([1.0, -2.0, 0.5, 0.5])
    errors = []
    for cycles in (10, 40):
        comp = stl_decompose(np.tile(pattern, cycles) + 5.0, 4).values
        # interior trend windows see whole periods only
        np.testing.assert_allclose(comp[0][2:-2], 5.0, atol=1e-12)
        errors.append(np.max(np.abs(comp[1] - np.tile(pattern, cycles))))
    # only the two mirrored edges disturb the phase means, so the error dilutes as 1/cycles
    assert errors[1] < errors[0] / 3


def test_seasonal_roundtrip_and_labels(rng):
    t = SeasonalTrendTransform(8)
    for _ in range(100):
        x = rng.normal(size=64)
        assert np.max(np.abs(stl_inverse(stl_decompose(x, 8)) - x)) <= 1e-10
    assert t.forward(np.zeros(16)).labels == ("trend", "seasonal", "residual")


def test_seasonal_is_linear(rng):
    x, y = rng.normal(size=48), rng.normal(size=48)
    lhs = stl_decompose(2 * x - 3 * y, 6).values
    rhs = 2 * stl_decompose(x, 6).values - 3 * stl_decompose(y, 6).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_seasonal_range_errors():
    with pytest.raises(TransformError):
        stl_decompose(np.zeros(10), 1)
    with pytest.raises(TransformError):
        stl_decompose(np.zeros(10), 6)


# --- identity and serialization -----------------------------------------------

@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(16, 40), elements=st.floats(-1e6, 1e6)))
def test_every_kind_roundtrips(x):
    for t in (IdentityTransform(), DFTTransform(), SeasonalTrendTransform(4)):
        scale = max(1.0, np.max(np.abs(x)))
        assert np.max(np.abs(t.inverse(t.forward(x).values) - x)) <= 1e-10 * scale


def test_json_roundtrip(rng):
    lin = LinearTransform(rng.normal(size=(3, 3)) + 3 * np.eye(3), meta={"seed": 3})
    for t in (IdentityTransform(fs=2.0), DFTTransform(16, 8.0), SeasonalTrendTransform(5), lin):
        doc = json.loads(transform_to_json(t))
        assert set(doc) == {"kind", "n", "fs", "period", "W", "A", "seed", "fit"}
        back = transform_from_json(transform_to_json(t))
        assert transform_to_json(back) == transform_to_json(t)
    assert np.array_equal(transform_from_json(transform_to_json(lin)).W, lin.W)
    with pytest.raises(TransformError):
        transform_from_json('{"kind": "wavelet"}')
