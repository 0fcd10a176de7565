import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossig.evalharness import generate_trend_seasonal, sinusoid
from crossig.gradcore import GraphBuilder, random_complex_model
from crossig.igengine import (DegenerateCoordinateWarning, PathSpec, attribute, baseline_filtered,
                              baseline_zero, completeness_residual, ig_classic, ig_complex_split,
                              ig_complex_wirtinger, ig_real_domain, integrate_target, quadrature,
                              redistribute_time_ig, virtual_inspection_check)
from crossig.modelzoo import (analytic_sinusoid_output, build_linear_model, channel_spec,
                              frequency_response, smooth_probe_graph)
from crossig.transforms import (DFTTransform, IdentityTransform, LinearTransform,
                                SeasonalTrendTransform, TransformError, dft_forward)


def _linear(w, bias=0.0):
    return build_linear_model(np.asarray(w, dtype=float), bias=bias).compile()


def _complex_graph(fn):
    b = GraphBuilder()
    z = b.leaf("z", (1,), complex=True)
    return b.build(fn(b, z))


def test_quadrature_rules():
    t, w = quadrature(4)
    np.testing.assert_allclose(t, [0.25, 0.5, 0.75, 1.0])
    t, w = quadrature(2, "midpoint")
    np.testing.assert_allclose(t, [0.25, 0.75])
    t, w = quadrature(2, "trapezoid")
    np.testing.assert_allclose(w, [0.25, 0.5, 0.25])
    with pytest.raises(ValueError):
        quadrature(0)
    with pytest.raises(ValueError):
        PathSpec(n_steps=4, rule="simpson")
    with pytest.raises(ValueError):
        PathSpec(path="geodesic")


@pytest.mark.parametrize("steps", [1, 7, 64])
def test_linear_identity_ig_exact(steps):
    res = ig_real_domain(_linear([1.0, 2.0]), IdentityTransform(), [3.0, 4.0], PathSpec(None, steps))
    np.testing.assert_allclose(res.scores, [3.0, 8.0], atol=1e-12)
    assert abs(completeness_residual(res)) <= 1e-12


def test_null_attribution_is_exact_zero(rng):
    x = rng.normal(size=16)
    model = random_complex_model(0, n=16)
    for t, alg in ((IdentityTransform(), ig_real_domain), (DFTTransform(16), ig_complex_split),
                   (DFTTransform(16), ig_complex_wirtinger)):
        res = alg(model, t, x, PathSpec(t.forward(x), 8))
        assert np.all(res.scores == 0.0)
        assert res.completeness_residual == 0.0


def test_abs_squared_single_feature():
    g = _complex_graph(lambda b, z: b.sum(b.real(b.mul(z, b.conj(z)))))
    z, z0 = np.array([1 + 1j]), np.zeros(1, complex)
    riemann = integrate_target(g, z, z0, PathSpec(None, 1000), "split")
    # right Riemann sum of 4t over t = s/N gives 2 (N + 1) / N
    assert riemann[0] == pytest.approx(2.0 * 1001 / 1000, abs=1e-12)
    assert abs(riemann[0] - 2.0) <= 2e-3 + 1e-12
    trap = integrate_target(g, z, z0, PathSpec(None, 1000, "trapezoid"), "split")
    assert trap[0] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("steps", [1, 10])
def test_real_part_wirtinger(steps):
    g = _complex_graph(lambda b, z: b.sum(b.real(z)))
    out = integrate_target(g, np.array([3 + 4j]), np.zeros(1, complex), PathSpec(None, steps),
                           "wirtinger")
    assert out[0] == pytest.approx(3.0, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000))
def test_split_equals_wirtinger(seed):
    model = random_complex_model(seed, n=12)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=12)
    dft = DFTTransform(12)
    path = PathSpec(dft.forward(rng.normal(size=12) * 0.2), 16, "midpoint")
    a = ig_complex_split(model, dft, x, path).scores
    b = ig_complex_wirtinger(model, dft, x, path).scores
    assert np.max(np.abs(a - b)) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000))
def test_identity_reduces_to_classic(seed):
    model = random_complex_model(seed, n=10)
    rng = np.random.default_rng(seed)
    x, x_hat = rng.normal(size=10), rng.normal(size=10)
    ident = IdentityTransform()
    cross = ig_real_domain(model, ident, x, PathSpec(ident.forward(x_hat), 12)).scores
    classic = ig_classic(model, x, x_hat, 12).scores
    assert np.max(np.abs(cross - classic)) <= 1e-9


def test_conjugate_bins_share_score(rng):
    model = random_complex_model(3, n=16)
    res = ig_complex_wirtinger(model, DFTTransform(16), rng.normal(size=16), PathSpec(None, 32))
    s = res.scores
    for k in range(1, 8):
        assert abs(s[k] - s[16 - k]) <= 1e-9


def test_dummy_feature_scores_exactly_zero(rng):
    model = _linear([1.0, -2.0, 0.0, 0.5])
    b = GraphBuilder()
    x = b.leaf("x", (4,))
    h = b.sin(b.matvec(np.array([[1.0, 0.5, 0.0, 0.0], [0.0, 0.2, 0.0, -1.0]]), x))
    smooth = b.build(b.sum(b.mul(h, h)))
    for m in (model, smooth):
        res = ig_real_domain(m, IdentityTransform(), rng.normal(size=4), PathSpec(None, 20))
        assert res.scores[2] == 0.0


def test_completeness_smooth_model_converges():
    g = smooth_probe_graph()
    x = sinusoid(1.3, 0.4, 32.0, 128)
    dft = DFTTransform(128, 32.0)
    residuals = [abs(ig_complex_wirtinger(g, dft, x, PathSpec(None, n)).completeness_residual)
                 for n in (1, 4, 16, 64, 256, 1024)]
    assert all(b < a for a, b in zip(residuals, residuals[1:]))
    assert residuals[0] > 1e-2 and residuals[-1] < 1e-3


@pytest.mark.parametrize("steps", [1, 5, 33])
def test_linear_models_exact_with_trapezoid(rng, steps):
    model = _linear(rng.normal(size=32), bias=1.5)
    x = rng.normal(size=32)
    for t in (IdentityTransform(), SeasonalTrendTransform(8), DFTTransform(32)):
        res = attribute(model, t, x, PathSpec(None, steps, "trapezoid"))
        assert abs(res.completeness_residual) <= 1e-10


def test_seasonal_mean_model_scores_component_means():
    series = generate_trend_seasonal(4.0, 2.0, 0.0)
    x = series.window
    model = build_linear_model(np.full(512, 1 / 512), fs=64.0).compile()
    t = SeasonalTrendTransform(32)
    res = ig_real_domain(model, t, x, PathSpec(None, 3))
    comp = t.forward(x).values
    np.testing.assert_allclose(res.component_scores(), comp.mean(axis=1), atol=1e-12)
    labels, feats = res.features()
    assert labels == ("trend", "seasonal", "residual")
    np.testing.assert_allclose(feats, comp.mean(axis=1), atol=1e-12)


def test_ica_domain_attribution(rng):
    W = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    t = LinearTransform(W)
    from crossig.modelzoo import ModelSpec, conv1d, dense, global_avg_pool, relu
    spec = ModelSpec((conv1d(rng.normal(size=(2, 3, 5))), relu(), global_avg_pool(),
                      dense([1.0, -0.5])), n=40, fs=10.0, channels=3)
    x = rng.normal(size=(3, 40))
    res = ig_real_domain(spec.compile(), t, x, PathSpec(None, 256))
    assert res.scores.shape == (3, 40)
    assert res.component_scores().shape == (3,)
    assert abs(res.completeness_residual) <= 1e-2


def test_sinusoid_ig_concentrates_on_signal_bin(classifier):
    # lowpass channel on a 1 Hz tone; n = 128 at 32 Hz puts 1 Hz in bin 4
    model = channel_spec(classifier, 0).compile()
    x = sinusoid(1.0, 0.0, 32.0, 128)
    res = ig_complex_split(model, DFTTransform(128, 32.0), x, PathSpec(None, 64))
    pair = res.scores[4] + res.scores[124]
    assert pair == pytest.approx(res.f_input, abs=1e-9)
    b = frequency_response(classifier.layers[0].params["kernels"][0], 1.0, 32.0)
    assert abs(pair - analytic_sinusoid_output(1.0, b)) / analytic_sinusoid_output(1.0, b) <= 0.05
    others = np.delete(res.scores, [4, 124])
    assert np.max(np.abs(others)) <= 1e-3


def test_chunking_and_workers_do_not_change_scores(rng):
    model = random_complex_model(7, n=16)
    x = rng.normal(size=16)
    dft = DFTTransform(16)
    ref = attribute(model, dft, x, PathSpec(None, 50)).scores
    for chunk, workers in ((1, 1), (7, 3), (50, 2), (1000, 4)):
        out = attribute(model, dft, x, PathSpec(None, 50), chunk_size=chunk, workers=workers).scores
        np.testing.assert_allclose(out, ref, atol=1e-14)
    again = attribute(model, dft, x, PathSpec(None, 50), chunk_size=7, workers=3).scores
    assert np.array_equal(again, attribute(model, dft, x, PathSpec(None, 50), chunk_size=7).scores)


def test_baselines():
    np.testing.assert_array_equal(baseline_zero(DFTTransform(8), 8).values, np.zeros(8))
    z = DFTTransform(4).represent(np.array([2, 1 + 1j, 0, 1 - 1j]))
    np.testing.assert_array_equal(baseline_filtered(z, [True, False, False, False]).values,
                                  [2, 0, 0, 0])
    comp = SeasonalTrendTransform(4).forward(np.arange(12.0))
    kept = baseline_filtered(comp, [True, False, True])
    np.testing.assert_array_equal(kept.values[1], 0)
    np.testing.assert_array_equal(kept.values[0], comp.values[0])
    with pytest.raises(ValueError):
        baseline_filtered(z, [True, False])


def test_keep_all_baseline_gives_zero_scores(rng):
    x = rng.normal(size=16)
    dft = DFTTransform(16)
    base = baseline_filtered(dft.forward(x), np.ones(16, bool))
    res = ig_complex_wirtinger(random_complex_model(2, n=16), dft, x, PathSpec(base, 8))
    assert np.all(res.scores == 0)


def test_domain_errors(rng):
    model = _linear(np.ones(8))
    x = rng.normal(size=8)
    with pytest.raises(TransformError):
        ig_real_domain(model, DFTTransform(8), x)
    with pytest.raises(TransformError):
        ig_complex_split(model, IdentityTransform(), x)
    with pytest.raises(TransformError):
        attribute(model, DFTTransform(8), x, PathSpec(IdentityTransform().forward(x)))
    with pytest.raises(TransformError):
        attribute(model, DFTTransform(8), x, PathSpec(DFTTransform(4).forward(x[:4])))


def test_virtual_inspection_linear(rng):
    for _ in range(5):
        model = _linear(rng.normal(size=24), bias=0.7)
        x, x_hat = rng.normal(size=24), rng.normal(size=24)
        assert virtual_inspection_check(model, x, x_hat, n_steps=3) <= 1e-8


def test_virtual_inspection_cnn(classifier):
    x = sinusoid(1.2, 0.3, 32.0, 128)
    assert virtual_inspection_check(classifier.compile(0), x, n_steps=512, fs=32.0) <= 1e-3


def test_virtual_inspection_degenerate_coordinates(rng):
    model = _linear(rng.normal(size=8))
    x = rng.normal(size=8)
    x_hat = x.copy()
    x_hat[[0, 3, 5, 6]] = 0.0
    with pytest.warns(DegenerateCoordinateWarning, match=r"\[1, 2, 4, 7\]"):
        virtual_inspection_check(model, x, x_hat, n_steps=4)
    with pytest.raises(ValueError):
        redistribute_time_ig(np.zeros(8), x, x)


def test_result_json(rng):
    res = ig_complex_wirtinger(random_complex_model(0, n=8), DFTTransform(8, 4.0),
                               rng.normal(size=8), PathSpec(None, 4))
    doc = json.loads(res.to_json())
    assert set(doc) == {"algorithm", "transform", "labels", "scores", "f_input", "f_baseline",
                        "completeness_residual", "n_steps", "rule"}
    assert doc["transform"]["kind"] == "dft" and doc["labels"][1] == "0.50Hz"
    freqs, merged = res.onesided()
    assert merged.sum() == pytest.approx(res.scores.sum())
