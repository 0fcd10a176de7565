import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossig.evalharness import (DatasetSpec, Stream, feature_count, frequency_ig_sweep,
                                 generate_trend_seasonal, generate_trend_seasonal_set,
                                 generate_two_class, intervene, probe_frequencies, run_curve,
                                 select_top_k, splitmix64)
from crossig.transforms import DFTTransform, SeasonalTrendTransform


def test_splitmix_reference_values():
    # published first outputs of SplitMix64 seeded with 0
    out, state = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF
    out, _ = splitmix64(state)
    assert out == 0x6E789E6AA1B965F4


def test_xorshift_step_definition():
    s = Stream(1)
    x = s.state
    x ^= x >> 12
    x ^= (x << 25) & (2 ** 64 - 1)
    x ^= x >> 27
    assert s.next_u64() == (x * 0x2545F4914F6CDD1D) % 2 ** 64


def test_stream_statistics():
    s = Stream(42, 7)
    u = np.array([s.uniform() for _ in range(20000)])
    g = np.array([s.normal() for _ in range(20000)])
    assert abs(u.mean() - 0.5) < 0.01 and u.min() >= 0 and u.max() < 1
    assert abs(g.mean()) < 0.03 and abs(g.std() - 1) < 0.03
    pick = Stream(3).sample(10, 4)
    assert len(set(pick)) == 4 and all(0 <= p < 10 for p in pick)


def test_two_class_determinism_and_first_sample():
    a = generate_two_class(DatasetSpec(seed=7), 20)
    b = generate_two_class(DatasetSpec(seed=7), 20)
    assert np.array_equal(a.signals, b.signals)
    assert not np.array_equal(a.signals, generate_two_class(DatasetSpec(seed=8), 20).signals)
    assert list(a.labels[:4]) == [1, 2, 1, 2]
    # prefix-stable: more samples do not change earlier ones
    assert np.array_equal(generate_two_class(DatasetSpec(seed=7), 5).signals, a.signals[:10])
    from crossig.evalharness import sinusoid
    assert sinusoid(1.0, 0.0, 32.0, 128)[0] == 1.0


def test_two_class_frequency_statistics():
    data = generate_two_class(DatasetSpec(seed=1), 1000)
    f1 = data.freqs[data.labels == 1]
    assert np.all((f1 > 0.1) & (f1 < 16.0))
    spectra = np.abs(np.fft.rfft(data.signals[data.labels == 1], axis=1))
    peaks = np.argmax(spectra[:, 1:], axis=1) + 1
    assert abs(np.mean(peaks * 32.0 / 128) - 1.0) <= 0.6
    assert abs(np.mean(data.freqs[data.labels == 2]) - 4.0) < 0.1


def test_trend_seasonal_values():
    s = generate_trend_seasonal(4.0, 2.0)
    assert s.trend[0] == 1.0
    assert s.trend[8 * 64] == pytest.approx(np.exp(2.0), rel=1e-14)
    assert s.window.shape == (512,) and s.future.shape == (128,)
    # 2 Hz and 4 Hz harmonics complete whole periods over the first 8 s
    assert abs(s.seasonal[:512].mean()) <= 1e-10
    with pytest.raises(OverflowError):
        generate_trend_seasonal(0.01, 2.0)
    with pytest.raises(ValueError):
        generate_trend_seasonal(-1.0, 2.0)
    batch = generate_trend_seasonal_set(DatasetSpec.trend_seasonal(seed=3), 4)
    assert all(4.0 <= b.alpha <= 7.0 and 3.0 <= b.xi_hz <= 8.0 for b in batch)


def test_select_top_k_examples():
    assert list(select_top_k([0.1, 0.9, 0.5], 34)) == [1]
    assert list(select_top_k([0.1, 0.9, 0.5], 100)) == [0, 1, 2]
    assert list(select_top_k([1.0, 1.0, 0.0, 1.0], 50)) == [0, 1]
    with pytest.raises(ValueError):
        select_top_k([1.0], 0)
    assert feature_count(3.125, 65) == 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 40), st.floats(0.5, 100))
def test_select_top_k_matches_sort_oracle(seed, n, k):
    scores = np.round(np.random.default_rng(seed).normal(size=n), 1)
    count = feature_count(k, n)
    oracle = sorted(sorted(range(n), key=lambda i: (-scores[i], i))[:count])
    assert list(select_top_k(scores, k)) == oracle


def test_select_top_k_merges_conjugate_bins():
    dft = DFTTransform(8)
    groups = [g for _, g in dft.feature_groups((8,))]
    scores = np.array([0, 0.4, 0, 0, 0, 0, 0, 0.4])
    assert list(select_top_k(scores, 20, groups)) == [1, 7]


def test_intervene_endpoints_and_duality(rng):
    dft = DFTTransform(16)
    x = rng.normal(size=16)
    z = dft.forward(x)
    everything = np.arange(16)
    np.testing.assert_array_equal(intervene(dft, z, everything, "delete"), np.zeros(16))
    np.testing.assert_array_equal(intervene(dft, z, everything, "insert", original=x), x)
    np.testing.assert_array_equal(intervene(dft, z, [], "delete", original=x), x)
    assert np.max(np.abs(intervene(dft, z, [], "delete") - x)) <= 1e-12
    for _ in range(10):
        sel = np.flatnonzero(rng.uniform(size=16) < 0.4)
        rest = np.setdiff1d(everything, sel)
        np.testing.assert_array_equal(intervene(dft, z, sel, "insert"),
                                      intervene(dft, z, rest, "delete"))
    st_t = SeasonalTrendTransform(4)
    comp = st_t.forward(x)
    # delete the seasonal row (flat indices 16..31)
    np.testing.assert_allclose(intervene(st_t, comp, np.arange(16, 32), "delete"),
                               comp.values[0] + comp.values[2])


@pytest.fixture(scope="module")
def small_report():
    from crossig.modelzoo import build_sinusoid_classifier
    model = build_sinusoid_classifier()
    data = generate_two_class(DatasetSpec(seed=2), 5)
    return model, data, run_curve(model, DFTTransform(128, 32.0), None, data.signals,
                                  data.labels - 1, [0, 3.125, 50, 100], trials=4, seed=9,
                                  n_steps=32)


def test_report_endpoints(small_report):
    _, _, rep = small_report
    assert rep.value("deletion", "ig_ranked", 0) == 0.0
    assert rep.value("insertion", "ig_ranked", 100) == 0.0
    assert rep.value("deletion", "ig_ranked", 100) == rep.value("deletion", "random", 100)
    ks, vals = rep.curve("deletion", "random")
    assert list(ks) == sorted(ks) and np.all(vals >= 0)


def test_report_reproducible(small_report):
    model, data, rep = small_report
    again = run_curve(model, DFTTransform(128, 32.0), None, data.signals, data.labels - 1,
                      [100, 50, 3.125, 0], trials=4, seed=9, n_steps=32, workers=3)
    assert again.to_csv() == rep.to_csv() and again.to_json() == rep.to_json()
    assert rep.to_csv().splitlines()[0] == "mode,method,k_percent,mean_distance,std,trials"


def test_probe_frequencies():
    f = probe_frequencies(32.0, 256)
    assert len(f) == 64 and f[0] == 0.125 and f[-1] == 127 * 0.125
    with pytest.raises(ValueError):
        probe_frequencies(32.0, 128)


def test_sweep_tracks_response(classifier):
    r = frequency_ig_sweep(classifier.layers[0].params["kernels"][0], 32.0, count=64)
    assert r.pearson >= 0.99
    # IG mass is bounded by the completeness value, which is at most the pooled output
    assert np.all(r.ig_mass >= -1e-12)
