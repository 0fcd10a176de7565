"""Self-check suite shared by ``crossig validate`` and the acceptance tests.

Each check returns a :class:`CheckResult` with the measured value and the
threshold it is held to; a check passes when ``value <= threshold`` unless
it is marked ``higher_is_better``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .evalharness import DatasetSpec, frequency_ig_sweep, generate_two_class, sinusoid
from .gradcore import backward, finite_difference_check, random_complex_model, random_smooth_graph
from .igengine import (PathSpec, ig_classic, ig_complex_split, ig_complex_wirtinger,
                       ig_real_domain, virtual_inspection_check)
from .modelzoo import (ModelSpec, analytic_sinusoid_output, build_linear_model,
                       build_sinusoid_classifier, channel_spec, classify, design_fir,
                       frequency_response, smooth_probe_graph)
from .transforms import (DFTTransform, IdentityTransform, LinearTransform, SeasonalTrendTransform,
                         conjugate_pairs)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""

    @classmethod
    def at_most(cls, name, value, threshold, detail=""):
        value = float(value)
        return cls(name, value, float(threshold), bool(value <= threshold), detail)

    @classmethod
    def at_least(cls, name, value, threshold, detail=""):
        value = float(value)
        return cls(name, value, float(threshold), bool(value >= threshold), detail)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{mark} {self.name}: value={self.value:.6g} threshold={self.threshold:.6g}{extra}"


def _relative_residual(res) -> float:
    return abs(res.completeness_residual) / max(1.0, abs(res.f_input - res.f_baseline))


def check_gradients(n_graphs: int = 100, seed: int = 0) -> list[CheckResult]:
    fd, sym = 0.0, 0.0
    for s in range(seed, seed + n_graphs):
        graph, bindings = random_smooth_graph(s)
        fd = max(fd, finite_difference_check(graph, bindings))
        sym = max(sym, backward(graph, bindings).conjugate_symmetry_error())
    return [CheckResult.at_most("gradient_finite_difference", fd, 1e-5, f"{n_graphs} graphs"),
            CheckResult.at_most("gradient_conjugate_symmetry", sym, 1e-12)]


def check_roundtrips(n_inputs: int = 100, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    worst = {"identity": 0.0, "dft": 0.0, "linear": 0.0, "seasonal_trend": 0.0}
    parseval = 0.0
    W = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    linear = LinearTransform(W)
    seasonal = SeasonalTrendTransform(8)
    for _ in range(n_inputs):
        x = rng.normal(size=128)
        z = DFTTransform(128).forward(x)
        worst["dft"] = max(worst["dft"], np.max(np.abs(DFTTransform(128).inverse(z.values) - x)))
        parseval = max(parseval, abs(np.linalg.norm(z.values) - np.linalg.norm(x)))
        worst["identity"] = max(worst["identity"],
                                np.max(np.abs(IdentityTransform().inverse(x) - x)))
        worst["seasonal_trend"] = max(worst["seasonal_trend"], np.max(np.abs(
            seasonal.inverse(seasonal.forward(x).values) - x)))
        xm = rng.normal(size=(4, 64))
        worst["linear"] = max(worst["linear"], np.max(np.abs(
            linear.inverse(linear.forward(xm).values) - xm)))
    out = [CheckResult.at_most(f"roundtrip_{k}", v, 1e-10) for k, v in worst.items()]
    out.append(CheckResult.at_most("dft_parseval", parseval, 1e-10))
    return out


def two_class_samples(count: int, seed: int = 0):
    return generate_two_class(DatasetSpec(seed=seed), count)


def check_completeness_model(model: ModelSpec | None = None, n_samples: int = 50,
                             n_steps: int = 1024, rule: str = "right_riemann",
                             seed: int = 0) -> list[CheckResult]:
    """Both complex algorithms on the classifier, explaining the true class."""
    model = model or build_sinusoid_classifier()
    data = two_class_samples((n_samples + 1) // 2, seed)
    dft = DFTTransform(model.n, model.fs)
    graphs = {c: model.compile(c) for c in range(model.n_outputs)}
    worst = {"split": 0.0, "wirtinger": 0.0}
    path = PathSpec(None, n_steps, rule)
    for x, label in zip(data.signals[:n_samples], data.labels[:n_samples]):
        g = graphs[min(label - 1, model.n_outputs - 1)]
        worst["split"] = max(worst["split"], _relative_residual(ig_complex_split(g, dft, x, path)))
        worst["wirtinger"] = max(worst["wirtinger"],
                                 _relative_residual(ig_complex_wirtinger(g, dft, x, path)))
    return [CheckResult.at_most(f"completeness_model_{k}", v, 1e-2, f"n_steps={n_steps}")
            for k, v in worst.items()]


def check_completeness_linear(n_models: int = 20, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        model = build_linear_model(rng.normal(size=32), bias=float(rng.normal())).compile()
        x = rng.normal(size=32)
        for steps in (1, 3, 17):
            for t in (IdentityTransform(), SeasonalTrendTransform(8)):
                worst = max(worst, abs(ig_real_domain(model, t, x, PathSpec(None, steps, "trapezoid"))
                                       .completeness_residual))
            for alg in (ig_complex_split, ig_complex_wirtinger):
                worst = max(worst, abs(alg(model, DFTTransform(32), x,
                                           PathSpec(None, steps, "trapezoid")).completeness_residual))
    return CheckResult.at_most("completeness_linear_trapezoid", worst, 1e-10)


def check_completeness_nonlinear(n_steps: int = 1024, rule: str = "right_riemann",
                                 seed: int = 0) -> CheckResult:
    """Smooth non-homogeneous probe; a single quadrature step is expected to fail."""
    graph = smooth_probe_graph(seed=seed)
    data = two_class_samples(3, seed)
    dft = DFTTransform(128, 32.0)
    worst = max(_relative_residual(ig_complex_wirtinger(graph, dft, x, PathSpec(None, n_steps, rule)))
                for x in data.signals)
    return CheckResult.at_most("completeness_nonlinear", worst, 1e-2, f"n_steps={n_steps}")


def check_algorithm_equivalence(n_models: int = 50, n_steps: int = 32) -> CheckResult:
    worst = 0.0
    for s in range(n_models):
        model = random_complex_model(s, n=16)
        x = np.random.default_rng(1000 + s).normal(size=16)
        dft = DFTTransform(16)
        path = PathSpec(dft.forward(np.random.default_rng(2000 + s).normal(size=16) * 0.3),
                        n_steps)
        a = ig_complex_split(model, dft, x, path).scores
        b = ig_complex_wirtinger(model, dft, x, path).scores
        worst = max(worst, np.max(np.abs(a - b)))
    return CheckResult.at_most("algorithm_equivalence", worst, 1e-8, f"{n_models} models")


def check_identity_reduction(n_models: int = 50, n_steps: int = 32) -> CheckResult:
    worst = 0.0
    for s in range(n_models):
        model = random_complex_model(s, n=16)
        rng = np.random.default_rng(3000 + s)
        x, x_hat = rng.normal(size=16), rng.normal(size=16) * 0.3
        ident = IdentityTransform()
        cross = ig_real_domain(model, ident, x, PathSpec(ident.forward(x_hat), n_steps)).scores
        classic = ig_classic(model, x, x_hat, n_steps).scores
        worst = max(worst, np.max(np.abs(cross - classic)))
    return CheckResult.at_most("identity_reduction", worst, 1e-9, f"{n_models} models")


def _reference_kernels(model: ModelSpec) -> list[tuple[str, np.ndarray]]:
    """Kernels the model claims to implement, rebuilt from its design metadata."""
    kernels = model.layers[0].params["kernels"]
    design = model.meta.get("design")
    if not design:
        return [("channel", k) for k in kernels]
    return [(kind, design_fir(kind, design["cutoff_hz"], model.fs, design["taps"]))
            for kind in design["channels"]]


def tone_measurements(model: ModelSpec, amplitudes=(0.5, 1.0, 2.0), n_steps: int = 64,
                     class_freqs=(1.0, 4.0)):
    """Per (channel, amplitude): (pair IG sum, a·b/π with the reference gain, max other |IG|)."""
    out = []
    dft = DFTTransform(model.n, model.fs)
    pairs = conjugate_pairs(model.n)
    for ch, (kind, ref_kernel) in enumerate(_reference_kernels(model)):
        if kind == "lowpass":
            xi = class_freqs[0]
        elif kind == "highpass":
            xi = class_freqs[1]
        else:
            xi = max(class_freqs, key=lambda f: frequency_response(ref_kernel, f, model.fs))
        k = int(round(xi * model.n / model.fs))
        graph = channel_spec(model, ch).compile()
        b_ref = frequency_response(ref_kernel, xi, model.fs)
        for a in amplitudes:
            res = ig_complex_wirtinger(graph, dft, sinusoid(xi, 0.0, model.fs, model.n, a),
                                       PathSpec(None, n_steps))
            pair = list(pairs[k])
            others = np.delete(res.scores, pair)
            out.append((ch, xi, a, float(res.scores[pair].sum()),
                        analytic_sinusoid_output(a, b_ref), float(np.max(np.abs(others)))))
    return out


def check_tone_fidelity(model: ModelSpec | None = None) -> list[CheckResult]:
    model = model or build_sinusoid_classifier()
    rows = tone_measurements(model)
    rel = max(abs(m - ref) / ref for _, _, _, m, ref, _ in rows)
    leak = max(o / abs(m) if m else np.inf for _, _, _, m, _, o in rows)
    return [CheckResult.at_most("tone_fidelity", rel, 0.05, "relative error of conjugate-pair IG"),
            CheckResult.at_most("tone_other_bins", leak, 0.01, "max other-bin |IG| / pair IG")]


def check_virtual_inspection(model: ModelSpec | None = None, n_steps: int = 2048,
                             seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    lin_worst = 0.0
    for _ in range(5):
        lin = build_linear_model(rng.normal(size=32), bias=0.3).compile()
        lin_worst = max(lin_worst, virtual_inspection_check(lin, rng.normal(size=32), n_steps=8))
    model = model or build_sinusoid_classifier()
    data = two_class_samples(2, seed)
    cnn_worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for x, label in zip(data.signals, data.labels):
            g = model.compile(min(label - 1, model.n_outputs - 1))
            cnn_worst = max(cnn_worst, virtual_inspection_check(g, x, n_steps=n_steps, fs=model.fs))
    return [CheckResult.at_most("virtual_inspection_linear", lin_worst, 1e-8),
            CheckResult.at_most("virtual_inspection_model", cnn_worst, 1e-3, f"n_steps={n_steps}")]


def check_sweep(model: ModelSpec | None = None, n: int = 256, count: int = 64) -> list[CheckResult]:
    model = model or build_sinusoid_classifier()
    out = []
    for ch, kernel in enumerate(model.layers[0].params["kernels"]):
        r = frequency_ig_sweep(kernel, model.fs, n=n, count=count)
        out.append(CheckResult.at_least(f"sweep_correlation_channel{ch + 1}", r.pearson, 0.99,
                                        f"{count} probes"))
    return out


def check_classifier(model: ModelSpec | None = None, count: int = 500, seed: int = 0) -> list[CheckResult]:
    model = model or build_sinusoid_classifier()
    data = two_class_samples(count, seed)
    pred = classify(model, data.signals)
    out = []
    for c in (1, 2):
        acc = float(np.mean(pred[data.labels == c] == c))
        out.append(CheckResult.at_least(f"classifier_accuracy_class{c}", acc, 0.98,
                                        f"{count} samples"))
    return out


def run_all(model: ModelSpec | None = None, n_steps: int = 1024, rule: str = "right_riemann",
            seed: int = 0, fast: bool = False) -> list[CheckResult]:
    """Full suite; ``n_steps`` and ``rule`` drive the completeness checks."""
    model = model or build_sinusoid_classifier()
    results = []
    results += check_gradients(20 if fast else 100, seed)
    results += check_roundtrips(20 if fast else 100, seed)
    results += check_completeness_model(model, 10 if fast else 50, n_steps, rule, seed)
    results.append(check_completeness_linear(5 if fast else 20, seed))
    results.append(check_completeness_nonlinear(n_steps, rule, seed))
    results.append(check_algorithm_equivalence(10 if fast else 50))
    results.append(check_identity_reduction(10 if fast else 50))
    results += check_tone_fidelity(model)
    results += check_virtual_inspection(model, 256 if fast else 2048, seed)
    results += check_sweep(model)
    results += check_classifier(model, 100 if fast else 500, seed)
    return results
