"""Command-line entry point: ``crossig <subcommand> ...``.

Exit codes: 0 success, 1 failed validation, 2 bad configuration or input.
Every output is a pure function of the arguments, so reruns are
byte-identical; headers carry the package version and a config hash.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, validation
from .evalharness import (DatasetSpec, frequency_ig_sweep, generate_trend_seasonal,
                          generate_trend_seasonal_set, generate_two_class, run_curve, sinusoid)
from .fileio import (SignalFormatError, config_hash, is_dataset, read_dataset, read_signal,
                     svg_stem, write_dataset, write_signal)
from .igengine import PathSpec, attribute, baseline_filtered, ig_classic
from .modelzoo import (ModelFormatError, build_sinusoid_classifier, dumps_model, load_model,
                       save_model)
from .transforms import (KINDS, TransformError, fit_fastica, make_transform, transform_from_json,
                         transform_to_json)

ALGORITHM_FLAGS = {"real": "real", "complex_split": "split", "complex_wirtinger": "wirtinger"}


class CLIError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def _existing(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CLIError(f"file not found: {path}")
    return p


def _config(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _header(args, **extra) -> str:
    cfg = _config(args)
    fields = {"version": __version__, "seed": cfg.get("seed"), "config": config_hash(cfg), **extra}
    return "# crossig " + " ".join(f"{k}={v}" for k, v in fields.items())


def _meta(args) -> dict:
    cfg = _config(args)
    return {"version": __version__, "seed": cfg.get("seed"), "config_hash": config_hash(cfg),
            "config": cfg}


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _formats(args) -> set[str]:
    fmts = {f.strip() for f in args.format.split(",") if f.strip()}
    bad = fmts - {"csv", "json", "svg"}
    if bad:
        raise CLIError(f"unknown output format(s): {sorted(bad)}")
    return fmts


def _load_model(args):
    if args.model is None:
        return build_sinusoid_classifier()
    return load_model(_existing(args.model))


def _load_signal(args):
    path = _existing(args.signal)
    if is_dataset(path):
        signals, labels, meta = read_dataset(path)
        if not 0 <= args.index < len(signals):
            raise CLIError(f"--index {args.index} out of range for {len(signals)} signals")
        return signals[args.index], float(meta.get("fs", 1.0)), int(labels[args.index])
    if args.index:
        raise CLIError("--index only applies to dataset files")
    x, fs = read_signal(path)
    return x, fs, None


def _resolve_transform(args, x, fs):
    spec = args.transform
    if spec in KINDS:
        n = x.shape[-1]
        period = args.period
        if spec == "seasonal_trend" and period is None:
            raise CLIError("--transform seasonal_trend needs --period")
        return make_transform(spec, n=n if spec == "dft" else None, fs=fs, period=period)
    return transform_from_json(_existing(spec).read_text(encoding="utf-8"))


def _resolve_baseline(args, transform, x):
    mode = args.baseline
    if mode == "zero":
        return None
    if not mode.startswith("filtered:"):
        raise CLIError(f"--baseline must be zero or filtered:<indices|all>, got {mode!r}")
    z = transform.forward(x)
    keep = np.zeros(z.values.shape[0], dtype=bool)
    sel = mode.split(":", 1)[1]
    if sel == "all":
        keep[:] = True
    elif sel:
        try:
            idx = [int(i) for i in sel.split(",")]
        except ValueError:
            raise CLIError(f"bad baseline indices {sel!r}") from None
        if any(not 0 <= i < keep.size for i in idx):
            raise CLIError(f"baseline index out of range 0..{keep.size - 1}")
        keep[idx] = True
    return baseline_filtered(z, keep)


def _target_index(args, model, x, label):
    if model.n_outputs == 1:
        return None
    if args.target is not None:
        if not 0 <= args.target < model.n_outputs:
            raise CLIError(f"--target must be in 0..{model.n_outputs - 1}")
        return args.target
    if label is not None and 1 <= label <= model.n_outputs:
        return label - 1
    return int(np.argmax(model.outputs(x)))


def cmd_explain(args) -> int:
    model = _load_model(args)
    x, fs, label = _load_signal(args)
    if tuple(x.shape) != model.input_shape:
        raise CLIError(f"signal shape {x.shape} does not match model input {model.input_shape}")
    transform = _resolve_transform(args, x, fs)
    algorithm = ALGORITHM_FLAGS[args.algorithm] if args.algorithm else None
    target = _target_index(args, model, x, label)
    path = PathSpec(_resolve_baseline(args, transform, x), args.steps, args.rule)
    res = attribute(model.compile(target), transform, x, path, algorithm)
    out = _outdir(args)
    fmts = _formats(args)
    labels, scores = res.features()
    extra = {"algorithm": res.algorithm, "transform": transform.kind, "target": target}
    if "json" in fmts:
        doc = res.to_dict()
        doc["target"] = target
        doc["meta"] = _meta(args)
        (out / "attribution.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n",
                                              encoding="utf-8")
    if "csv" in fmts:
        lines = [_header(args, **extra), "feature_label,score"]
        lines += [f"{lab},{float(s)!r}" for lab, s in zip(labels, scores)]
        (out / "attribution.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        if res.scores.ndim == 2:
            rows = [_header(args, **extra), "feature_label,time_index,score"]
            for lab, row in zip(res.labels, res.scores):
                rows += [f"{lab},{t},{float(v)!r}" for t, v in enumerate(row)]
            (out / "attribution_elements.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    if "svg" in fmts:
        (out / "attribution.svg").write_text(
            svg_stem(scores, labels, f"{transform.kind} IG ({res.algorithm})"), encoding="utf-8")
    print(f"completeness residual: {res.completeness_residual:.3e} "
          f"(f(x)={res.f_input:.6g}, f(baseline)={res.f_baseline:.6g})", file=sys.stderr)
    top = labels[int(np.argmax(scores))]
    print(f"top feature: {top}")
    return 0


def cmd_validate(args) -> int:
    model = _load_model(args)
    results = validation.run_all(model, n_steps=args.steps, rule=args.rule, seed=args.seed,
                                 fast=args.fast)
    for r in results:
        print(r.line())
    if args.out:
        out = _outdir(args)
        lines = [_header(args), "name,value,threshold,passed"]
        lines += [f"{r.name},{r.value!r},{r.threshold!r},{r.passed}" for r in results]
        (out / "validation.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def cmd_eval(args) -> int:
    model = _load_model(args)
    if args.data:
        signals, labels, meta = read_dataset(_existing(args.data))
        fs = float(meta.get("fs", model.fs))
    else:
        data = generate_two_class(DatasetSpec(fs=model.fs, n=model.n, seed=args.seed), args.count)
        signals, labels, fs = data.signals, data.labels, model.fs
    transform = _resolve_transform(args, signals[0], fs)
    if model.n_outputs > 1:
        targets = [min(max(int(l) - 1, 0), model.n_outputs - 1) for l in labels]
    else:
        targets = [0] * len(signals)
    try:
        k_list = [float(k) for k in args.k.split(",")]
    except ValueError:
        raise CLIError(f"bad --k list {args.k!r}") from None
    algorithm = ALGORITHM_FLAGS[args.algorithm] if args.algorithm else None
    report = run_curve(model, transform, algorithm, signals, targets, k_list, trials=args.trials,
                       seed=args.seed, n_steps=args.steps, rule=args.rule)
    out = _outdir(args)
    fmts = _formats(args)
    if "csv" in fmts:
        (out / "report.csv").write_text(_header(args) + "\n" + report.to_csv(), encoding="utf-8")
    if "json" in fmts:
        doc = report.to_dict()
        doc["meta"] = _meta(args)
        (out / "report.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n",
                                         encoding="utf-8")
    for mode in ("deletion", "insertion"):
        for k in report.curve(mode, "ig_ranked")[0]:
            print(f"{mode} k={k:g}%: ig_ranked={report.value(mode, 'ig_ranked', k):.6g} "
                  f"random={report.value(mode, 'random', k):.6g}")
    return 0


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    cfg = _config(args)
    if args.kind == "two_class":
        spec = DatasetSpec(fs=args.fs or 32.0, n=args.n or 128, seed=args.seed)
        data = generate_two_class(spec, args.count)
        write_dataset(out, data.signals, data.labels,
                      {"kind": "two_class_sinusoid", "fs": spec.fs, "n": spec.n, "seed": spec.seed,
                       "count": args.count, "config": config_hash(cfg)})
    elif args.kind == "trend_seasonal":
        spec = DatasetSpec.trend_seasonal(seed=args.seed, fs=args.fs or 64.0, n=args.n or 512)
        if args.alpha is not None:
            s = generate_trend_seasonal(args.alpha, args.freq or 2.0, args.phase, spec.fs, spec.n)
            write_signal(out, s.window, spec.fs, {"config": config_hash(cfg)})
        else:
            series = generate_trend_seasonal_set(spec, args.count)
            write_dataset(out, [s.window for s in series], [0] * len(series),
                          {"kind": "trend_seasonal", "fs": spec.fs, "n": spec.n,
                           "seed": spec.seed, "count": args.count, "config": config_hash(cfg)})
    elif args.kind == "sinusoid":
        fs, n = args.fs or 32.0, args.n or 128
        x = sinusoid(args.freq if args.freq is not None else 1.0, args.phase, fs, n, args.amplitude)
        write_signal(out, x, fs, {"config": config_hash(cfg)})
    else:
        save_model(build_sinusoid_classifier(fs=args.fs or 32.0, n=args.n or 128), out)
    print(f"wrote {out}")
    return 0


def cmd_fit(args) -> int:
    x, _ = read_signal(_existing(args.signal))
    if x.ndim != 2:
        raise CLIError("ICA fitting needs a multichannel signal file")
    t = fit_fastica(x, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(transform_to_json(t) + "\n", encoding="utf-8")
    print(f"wrote {out} (status {t.meta['status']}, {t.meta['n_iter']} iterations)")
    return 0


def cmd_demo(args) -> int:
    model = build_sinusoid_classifier()
    out = _outdir(args)
    dft = make_transform("dft", n=model.n, fs=model.fs)
    head = _header(args)
    for cls, xi in ((1, 1.0), (2, 4.0)):
        x = sinusoid(xi, 0.0, model.fs, model.n)
        graph = model.compile(cls - 1)
        time_ig = ig_classic(graph, x, n_steps=args.steps, rule=args.rule)
        rows = [head, "time_s,signal,score"]
        rows += [f"{t / model.fs!r},{float(v)!r},{float(s)!r}"
                 for t, (v, s) in enumerate(zip(x, time_ig.scores))]
        (out / f"time_attribution_class{cls}.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        freq_ig = attribute(graph, dft, x, PathSpec(None, args.steps, args.rule))
        freqs, merged = freq_ig.onesided()
        rows = [head, "freq_hz,score"] + [f"{float(f)!r},{float(s)!r}" for f, s in zip(freqs, merged)]
        (out / f"freq_attribution_class{cls}.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    for ch, kernel in enumerate(model.layers[0].params["kernels"], start=1):
        sweep = frequency_ig_sweep(kernel, model.fs)
        rows = [head, "freq_hz,ig_mass,response,analytic"]
        rows += [f"{float(f)!r},{float(m)!r},{float(b)!r},{float(a)!r}"
                 for f, m, b, a in zip(sweep.freqs, sweep.ig_mass, sweep.response, sweep.analytic)]
        (out / f"sweep_channel{ch}.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        print(f"channel {ch}: correlation(IG sweep, frequency response) r={sweep.pearson:.6f}")
    (out / "model.json").write_text(dumps_model(model), encoding="utf-8")
    return 0


def _add_common(p, out_required=True):
    p.add_argument("--model", help="model JSON file (default: built-in two-channel classifier)")
    p.add_argument("--steps", type=int, default=256, help="integration steps")
    p.add_argument("--rule", default="right_riemann",
                   choices=["right_riemann", "midpoint", "trapezoid"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=out_required, help="output directory")
    p.add_argument("--format", default="csv,json", help="comma list of csv,json,svg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossig", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"crossig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="attribute one signal in a target domain")
    _add_common(p)
    p.add_argument("--signal", required=True, help="signal CSV or dataset CSV")
    p.add_argument("--index", type=int, default=0, help="row of a dataset file")
    p.add_argument("--transform", default="dft", help="kind or transform JSON path")
    p.add_argument("--period", type=int, help="season length for seasonal_trend")
    p.add_argument("--algorithm", choices=sorted(ALGORITHM_FLAGS))
    p.add_argument("--baseline", default="zero", help="zero | filtered:<indices|all>")
    p.add_argument("--target", type=int, help="output index to explain")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("validate", help="run the invariant suite")
    _add_common(p, out_required=False)
    p.set_defaults(steps=1024)
    p.add_argument("--fast", action="store_true", help="smaller sample counts")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="insertion/deletion curves")
    _add_common(p)
    p.set_defaults(steps=128)
    p.add_argument("--data", help="dataset CSV (default: synthesize two-class samples)")
    p.add_argument("--count", type=int, default=25, help="synthesized samples per class")
    p.add_argument("--transform", default="dft", help="kind or transform JSON path")
    p.add_argument("--period", type=int)
    p.add_argument("--algorithm", choices=sorted(ALGORITHM_FLAGS))
    p.add_argument("--k", default="3.125,25,50,100", help="comma list of k percentages")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="write synthetic data or the reference model")
    p.add_argument("--kind", required=True,
                   choices=["two_class", "trend_seasonal", "sinusoid", "classifier_model"])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fs", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--freq", type=float, help="tone / seasonal frequency in Hz")
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--alpha", type=float, help="single trend_seasonal series with this alpha")
    p.add_argument("--out", required=True, help="output file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="fit an ICA transform to a multichannel signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=30000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True, help="output transform JSON file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("demo", help="time/frequency attributions and the frequency sweep")
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--rule", default="right_riemann",
                   choices=["right_riemann", "midpoint", "trapezoid"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (ModelFormatError, SignalFormatError, TransformError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
