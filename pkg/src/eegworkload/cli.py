"""Command-line pipeline: synth, preprocess, epoch, features, evaluate,
rank, signature, stats, dynamics.

Every subcommand reads and writes the documented CSV/JSON artifacts, takes
all randomness from explicit seeds, and exits 0 on success. Failures print a
machine-readable JSON object to stderr and exit nonzero. The WORKBENCH_THREADS
environment variable caps worker threads; results are merged by index so the
output bytes do not depend on thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np

from . import fileio
from .config import PipelineConfig
from .dynamics import aggregate_subjects, signature_time_course
from .errors import ConfigError, ParameterError, WorkloadError
from .evaluation import cross_block_split, evaluate, repeated_kfold_split
from .features import extract_all
from .preprocessing import bandpass_filter, downsample, extract_epochs, rereference, select_channels
from .recording import CANONICAL_CHANNELS
from .stats import (
    anova_f_scores,
    benjamini_hochberg,
    build_signature,
    paired_bootstrap_f_test,
    signature_value,
    wilcoxon_signed_rank,
)
from .synth import SynthConfig, generate


def _thread_count() -> int:
    raw = os.environ.get("WORKBENCH_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"WORKBENCH_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"WORKBENCH_THREADS must be >= 1, got {n}")
    return n


def _load_config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        payload = fileio._read_json(args.config)
        return PipelineConfig.from_json_dict(payload)
    return PipelineConfig()


def _cmd_synth(args) -> int:
    cfg = SynthConfig(
        sampling_rate_hz=args.rate,
        epochs_per_class_per_block=args.epochs_per_class,
        n_blocks=args.blocks,
        theta_amplitude=args.theta_amp,
        delta_amplitude=args.delta_amp,
        source_gain=args.source_gain,
        noise_slope=args.noise_slope,
        burst_envelope=args.envelope,
        seed=args.seed,
    )
    rec, events, manifest = generate(cfg)
    os.makedirs(args.out, exist_ok=True)
    fileio.write_recording(rec, os.path.join(args.out, "recording.csv"))
    fileio.write_events(events, os.path.join(args.out, "events.csv"))
    fileio.write_manifest(manifest, os.path.join(args.out, "manifest.json"))
    return 0


def _cmd_preprocess(args) -> int:
    config = _load_config(args)
    rec = fileio.read_recording(args.infile)
    low = args.low if args.low is not None else config.bandpass_low_hz
    high = args.high if args.high is not None else config.bandpass_high_hz
    rec = bandpass_filter(rec, low, high)
    reref = args.reref if args.reref is not None else config.reference_channel
    if reref:
        rec = rereference(rec, reref)
    target = args.target_rate
    if target is None and args.config:
        target = config.target_rate_hz
    if target is not None and target != rec.sampling_rate_hz:
        rec = downsample(rec, target)
    fileio.write_recording(rec, args.out)
    return 0


def _cmd_epoch(args) -> int:
    config = _load_config(args)
    rec = fileio.read_recording(args.infile)
    events = fileio.read_events(args.events)
    channels = (
        tuple(args.channels.split(",")) if args.channels else config.channel_subset
    )
    rec = select_channels(rec, channels)
    epochs = extract_epochs(rec, events, (args.window_start, args.window_end))
    fileio.write_epochs(epochs, args.out)
    return 0


def _cmd_features(args) -> int:
    config = _load_config(args)
    epochs = fileio.read_epochs(args.infile)
    worker = partial(
        extract_all,
        mi_bins=config.mi_bins,
        welch_segment_sec=config.welch_segment_sec,
        welch_overlap_fraction=config.welch_overlap_fraction,
    )
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vectors = list(pool.map(worker, epochs))
    else:
        vectors = [worker(e) for e in epochs]
    fileio.write_feature_table(
        vectors,
        labels=[e.class_label for e in epochs],
        block_ids=[e.block_id for e in epochs],
        path=args.out,
    )
    return 0


def _cmd_evaluate(args) -> int:
    config = _load_config(args)
    fs = fileio.read_feature_table(args.infile)
    seed = args.seed if args.seed is not None else config.seed
    scheme = args.cv if args.cv is not None else config.cv_scheme
    if scheme == "cross-block":
        splitter = cross_block_split
    else:
        splitter = partial(
            repeated_kfold_split,
            k=config.kfold_k,
            repeats=config.kfold_repeats,
            seed=seed,
        )
    top = args.top_percent if args.top_percent is not None else config.top_percent
    result = evaluate(
        fs,
        splitter,
        n_g=args.ng,
        feature_space=args.feature_space,
        top_percent=top,
        C=config.svm_c,
        tol=config.svm_tol,
        max_iter=config.svm_max_iter,
        seed=seed,
        threads=_thread_count(),
    )
    result.metadata["cv"] = scheme
    fileio.write_eval_result(result, args.out)
    return 0


def _cmd_rank(args) -> int:
    fs = fileio.read_feature_table(args.infile)
    scores = anova_f_scores(fs.X, fs.y, fs.feature_names)
    fileio.write_feature_scores(scores, args.out)
    return 0


def _cmd_signature(args) -> int:
    fs = fileio.read_feature_table(args.infile)
    if args.apply:
        sig = fileio.read_signature(args.apply)
        rows = [
            (
                fs.order_index[i],
                fs.y[i],
                fs.block_ids[i],
                signature_value(sig, dict(zip(fs.feature_names, fs.X[i]))),
            )
            for i in range(fs.n)
        ]
        fileio.write_signature_values(rows, args.out)
        return 0
    scores = anova_f_scores(fs.X, fs.y, fs.feature_names)
    sig = build_signature(fs.X, fs.y, scores, k=args.k)
    fileio.write_signature(sig, args.out)
    return 0


def _cmd_stats(args) -> int:
    config = _load_config(args)
    seed = args.seed if args.seed is not None else config.stats_seed
    if args.method == "bh":
        payload = fileio._read_json(args.infile)
        if "p_values" not in payload:
            raise ParameterError(f"{args.infile}: expected a 'p_values' key")
        adjusted = benjamini_hochberg(payload["p_values"])
        fileio._write_json(
            args.out,
            {
                "method": "benjamini-hochberg",
                "p_values": list(map(float, payload["p_values"])),
                "adjusted_p_values": adjusted.tolist(),
            },
        )
        return 0
    res_a = fileio.read_eval_result(args.a)
    res_b = fileio.read_eval_result(args.b)
    a = np.array(res_a.fold_scores)
    b = np.array(res_b.fold_scores)
    if len(a) != len(b):
        raise ParameterError(
            f"fold counts differ: {len(a)} vs {len(b)}; results are not paired"
        )
    if args.method == "wilcoxon":
        result = wilcoxon_signed_rank(a, b)
    else:
        result = paired_bootstrap_f_test(
            a, b, resamples=config.stats_resamples, seed=seed
        )
    fileio.write_test_result(result, args.out)
    return 0


def _cmd_dynamics(args) -> int:
    config = _load_config(args)
    rec_paths = args.infile.split(",")
    event_paths = args.events.split(",")
    if len(rec_paths) != len(event_paths):
        raise ParameterError("need one events file per recording")
    sig = fileio.read_signature(args.signature)
    wanted = {"low": (0,), "high": (1,), "all": (0, 1)}[args.classes]
    series = []
    for rec_path, ev_path in zip(rec_paths, event_paths):
        rec = fileio.read_recording(rec_path)
        if set(config.channel_subset) <= set(rec.channel_labels):
            rec = select_channels(rec, config.channel_subset)
        events = [
            ev for ev in fileio.read_events(ev_path) if ev.class_label in wanted
        ]
        series.append(
            signature_time_course(
                rec,
                events,
                sig,
                window_sec=args.window,
                step_sec=args.step,
                span=(args.span_min, args.span_max),
            )
        )
    fileio.write_time_course(aggregate_subjects(series), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegworkload",
        description="EEG memory-workload feature extraction, evaluation, and statistics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, infile=True, out=True):
        p.add_argument("--config", help="pipeline configuration JSON")
        if infile:
            p.add_argument("--in", dest="infile", required=True, help="input file")
        if out:
            p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("synth", help="generate a synthetic dataset with planted effects")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate", type=float, default=250.0)
    p.add_argument("--blocks", type=int, default=6)
    p.add_argument("--epochs-per-class", type=int, default=24)
    p.add_argument("--theta-amp", type=float, default=SynthConfig.theta_amplitude)
    p.add_argument("--delta-amp", type=float, default=SynthConfig.delta_amplitude)
    p.add_argument("--source-gain", type=float, default=SynthConfig.source_gain)
    p.add_argument("--noise-slope", type=float, default=1.0)
    p.add_argument("--envelope", choices=["flat", "onset_ramp"], default="flat")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("preprocess", help="band-pass, re-reference, and downsample")
    add_common(p)
    p.add_argument("--low", type=float, default=None, help="band-pass low edge (Hz)")
    p.add_argument("--high", type=float, default=None, help="band-pass high edge (Hz)")
    p.add_argument("--reref", default=None, help="reference channel label")
    p.add_argument("--target-rate", type=float, default=None, help="decimation target (Hz)")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("epoch", help="cut event-locked epochs")
    add_common(p)
    p.add_argument("--events", required=True, help="event CSV")
    p.add_argument("--window-start", type=float, default=-1.0)
    p.add_argument("--window-end", type=float, default=0.0)
    p.add_argument("--channels", default=None, help="comma-separated channel subset")
    p.set_defaults(func=_cmd_epoch)

    p = sub.add_parser("features", help="extract the 112-feature vectors")
    add_common(p)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("evaluate", help="grouped cross-validated classification")
    add_common(p)
    p.add_argument("--ng", type=int, default=1, help="samples averaged per group")
    p.add_argument(
        "--feature-space", choices=["bp", "mi", "coh", "all"], default="all"
    )
    p.add_argument("--cv", choices=["cross-block", "kfold"], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--top-percent", type=float, default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("rank", help="rank features by ANOVA F value")
    add_common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("signature", help="build or apply a workload signature")
    add_common(p)
    p.add_argument("--k", type=int, default=5, help="number of top features")
    p.add_argument("--apply", default=None, help="apply this signature JSON instead")
    p.set_defaults(func=_cmd_signature)

    p = sub.add_parser("stats", help="hypothesis tests over result files")
    p.add_argument("--config", help="pipeline configuration JSON")
    p.add_argument("--method", choices=["wilcoxon", "bootstrap-f", "bh"], required=True)
    p.add_argument("--a", help="first EvalResult JSON (paired tests)")
    p.add_argument("--b", help="second EvalResult JSON (paired tests)")
    p.add_argument("--in", dest="infile", help="p-values JSON (bh)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("dynamics", help="signature time-course around events")
    add_common(p)
    p.add_argument("--events", required=True, help="comma-separated event CSVs")
    p.add_argument("--signature", required=True, help="signature JSON")
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.2)
    p.add_argument("--span-min", type=float, default=-1.0)
    p.add_argument("--span-max", type=float, default=1.0)
    p.add_argument("--classes", choices=["low", "high", "all"], default="all")
    p.set_defaults(func=_cmd_dynamics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stats":
        if args.method == "bh" and not args.infile:
            parser.error("stats --method bh requires --in")
        if args.method in ("wilcoxon", "bootstrap-f") and not (args.a and args.b):
            parser.error(f"stats --method {args.method} requires --a and --b")
    try:
        return args.func(args)
    except WorkloadError as exc:
        json.dump(exc.to_json_dict(), sys.stderr)
        sys.stderr.write("\n")
        return 2
    except FileNotFoundError as exc:
        json.dump({"error": "FileNotFound", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
