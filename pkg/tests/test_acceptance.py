"""End-to-end acceptance contracts for the whole package.

Each test states one analytically verifiable promise: closed-form feature
oracles, protocol counting rules, planted-effect recovery on synthetic data,
exact small-sample statistics, and byte-level determinism. They run on
generated data only and each carries a generous wall-clock budget.
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import kstest

from eegworkload import (
    CANONICAL_CHANNELS,
    LabeledFeatureSet,
    aggregate_subjects,
    anova_f_scores,
    benjamini_hochberg,
    build_signature,
    canonical_feature_names,
    cross_block_split,
    evaluate,
    extract_all,
    group_samples,
    mutual_information,
    msc_spectrum,
    paired_bootstrap_f_test,
    signature_time_course,
    signature_value,
    spectral_power,
    wilcoxon_signed_rank,
)
from eegworkload.recording import Epoch


def make_epoch(data, rate=250.0, labels=None):
    data = np.atleast_2d(data)
    if labels is None:
        labels = tuple(f"c{i}" for i in range(data.shape[0]))
    return Epoch(
        data=data,
        sampling_rate_hz=rate,
        class_label=0,
        block_id=0,
        onset_sec=float(data.shape[1]) / rate,
        channel_labels=labels,
    )


def canonical_epoch(rng, n_sec=1.0, rate=250.0):
    data = rng.standard_normal((len(CANONICAL_CHANNELS), int(round(n_sec * rate))))
    return make_epoch(data, rate=rate, labels=CANONICAL_CHANNELS)


def test_feature_count_contract():
    """Full extraction yields exactly 21 BP + 28 MI + 63 COH = 112 named
    features, in canonical order, in under a second."""
    start = time.monotonic()
    vec = extract_all(canonical_epoch(np.random.default_rng(0)))
    elapsed = time.monotonic() - start
    assert len(vec) == 112
    assert vec.names == canonical_feature_names(CANONICAL_CHANNELS)
    prefixes = [name.split("_")[0] for name in vec.names]
    assert prefixes.count("bp") == 21
    assert prefixes.count("mi") == 28
    assert prefixes.count("coh") == 63
    assert prefixes == ["bp"] * 21 + ["mi"] * 28 + ["coh"] * 63
    assert elapsed < 1.0


def test_spectral_power_closed_form_oracles():
    """Squared DFT magnitudes satisfy Parseval within 1e-6 relative on 100
    random epochs, and a unit 6 Hz sinusoid puts exactly N^2/4 into its
    bin."""
    start = time.monotonic()
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(200, 600))
        epoch = make_epoch(rng.standard_normal((3, n)))
        _, power = spectral_power(epoch)
        one_sided = 2.0 * power.sum(axis=1) - power[:, 0]
        if n % 2 == 0:
            one_sided -= power[:, -1]
        time_energy = n * (epoch.data**2).sum(axis=1)
        np.testing.assert_allclose(one_sided, time_energy, rtol=1e-6)

    n = 250
    t = np.arange(n) / 250.0
    tone = make_epoch(np.sin(2.0 * np.pi * 6.0 * t))
    freqs, power = spectral_power(tone)
    k = int(np.flatnonzero(freqs == 6.0)[0])
    assert power[0, k] == pytest.approx(n**2 / 4.0, rel=1e-6)
    assert time.monotonic() - start < 5.0


def test_mutual_information_oracles():
    """MI(x, x) equals ln 64 for a uniform bin-filling series, independent
    noise at N = 1e6 stays below 0.02 nats, and symmetry is bit-exact."""
    start = time.monotonic()
    uniform = np.sqrt(np.repeat(np.arange(64), 16) + 0.5)
    assert mutual_information(uniform, uniform) == pytest.approx(
        math.log(64.0), abs=1e-9
    )

    rng = np.random.default_rng(2)
    x = rng.standard_normal(1_000_000)
    y = rng.standard_normal(1_000_000)
    assert mutual_information(x, y) < 0.02

    for n in (100, 1024, 5000):
        a = rng.standard_normal(n)
        b = rng.standard_normal(n)
        assert mutual_information(a, b) == mutual_information(b, a)
    assert time.monotonic() - start < 30.0


def test_coherence_closed_form_oracles():
    """Self-coherence is 1 at every frequency within 1e-9; independent
    noise over 100 s averages below 0.05."""
    start = time.monotonic()
    rng = np.random.default_rng(3)
    x = rng.standard_normal(250)
    _, self_msc = msc_spectrum(x, x, 250.0)
    np.testing.assert_allclose(self_msc, 1.0, atol=1e-9)

    long_a = rng.standard_normal(25_000)
    long_b = rng.standard_normal(25_000)
    _, indep = msc_spectrum(long_a, long_b, 250.0)
    assert indep.mean() < 0.05
    assert time.monotonic() - start < 30.0


def test_grouping_count_contract():
    """Grouping n_c same-class samples by n_g yields ceil(n_c / n_g)
    outputs for every n_c in [1, 300], and 10 samples at n_g = 4 average
    in runs of 4, 4, and 2."""
    start = time.monotonic()
    for n_c in range(1, 301):
        fs = LabeledFeatureSet(
            X=np.arange(n_c, dtype=float)[:, None],
            y=np.zeros(n_c, dtype=int),
            block_ids=np.zeros(n_c, dtype=int),
            order_index=np.arange(n_c),
            feature_names=("f0",),
        )
        for n_g in (1, 2, 4, 8):
            assert group_samples(fs, n_g).n == math.ceil(n_c / n_g)

    ten = LabeledFeatureSet(
        X=np.arange(10, dtype=float)[:, None],
        y=np.zeros(10, dtype=int),
        block_ids=np.zeros(10, dtype=int),
        order_index=np.arange(10),
        feature_names=("f0",),
    )
    np.testing.assert_array_equal(
        group_samples(ten, 4).X[:, 0], [np.mean([0, 1, 2, 3]), np.mean([4, 5, 6, 7]), np.mean([8, 9])]
    )
    assert time.monotonic() - start < 5.0


def test_cross_block_protocol_contract(default_features):
    """On a 6-block, 48-epochs-per-block subject every fold trains on 240
    epochs and tests on the held-out block's 48, with no block appearing
    on both sides."""
    start = time.monotonic()
    folds = cross_block_split(default_features)
    assert len(folds) == 6
    tested_blocks = []
    for train, test in folds:
        assert train.n == 240
        assert test.n == 48
        train_blocks = set(train.block_ids.tolist())
        test_blocks = set(test.block_ids.tolist())
        assert len(test_blocks) == 1
        assert train_blocks.isdisjoint(test_blocks)
        tested_blocks += sorted(test_blocks)
    assert sorted(tested_blocks) == sorted(set(default_features.block_ids.tolist()))
    assert time.monotonic() - start < 10.0


def test_accuracy_trend_across_group_sizes(default_features, null_features):
    """With planted effects, the all-feature classifier matches or beats
    band power alone and the no-effect null at every group size, never
    drops more than 0.03 as n_g grows, and reaches 0.85 at n_g = 8."""
    start = time.monotonic()
    sweep = (1, 2, 4, 8)

    def run(fs, space):
        return {
            ng: evaluate(fs, cross_block_split, n_g=ng, feature_space=space).mean
            for ng in sweep
        }

    all_acc = run(default_features, "all")
    bp_acc = run(default_features, "bp")
    null_acc = run(null_features, "all")
    for ng in sweep:
        assert all_acc[ng] >= bp_acc[ng]
        assert all_acc[ng] >= null_acc[ng]
    for lo, hi in zip(sweep, sweep[1:]):
        assert all_acc[hi] >= all_acc[lo] - 0.03
    assert all_acc[8] >= 0.85
    assert time.monotonic() - start < 300.0


def test_feature_selection_plateau(default_features):
    """Keeping all features never loses to keeping the top 10%, and
    accuracy from 70% to 100% kept features stays within 0.02 of the
    full-feature score."""
    start = time.monotonic()
    accuracy = {
        pct: evaluate(
            default_features,
            cross_block_split,
            n_g=8,
            feature_space="all",
            top_percent=pct,
        ).mean
        for pct in (10.0, 70.0, 80.0, 90.0, 100.0)
    }
    assert accuracy[100.0] >= accuracy[10.0]
    for pct in (70.0, 80.0, 90.0):
        assert abs(accuracy[pct] - accuracy[100.0]) <= 0.02
    assert time.monotonic() - start < 600.0


def test_statistics_battery():
    """Wilcoxon enumerates n = 6 all-positive pairs to p = 0.03125 exactly,
    BH lifts the evenly spaced quartet to 0.04 exactly, and the bootstrap
    F-test's p is uniform under the null (KS at alpha = 0.01 over 500
    datasets)."""
    start = time.monotonic()
    wilcox = wilcoxon_signed_rank(np.arange(1.0, 7.0), np.zeros(6))
    assert wilcox.p_value == 0.03125

    adjusted = benjamini_hochberg([0.01, 0.02, 0.03, 0.04])
    assert adjusted.tolist() == [0.04, 0.04, 0.04, 0.04]

    rng = np.random.default_rng(20260817)
    p_values = [
        paired_bootstrap_f_test(
            rng.standard_normal(12), np.zeros(12), resamples=2000, seed=1000 + i
        ).p_value
        for i in range(500)
    ]
    assert kstest(p_values, "uniform").pvalue > 0.01
    assert time.monotonic() - start < 300.0


def test_signature_contract(default_features, ramp_dataset, ramp_features):
    """Built signatures score HIGH above LOW on their build data, the
    frontal delta+theta-alpha index separates planted-theta epochs by at
    least 3 standard errors, and the pre-onset burst time-course peaks
    within 0.4 s of the event."""
    start = time.monotonic()
    fs = default_features
    scores = anova_f_scores(fs.X, fs.y, fs.feature_names)
    sig = build_signature(fs.X, fs.y, scores, k=5)
    values = np.array(
        [
            signature_value(sig, dict(zip(fs.feature_names, row)))
            for row in fs.X
        ]
    )
    assert values[fs.y == 1].mean() >= values[fs.y == 0].mean()

    names = list(fs.feature_names)
    literature = (
        fs.X[:, names.index("bp_delta_Fz")]
        + fs.X[:, names.index("bp_theta_Fz")]
        - fs.X[:, names.index("bp_alpha_Fz")]
    )
    high = literature[fs.y == 1]
    low = literature[fs.y == 0]
    std_err = math.sqrt(high.var(ddof=1) / len(high) + low.var(ddof=1) / len(low))
    assert high.mean() - low.mean() >= 3.0 * std_err

    rec, events, _ = ramp_dataset
    ramp_scores = anova_f_scores(ramp_features.X, ramp_features.y, ramp_features.feature_names)
    ramp_sig = build_signature(ramp_features.X, ramp_features.y, ramp_scores, k=5)
    high_events = [ev for ev in events if ev.class_label == 1]
    course = aggregate_subjects(
        [
            signature_time_course(
                rec,
                high_events,
                ramp_sig,
                window_sec=1.0,
                step_sec=0.2,
                span=(-1.0, 1.0),
            )
        ]
    )
    peak_time = course.times_sec[int(np.nanargmax(course.mean))]
    assert abs(peak_time) <= 0.4 + 1e-9
    assert time.monotonic() - start < 300.0


def test_pipeline_determinism(tmp_path):
    """Two complete pipeline runs with identical seeds leave byte-identical
    artifacts at every stage."""
    from eegworkload.cli import main

    start = time.monotonic()

    def run(root):
        raw = root / "raw"
        assert main(["synth", "--out", str(raw), "--seed", "1",
                     "--blocks", "2", "--epochs-per-class", "4"]) == 0
        assert main(["preprocess", "--in", str(raw / "recording.csv"),
                     "--out", str(root / "clean.csv")]) == 0
        assert main(["epoch", "--in", str(root / "clean.csv"),
                     "--events", str(raw / "events.csv"),
                     "--out", str(root / "epochs.csv")]) == 0
        assert main(["features", "--in", str(root / "epochs.csv"),
                     "--out", str(root / "features.csv")]) == 0
        for space in ("all", "bp"):
            assert main(["evaluate", "--in", str(root / "features.csv"),
                         "--out", str(root / f"eval_{space}.json"),
                         "--feature-space", space, "--ng", "2"]) == 0
        assert main(["rank", "--in", str(root / "features.csv"),
                     "--out", str(root / "scores.csv")]) == 0
        assert main(["signature", "--in", str(root / "features.csv"),
                     "--out", str(root / "sig.json")]) == 0
        assert main(["signature", "--in", str(root / "features.csv"),
                     "--apply", str(root / "sig.json"),
                     "--out", str(root / "sig_values.csv")]) == 0
        assert main(["stats", "--method", "bootstrap-f",
                     "--a", str(root / "eval_all.json"),
                     "--b", str(root / "eval_bp.json"),
                     "--seed", "5", "--out", str(root / "test.json")]) == 0
        assert main(["dynamics", "--in", str(root / "clean.csv"),
                     "--events", str(raw / "events.csv"),
                     "--signature", str(root / "sig.json"),
                     "--out", str(root / "course.csv"),
                     "--span-min", "-0.4", "--span-max", "0.4",
                     "--step", "0.4", "--classes", "high"]) == 0

    first = tmp_path / "first"
    second = tmp_path / "second"
    first.mkdir()
    second.mkdir()
    run(first)
    run(second)

    relative = sorted(
        p.relative_to(first) for p in first.rglob("*") if p.is_file()
    )
    assert relative
    assert relative == sorted(
        p.relative_to(second) for p in second.rglob("*") if p.is_file()
    )
    for rel in relative:
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel
    assert time.monotonic() - start < 600.0
