#!/usr/bin/env python3
"""Rank features, build a workload signature, and test it.

Ranks all 112 features by two-group ANOVA F, freezes a five-feature
z-scored signature with polarity alignment, compares it against the
fixed frontal literature index, and runs the paired statistics used to
compare evaluation runs.

Run:
    python3 demos/04_signatures_and_stats.py
"""

import numpy as np

from eegworkload import (
    LabeledFeatureSet,
    SynthConfig,
    anova_f_scores,
    benjamini_hochberg,
    build_signature,
    cross_block_split,
    evaluate,
    extract_all,
    extract_epochs,
    generate,
    literature_signature,
    paired_bootstrap_f_test,
    signature_value,
    wilcoxon_signed_rank,
)


def feature_set(seed):
    recording, events, _ = generate(SynthConfig(seed=seed))
    epochs = extract_epochs(recording, events, window=(-1.0, 0.0))
    vectors = [extract_all(e) for e in epochs]
    return LabeledFeatureSet(
        X=np.array([v.values for v in vectors]),
        y=np.array([e.class_label for e in epochs]),
        block_ids=np.array([e.block_id for e in epochs]),
        order_index=np.arange(len(epochs)),
        feature_names=vectors[0].names,
    )


def main():
    fs = feature_set(seed=0)
    scores = anova_f_scores(fs.X, fs.y, fs.feature_names)
    ranked = sorted(scores, key=lambda s: -s.f_value)
    print("top 8 features by ANOVA F:")
    for s in ranked[:8]:
        print(f"  {s.feature_name:<22} F = {s.f_value:9.1f}")

    sig = build_signature(fs.X, fs.y, scores, k=5)
    print("\nsignature entries (z-scored, polarity-aligned):")
    for e in sig.entries:
        print(f"  {e.polarity:+d} * z({e.feature_name})")

    values = np.array(
        [signature_value(sig, dict(zip(fs.feature_names, row))) for row in fs.X]
    )
    for label, cls in (("low", 0), ("high", 1)):
        v = values[fs.y == cls]
        print(f"  {label:<4} workload: {v.mean():+.3f} +/- {v.std(ddof=1):.3f}")

    lit = np.array(
        [
            literature_signature(dict(zip(fs.feature_names, row)))
            for row in fs.X
        ]
    )
    diff = lit[fs.y == 1].mean() - lit[fs.y == 0].mean()
    print(f"\nfrontal delta+theta-alpha index, high minus low: {diff:+.3f}")

    # paired comparisons between two evaluation runs on the same folds
    run_a = evaluate(fs, cross_block_split, n_g=2, feature_space="all", threads=4)
    run_b = evaluate(fs, cross_block_split, n_g=2, feature_space="mi", threads=4)
    a = np.array(run_a.fold_scores)
    b = np.array(run_b.fold_scores)
    print(f"\nall-features folds: {np.round(a, 3).tolist()}")
    print(f"mi-only folds:      {np.round(b, 3).tolist()}")

    w = wilcoxon_signed_rank(a, b)
    f = paired_bootstrap_f_test(a, b, resamples=10_000, seed=0)
    print(f"wilcoxon signed-rank: statistic {w.statistic:g}, p = {w.p_value:g}")
    print(f"paired bootstrap F:   statistic {f.statistic:.3f}, p = {f.p_value:g}")

    raw = [w.p_value, f.p_value, 0.2, 0.9]
    adj = benjamini_hochberg(raw)
    print("\nBH-adjusted p-values for the family of four tests:")
    for r, q in zip(raw, adj):
        print(f"  raw {r:<10.5g} adjusted {q:.5g}")


if __name__ == "__main__":
    main()
