#!/usr/bin/env python3
"""Track a workload signature through time around the events.

Uses a ramp-envelope dataset whose high-workload bursts grow toward the
event, builds a signature from its own epochs, slides a one-second
window from one second before to one second after each event, and
prints the subject-averaged time-course as a bar chart. The curve
should crest just before time zero.

Run:
    python3 demos/05_workload_dynamics.py
"""

import numpy as np

from eegworkload import (
    LabeledFeatureSet,
    SynthConfig,
    aggregate_subjects,
    anova_f_scores,
    build_signature,
    extract_all,
    extract_epochs,
    generate,
    signature_time_course,
)


def main():
    cfg = SynthConfig(seed=3, burst_envelope="onset_ramp")
    recording, events, _ = generate(cfg)
    epochs = extract_epochs(recording, events, window=(-1.0, 0.0))
    vectors = [extract_all(e) for e in epochs]
    fs = LabeledFeatureSet(
        X=np.array([v.values for v in vectors]),
        y=np.array([e.class_label for e in epochs]),
        block_ids=np.array([e.block_id for e in epochs]),
        order_index=np.arange(len(epochs)),
        feature_names=vectors[0].names,
    )
    sig = build_signature(fs.X, fs.y, anova_f_scores(fs.X, fs.y, fs.feature_names), k=5)

    high_events = [e for e in events if e.class_label == 1]
    subject = signature_time_course(
        recording,
        high_events,
        sig,
        window_sec=1.0,
        step_sec=0.2,
        span=(-1.0, 1.0),
    )
    course = aggregate_subjects([subject])

    print("signature value in a 1 s window centered at each offset")
    print("(high-workload events only, ramp envelope)\n")
    peak = np.nanmax(course.mean)
    trough = np.nanmin(course.mean)
    for t, m, n in zip(course.times_sec, course.mean, course.n_per_step):
        width = int(round(40 * (m - trough) / (peak - trough)))
        marker = " <- peak" if m == peak else ""
        print(f"{t:+5.1f} s  {m:+7.3f}  {'#' * width}{marker}")
    print(f"\nevents contributing per step: {subject.n_events_used.tolist()}")
    print("offsets whose window would run past the recording are skipped, not padded")


if __name__ == "__main__":
    main()
