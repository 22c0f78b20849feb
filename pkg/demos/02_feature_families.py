#!/usr/bin/env python3
"""Show the three feature families on a single epoch.

Extracts the full 112-dimensional vector (21 band powers, 28 mutual
informations, 63 coherence sums) from one high-workload epoch and prints
a few members of each family next to their low-workload counterparts.

Run:
    python3 demos/02_feature_families.py
"""

import numpy as np

from eegworkload import SynthConfig, extract_all, extract_epochs, generate


def pick(vec, names):
    lookup = dict(zip(vec.names, vec.values))
    return [lookup[n] for n in names]


def main():
    recording, events, _ = generate(SynthConfig(seed=7))
    epochs = extract_epochs(recording, events, window=(-1.0, 0.0))
    low = next(e for e in epochs if e.class_label == 0)
    high = next(e for e in epochs if e.class_label == 1)

    vec_low = extract_all(low)
    vec_high = extract_all(high)
    families = {}
    for name in vec_high.names:
        families.setdefault(name.split("_")[0], []).append(name)
    print(f"feature vector length: {len(vec_high)}")
    for fam, members in families.items():
        print(f"  {fam}: {len(members)} features "
              f"({members[0]} ... {members[-1]})")

    show = [
        "bp_theta_Fz",
        "bp_alpha_Pz",
        "mi_F3_F4",
        "mi_Pz_POz",
        "coh_theta_F3_Fz",
        "coh_alpha_Pz_POz",
    ]
    print("\nname                 low epoch   high epoch")
    for name, lo, hi in zip(show, pick(vec_low, show), pick(vec_high, show)):
        print(f"{name:<20} {lo:>9.4f}   {hi:>9.4f}")

    print("\nflags on this pair:", list(vec_low.flags) + list(vec_high.flags) or "none")
    print("band powers are log10 summed squared DFT magnitudes,")
    print("mutual information is in nats over squared samples,")
    print("coherence entries sum magnitude-squared coherence bins per band.")

    # the same pair, degenerate on purpose: a flat channel floors its power
    flat = np.array(low.data, copy=True)
    flat[0] = 0.0
    degenerate = type(low)(
        data=flat,
        sampling_rate_hz=low.sampling_rate_hz,
        class_label=low.class_label,
        block_id=low.block_id,
        onset_sec=low.onset_sec,
        channel_labels=low.channel_labels,
    )
    vec_flat = extract_all(degenerate)
    floored = [f for f in vec_flat.flags if f.startswith("bp_floor")]
    print(f"\nzeroing channel {low.channel_labels[0]} floors "
          f"{len(floored)} band powers and flags them:")
    for flag in floored:
        print(f"  {flag}")


if __name__ == "__main__":
    main()
