"""Shared fixtures: synthetic datasets and their extracted feature tables.

Dataset generation and feature extraction dominate suite runtime, so the
expensive objects are built once per session. All fixtures are deterministic;
nothing here depends on wall-clock or filesystem state.
"""

import numpy as np
import pytest

from eegworkload import (
    LabeledFeatureSet,
    SynthConfig,
    extract_all,
    extract_epochs,
    generate,
)


def features_from_recording(rec, events):
    """Epoch the second before each event and extract every feature."""
    epochs = extract_epochs(rec, events, (-1.0, 0.0))
    vectors = [extract_all(e) for e in epochs]
    return LabeledFeatureSet(
        X=np.stack([v.values for v in vectors]),
        y=np.array([e.class_label for e in epochs]),
        block_ids=np.array([e.block_id for e in epochs]),
        order_index=np.arange(len(epochs)),
        feature_names=vectors[0].names,
    )


@pytest.fixture(scope="session")
def default_dataset():
    """Recording with planted flat-envelope class effects, default seed."""
    return generate(SynthConfig())


@pytest.fixture(scope="session")
def default_features(default_dataset):
    rec, events, _ = default_dataset
    return features_from_recording(rec, events)


@pytest.fixture(scope="session")
def null_dataset():
    """Same layout but no planted effect: both classes are pure noise."""
    cfg = SynthConfig(
        theta_amplitude=0.0, delta_amplitude=0.0, source_gain=0.0, seed=7
    )
    return generate(cfg)


@pytest.fixture(scope="session")
def null_features(null_dataset):
    rec, events, _ = null_dataset
    return features_from_recording(rec, events)


@pytest.fixture(scope="session")
def ramp_dataset():
    """Planted bursts that ramp up toward each event."""
    return generate(SynthConfig(burst_envelope="onset_ramp", seed=3))


@pytest.fixture(scope="session")
def ramp_features(ramp_dataset):
    rec, events, _ = ramp_dataset
    return features_from_recording(rec, events)
