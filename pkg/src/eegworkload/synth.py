"""Synthetic recordings with planted, parameterized class effects.

Background activity is per-channel 1/f^slope noise (spectrally shaped seeded
white noise, normalized to unit standard deviation). HIGH-class epochs add
(a) 6 Hz theta and 2 Hz delta sinusoids with fresh random phase on the
frontal channels, and (b) a shared broadband latent source mixed into the
same channels, which raises their pairwise mutual information and coherence.
Epochs alternate LOW, HIGH, ... within each block, and each event marks the
end of its one-second epoch, so epoching with window [-1, 0] recovers the
planted slabs exactly.

Planted frequencies sit on integer DFT bins, so a flat burst envelope gives
the closed-form per-epoch bin-power increase (N * A / 2)^2. The
"onset_ramp" envelope rises as sin(pi*u/2) toward the event, which moves
the peak of one-second windowed energy to just before the onset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .features import bp_feature_names, coh_feature_names
from .recording import CANONICAL_CHANNELS, EventMarker, Recording

THETA_HZ = 6.0
DELTA_HZ = 2.0
BOOST_CHANNELS = ("F3", "F4", "Fz", "AFz")
ENVELOPES = ("flat", "onset_ramp")


@dataclass(frozen=True, eq=False)
class SynthConfig:
    """Generator parameters; the seed fixes the dataset bit-exactly."""

    channel_labels: tuple = CANONICAL_CHANNELS
    sampling_rate_hz: float = 250.0
    epochs_per_class_per_block: int = 24
    n_blocks: int = 6
    theta_amplitude: float = 1.2
    delta_amplitude: float = 1.0
    source_gain: float = 0.8
    noise_slope: float = 1.0
    noise_scale: float = 1.0
    epoch_sec: float = 1.0
    pad_sec: float = 2.0
    burst_envelope: str = "flat"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "channel_labels", tuple(self.channel_labels))
        if len(set(self.channel_labels)) != len(self.channel_labels):
            raise ParameterError("channel labels must be unique")
        if not set(BOOST_CHANNELS) <= set(self.channel_labels):
            raise ParameterError(f"labels must include {BOOST_CHANNELS}")
        if not self.sampling_rate_hz > 0:
            raise ParameterError("sampling_rate_hz must be positive")
        if self.epochs_per_class_per_block < 1 or self.n_blocks < 1:
            raise ParameterError("need at least one epoch per class and one block")
        for name in ("theta_amplitude", "delta_amplitude", "source_gain",
                     "noise_slope", "noise_scale"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        if self.epoch_sec <= 0 or self.pad_sec < 0:
            raise ParameterError("epoch_sec must be > 0 and pad_sec >= 0")
        if self.burst_envelope not in ENVELOPES:
            raise ParameterError(f"burst_envelope must be one of {ENVELOPES}")


def _one_over_f_noise(rng: np.random.Generator, n: int, slope: float) -> np.ndarray:
    white = rng.standard_normal(n)
    if slope == 0:
        shaped = white
    else:
        spectrum = np.fft.rfft(white)
        freqs = np.fft.rfftfreq(n)
        shaping = np.zeros_like(freqs)
        shaping[1:] = freqs[1:] ** (-slope / 2.0)
        shaped = np.fft.irfft(spectrum * shaping, n=n)
    sd = shaped.std()
    return shaped / sd if sd > 0 else shaped


def _envelope(kind: str, n: int) -> np.ndarray:
    u = np.arange(n) / n
    if kind == "flat":
        return np.ones(n)
    return np.sin(np.pi * u / 2.0)


def expected_bin_power_increase(config: SynthConfig, amplitude: float) -> float:
    """Expected planted-bin squared-DFT-magnitude increase per HIGH epoch.

    Exact (N * A / 2)^2 for the flat envelope; the onset ramp uses the
    slow-envelope approximation (N * A / pi)^2.
    """
    n = int(round(config.epoch_sec * config.sampling_rate_hz))
    if config.burst_envelope == "flat":
        return (n * amplitude / 2.0) ** 2
    return (n * amplitude / np.pi) ** 2


def planted_feature_names(config: SynthConfig) -> list:
    """Feature names the generator makes class-discriminative."""
    names = []
    for band in ("theta", "delta"):
        names += [n for n in bp_feature_names(config.channel_labels)
                  if n.startswith(f"bp_{band}_") and n.split("_")[-1] in BOOST_CHANNELS]
    boost = [ch for ch in config.channel_labels if ch in BOOST_CHANNELS]
    for i in range(len(boost)):
        for j in range(i + 1, len(boost)):
            names.append(f"mi_{boost[i]}_{boost[j]}")
    names += [
        n for n in coh_feature_names(config.channel_labels)
        if n.split("_")[-2] in BOOST_CHANNELS and n.split("_")[-1] in BOOST_CHANNELS
    ]
    return names


def generate(config: SynthConfig):
    """Build (Recording, events, manifest) with planted HIGH-class effects."""
    rng = np.random.default_rng(config.seed)
    rate = config.sampling_rate_hz
    n_epoch = int(round(config.epoch_sec * rate))
    n_pad = int(round(config.pad_sec * rate))
    epochs_per_block = 2 * config.epochs_per_class_per_block
    n_total = 2 * n_pad + config.n_blocks * epochs_per_block * n_epoch
    n_ch = len(config.channel_labels)

    data = np.empty((n_ch, n_total))
    for c in range(n_ch):
        data[c] = config.noise_scale * _one_over_f_noise(
            rng, n_total, config.noise_slope
        )

    boost_rows = [config.channel_labels.index(ch) for ch in BOOST_CHANNELS]
    env = _envelope(config.burst_envelope, n_epoch)
    t_local = np.arange(n_epoch) / rate
    events = []
    for b in range(config.n_blocks):
        for e in range(epochs_per_block):
            start = n_pad + (b * epochs_per_block + e) * n_epoch
            cls = e % 2
            events.append(
                EventMarker(
                    time_sec=(start + n_epoch) / rate, class_label=cls, block_id=b
                )
            )
            if cls == 1:
                for f0, amp in (
                    (THETA_HZ, config.theta_amplitude),
                    (DELTA_HZ, config.delta_amplitude),
                ):
                    for row in boost_rows:
                        phase = rng.uniform(0.0, 2.0 * np.pi)
                        data[row, start : start + n_epoch] += (
                            amp * env * np.sin(2.0 * np.pi * f0 * t_local + phase)
                        )
                source = rng.standard_normal(n_epoch)
                for row in boost_rows:
                    data[row, start : start + n_epoch] += config.source_gain * source

    rec = Recording(
        channel_labels=config.channel_labels,
        sampling_rate_hz=rate,
        data=data,
    )
    manifest = {
        "seed": config.seed,
        "sampling_rate_hz": rate,
        "n_blocks": config.n_blocks,
        "epochs_per_class_per_block": config.epochs_per_class_per_block,
        "epoch_sec": config.epoch_sec,
        "burst_envelope": config.burst_envelope,
        "boost_channels": list(BOOST_CHANNELS),
        "planted_bins_hz": {"theta": THETA_HZ, "delta": DELTA_HZ},
        "amplitudes": {
            "theta": config.theta_amplitude,
            "delta": config.delta_amplitude,
        },
        "source_gain": config.source_gain,
        "noise_slope": config.noise_slope,
        "bin_power_model": (
            "exact" if config.burst_envelope == "flat" else "slow-envelope approximation"
        ),
        "expected_bin_power_increase": {
            "theta": expected_bin_power_increase(config, config.theta_amplitude),
            "delta": expected_bin_power_increase(config, config.delta_amplitude),
        },
        "planted_features": planted_feature_names(config),
    }
    return rec, events, manifest
