"""Pipeline configuration with strict, lossless JSON round-tripping.

Unknown keys are rejected so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .recording import CANONICAL_CHANNELS


@dataclass(frozen=True, eq=False)
class PipelineConfig:
    channel_subset: tuple = CANONICAL_CHANNELS
    bands: tuple = (("delta", 1.0, 4.0), ("theta", 4.0, 8.0), ("alpha", 8.0, 13.0))
    mi_bins: int = 64
    welch_segment_sec: float = 0.125
    welch_overlap_fraction: float = 0.5
    ng_sweep: tuple = (1, 2, 4, 8)
    bandpass_low_hz: float = 0.1
    bandpass_high_hz: float = 50.0
    target_rate_hz: float = 250.0
    reference_channel: str | None = None
    svm_c: float = 1.0
    svm_tol: float = 1e-3
    svm_max_iter: int = 1_000_000
    cv_scheme: str = "cross-block"
    kfold_k: int = 5
    kfold_repeats: int = 20
    seed: int = 0
    stats_resamples: int = 10_000
    stats_seed: int = 0
    top_percent: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "channel_subset", tuple(self.channel_subset))
        object.__setattr__(
            self, "bands", tuple(tuple(band) for band in self.bands)
        )
        object.__setattr__(self, "ng_sweep", tuple(int(n) for n in self.ng_sweep))
        problems = []
        if self.mi_bins < 2:
            problems.append("mi_bins")
        if not 0 < self.welch_segment_sec:
            problems.append("welch_segment_sec")
        if not 0 <= self.welch_overlap_fraction < 1:
            problems.append("welch_overlap_fraction")
        if any(n < 1 for n in self.ng_sweep):
            problems.append("ng_sweep")
        if not 0 < self.bandpass_low_hz < self.bandpass_high_hz:
            problems.append("bandpass_low_hz/bandpass_high_hz")
        if self.target_rate_hz <= 0:
            problems.append("target_rate_hz")
        if self.svm_c <= 0 or self.svm_tol <= 0 or self.svm_max_iter < 1:
            problems.append("svm_c/svm_tol/svm_max_iter")
        if self.cv_scheme not in ("cross-block", "kfold"):
            problems.append("cv_scheme")
        if self.kfold_k < 2 or self.kfold_repeats < 1:
            problems.append("kfold_k/kfold_repeats")
        if self.stats_resamples < 1:
            problems.append("stats_resamples")
        if self.top_percent is not None and not 0 < self.top_percent <= 100:
            problems.append("top_percent")
        for band in self.bands:
            if len(band) != 3 or not 0 < band[1] < band[2]:
                problems.append(f"bands[{band!r}]")
        if problems:
            raise ConfigError(f"invalid configuration values: {', '.join(problems)}")

    def to_json_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = [list(v) if isinstance(v, tuple) else v for v in value]
            out[f.name] = value
        return out

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**payload)
