"""Core data types: recordings, event markers, epochs, and frequency bands.

All types are immutable after construction. Array payloads are copied in and
have their writeable flag cleared, so instances can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

#: Channel subset used for feature extraction, in canonical order.
CANONICAL_CHANNELS = ("F3", "F4", "Fz", "Pz", "AFz", "CPz", "POz")

LOW = 0
HIGH = 1


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise ParameterError(f"expected a {ndim}-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("array contains NaN or infinite values")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BandSpec:
    """A half-open frequency band [low_hz, high_hz)."""

    name: str
    low_hz: float
    high_hz: float

    def __post_init__(self):
        if not (0 < self.low_hz < self.high_hz):
            raise ParameterError(
                f"band {self.name!r} needs 0 < low < high, got [{self.low_hz}, {self.high_hz})"
            )


#: The three analysis bands, in canonical order.
CANONICAL_BANDS = (
    BandSpec("delta", 1.0, 4.0),
    BandSpec("theta", 4.0, 8.0),
    BandSpec("alpha", 8.0, 13.0),
)


@dataclass(frozen=True, eq=False)
class Recording:
    """A multichannel time series.

    Parameters
    ----------
    channel_labels : sequence of str
        Unique labels, one per data row.
    sampling_rate_hz : float
        Positive sampling rate.
    data : array_like, shape (n_channels, n_samples)
        Microvolt-valued samples.
    reference_label : str or None
        If set, that channel's row must be identically zero (it is the
        subtraction reference).
    """

    channel_labels: tuple
    sampling_rate_hz: float
    data: np.ndarray
    reference_label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "channel_labels", tuple(self.channel_labels))
        object.__setattr__(self, "data", _frozen_array(self.data, 2))
        labels = self.channel_labels
        if len(set(labels)) != len(labels):
            raise ParameterError("channel labels must be unique")
        if self.data.shape[0] != len(labels):
            raise ParameterError(
                f"data has {self.data.shape[0]} rows for {len(labels)} labels"
            )
        if not self.sampling_rate_hz > 0:
            raise ParameterError("sampling_rate_hz must be positive")
        if self.reference_label is not None:
            if self.reference_label not in labels:
                raise ParameterError(
                    f"reference label {self.reference_label!r} not among channels"
                )
            ref_row = self.data[labels.index(self.reference_label)]
            if np.any(ref_row != 0.0):
                raise ParameterError("reference channel row must be identically zero")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_sec(self) -> float:
        return self.n_samples / self.sampling_rate_hz


@dataclass(frozen=True, eq=False)
class EventMarker:
    """A labeled time point: offset from recording start, class, and block."""

    time_sec: float
    class_label: int
    block_id: int

    def __post_init__(self):
        if self.class_label not in (LOW, HIGH):
            raise ParameterError(f"class_label must be 0 or 1, got {self.class_label}")
        if self.block_id < 0:
            raise ParameterError("block_id must be >= 0")
        if self.time_sec < 0:
            raise ParameterError("time_sec must be >= 0")


@dataclass(frozen=True, eq=False)
class Epoch:
    """An event-locked slab of samples with its class and block labels.

    Channel ordering (and `channel_labels`) is inherited from the source
    recording; `onset_sec` is the event time the epoch was locked to.
    """

    data: np.ndarray
    sampling_rate_hz: float
    class_label: int
    block_id: int
    onset_sec: float
    channel_labels: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "channel_labels", tuple(self.channel_labels))
        object.__setattr__(self, "data", _frozen_array(self.data, 2))
        if self.channel_labels and len(self.channel_labels) != self.data.shape[0]:
            raise ParameterError("channel_labels length must match data rows")
        if not self.sampling_rate_hz > 0:
            raise ParameterError("sampling_rate_hz must be positive")
        if self.class_label not in (LOW, HIGH):
            raise ParameterError(f"class_label must be 0 or 1, got {self.class_label}")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_sec(self) -> float:
        return self.n_samples / self.sampling_rate_hz
