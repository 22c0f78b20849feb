"""Signature time-courses around events, aggregated across subjects.

A one-second window slides over each event in fixed steps; the signature is
evaluated per window and averaged over events, then mean and standard error
are taken across subjects. Windows are centered on their step time; windows
that leave the recording are skipped (not truncated, which would bias band
power), and steps where every event was skipped carry NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .features import extract_all
from .recording import EventMarker, Recording, Epoch
from .stats import SignatureDef, signature_value

GRID_TOL = 1e-12


def _validated_grid(times) -> np.ndarray:
    times = np.array(times, dtype=float, copy=True)
    if times.ndim != 1 or len(times) == 0:
        raise ParameterError("times must be a nonempty 1-D array")
    if len(times) > 1:
        steps = np.diff(times)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > GRID_TOL:
            raise ParameterError("times must increase with a constant step")
    times.flags.writeable = False
    return times


@dataclass(frozen=True, eq=False)
class SubjectTimeCourse:
    """One subject's event-averaged signature values on a step grid.

    values[i] is NaN where every event's window was out of bounds;
    n_events_used[i] counts the events that contributed at step i.
    """

    times_sec: np.ndarray
    values: np.ndarray
    n_events_used: np.ndarray

    def __post_init__(self):
        times = _validated_grid(self.times_sec)
        values = np.array(self.values, dtype=float, copy=True)
        used = np.array(self.n_events_used, dtype=int, copy=True)
        if values.shape != times.shape or used.shape != times.shape:
            raise ParameterError("values and n_events_used must match times")
        values.flags.writeable = False
        used.flags.writeable = False
        object.__setattr__(self, "times_sec", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "n_events_used", used)


@dataclass(frozen=True, eq=False)
class TimeCourse:
    """Across-subject mean and standard error on a shared step grid."""

    times_sec: np.ndarray
    mean: np.ndarray
    std_err: np.ndarray
    n_subjects: int
    n_per_step: np.ndarray

    def __post_init__(self):
        times = _validated_grid(self.times_sec)
        mean = np.array(self.mean, dtype=float, copy=True)
        std_err = np.array(self.std_err, dtype=float, copy=True)
        n_per_step = np.array(self.n_per_step, dtype=int, copy=True)
        for arr in (mean, std_err, n_per_step):
            if arr.shape != times.shape:
                raise ParameterError("all per-step fields must match times")
        for arr in (mean, std_err, n_per_step):
            arr.flags.writeable = False
        object.__setattr__(self, "times_sec", times)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std_err", std_err)
        object.__setattr__(self, "n_per_step", n_per_step)


def step_grid(span: tuple[float, float], step_sec: float) -> np.ndarray:
    """Step centers t_min + i * step covering [t_min, t_max]."""
    t_min, t_max = float(span[0]), float(span[1])
    if not (step_sec > 0 and t_min < t_max):
        raise ParameterError("need t_min < t_max and a positive step")
    n_steps = int(np.floor((t_max - t_min) / step_sec + 1e-9)) + 1
    return t_min + step_sec * np.arange(n_steps)


def signature_time_course(
    rec: Recording,
    events: list[EventMarker],
    sig: SignatureDef,
    window_sec: float = 1.0,
    step_sec: float = 0.2,
    span: tuple[float, float] = (-1.0, 1.0),
) -> SubjectTimeCourse:
    """Event-averaged signature values on a sliding window grid.

    For each step time tau the window [tau - w/2, tau + w/2] around every
    event is featurized and scored; scores are averaged over the events whose
    window fits inside the recording.
    """
    if window_sec <= 0:
        raise ParameterError("window_sec must be positive")
    if not events:
        raise ParameterError("need at least one event")
    times = step_grid(span, step_sec)
    rate = rec.sampling_rate_hz
    n_win = int(round(window_sec * rate))
    values = np.full(len(times), np.nan)
    used = np.zeros(len(times), dtype=int)
    for i, tau in enumerate(times):
        scores = []
        for ev in events:
            start = ev.time_sec + tau - window_sec / 2.0
            i0 = int(round(start * rate))
            if i0 < 0 or i0 + n_win > rec.n_samples:
                continue
            window = Epoch(
                data=rec.data[:, i0 : i0 + n_win],
                sampling_rate_hz=rate,
                class_label=ev.class_label,
                block_id=ev.block_id,
                onset_sec=ev.time_sec,
                channel_labels=rec.channel_labels,
            )
            scores.append(signature_value(sig, extract_all(window)))
        used[i] = len(scores)
        if scores:
            values[i] = float(np.mean(scores))
    return SubjectTimeCourse(times_sec=times, values=values, n_events_used=used)


def aggregate_subjects(series: list[SubjectTimeCourse]) -> TimeCourse:
    """Across-subject mean and std/sqrt(n) per step, skipping missing values.

    A single contributing subject reports std_err 0 with n recorded as 1.
    """
    if not series:
        raise ParameterError("need at least one subject series")
    times = series[0].times_sec
    for s in series[1:]:
        if s.times_sec.shape != times.shape or np.max(
            np.abs(s.times_sec - times)
        ) > GRID_TOL:
            raise ParameterError("all series must share the same step grid")
    stacked = np.stack([s.values for s in series])
    n_steps = stacked.shape[1]
    mean = np.full(n_steps, np.nan)
    std_err = np.zeros(n_steps)
    n_per_step = np.zeros(n_steps, dtype=int)
    for i in range(n_steps):
        col = stacked[:, i]
        col = col[~np.isnan(col)]
        n_per_step[i] = len(col)
        if len(col) == 0:
            continue
        mean[i] = col.mean()
        if len(col) > 1:
            std_err[i] = col.std(ddof=1) / np.sqrt(len(col))
    return TimeCourse(
        times_sec=times,
        mean=mean,
        std_err=std_err,
        n_subjects=len(series),
        n_per_step=n_per_step,
    )
