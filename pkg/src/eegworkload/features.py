"""Feature extraction: log band power, mutual information, and coherence.

The full feature vector has 112 entries in a fixed order:

* 21 band-power features ``bp_<band>_<ch>`` (band-major over delta, theta,
  alpha; channels in epoch order),
* 28 mutual-information features ``mi_<chA>_<chB>`` over unordered channel
  pairs including self-pairs (A comes no later than B in channel order),
* 63 coherence features ``coh_<band>_<chA>_<chB>`` over the 21 strict pairs,
  band-major.

Band power is computed over the whole epoch with a rectangular window.
Mutual information operates on the squared (power) series with 64 equal-width
bins per marginal and natural-log units. Coherence is a Welch
magnitude-squared estimate summed over each band's bins. Epochs longer than
one second route MI and coherence through one-second non-overlapping windows
whose per-window values are averaged.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import signal as _signal

from .errors import DegenerateDataWarning, LabelNotFoundError, ParameterError
from .recording import CANONICAL_BANDS, BandSpec, Epoch

LOG_FLOOR = 1e-20
MI_BINS = 64


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Named, ordered feature values with degenerate-condition flags."""

    names: tuple
    values: np.ndarray
    flags: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "flags", tuple(self.flags))
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.ndim != 1 or len(vals) != len(self.names):
            raise ParameterError("values must be 1-D and match names in length")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("feature values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.names)

    def value(self, name: str) -> float:
        try:
            return float(self.values[self.names.index(name)])
        except ValueError:
            raise LabelNotFoundError(f"feature {name!r} not in vector") from None

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values.tolist()))


def bp_feature_names(channels, bands=CANONICAL_BANDS) -> tuple:
    return tuple(f"bp_{band.name}_{ch}" for band in bands for ch in channels)


def mi_feature_names(channels) -> tuple:
    n = len(channels)
    return tuple(
        f"mi_{channels[i]}_{channels[j]}" for i in range(n) for j in range(i, n)
    )


def coh_feature_names(channels, bands=CANONICAL_BANDS) -> tuple:
    n = len(channels)
    return tuple(
        f"coh_{band.name}_{channels[i]}_{channels[j]}"
        for band in bands
        for i in range(n)
        for j in range(i + 1, n)
    )


def canonical_feature_names(channels, bands=CANONICAL_BANDS) -> tuple:
    """All 112 feature names for a 7-channel epoch, in extraction order."""
    return (
        bp_feature_names(channels, bands)
        + mi_feature_names(channels)
        + coh_feature_names(channels, bands)
    )


def spectral_power(epoch: Epoch) -> tuple[np.ndarray, np.ndarray]:
    """One-sided squared DFT magnitudes per channel (rectangular window).

    Returns (freqs, power) with power shaped (n_channels, n_bins) and
    power[c, k] = |DFT(x_c)[k]|^2 at frequency k * rate / n_samples.
    """
    spectra = np.fft.rfft(epoch.data, axis=1)
    power = (spectra * np.conj(spectra)).real
    freqs = np.fft.rfftfreq(epoch.n_samples, 1.0 / epoch.sampling_rate_hz)
    return freqs, power


def _band_power(epoch: Epoch, band: BandSpec) -> tuple[np.ndarray, np.ndarray]:
    if epoch.n_samples < int(round(epoch.sampling_rate_hz)):
        raise ParameterError(
            f"band power needs at least 1 s of samples, got {epoch.n_samples} "
            f"at {epoch.sampling_rate_hz} Hz"
        )
    freqs, power = spectral_power(epoch)
    in_band = (freqs >= band.low_hz) & (freqs < band.high_hz)
    if not np.any(in_band):
        raise ParameterError(
            f"band {band.name!r} [{band.low_hz}, {band.high_hz}) contains no DFT bins"
        )
    band_sum = power[:, in_band].sum(axis=1)
    floored = band_sum < LOG_FLOOR
    return np.log10(np.maximum(band_sum, LOG_FLOOR)), floored


def band_power(epoch: Epoch, band: BandSpec) -> np.ndarray:
    """log10 of the summed squared DFT magnitudes inside [low, high), per channel.

    Whole-epoch DFT, rectangular window. Zero in-band energy is floored at
    log10(1e-20) and reported with a DegenerateDataWarning.
    """
    values, floored = _band_power(epoch, band)
    if np.any(floored):
        chans = [epoch.channel_labels[i] if epoch.channel_labels else str(i)
                 for i in np.flatnonzero(floored)]
        warnings.warn(
            f"zero in-band energy floored at log10({LOG_FLOOR}) for {chans}",
            DegenerateDataWarning,
            stacklevel=2,
        )
    return values


def _entropy(counts: np.ndarray, total: float) -> float:
    p = counts[counts > 0] / total
    # sorting fixes the summation order, so transposing the joint histogram
    # (swapping the inputs) changes nothing at the bit level
    p.sort()
    return float(-np.sum(p * np.log(p)))


def _mutual_information(x: np.ndarray, y: np.ndarray, bins: int) -> tuple[float, bool]:
    px = x * x
    py = y * y
    if px.min() == px.max() or py.min() == py.max():
        return 0.0, True
    joint, _, _ = np.histogram2d(px, py, bins=bins)
    total = joint.sum()
    h_joint = _entropy(joint.ravel(), total)
    h_x = _entropy(joint.sum(axis=1), total)
    h_y = _entropy(joint.sum(axis=0), total)
    return max(h_x + h_y - h_joint, 0.0), False


def mutual_information(x, y, bins: int = MI_BINS) -> float:
    """Histogram mutual information (nats) between the squared series.

    Both inputs are squared first; marginal histograms use `bins` equal-width
    bins over each squared series' [min, max]. A constant squared series makes
    the result 0 by convention (DegenerateDataWarning).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
        raise ParameterError("x and y must be 1-D series of equal length")
    if len(x) < bins:
        raise ParameterError(f"need at least {bins} samples, got {len(x)}")
    value, degenerate = _mutual_information(x, y, bins)
    if degenerate:
        warnings.warn(
            "constant squared series: mutual information defined as 0",
            DegenerateDataWarning,
            stacklevel=2,
        )
    return value


def _welch_plan(
    n_samples: int,
    rate: float,
    segment_sec: float = 0.125,
    overlap_fraction: float = 0.5,
):
    if segment_sec <= 0 or not 0.0 <= overlap_fraction < 1.0:
        raise ParameterError(
            "segment_sec must be positive and overlap_fraction in [0, 1)"
        )
    nperseg = int(round(rate * segment_sec))
    noverlap = int(round(nperseg * overlap_fraction))
    step = nperseg - noverlap
    if nperseg < 2 or step < 1:
        raise ParameterError(f"sampling rate {rate} Hz is too low for Welch segments")
    n_segments = (n_samples - nperseg) // step + 1 if n_samples >= nperseg else 0
    if n_segments < 2:
        raise ParameterError(
            f"need at least 2 Welch segments ({nperseg} samples each), "
            f"got {max(n_segments, 0)} from {n_samples} samples"
        )
    nfft = max(int(round(rate)), nperseg)
    window = _signal.get_window("hann", nperseg)
    return nperseg, step, n_segments, nfft, window


def _segment_ffts(series: np.ndarray, nperseg, step, n_segments, nfft, window):
    idx = np.arange(nperseg)[None, :] + step * np.arange(n_segments)[:, None]
    segs = series[idx]
    segs = segs - segs.mean(axis=1, keepdims=True)
    return np.fft.rfft(segs * window[None, :], n=nfft, axis=1)


def msc_spectrum(
    x, y, rate: float, segment_sec: float = 0.125, overlap_fraction: float = 0.5
) -> tuple[np.ndarray, np.ndarray]:
    """Welch magnitude-squared coherence |Pxy|^2 / (Pxx Pyy) per frequency bin.

    Segments default to 1/8 s with 50% overlap, Hann-windowed, mean-removed,
    and zero-padded to a ~1 Hz grid before the FFT. Returns (freqs, msc) with
    values clamped to [0, 1]; bins with zero power are reported as 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
        raise ParameterError("x and y must be 1-D series of equal length")
    nperseg, step, n_segments, nfft, window = _welch_plan(
        len(x), rate, segment_sec, overlap_fraction
    )
    fx = _segment_ffts(x, nperseg, step, n_segments, nfft, window)
    fy = _segment_ffts(y, nperseg, step, n_segments, nfft, window)
    pxx = (fx * np.conj(fx)).real.mean(axis=0)
    pyy = (fy * np.conj(fy)).real.mean(axis=0)
    pxy = (fx * np.conj(fy)).mean(axis=0)
    num = pxy.real**2 + pxy.imag**2
    den = pxx * pyy
    msc = np.zeros_like(num)
    nonzero = den > 0
    msc[nonzero] = num[nonzero] / den[nonzero]
    freqs = np.fft.rfftfreq(nfft, 1.0 / rate)
    return freqs, np.clip(msc, 0.0, 1.0)


def coherence_band_features(
    epoch: Epoch,
    bands=CANONICAL_BANDS,
    segment_sec: float = 0.125,
    overlap_fraction: float = 0.5,
) -> np.ndarray:
    """Per-band summed coherence for every strict channel pair.

    Output is band-major, pair-minor over pairs (i, j) with i < j in epoch
    channel order; length = len(bands) * n_ch * (n_ch - 1) / 2.
    """
    n_ch = epoch.n_channels
    if n_ch < 2:
        raise ParameterError("coherence needs at least 2 channels")
    rate = epoch.sampling_rate_hz
    nperseg, step, n_segments, nfft, window = _welch_plan(
        epoch.n_samples, rate, segment_sec, overlap_fraction
    )
    ffts = [
        _segment_ffts(epoch.data[c], nperseg, step, n_segments, nfft, window)
        for c in range(n_ch)
    ]
    auto = [(f * np.conj(f)).real.mean(axis=0) for f in ffts]
    freqs = np.fft.rfftfreq(nfft, 1.0 / rate)
    band_masks = []
    for band in bands:
        mask = (freqs >= band.low_hz) & (freqs < band.high_hz)
        if not np.any(mask):
            raise ParameterError(
                f"band {band.name!r} [{band.low_hz}, {band.high_hz}) contains no bins"
            )
        band_masks.append(mask)
    pair_msc = []
    for i in range(n_ch):
        for j in range(i + 1, n_ch):
            pxy = (ffts[i] * np.conj(ffts[j])).mean(axis=0)
            num = pxy.real**2 + pxy.imag**2
            den = auto[i] * auto[j]
            msc = np.zeros_like(num)
            nonzero = den > 0
            msc[nonzero] = num[nonzero] / den[nonzero]
            pair_msc.append(np.clip(msc, 0.0, 1.0))
    values = [m[mask].sum() for mask in band_masks for m in pair_msc]
    return np.array(values)


def band_bin_count(rate: float, band: BandSpec, n_samples: int | None = None) -> int:
    """Number of coherence-grid bins inside a band at the given rate."""
    n = n_samples if n_samples is not None else int(round(rate))
    plan = _welch_plan(max(n, 2 * int(round(rate / 8.0))), rate)
    freqs = np.fft.rfftfreq(plan[3], 1.0 / rate)
    return int(np.sum((freqs >= band.low_hz) & (freqs < band.high_hz)))


def windowed_average(epoch: Epoch, f, window_sec: float = 1.0) -> FeatureVector:
    """Apply `f` to consecutive non-overlapping windows and average the values.

    The epoch is cut into floor(duration / window_sec) windows; a trailing
    remainder shorter than one window is discarded. `f` maps an Epoch to a
    FeatureVector; flags from all windows are merged.
    """
    if window_sec <= 0:
        raise ParameterError("window_sec must be positive")
    n_win_samples = int(round(window_sec * epoch.sampling_rate_hz))
    n_windows = epoch.n_samples // n_win_samples if n_win_samples > 0 else 0
    if n_windows < 1:
        raise ParameterError(
            f"epoch of {epoch.n_samples} samples is shorter than one "
            f"{window_sec} s window"
        )
    results = []
    for w in range(n_windows):
        sub = Epoch(
            data=epoch.data[:, w * n_win_samples : (w + 1) * n_win_samples],
            sampling_rate_hz=epoch.sampling_rate_hz,
            class_label=epoch.class_label,
            block_id=epoch.block_id,
            onset_sec=epoch.onset_sec,
            channel_labels=epoch.channel_labels,
        )
        results.append(f(sub))
    names = results[0].names
    for r in results[1:]:
        if r.names != names:
            raise ParameterError("per-window feature names disagree")
    stacked = np.stack([r.values for r in results])
    flags = []
    for r in results:
        for flag in r.flags:
            if flag not in flags:
                flags.append(flag)
    return FeatureVector(names=names, values=stacked.mean(axis=0), flags=tuple(flags))


def _mi_coh_vector(
    epoch: Epoch,
    mi_bins: int = MI_BINS,
    segment_sec: float = 0.125,
    overlap_fraction: float = 0.5,
) -> FeatureVector:
    channels = epoch.channel_labels
    n_ch = epoch.n_channels
    mi_values = []
    flags = []
    mi_names = mi_feature_names(channels)
    k = 0
    for i in range(n_ch):
        for j in range(i, n_ch):
            value, degenerate = _mutual_information(
                epoch.data[i], epoch.data[j], mi_bins
            )
            mi_values.append(value)
            if degenerate:
                flags.append(f"mi_degenerate:{mi_names[k]}")
            k += 1
    coh_values = coherence_band_features(
        epoch, segment_sec=segment_sec, overlap_fraction=overlap_fraction
    )
    names = mi_names + coh_feature_names(channels)
    return FeatureVector(
        names=names,
        values=np.concatenate([mi_values, coh_values]),
        flags=tuple(flags),
    )


def extract_all(
    epoch: Epoch,
    mi_bins: int = MI_BINS,
    welch_segment_sec: float = 0.125,
    welch_overlap_fraction: float = 0.5,
) -> FeatureVector:
    """The full 112-entry feature vector for a 7-channel epoch.

    Band power always uses the whole epoch; MI and coherence use the whole
    epoch when it is one second long and one-second windowed averages when it
    is longer. Names follow the epoch's channel order.
    """
    if epoch.n_channels != 7:
        raise ParameterError(f"expected 7 channels, got {epoch.n_channels}")
    if not epoch.channel_labels:
        raise ParameterError("epoch must carry channel labels")
    bp_values = []
    flags = []
    bp_names = bp_feature_names(epoch.channel_labels)
    k = 0
    for band in CANONICAL_BANDS:
        values, floored = _band_power(epoch, band)
        bp_values.append(values)
        for c in range(epoch.n_channels):
            if floored[c]:
                flags.append(f"bp_floor:{bp_names[k]}")
            k += 1
    mi_coh = partial(
        _mi_coh_vector,
        mi_bins=mi_bins,
        segment_sec=welch_segment_sec,
        overlap_fraction=welch_overlap_fraction,
    )
    one_second = int(round(epoch.sampling_rate_hz))
    if epoch.n_samples > one_second:
        rest = windowed_average(epoch, mi_coh, window_sec=1.0)
    else:
        rest = mi_coh(epoch)
    names = bp_names + rest.names
    values = np.concatenate([np.concatenate(bp_values), rest.values])
    return FeatureVector(names=names, values=values, flags=tuple(flags) + rest.flags)
