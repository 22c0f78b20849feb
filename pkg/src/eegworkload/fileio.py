"""Readers and writers for every artifact the pipeline emits.

CSV numbers are written with 17 significant digits and JSON numbers with
Python's shortest round-tripping repr, so every file reloads bit-identically.
All formats are documented in docs/formats.md; malformed input raises
SchemaError naming the offending row or column.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .dynamics import TimeCourse
from .errors import SchemaError
from .evaluation import EvalResult, LabeledFeatureSet
from .features import FeatureVector
from .recording import Epoch, EventMarker, Recording
from .stats import FeatureScore, SignatureDef, SignatureEntry, TestResult
from .svm import TrainedModel

SIGNATURE_FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(text: str, row: int, column: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SchemaError(
            f"row {row}, column {column!r}: {text!r} is not a number"
        ) from None


def _parse_int(text: str, row: int, column: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise SchemaError(
            f"row {row}, column {column!r}: {text!r} is not an integer"
        ) from None


def _read_csv(path: str, expected_header=None):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)
    if expected_header is not None and header != list(expected_header):
        raise SchemaError(
            f"{path}: header {header} does not match expected {list(expected_header)}"
        )
    return header, rows


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_json(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from None


def sidecar_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".json"


def write_recording(rec: Recording, csv_path: str) -> None:
    """One column per channel (header = labels) plus a JSON metadata sidecar."""
    rows = ([_fmt(v) for v in sample] for sample in rec.data.T)
    _write_csv(csv_path, list(rec.channel_labels), rows)
    _write_json(
        sidecar_path(csv_path),
        {"sampling_rate_hz": rec.sampling_rate_hz, "reference": rec.reference_label},
    )


def read_recording(csv_path: str) -> Recording:
    header, rows = _read_csv(csv_path)
    if not header or any(not h for h in header):
        raise SchemaError(f"{csv_path}: header must name every channel")
    if len(set(header)) != len(header):
        raise SchemaError(f"{csv_path}: duplicate channel names in header")
    meta = _read_json(sidecar_path(csv_path))
    for key in ("sampling_rate_hz", "reference"):
        if key not in meta:
            raise SchemaError(f"{sidecar_path(csv_path)}: missing key {key!r}")
    data = np.empty((len(header), len(rows)))
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(
                f"{csv_path}: row {r + 2} has {len(row)} cells, expected {len(header)}"
            )
        for c, cell in enumerate(row):
            data[c, r] = _parse_float(cell, r + 2, header[c])
    return Recording(
        channel_labels=tuple(header),
        sampling_rate_hz=float(meta["sampling_rate_hz"]),
        data=data,
        reference_label=meta["reference"],
    )


EVENT_HEADER = ("time_sec", "class_label", "block_id")


def write_events(events, path: str) -> None:
    rows = (
        [_fmt(ev.time_sec), str(ev.class_label), str(ev.block_id)] for ev in events
    )
    _write_csv(path, list(EVENT_HEADER), rows)


def read_events(path: str):
    _, rows = _read_csv(path, EVENT_HEADER)
    events = []
    for r, row in enumerate(rows):
        if len(row) != 3:
            raise SchemaError(f"{path}: row {r + 2} has {len(row)} cells, expected 3")
        events.append(
            EventMarker(
                time_sec=_parse_float(row[0], r + 2, "time_sec"),
                class_label=_parse_int(row[1], r + 2, "class_label"),
                block_id=_parse_int(row[2], r + 2, "block_id"),
            )
        )
    return events


EPOCH_META = ("class_label", "block_id", "onset_sec")


def write_epochs(epochs, path: str) -> None:
    """Long-format CSV: one row per sample, grouped by epoch_index."""
    if not epochs:
        raise SchemaError("no epochs to write")
    labels = epochs[0].channel_labels
    for epoch in epochs:
        if epoch.channel_labels != labels:
            raise SchemaError("all epochs must share one channel layout")
        if epoch.sampling_rate_hz != epochs[0].sampling_rate_hz:
            raise SchemaError("all epochs must share one sampling rate")
    header = ["epoch_index", "sample_index", *labels, *EPOCH_META]

    def rows():
        for e_idx, epoch in enumerate(epochs):
            for s_idx in range(epoch.n_samples):
                yield [
                    str(e_idx),
                    str(s_idx),
                    *(_fmt(v) for v in epoch.data[:, s_idx]),
                    str(epoch.class_label),
                    str(epoch.block_id),
                    _fmt(epoch.onset_sec),
                ]

    _write_csv(path, header, rows())
    _write_json(sidecar_path(path), {"sampling_rate_hz": epochs[0].sampling_rate_hz})


def read_epochs(path: str):
    header, rows = _read_csv(path)
    if (
        len(header) < 6
        or header[:2] != ["epoch_index", "sample_index"]
        or header[-3:] != list(EPOCH_META)
    ):
        raise SchemaError(f"{path}: not an epochs file (header {header})")
    labels = tuple(header[2:-3])
    meta = _read_json(sidecar_path(path))
    if "sampling_rate_hz" not in meta:
        raise SchemaError(f"{sidecar_path(path)}: missing key 'sampling_rate_hz'")
    rate = float(meta["sampling_rate_hz"])
    groups: dict[int, list] = {}
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}"
            )
        e_idx = _parse_int(row[0], r + 2, "epoch_index")
        groups.setdefault(e_idx, []).append((r + 2, row))
    epochs = []
    for e_idx in sorted(groups):
        entries = groups[e_idx]
        n = len(entries)
        data = np.empty((len(labels), n))
        meta_cells = None
        for k, (line_no, row) in enumerate(entries):
            s_idx = _parse_int(row[1], line_no, "sample_index")
            if s_idx != k:
                raise SchemaError(
                    f"{path}: epoch {e_idx} sample_index {s_idx} out of order "
                    f"at row {line_no}"
                )
            for c, lab in enumerate(labels):
                data[c, k] = _parse_float(row[2 + c], line_no, lab)
            cells = (row[-3], row[-2], row[-1])
            if meta_cells is None:
                meta_cells = (line_no, cells)
            elif meta_cells[1] != cells:
                raise SchemaError(
                    f"{path}: epoch {e_idx} metadata changes at row {line_no}"
                )
        line_no, (cls, block, onset) = meta_cells
        epochs.append(
            Epoch(
                data=data,
                sampling_rate_hz=rate,
                class_label=_parse_int(cls, line_no, "class_label"),
                block_id=_parse_int(block, line_no, "block_id"),
                onset_sec=_parse_float(onset, line_no, "onset_sec"),
                channel_labels=labels,
            )
        )
    return epochs


FEATURE_META = ("class_label", "block_id", "epoch_index")


def write_feature_table(vectors, labels, block_ids, path: str, epoch_indices=None):
    """One row per epoch: canonical feature columns plus class/block/index."""
    vectors = list(vectors)
    if not vectors:
        raise SchemaError("no feature vectors to write")
    names = vectors[0].names
    if epoch_indices is None:
        epoch_indices = range(len(vectors))
    labels = list(labels)
    block_ids = list(block_ids)
    epoch_indices = list(epoch_indices)
    if not (len(labels) == len(block_ids) == len(epoch_indices) == len(vectors)):
        raise SchemaError("labels, block_ids and epoch_indices must match vectors")
    for vec in vectors:
        if vec.names != names:
            raise SchemaError("all vectors must share one feature layout")
    header = [*names, *FEATURE_META]
    rows = (
        [*(_fmt(v) for v in vec.values), str(int(y)), str(int(b)), str(int(e))]
        for vec, y, b, e in zip(vectors, labels, block_ids, epoch_indices)
    )
    _write_csv(path, header, rows)


def read_feature_table(path: str) -> LabeledFeatureSet:
    header, rows = _read_csv(path)
    if len(header) < 4 or header[-3:] != list(FEATURE_META):
        raise SchemaError(
            f"{path}: expected trailing columns {list(FEATURE_META)}, got {header[-3:]}"
        )
    names = tuple(header[:-3])
    n = len(rows)
    X = np.empty((n, len(names)))
    y = np.empty(n, dtype=int)
    blocks = np.empty(n, dtype=int)
    order = np.empty(n, dtype=int)
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}"
            )
        for c, name in enumerate(names):
            X[r, c] = _parse_float(row[c], r + 2, name)
        y[r] = _parse_int(row[-3], r + 2, "class_label")
        blocks[r] = _parse_int(row[-2], r + 2, "block_id")
        order[r] = _parse_int(row[-1], r + 2, "epoch_index")
    return LabeledFeatureSet(
        X=X, y=y, block_ids=blocks, order_index=order, feature_names=names
    )


def write_eval_result(result: EvalResult, path: str) -> None:
    _write_json(
        path,
        {
            "feature_space": result.feature_space,
            "n_g": result.n_g,
            "seed": result.seed,
            "fold_scores": list(result.fold_scores),
            "mean": result.mean,
            "metadata": result.metadata,
        },
    )


def read_eval_result(path: str) -> EvalResult:
    payload = _read_json(path)
    for key in ("feature_space", "n_g", "fold_scores", "mean"):
        if key not in payload:
            raise SchemaError(f"{path}: missing key {key!r}")
    return EvalResult(
        feature_space=payload["feature_space"],
        n_g=int(payload["n_g"]),
        seed=payload.get("seed"),
        fold_scores=tuple(payload["fold_scores"]),
        mean=float(payload["mean"]),
        metadata=payload.get("metadata", {}),
    )


SCORE_HEADER = ("feature_name", "f_value")


def write_feature_scores(scores, path: str) -> None:
    rows = ([s.feature_name, _fmt(s.f_value)] for s in scores)
    _write_csv(path, list(SCORE_HEADER), rows)


def read_feature_scores(path: str):
    _, rows = _read_csv(path, SCORE_HEADER)
    return [
        FeatureScore(row[0], _parse_float(row[1], r + 2, "f_value"))
        for r, row in enumerate(rows)
    ]


def write_signature(sig: SignatureDef, path: str) -> None:
    _write_json(
        path,
        {
            "format_version": SIGNATURE_FORMAT_VERSION,
            "entries": [
                {
                    "feature": e.feature_name,
                    "polarity": e.polarity,
                    "mean": e.mean,
                    "std": e.std,
                }
                for e in sig.entries
            ],
        },
    )


def read_signature(path: str) -> SignatureDef:
    payload = _read_json(path)
    if payload.get("format_version") != SIGNATURE_FORMAT_VERSION:
        raise SchemaError(
            f"{path}: unsupported signature format {payload.get('format_version')!r}"
        )
    entries = []
    for i, entry in enumerate(payload.get("entries", [])):
        for key in ("feature", "polarity", "mean", "std"):
            if key not in entry:
                raise SchemaError(f"{path}: entry {i} missing key {key!r}")
        entries.append(
            SignatureEntry(
                feature_name=entry["feature"],
                polarity=int(entry["polarity"]),
                mean=float(entry["mean"]),
                std=float(entry["std"]),
            )
        )
    return SignatureDef(entries=tuple(entries))


def write_test_result(result: TestResult, path: str) -> None:
    payload = {
        "method": result.method,
        "statistic": result.statistic,
        "p": result.p_value,
    }
    if result.resamples is not None:
        payload["resamples"] = result.resamples
    if result.seed is not None:
        payload["seed"] = result.seed
    if result.n_used is not None:
        payload["n_used"] = result.n_used
    if result.degenerate:
        payload["degenerate"] = True
    _write_json(path, payload)


def read_test_result(path: str) -> TestResult:
    payload = _read_json(path)
    for key in ("method", "statistic", "p"):
        if key not in payload:
            raise SchemaError(f"{path}: missing key {key!r}")
    return TestResult(
        statistic=float(payload["statistic"]),
        p_value=float(payload["p"]),
        method=payload["method"],
        resamples=payload.get("resamples"),
        seed=payload.get("seed"),
        n_used=payload.get("n_used"),
        degenerate=payload.get("degenerate", False),
    )


TIMECOURSE_HEADER = ("time_sec", "mean", "std_err", "n")


def write_time_course(tc: TimeCourse, path: str) -> None:
    rows = (
        [_fmt(t), _fmt(m), _fmt(se), str(int(n))]
        for t, m, se, n in zip(tc.times_sec, tc.mean, tc.std_err, tc.n_per_step)
    )
    _write_csv(path, list(TIMECOURSE_HEADER), rows)
    _write_json(sidecar_path(path), {"n_subjects": tc.n_subjects})


def read_time_course(path: str) -> TimeCourse:
    _, rows = _read_csv(path, TIMECOURSE_HEADER)
    meta = _read_json(sidecar_path(path))
    times, means, errs, ns = [], [], [], []
    for r, row in enumerate(rows):
        times.append(_parse_float(row[0], r + 2, "time_sec"))
        means.append(_parse_float(row[1], r + 2, "mean"))
        errs.append(_parse_float(row[2], r + 2, "std_err"))
        ns.append(_parse_int(row[3], r + 2, "n"))
    return TimeCourse(
        times_sec=np.array(times),
        mean=np.array(means),
        std_err=np.array(errs),
        n_subjects=int(meta.get("n_subjects", max(ns) if ns else 0)),
        n_per_step=np.array(ns, dtype=int),
    )


def write_model(model: TrainedModel, path: str) -> None:
    _write_json(path, model.to_dict())


def read_model(path: str) -> TrainedModel:
    payload = _read_json(path)
    if payload.get("format_version") != 1:
        raise SchemaError(
            f"{path}: unsupported model format {payload.get('format_version')!r}"
        )
    return TrainedModel.from_dict(payload)


def write_signature_values(rows, path: str) -> None:
    """Columns epoch_index, class_label, block_id, signature_value."""
    header = ("epoch_index", "class_label", "block_id", "signature_value")
    _write_csv(
        path,
        list(header),
        ([str(int(e)), str(int(c)), str(int(b)), _fmt(v)] for e, c, b, v in rows),
    )


def write_manifest(manifest: dict, path: str) -> None:
    _write_json(path, manifest)


def read_manifest(path: str) -> dict:
    return _read_json(path)
