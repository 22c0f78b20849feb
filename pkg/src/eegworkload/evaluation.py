"""Sample grouping, data splitting, and balanced-accuracy evaluation.

The evaluation protocol per fold is fixed: split first, then average
consecutive same-class samples within each (block, class) into groups of
n_g, then select the feature-space columns, optionally keep the top X% of
features ranked on the training fold, standardize with training statistics,
train, predict, score.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UndefinedMetricError
from .svm import TrainedModel, fit_svm, predict

FEATURE_SPACES = ("bp", "mi", "coh", "all")


@dataclass(frozen=True, eq=False)
class LabeledFeatureSet:
    """Feature matrix with labels, block ids, and within-block order."""

    X: np.ndarray
    y: np.ndarray
    block_ids: np.ndarray
    order_index: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        X = np.array(self.X, dtype=float, copy=True)
        y = np.array(self.y, dtype=int, copy=True)
        blocks = np.array(self.block_ids, dtype=int, copy=True)
        order = np.array(self.order_index, dtype=int, copy=True)
        names = tuple(self.feature_names)
        if X.ndim != 2:
            raise ParameterError("X must be 2-D")
        n = X.shape[0]
        if not (len(y) == len(blocks) == len(order) == n):
            raise ParameterError("per-row fields must all have length n")
        if X.shape[1] != len(names):
            raise ParameterError("feature_names must match X columns")
        if not np.all((y == 0) | (y == 1)):
            raise ParameterError("labels must be binary 0/1")
        for b in np.unique(blocks):
            for c in (0, 1):
                sel = order[(blocks == b) & (y == c)]
                if len(np.unique(sel)) != len(sel):
                    raise ParameterError(
                        f"order_index not unique within block {b}, class {c}"
                    )
        for arr in (X, y, blocks, order):
            arr.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "block_ids", blocks)
        object.__setattr__(self, "order_index", order)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, indices) -> "LabeledFeatureSet":
        idx = np.asarray(indices, dtype=int)
        return LabeledFeatureSet(
            X=self.X[idx],
            y=self.y[idx],
            block_ids=self.block_ids[idx],
            order_index=self.order_index[idx],
            feature_names=self.feature_names,
        )

    def select_columns(self, indices) -> "LabeledFeatureSet":
        idx = list(indices)
        return LabeledFeatureSet(
            X=self.X[:, idx],
            y=self.y,
            block_ids=self.block_ids,
            order_index=self.order_index,
            feature_names=tuple(self.feature_names[i] for i in idx),
        )


def group_samples(fs: LabeledFeatureSet, n_g: int) -> LabeledFeatureSet:
    """Average temporal runs of n_g same-class samples within each block.

    Within every (block, class), samples are taken in order_index order and
    averaged in consecutive runs of n_g; a final shorter run is averaged as
    the last sample, giving ceil(count / n_g) outputs. n_g = 1 is the
    identity transform (up to row ordering).
    """
    n_g = int(n_g)
    if n_g < 1:
        raise ParameterError("n_g must be >= 1")
    rows = []
    for block in np.unique(fs.block_ids):
        for cls in (0, 1):
            idx = np.flatnonzero((fs.block_ids == block) & (fs.y == cls))
            if len(idx) == 0:
                continue
            ordered = idx[np.argsort(fs.order_index[idx], kind="stable")]
            for run_i, start in enumerate(range(0, len(ordered), n_g)):
                run = ordered[start : start + n_g]
                rows.append(
                    (
                        int(block),
                        int(fs.order_index[run[0]]),
                        cls,
                        run_i,
                        fs.X[run].mean(axis=0),
                    )
                )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return LabeledFeatureSet(
        X=np.stack([r[4] for r in rows]),
        y=np.array([r[2] for r in rows]),
        block_ids=np.array([r[0] for r in rows]),
        order_index=np.array([r[3] for r in rows]),
        feature_names=fs.feature_names,
    )


def cross_block_split(fs: LabeledFeatureSet):
    """One fold per block: that block is the test set, the rest train."""
    blocks = np.unique(fs.block_ids)
    if len(blocks) < 2:
        raise ParameterError("cross-block validation needs at least 2 blocks")
    folds = []
    for block in blocks:
        test_idx = np.flatnonzero(fs.block_ids == block)
        train_idx = np.flatnonzero(fs.block_ids != block)
        folds.append((fs.subset(train_idx), fs.subset(test_idx)))
    return folds


def repeated_kfold_split(
    fs: LabeledFeatureSet, k: int = 5, repeats: int = 20, seed: int = 0
):
    """Shuffled k-fold splits, repeated with seeds seed, seed+1, ...

    Fold sizes differ by at most one. The same seed reproduces the same
    fold assignments exactly.
    """
    if k < 2:
        raise ParameterError("k must be >= 2")
    if k > fs.n:
        raise ParameterError(f"k = {k} exceeds the {fs.n} available samples")
    if repeats < 1:
        raise ParameterError("repeats must be >= 1")
    folds = []
    for r in range(repeats):
        rng = np.random.default_rng(seed + r)
        perm = rng.permutation(fs.n)
        for part in np.array_split(perm, k):
            test_idx = np.sort(part)
            mask = np.ones(fs.n, dtype=bool)
            mask[test_idx] = False
            folds.append((fs.subset(np.flatnonzero(mask)), fs.subset(test_idx)))
    return folds


def balanced_accuracy(y_true, y_pred) -> float:
    """Mean of sensitivity and specificity."""
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if len(y_true) != len(y_pred):
        raise ParameterError("y_true and y_pred must have equal length")
    n_pos = int(np.sum(y_true == 1))
    n_neg = int(np.sum(y_true == 0))
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("y_true must contain both classes")
    sensitivity = np.sum((y_true == 1) & (y_pred == 1)) / n_pos
    specificity = np.sum((y_true == 0) & (y_pred == 0)) / n_neg
    return float((sensitivity + specificity) / 2.0)


def train_rbf_classifier(
    train: LabeledFeatureSet,
    C: float = 1.0,
    tol: float = 1e-3,
    max_iter: int = 1_000_000,
    gamma: float | None = None,
) -> TrainedModel:
    """Fit the balanced-weight RBF classifier on a feature set."""
    return fit_svm(train.X, train.y, C=C, tol=tol, max_iter=max_iter, gamma=gamma)


@dataclass(frozen=True, eq=False)
class EvalResult:
    """Per-fold balanced accuracies and their mean, with run metadata."""

    feature_space: str
    n_g: int
    seed: int | None
    fold_scores: tuple
    mean: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "fold_scores", tuple(float(s) for s in self.fold_scores))
        for s in self.fold_scores:
            if not (0.0 <= s <= 1.0):
                raise ParameterError(f"balanced accuracy {s} outside [0, 1]")


def feature_space_columns(feature_names, feature_space: str):
    """Column indices belonging to a feature space ('bp', 'mi', 'coh', 'all')."""
    space = feature_space.lower()
    if space not in FEATURE_SPACES:
        raise ParameterError(f"unknown feature space {feature_space!r}")
    if space == "all":
        return list(range(len(feature_names)))
    prefix = space + "_"
    cols = [i for i, name in enumerate(feature_names) if name.startswith(prefix)]
    if not cols:
        raise ParameterError(f"no {feature_space!r} columns present")
    return cols


def _standardize(train_X: np.ndarray, test_X: np.ndarray):
    mu = train_X.mean(axis=0)
    sd = train_X.std(axis=0)
    sd = np.where(sd == 0, 1.0, sd)
    return (train_X - mu) / sd, (test_X - mu) / sd


def evaluate(
    fs: LabeledFeatureSet,
    splitter,
    n_g: int,
    feature_space: str = "all",
    top_percent: float | None = None,
    C: float = 1.0,
    tol: float = 1e-3,
    max_iter: int = 1_000_000,
    seed: int | None = None,
    threads: int = 1,
) -> EvalResult:
    """Run the full grouped, per-fold-standardized evaluation protocol.

    `splitter` maps the feature set to (train, test) pairs. Grouping happens
    after splitting, so no grouped sample can mix train and test rows. When
    `top_percent` is given, features are ranked by ANOVA F on the training
    fold and the top ceil(pct/100 * d) are kept. Folds may run on `threads`
    workers; scores are merged by fold index.
    """
    from .stats import anova_f_values, top_k_from_percent

    cols = feature_space_columns(fs.feature_names, feature_space)
    folds = splitter(fs)
    n_selected = len(cols)
    if top_percent is not None:
        if not (0 < top_percent <= 100):
            raise ParameterError("top_percent must be in (0, 100]")
        n_selected = top_k_from_percent(len(cols), top_percent)

    def run_fold(fold):
        train, test = fold
        train_g = group_samples(train, n_g)
        test_g = group_samples(test, n_g)
        train_X = train_g.X[:, cols]
        test_X = test_g.X[:, cols]
        if top_percent is not None:
            f_values = anova_f_values(train_X, train_g.y)
            ranked = sorted(range(len(cols)), key=lambda i: (-f_values[i], i))
            keep = sorted(ranked[: top_k_from_percent(len(cols), top_percent)])
            train_X = train_X[:, keep]
            test_X = test_X[:, keep]
        train_X, test_X = _standardize(train_X, test_X)
        model = fit_svm(train_X, train_g.y, C=C, tol=tol, max_iter=max_iter)
        return balanced_accuracy(test_g.y, predict(model, test_X))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(run_fold, folds))
    else:
        scores = [run_fold(fold) for fold in folds]
    return EvalResult(
        feature_space=feature_space.lower(),
        n_g=int(n_g),
        seed=seed,
        fold_scores=tuple(scores),
        mean=float(np.mean(scores)),
        metadata={
            "n_folds": len(folds),
            "n_feature_space_columns": len(cols),
            "n_features_selected": n_selected,
            "top_percent": top_percent,
        },
    )
