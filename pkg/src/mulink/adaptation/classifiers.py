"""MCS acceptance classifiers with a scikit-learn style fit/predict API.

Every classifier consumes rows holding a user's full ordered SNR vector in
dB (ascending). The kernel SVM works on a small set of equispaced order
statistics standardized with training statistics; the average and
effective SNR baselines reduce the row to a scalar and learn a threshold.
A ``ClassifierBank`` maps (mcs id, stream count) to a trained classifier
and backs the MCS selection rule: highest rate among the accepted.
"""

from __future__ import annotations

import numpy as np

from ..phy.mcs import MCS_TABLE, NO_TRANSMISSION, McsEntry
from .snr import eff_snr, order_stats_features, to_db
from .svm import rbf_kernel, smo_solve

__all__ = [
    "DEFAULT_PENALTY_GRID",
    "DEFAULT_WIDTH_GRID",
    "DEFAULT_BETA_GRID",
    "validate_snr_rows",
    "fit_threshold",
    "SvmMcsClassifier",
    "AvgSnrClassifier",
    "EffSnrClassifier",
    "ConstantClassifier",
    "ThresholdStubClassifier",
    "cross_validate_svm",
    "select_mcs",
    "ClassifierBank",
    "serialize_classifier",
    "deserialize_classifier",
]

# Documented defaults: C over powers of four from 2^-3, width over powers of two.
DEFAULT_PENALTY_GRID = tuple(float(2.0**e) for e in range(-3, 11, 2))
DEFAULT_WIDTH_GRID = tuple(float(2.0**e) for e in range(-4, 7))
DEFAULT_BETA_GRID = tuple(np.logspace(-3, 2, 26))


def validate_snr_rows(x: np.ndarray) -> np.ndarray:
    """Coerce to a finite 2-D float array of ordered SNR rows (dB)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] == 0:
        raise ValueError("expected rows of ordered SNR values")
    if not np.all(np.isfinite(x)):
        raise ValueError("SNR rows must be finite")
    return np.sort(x, axis=1)


def _validate_labels(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ValueError("labels must be -1 or +1")
    return y


def fit_threshold(values: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """Threshold minimizing training error for predict(+1 iff v >= t).

    Sweeps every distinct value plus one point above the maximum (the
    all-minus classifier); ties resolve to the smallest threshold.
    Returns (threshold, training_error).
    """
    values = np.asarray(values, dtype=np.float64)
    labels = _validate_labels(labels)
    order = np.argsort(values, kind="stable")
    v = values[order]
    pos = labels[order] > 0
    uniq, first_idx = np.unique(v, return_index=True)
    candidates = np.append(uniq, np.nextafter(v[-1], np.inf))
    # errors(t) = (#pos with v < t) + (#neg with v >= t)
    pos_below = np.concatenate([[0], np.cumsum(pos)])
    neg_below = np.concatenate([[0], np.cumsum(~pos)])
    total_neg = int((~pos).sum())
    cut = np.append(first_idx, len(v))
    errors = pos_below[cut] + (total_neg - neg_below[cut])
    best = int(np.argmin(errors))
    return float(candidates[best]), float(errors[best] / len(v))


class _ParamsMixin:
    """Minimal get_params/set_params so classifiers compose with sklearn-style
    tooling."""

    _param_names: tuple[str, ...] = ()

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names}

    def set_params(self, **params):
        for key, value in params.items():
            if key not in self._param_names:
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self


class SvmMcsClassifier(_ParamsMixin):
    """RBF-kernel SVM on equispaced order statistics of the SNR vector."""

    _param_names = ("penalty", "kernel_width", "feature_count", "tol", "max_iter")

    def __init__(self, penalty: float = 1.0, kernel_width: float = 1.0, feature_count: int = 4,
                 tol: float = 1e-6, max_iter: int = 200_000):
        self.penalty = penalty
        self.kernel_width = kernel_width
        self.feature_count = feature_count
        self.tol = tol
        self.max_iter = max_iter

    def _features(self, x: np.ndarray) -> np.ndarray:
        x = validate_snr_rows(x)
        d = self.feature_count
        idx = np.round(np.arange(d) * (x.shape[1] - 1) / (d - 1)).astype(int)
        return x[:, idx]

    def fit(self, x, y) -> "SvmMcsClassifier":
        feats = self._features(x)
        y = _validate_labels(y)
        if y.size != feats.shape[0]:
            raise ValueError("label count mismatch")
        if np.unique(y).size < 2:
            raise ValueError("both classes required; use ConstantClassifier for one-class data")
        self.mean_ = feats.mean(axis=0)
        scale = feats.std(axis=0)
        self.scale_ = np.where(scale > 0, scale, 1.0)
        z = (feats - self.mean_) / self.scale_
        kernel = rbf_kernel(z, z, self.kernel_width)
        sol = smo_solve(kernel, y, self.penalty, tol=self.tol, max_iter=self.max_iter)
        keep = sol.alpha > 1e-10
        self.support_vectors_ = z[keep]
        self.dual_coef_ = (sol.alpha * y)[keep]
        self.intercept_ = sol.bias
        self.kkt_gap_ = sol.kkt_gap
        self.alpha_ = sol.alpha
        self.labels_ = y
        return self

    def decision_function(self, x) -> np.ndarray:
        z = (self._features(x) - self.mean_) / self.scale_
        k = rbf_kernel(z, self.support_vectors_, self.kernel_width)
        return k @ self.dual_coef_ + self.intercept_

    def predict(self, x) -> np.ndarray:
        return np.where(self.decision_function(x) >= 0.0, 1, -1)


class AvgSnrClassifier(_ParamsMixin):
    """Threshold on the arithmetic mean of the linear SNR values."""

    _param_names = ()

    @staticmethod
    def _statistic(x) -> np.ndarray:
        rows = validate_snr_rows(x)
        return np.mean(10.0 ** (rows / 10.0), axis=1)

    def fit(self, x, y) -> "AvgSnrClassifier":
        y = _validate_labels(y)
        if np.unique(y).size < 2:
            raise ValueError("both classes required; use ConstantClassifier for one-class data")
        self.threshold_, self.train_error_ = fit_threshold(self._statistic(x), y)
        return self

    def predict(self, x) -> np.ndarray:
        return np.where(self._statistic(x) >= self.threshold_, 1, -1)


class EffSnrClassifier(_ParamsMixin):
    """Threshold on the exponential effective SNR, with the exponent fitted
    per MCS over a logarithmic grid."""

    _param_names = ("beta_grid",)

    def __init__(self, beta_grid: tuple[float, ...] = DEFAULT_BETA_GRID):
        self.beta_grid = tuple(beta_grid)

    @staticmethod
    def _statistic(x, beta: float) -> np.ndarray:
        rows = validate_snr_rows(x)
        linear = 10.0 ** (rows / 10.0)
        return np.array([eff_snr(row, beta) for row in linear])

    def fit(self, x, y) -> "EffSnrClassifier":
        y = _validate_labels(y)
        if np.unique(y).size < 2:
            raise ValueError("both classes required; use ConstantClassifier for one-class data")
        best = None
        for beta in self.beta_grid:
            threshold, error = fit_threshold(self._statistic(x, beta), y)
            if best is None or error < best[0]:
                best = (error, beta, threshold)
        self.train_error_, self.beta_, self.threshold_ = best
        return self

    def predict(self, x) -> np.ndarray:
        return np.where(self._statistic(x, self.beta_) >= self.threshold_, 1, -1)


class ConstantClassifier(_ParamsMixin):
    """Degenerate classifier for one-class training data; flagged as such."""

    _param_names = ("label",)

    def __init__(self, label: int):
        if label not in (-1, 1):
            raise ValueError("label must be -1 or +1")
        self.label = label
        self.constant = True

    def fit(self, x, y) -> "ConstantClassifier":
        return self

    def predict(self, x) -> np.ndarray:
        rows = validate_snr_rows(x)
        return np.full(rows.shape[0], self.label, dtype=int)


class ThresholdStubClassifier(_ParamsMixin):
    """Deterministic monotone stub: accept iff the mean dB SNR clears a
    threshold. Used by scheduler tests and oracles, never trained."""

    _param_names = ("threshold_db",)

    def __init__(self, threshold_db: float):
        self.threshold_db = threshold_db

    def fit(self, x, y) -> "ThresholdStubClassifier":
        return self

    def predict(self, x) -> np.ndarray:
        rows = validate_snr_rows(x)
        return np.where(rows.mean(axis=1) >= self.threshold_db, 1, -1)


def cross_validate_svm(
    x,
    y,
    penalty_grid=DEFAULT_PENALTY_GRID,
    width_grid=DEFAULT_WIDTH_GRID,
    folds: int = 4,
    seed: int = 0,
    feature_count: int = 4,
) -> tuple[float, float]:
    """K-fold selection of (penalty, kernel width) minimizing the mean
    validation misclassification rate.

    Fold assignment is stratified and deterministic given ``seed``. Ties
    resolve to the smallest penalty, then the largest width (the smoothest
    model).
    """
    x = validate_snr_rows(x)
    y = _validate_labels(y)
    rng = np.random.default_rng(seed)
    fold_of = np.empty(y.size, dtype=int)
    for cls in (-1.0, 1.0):
        idx = np.flatnonzero(y == cls)
        if idx.size < folds:
            raise ValueError(f"need at least {folds} samples of class {int(cls)}")
        idx = rng.permutation(idx)
        fold_of[idx] = np.arange(idx.size) % folds
    best = None
    for penalty in sorted(penalty_grid):
        for width in sorted(width_grid, reverse=True):
            errs = []
            for fold in range(folds):
                train = fold_of != fold
                clf = SvmMcsClassifier(penalty=penalty, kernel_width=width, feature_count=feature_count)
                clf.fit(x[train], y[train])
                pred = clf.predict(x[~train])
                errs.append(np.mean(pred != y[~train]))
            mean_err = float(np.mean(errs))
            if best is None or mean_err < best[0]:
                best = (mean_err, penalty, width)
    return best[1], best[2]


class ClassifierBank:
    """Trained classifiers keyed by (mcs id, stream count)."""

    def __init__(self, components: dict[tuple[int, int], object] | None = None):
        self._components = dict(components or {})

    def set(self, mcs_id: int, num_streams: int, classifier) -> None:
        self._components[(mcs_id, num_streams)] = classifier

    def get(self, mcs_id: int, num_streams: int):
        try:
            return self._components[(mcs_id, num_streams)]
        except KeyError:
            raise KeyError(f"no classifier for MCS {mcs_id} with {num_streams} streams") from None

    def keys(self):
        return self._components.keys()

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "components": {
                f"{mcs_id},{streams}": serialize_classifier(clf)
                for (mcs_id, streams), clf in sorted(self._components.items())
            },
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ClassifierBank":
        if doc.get("version") != 1:
            raise ValueError("unsupported classifier bank version")
        components = {}
        for key, sub in doc["components"].items():
            mcs_id, streams = (int(t) for t in key.split(","))
            components[(mcs_id, streams)] = deserialize_classifier(sub)
        return cls(components)

    @classmethod
    def stub(cls, thresholds_db: dict[int, float], stream_counts: tuple[int, ...]) -> "ClassifierBank":
        bank = cls()
        for mcs in MCS_TABLE:
            for streams in stream_counts:
                bank.set(mcs.id, streams, ThresholdStubClassifier(thresholds_db[mcs.id]))
        return bank


def serialize_classifier(clf) -> dict:
    if isinstance(clf, SvmMcsClassifier):
        return {
            "kind": "svm",
            "penalty": clf.penalty,
            "kernel_width": clf.kernel_width,
            "feature_count": clf.feature_count,
            "mean": clf.mean_.tolist(),
            "scale": clf.scale_.tolist(),
            "support_vectors": clf.support_vectors_.tolist(),
            "dual_coef": clf.dual_coef_.tolist(),
            "intercept": clf.intercept_,
        }
    if isinstance(clf, AvgSnrClassifier):
        return {"kind": "avg_snr", "threshold": clf.threshold_}
    if isinstance(clf, EffSnrClassifier):
        return {"kind": "eff_snr", "beta": clf.beta_, "threshold": clf.threshold_}
    if isinstance(clf, ConstantClassifier):
        return {"kind": "constant", "label": clf.label}
    if isinstance(clf, ThresholdStubClassifier):
        return {"kind": "stub", "threshold_db": clf.threshold_db}
    raise TypeError(f"cannot serialize classifier of type {type(clf).__name__}")


def deserialize_classifier(doc: dict):
    kind = doc["kind"]
    if kind == "svm":
        clf = SvmMcsClassifier(
            penalty=doc["penalty"], kernel_width=doc["kernel_width"], feature_count=doc["feature_count"]
        )
        clf.mean_ = np.asarray(doc["mean"])
        clf.scale_ = np.asarray(doc["scale"])
        clf.support_vectors_ = np.asarray(doc["support_vectors"])
        clf.dual_coef_ = np.asarray(doc["dual_coef"])
        clf.intercept_ = float(doc["intercept"])
        return clf
    if kind == "avg_snr":
        clf = AvgSnrClassifier()
        clf.threshold_ = float(doc["threshold"])
        return clf
    if kind == "eff_snr":
        clf = EffSnrClassifier()
        clf.beta_ = float(doc["beta"])
        clf.threshold_ = float(doc["threshold"])
        return clf
    if kind == "constant":
        return ConstantClassifier(int(doc["label"]))
    if kind == "stub":
        return ThresholdStubClassifier(float(doc["threshold_db"]))
    raise ValueError(f"unknown classifier kind {kind!r}")


def select_mcs(grid, num_streams: int, bank: ClassifierBank) -> McsEntry:
    """Highest-rate MCS predicted to satisfy the FER target, else the
    zero-rate NoTransmission outcome."""
    values = np.asarray(getattr(grid, "values", grid), dtype=np.float64)
    row = to_db(np.sort(values.reshape(-1)))[None, :]
    best = NO_TRANSMISSION
    for mcs in MCS_TABLE:
        clf = bank.get(mcs.id, num_streams)
        if int(clf.predict(row)[0]) == 1 and mcs.base_rate_mbps > best.base_rate_mbps:
            best = mcs
    return best
