"""MCS selection: SNR grids, features, classifiers, and baselines."""

from .classifiers import (
    DEFAULT_BETA_GRID,
    DEFAULT_PENALTY_GRID,
    DEFAULT_WIDTH_GRID,
    AvgSnrClassifier,
    ClassifierBank,
    ConstantClassifier,
    EffSnrClassifier,
    SvmMcsClassifier,
    ThresholdStubClassifier,
    cross_validate_svm,
    deserialize_classifier,
    fit_threshold,
    select_mcs,
    serialize_classifier,
    validate_snr_rows,
)
from .snr import SnrGrid, eff_snr, order_stats_features, post_snr, to_db, true_interference
from .svm import SmoSolution, rbf_kernel, smo_solve

__all__ = [
    "SnrGrid",
    "post_snr",
    "true_interference",
    "order_stats_features",
    "eff_snr",
    "to_db",
    "rbf_kernel",
    "smo_solve",
    "SmoSolution",
    "SvmMcsClassifier",
    "AvgSnrClassifier",
    "EffSnrClassifier",
    "ConstantClassifier",
    "ThresholdStubClassifier",
    "ClassifierBank",
    "cross_validate_svm",
    "select_mcs",
    "fit_threshold",
    "validate_snr_rows",
    "serialize_classifier",
    "deserialize_classifier",
    "DEFAULT_PENALTY_GRID",
    "DEFAULT_WIDTH_GRID",
    "DEFAULT_BETA_GRID",
]
