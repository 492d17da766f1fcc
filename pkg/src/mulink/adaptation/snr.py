"""Post-processing SNR grids, order-statistic features, and effective SNR."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SnrGrid", "post_snr", "true_interference", "order_stats_features", "eff_snr", "to_db"]


@dataclass(frozen=True)
class SnrGrid:
    """Per-stream, per-carrier linear SNR values for one user: shape (L, N)."""

    user: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must have shape (L, N)")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("SNR values must be finite and positive")
        object.__setattr__(self, "values", values)

    @property
    def num_streams(self) -> int:
        return self.values.shape[0]

    @property
    def num_carriers(self) -> int:
        return self.values.shape[1]


def post_snr(
    equalizers: list[np.ndarray],
    power: np.ndarray,
    noise_variance: float,
    interference: list[np.ndarray] | None = None,
) -> np.ndarray:
    """Per-stream, per-carrier SNR after projection and equalization.

    For carrier n with equalizer G and summed interference covariance R_int
    (zeros when absent), the stream-i SNR is

        gamma_i[n] = (1/P[n]) / [R_int + sigma^2 G G^*]_{ii}

    which uses that the rejection matrix has orthonormal rows and that the
    zero-forcing equalizer leaves a diagonal useful term of 1/sqrt(P[n]).
    """
    num_carriers = len(equalizers)
    power = np.asarray(power, dtype=np.float64)
    if power.shape != (num_carriers,):
        raise ValueError("power must hold one entry per carrier")
    num_streams = equalizers[0].shape[0]
    values = np.empty((num_streams, num_carriers))
    for n, g in enumerate(equalizers):
        cov = noise_variance * (g @ g.conj().T)
        if interference is not None:
            cov = cov + interference[n]
        diag = np.real(np.diag(cov))
        if np.any(diag <= 0):
            raise ValueError(f"carrier {n}: nonpositive interference-plus-noise diagonal")
        values[:, n] = (1.0 / power[n]) / diag
    return values


def true_interference(
    equalizer: np.ndarray,
    rejection: np.ndarray,
    channel: np.ndarray,
    interferer_precoder: np.ndarray,
    power: float,
) -> np.ndarray:
    """Actual-realization interference covariance (1/P)(G B H F_j)(G B H F_j)^*."""
    coupling = equalizer @ rejection @ channel @ interferer_precoder
    return (coupling @ coupling.conj().T) / power


def to_db(values: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(values)


def order_stats_features(grid, feature_count: int = 4) -> np.ndarray:
    """Equispaced order statistics of the flattened grid, in dB.

    Sorts all L*N values ascending and picks indices round(k (LN-1)/(d-1))
    for k = 0..d-1, so the minimum and maximum are always included. The
    result is invariant to any permutation of the grid.
    """
    values = np.asarray(getattr(grid, "values", grid), dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ValueError("empty SNR grid")
    if feature_count < 2 or feature_count > values.size:
        raise ValueError("need 2 <= feature_count <= L*N")
    ordered = np.sort(values)
    idx = np.round(np.arange(feature_count) * (values.size - 1) / (feature_count - 1)).astype(int)
    return to_db(ordered[idx])


def eff_snr(grid, beta: float) -> float:
    """Exponential effective SNR: -(1/beta) ln mean exp(-beta gamma).

    Computed with a max-shift so large linear SNR values cannot underflow
    the whole mean. Approaches the arithmetic mean as beta -> 0 and the
    minimum as beta -> infinity.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    values = np.asarray(getattr(grid, "values", grid), dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ValueError("empty SNR grid")
    vmin = values.min()
    return float(vmin - np.log(np.mean(np.exp(-beta * (values - vmin)))) / beta)
