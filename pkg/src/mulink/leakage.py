"""Closed-form expected interuser interference under angle quantization.

Quantization error makes the true beamformer a random variable around the
reported one. Modeling each angle as uniform within its quantization bin
and independent of the others, the expected outer product

    C = E[ V^* F F^* V ]

has a closed form: vectorize, push the expectation through the Givens
factor product, and every factor contributes an independent Kronecker
expectation. Phase factors give diagonal matrices with sinc(delta)
attenuation; plane rotations give block matrices built from the first and
second trigonometric moments over the bin. A Monte-Carlo twin
(:func:`empirical_outer`) draws angles from the same bins and averages
directly, which is the oracle used to validate the algebra.

All Kronecker matrices are materialized densely (N_tx^2 x N_tx^2) and the
factor product is accumulated left to right in the factor order of
:mod:`mulink.feedback`.
"""

from __future__ import annotations

import numpy as np

from .feedback import FeedbackReport, GivensAngles, QuantizerConfig, reconstruct_batch

__all__ = [
    "expected_phase_kron",
    "expected_rotation_kron",
    "carrier_operator",
    "expected_outer",
    "empirical_outer",
    "leakage_covariance",
    "LeakageModel",
]


def _sinc(half_width: float) -> float:
    return float(np.sin(half_width) / half_width) if half_width > 0 else 1.0


def _rotation_moments(psi_hat: float, eps: float) -> dict[str, float]:
    """First and second trig moments of psi uniform on [psi_hat - eps, psi_hat + eps]."""
    if eps > 0:
        sc = np.sin(eps) / eps
        cos2 = np.cos(eps) * np.cos(2 * psi_hat) * np.sin(eps) / eps
        return {
            "c": float(np.cos(psi_hat) * sc),
            "s": float(np.sin(psi_hat) * sc),
            "cc": float((eps + np.cos(eps) * np.cos(2 * psi_hat) * np.sin(eps)) / (2 * eps)),
            "ss": float((eps - np.cos(eps) * np.cos(2 * psi_hat) * np.sin(eps)) / (2 * eps)),
            "cs": float(np.cos(eps) * np.cos(psi_hat) * np.sin(eps) * np.sin(psi_hat) / eps),
        }
    c, s = float(np.cos(psi_hat)), float(np.sin(psi_hat))
    return {"c": c, "s": s, "cc": c * c, "ss": s * s, "cs": c * s}


def expected_phase_kron(phi_hat: np.ndarray, delta: float, col: int, n_tx: int) -> np.ndarray:
    """E[D^T x D^*] for the phase factor of column ``col`` (0-based).

    phi_hat holds the reported phases for rows col..n_tx-1. The result is
    a diagonal n_tx^2 x n_tx^2 matrix: unit where both Kronecker indices
    coincide, single-phase entries attenuated by sin(delta)/delta, and
    cross terms by its square.
    """
    phi_hat = np.asarray(phi_hat, dtype=np.float64)
    if phi_hat.shape != (n_tx - col,):
        raise ValueError("phi_hat must cover rows col..n_tx-1")
    mean_phase = np.ones(n_tx, dtype=np.complex128)
    mean_phase[col:] = np.exp(1j * phi_hat) * _sinc(delta)
    entries = np.multiply.outer(mean_phase, mean_phase.conj())
    np.fill_diagonal(entries, 1.0)
    return np.diag(entries.reshape(-1))


def _rotation_kernels(psi_hat: float, eps: float, col: int, row: int, n_tx: int):
    """E[G^T], E[cos psi G^T] and E[sin psi G^T] as dense n_tx x n_tx blocks."""
    m = _rotation_moments(psi_hat, eps)
    eg = np.eye(n_tx)
    eg[col, col] = eg[row, row] = m["c"]
    eg[col, row] = -m["s"]
    eg[row, col] = m["s"]

    ecg = np.eye(n_tx) * m["c"]
    ecg[col, col] = ecg[row, row] = m["cc"]
    ecg[col, row] = -m["cs"]
    ecg[row, col] = m["cs"]

    esg = np.eye(n_tx) * m["s"]
    esg[col, col] = esg[row, row] = m["cs"]
    esg[col, row] = -m["ss"]
    esg[row, col] = m["ss"]
    return eg, ecg, esg


def expected_rotation_kron(psi_hat: float, eps: float, col: int, row: int, n_tx: int) -> np.ndarray:
    """E[G^T x G^*] for the plane rotation in coordinates (col, row), 0-based."""
    if not 0 <= col < row < n_tx:
        raise ValueError("need 0 <= col < row < n_tx")
    eg, ecg, esg = _rotation_kernels(psi_hat, eps, col, row, n_tx)
    outer_plain = np.eye(n_tx)
    outer_plain[col, col] = outer_plain[row, row] = 0.0
    outer_cos = np.zeros((n_tx, n_tx))
    outer_cos[col, col] = outer_cos[row, row] = 1.0
    outer_sin = np.zeros((n_tx, n_tx))
    outer_sin[col, row] = -1.0
    outer_sin[row, col] = 1.0
    return np.kron(outer_plain, eg) + np.kron(outer_cos, ecg) + np.kron(outer_sin, esg)


def carrier_operator(angles: GivensAngles, eps: float, delta: float) -> np.ndarray:
    """Product over all factors, accumulated left to right in factor order."""
    n_tx = angles.n_tx
    op = np.eye(n_tx * n_tx, dtype=np.complex128)
    for col in range(angles.num_columns):
        op = op @ expected_phase_kron(angles.phases[col], delta, col, n_tx).T
        for row in range(col + 1, n_tx):
            psi_hat = float(angles.rotations[col][row - col - 1])
            op = op @ expected_rotation_kron(psi_hat, eps, col, row, n_tx).T
    return op


def _vec(mat: np.ndarray) -> np.ndarray:
    return mat.reshape(-1, order="F")


def expected_outer(
    angles: GivensAngles,
    quantizer: QuantizerConfig | None,
    precoder: np.ndarray,
    operator: np.ndarray | None = None,
) -> np.ndarray:
    """Closed-form C = E[V^* F F^* V] under bin-uniform angle errors.

    ``angles`` are the reported (bin center) values for the interfered
    user's beamformer; ``precoder`` is the interferer's F. A precomputed
    ``operator`` from :func:`carrier_operator` may be supplied. With
    ``quantizer`` None the bins have zero width and the expectation
    collapses to the exact outer product.
    """
    n_tx = angles.n_tx
    ncols = angles.num_columns
    eps = quantizer.epsilon if quantizer is not None else 0.0
    delta = quantizer.delta if quantizer is not None else 0.0
    if operator is None:
        operator = carrier_operator(angles, eps, delta)
    ident = np.zeros((n_tx, ncols))
    ident[:ncols, :ncols] = np.eye(ncols)
    projector = np.kron(ident.T, ident.T)  # I_tilde real: conjugate transpose == transpose
    vec_c = projector @ (operator.T @ _vec(precoder @ precoder.conj().T))
    c = vec_c.reshape(ncols, ncols, order="F")
    return 0.5 * (c + c.conj().T)


def empirical_outer(
    angles: GivensAngles,
    quantizer: QuantizerConfig | None,
    precoder: np.ndarray,
    num_samples: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Monte-Carlo estimate of C with angles drawn uniformly in their bins."""
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    eps = quantizer.epsilon if quantizer is not None else 0.0
    delta = quantizer.delta if quantizer is not None else 0.0
    phases = tuple(
        ph[None, :] + rng.uniform(-delta, delta, size=(num_samples, ph.size))
        for ph in angles.phases
    )
    rotations = tuple(
        ro[None, :] + rng.uniform(-eps, eps, size=(num_samples, ro.size))
        for ro in angles.rotations
    )
    beams = reconstruct_batch(angles.n_tx, phases, rotations)  # (S, N_tx, L)
    coupled = np.einsum("snl,nj->slj", beams.conj(), precoder)  # V^* F per sample
    c = np.einsum("slj,smj->lm", coupled, coupled.conj()) / num_samples
    return 0.5 * (c + c.conj().T)


def leakage_covariance(
    outer: np.ndarray,
    singular_values: np.ndarray,
    equalizer: np.ndarray,
    power: float,
) -> np.ndarray:
    """Expected post-equalization interference covariance
    (1/P) G Sigma C Sigma^* G^*."""
    sigma = np.diag(np.asarray(singular_values, dtype=np.float64))
    r = (equalizer @ sigma @ outer @ sigma.conj().T @ equalizer.conj().T) / power
    return 0.5 * (r + r.conj().T)


class LeakageModel:
    """Per-report cache of carrier operators for repeated candidate scoring."""

    def __init__(self, report: FeedbackReport):
        self._report = report
        self._quantizer = report.quantizer()
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    @property
    def quantized(self) -> bool:
        return self._quantizer is not None

    def expected_outer(self, carrier: int, num_streams: int, precoder: np.ndarray) -> np.ndarray:
        if self._quantizer is None:
            # exact CSI: the BD constraint already zeroes the coupling
            return np.zeros((num_streams, num_streams), dtype=np.complex128)
        key = (carrier, num_streams)
        op = self._cache.get(key)
        angles = self._report.angles[carrier].truncated(num_streams)
        if op is None:
            op = carrier_operator(angles, self._quantizer.epsilon, self._quantizer.delta)
            self._cache[key] = op
        return expected_outer(angles, self._quantizer, precoder, operator=op)
