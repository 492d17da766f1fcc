"""Block-diagonalization precoding from (possibly quantized) beamformers.

The transmitter only ever sees report data: reconstructed beamformers
V_hat and the exact top singular values. Each user's precoder lives in the
nullspace of the other users' equivalent rows sigma * V_hat^*, pointed
along the dominant directions of its own equivalent channel with unit
column power. Per-carrier transmit power is normalized through P[n] in the
SNR computation rather than by scaling the precoders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InfeasibleConfiguration",
    "PrecodingSolution",
    "rejection_matrix",
    "nullspace_basis",
    "bd_precoders",
    "zf_equalizer",
    "effective_inverse",
    "power_normalization",
]

_NULL_REL_TOL = 1e-10
_MAX_CONDITION = 1e12


class InfeasibleConfiguration(Exception):
    """Raised when a stream allocation cannot be realized on this channel."""


def rejection_matrix(channel: np.ndarray, num_streams: int) -> np.ndarray:
    """Receive projection B = U_tilde^*: Hermitian transpose of the
    num_streams dominant left singular vectors of the channel."""
    channel = np.asarray(channel)
    if num_streams > min(channel.shape):
        raise InfeasibleConfiguration("num_streams exceeds the channel rank bound")
    u, s, _ = np.linalg.svd(channel)
    if num_streams > np.count_nonzero(s > _NULL_REL_TOL * max(s[0], 1e-300)):
        raise InfeasibleConfiguration("num_streams exceeds the channel rank")
    return u[:, :num_streams].conj().T


def nullspace_basis(stacked: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Orthonormal basis of the right nullspace of ``stacked`` (rows x dim).

    Rank is decided at relative tolerance 1e-10 of the largest singular
    value. An empty ``stacked`` yields the identity.
    """
    if stacked.shape[0] == 0:
        return np.eye(ambient_dim, dtype=np.complex128)
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.count_nonzero(s > _NULL_REL_TOL * s[0])) if s.size else 0
    return vh.conj().T[:, rank:]


def bd_precoders(
    beamformers: list[np.ndarray],
    singular_values: list[np.ndarray],
    stream_counts: list[int],
) -> list[np.ndarray]:
    """Per-user precoders for one carrier.

    beamformers[u] is V_hat_u (N_tx x L_u) and singular_values[u] its
    diagonal sigma (length L_u); both may come from exact CSI. Raises
    InfeasibleConfiguration when some user's nullspace is too small.
    """
    if not beamformers:
        raise ValueError("at least one user required")
    n_tx = beamformers[0].shape[0]
    rows = [np.diag(sv) @ v.conj().T for v, sv in zip(beamformers, singular_values)]
    precoders = []
    for u, streams in enumerate(stream_counts):
        others = [rows[j] for j in range(len(rows)) if j != u]
        stacked = np.vstack(others) if others else np.zeros((0, n_tx))
        basis = nullspace_basis(stacked, n_tx)
        if basis.shape[1] < streams:
            raise InfeasibleConfiguration(
                f"user {u}: nullspace dimension {basis.shape[1]} < {streams} streams"
            )
        equivalent = rows[u] @ basis
        _, s, vh = np.linalg.svd(equivalent)
        if np.count_nonzero(s > _NULL_REL_TOL * max(s[0], 1e-300)) < streams:
            raise InfeasibleConfiguration(f"user {u}: equivalent channel rank below {streams}")
        directions = vh.conj().T[:, :streams]
        precoders.append(basis @ directions)
    return precoders


def effective_inverse(effective_channel: np.ndarray) -> np.ndarray:
    """Inverse of an effective channel, rejecting near-singular cases."""
    eff = np.asarray(effective_channel)
    s = np.linalg.svd(eff, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > _MAX_CONDITION:
        raise InfeasibleConfiguration("effective channel is singular or ill conditioned")
    return np.linalg.inv(eff)


def zf_equalizer(rejection: np.ndarray, channel: np.ndarray, precoder: np.ndarray) -> np.ndarray:
    """G = (B H F)^{-1}, so that G B H F = I."""
    return effective_inverse(rejection @ channel @ precoder)


def power_normalization(precoders: list[np.ndarray]) -> float:
    """P = sum_u trace(F_u F_u^*)."""
    if not precoders:
        raise ValueError("at least one precoder required")
    return float(sum(np.einsum("ij,ij->", f, f.conj()).real for f in precoders))


@dataclass
class PrecodingSolution:
    """Receiver-complete per-carrier design for the scheduled users.

    Lists are indexed [carrier][slot] where slot runs over the scheduled
    users in ``users`` order.
    """

    users: tuple[int, ...]
    stream_counts: tuple[int, ...]
    precoders: list[list[np.ndarray]] = field(repr=False)
    rejections: list[list[np.ndarray]] = field(repr=False)
    equalizers: list[list[np.ndarray]] = field(repr=False)
    power: np.ndarray = field(repr=False)  # (num_carriers,)

    @property
    def num_carriers(self) -> int:
        return len(self.precoders)
