"""Givens-angle beamformer feedback: decomposition, uniform quantization,
and per-user feedback reports.

An orthonormal-column matrix V (N_tx x L) is factored as

    V = [prod_l D_l(phi_l) prod_{n=l+1..N_tx} G_{n,l}(psi_{l,n})] I_tilde

where D_l carries unit phases on rows l..N_tx, G_{n,l} is the real plane
rotation with +sin at (l, n) and -sin at (n, l), and I_tilde is the first
L identity columns. The decomposition chooses phases so that the rotated
column entries below the diagonal are real nonpositive, which puts every
psi in [0, pi/2]; the diagonal entries stay real nonnegative. As a result,
reconstruction reproduces V only up to a unit phase per column, so
consumers must be (and are) invariant to column phases.

Angle conventions here and in :mod:`mulink.leakage` must match; both use
the factor order above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GivensAngles",
    "QuantizerConfig",
    "FeedbackReport",
    "givens_decompose",
    "givens_reconstruct",
    "reconstruct_batch",
    "quantize_angles",
    "dequantize_angles",
    "build_report",
    "chordal_distance",
]

_ORTHO_TOL = 1e-8
_RANK_TOL = 1e-12
_PSI_SLACK = 1e-9

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GivensAngles:
    """Angles for one beamformer: phases[l] has N_tx-l entries (0-based l,
    rows l..N_tx-1), rotations[l] has N_tx-1-l entries (rows l+1..N_tx-1)."""

    n_tx: int
    phases: tuple[np.ndarray, ...]
    rotations: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.phases) != len(self.rotations):
            raise ValueError("phases and rotations must cover the same columns")
        for col, (ph, ro) in enumerate(zip(self.phases, self.rotations)):
            if ph.shape != (self.n_tx - col,):
                raise ValueError(f"column {col}: expected {self.n_tx - col} phases")
            if ro.shape != (self.n_tx - col - 1,):
                raise ValueError(f"column {col}: expected {self.n_tx - col - 1} rotations")

    @property
    def num_columns(self) -> int:
        return len(self.phases)

    def truncated(self, num_columns: int) -> "GivensAngles":
        """Angles of the leading columns; valid because the decomposition
        processes columns left to right."""
        if num_columns > self.num_columns:
            raise ValueError("cannot extend an angle set")
        return GivensAngles(self.n_tx, self.phases[:num_columns], self.rotations[:num_columns])


def givens_decompose(beamformer: np.ndarray) -> GivensAngles:
    """Factor an orthonormal-column matrix into Givens angles."""
    v = np.array(beamformer, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] < v.shape[1]:
        raise ValueError("beamformer must be tall (N_tx x L with L <= N_tx)")
    n_tx, ncols = v.shape
    gram = v.conj().T @ v
    if np.linalg.norm(gram - np.eye(ncols)) > _ORTHO_TOL:
        raise ValueError("beamformer columns are not orthonormal")

    phases: list[np.ndarray] = []
    rotations: list[np.ndarray] = []
    for col in range(ncols):
        column = v[col:, col]
        mags = np.abs(column)
        phi = np.where(mags > _RANK_TOL, np.angle(column), 0.0)
        # sub-diagonal rows get an extra pi so the annihilation angle lands in [0, pi/2]
        phi[1:] = np.where(mags[1:] > _RANK_TOL, np.mod(phi[1:] + np.pi, TWO_PI), 0.0)
        phi = np.mod(phi, TWO_PI)
        phases.append(phi)
        v[col:, :] *= np.exp(-1j * phi)[:, None]

        psi = np.empty(n_tx - col - 1)
        for n in range(col + 1, n_tx):
            a = float(v[col, col].real)
            b = float(v[n, col].real)  # <= 0 by the phase choice
            angle = np.arctan2(max(-b, 0.0), max(a, 0.0))
            psi[n - col - 1] = angle
            c, s = np.cos(angle), np.sin(angle)
            top = c * v[col, :] - s * v[n, :]
            bot = s * v[col, :] + c * v[n, :]
            v[col, :] = top
            v[n, :] = bot
        rotations.append(psi)
    return GivensAngles(n_tx, tuple(phases), tuple(rotations))


def _apply_reconstruction(mat: np.ndarray, angles: GivensAngles) -> np.ndarray:
    """Apply the factor product to ``mat`` (..., N_tx, L), rightmost first."""
    n_tx = angles.n_tx
    for col in range(angles.num_columns - 1, -1, -1):
        psi = angles.rotations[col]
        for n in range(n_tx - 1, col, -1):
            ang = psi[n - col - 1]
            c, s = np.cos(ang), np.sin(ang)
            top = c * mat[..., col, :] + s * mat[..., n, :]
            bot = -s * mat[..., col, :] + c * mat[..., n, :]
            mat[..., col, :] = top
            mat[..., n, :] = bot
        phase = np.exp(1j * angles.phases[col])
        mat[..., col:, :] *= phase[..., :, None]
    return mat


def givens_reconstruct(angles: GivensAngles, n_tx: int | None = None, num_columns: int | None = None) -> np.ndarray:
    """Evaluate the factor product applied to the leading identity columns."""
    if n_tx is not None and n_tx != angles.n_tx:
        raise ValueError("n_tx inconsistent with the angle set")
    ncols = angles.num_columns if num_columns is None else num_columns
    if ncols != angles.num_columns:
        angles = angles.truncated(ncols)
    mat = np.zeros((angles.n_tx, ncols), dtype=np.complex128)
    mat[:ncols, :ncols] = np.eye(ncols)
    return _apply_reconstruction(mat, angles)


def reconstruct_batch(n_tx: int, phases: tuple[np.ndarray, ...], rotations: tuple[np.ndarray, ...]) -> np.ndarray:
    """Vectorized reconstruction for angle arrays with a leading sample axis.

    phases[l] has shape (S, n_tx-l); rotations[l] has shape (S, n_tx-1-l).
    Returns (S, n_tx, L).
    """
    ncols = len(phases)
    samples = phases[0].shape[0]
    mat = np.zeros((samples, n_tx, ncols), dtype=np.complex128)
    mat[:, :ncols, :ncols] = np.eye(ncols)
    for col in range(ncols - 1, -1, -1):
        for n in range(n_tx - 1, col, -1):
            ang = rotations[col][:, n - col - 1]
            c, s = np.cos(ang)[:, None], np.sin(ang)[:, None]
            top = c * mat[:, col, :] + s * mat[:, n, :]
            bot = -s * mat[:, col, :] + c * mat[:, n, :]
            mat[:, col, :] = top
            mat[:, n, :] = bot
        mat[:, col:, :] *= np.exp(1j * phases[col])[:, :, None]
    return mat


@dataclass(frozen=True)
class QuantizerConfig:
    """Uniform angle codebooks with b_psi and b_phi bits per angle."""

    psi_bits: int
    phi_bits: int

    def __post_init__(self):
        if self.psi_bits < 1 or self.phi_bits < 1:
            raise ValueError("bit counts must be >= 1")

    @property
    def epsilon(self) -> float:
        """Half bin width for psi: pi / 2^(b_psi + 2)."""
        return np.pi / 2 ** (self.psi_bits + 2)

    @property
    def delta(self) -> float:
        """Half bin width for phi: pi / 2^b_phi."""
        return np.pi / 2 ** self.phi_bits

    def quantize_psi(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        if np.any(values < -_PSI_SLACK) or np.any(values > np.pi / 2 + _PSI_SLACK):
            raise ValueError("psi angle outside [0, pi/2]")
        clipped = np.clip(values, 0.0, np.pi / 2)
        width = 2.0 * self.epsilon
        return np.minimum((clipped / width).astype(np.int64), 2**self.psi_bits - 1)

    def quantize_phi(self, values: np.ndarray) -> np.ndarray:
        wrapped = np.mod(np.asarray(values, dtype=np.float64), TWO_PI)
        width = 2.0 * self.delta
        return np.minimum((wrapped / width).astype(np.int64), 2**self.phi_bits - 1)

    def psi_center(self, index: np.ndarray) -> np.ndarray:
        return np.asarray(index) * 2.0 * self.epsilon + self.epsilon

    def phi_center(self, index: np.ndarray) -> np.ndarray:
        return np.asarray(index) * 2.0 * self.delta + self.delta


def quantize_angles(angles: GivensAngles, cfg: QuantizerConfig) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """Codebook indices (phi_indices, psi_indices), per column."""
    phi_idx = tuple(cfg.quantize_phi(ph) for ph in angles.phases)
    psi_idx = tuple(cfg.quantize_psi(ro) for ro in angles.rotations)
    return phi_idx, psi_idx


def dequantize_angles(
    phi_indices: tuple[np.ndarray, ...],
    psi_indices: tuple[np.ndarray, ...],
    cfg: QuantizerConfig,
    n_tx: int,
) -> GivensAngles:
    phases = tuple(cfg.phi_center(idx).astype(np.float64) for idx in phi_indices)
    rotations = tuple(cfg.psi_center(idx).astype(np.float64) for idx in psi_indices)
    return GivensAngles(n_tx, phases, rotations)


@dataclass(frozen=True)
class FeedbackReport:
    """Quantized beamformer angles plus exact per-carrier singular values.

    ``angles[n]`` holds the reconstruction angles for carrier n: codebook
    bin centers when quantized (psi_bits set), raw angles in exact mode.
    """

    user: int
    num_streams: int
    n_tx: int
    num_carriers: int
    psi_bits: int | None
    phi_bits: int | None
    angles: tuple[GivensAngles, ...] = field(repr=False)
    phi_indices: tuple | None = field(repr=False)
    psi_indices: tuple | None = field(repr=False)
    singular_values: np.ndarray = field(repr=False)  # (num_carriers, num_streams)
    rank_ok: np.ndarray = field(repr=False)  # (num_carriers,)

    @property
    def quantized(self) -> bool:
        return self.psi_bits is not None

    def quantizer(self) -> QuantizerConfig | None:
        if not self.quantized:
            return None
        return QuantizerConfig(self.psi_bits, self.phi_bits)

    def beamformer(self, carrier: int, num_streams: int | None = None) -> np.ndarray:
        """Reconstructed V_hat for the leading ``num_streams`` columns."""
        ncols = self.num_streams if num_streams is None else num_streams
        return givens_reconstruct(self.angles[carrier].truncated(ncols))

    def to_json_dict(self) -> dict:
        doc = {
            "version": 1,
            "user": self.user,
            "num_streams": self.num_streams,
            "n_tx": self.n_tx,
            "num_carriers": self.num_carriers,
            "psi_bits": self.psi_bits,
            "phi_bits": self.phi_bits,
            "singular_values": self.singular_values.tolist(),
            "rank_ok": self.rank_ok.astype(int).tolist(),
        }
        if self.quantized:
            doc["phi_indices"] = [[col.tolist() for col in per_c] for per_c in self.phi_indices]
            doc["psi_indices"] = [[col.tolist() for col in per_c] for per_c in self.psi_indices]
        else:
            doc["phi"] = [[col.tolist() for col in a.phases] for a in self.angles]
            doc["psi"] = [[col.tolist() for col in a.rotations] for a in self.angles]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FeedbackReport":
        if doc.get("version") != 1:
            raise ValueError("unsupported feedback report version")
        n_tx = doc["n_tx"]
        psi_bits = doc["psi_bits"]
        phi_bits = doc["phi_bits"]
        if psi_bits is not None:
            cfg = QuantizerConfig(psi_bits, phi_bits)
            phi_indices = tuple(
                tuple(np.asarray(col, dtype=np.int64) for col in per_c) for per_c in doc["phi_indices"]
            )
            psi_indices = tuple(
                tuple(np.asarray(col, dtype=np.int64) for col in per_c) for per_c in doc["psi_indices"]
            )
            angles = tuple(
                dequantize_angles(phi_c, psi_c, cfg, n_tx) for phi_c, psi_c in zip(phi_indices, psi_indices)
            )
        else:
            phi_indices = psi_indices = None
            angles = tuple(
                GivensAngles(
                    n_tx,
                    tuple(np.asarray(col, dtype=np.float64) for col in ph),
                    tuple(np.asarray(col, dtype=np.float64) for col in ps),
                )
                for ph, ps in zip(doc["phi"], doc["psi"])
            )
        return cls(
            user=doc["user"],
            num_streams=doc["num_streams"],
            n_tx=n_tx,
            num_carriers=doc["num_carriers"],
            psi_bits=psi_bits,
            phi_bits=phi_bits,
            angles=angles,
            phi_indices=phi_indices,
            psi_indices=psi_indices,
            singular_values=np.asarray(doc["singular_values"], dtype=np.float64),
            rank_ok=np.asarray(doc["rank_ok"], dtype=bool),
        )

    @classmethod
    def from_json(cls, text: str) -> "FeedbackReport":
        return cls.from_json_dict(json.loads(text))


def _zero_index_angles(n_tx: int, ncols: int, cfg: QuantizerConfig) -> tuple[tuple, tuple]:
    phi_idx = tuple(np.zeros(n_tx - c, dtype=np.int64) for c in range(ncols))
    psi_idx = tuple(np.zeros(n_tx - c - 1, dtype=np.int64) for c in range(ncols))
    return phi_idx, psi_idx


def build_report(
    channel_freq: np.ndarray,
    num_streams: int,
    quantizer: QuantizerConfig | None,
    user: int = 0,
) -> FeedbackReport:
    """Per-carrier SVD, Givens decomposition and quantization of the dominant
    right singular vectors, keeping the singular values exact.

    channel_freq has shape (num_carriers, N_rx, N_tx). Carriers whose
    num_streams-th singular value falls below 1e-12 are flagged so the
    scheduler can reject configurations that rely on them; their angles are
    stored as first-bin centers.
    """
    h = np.asarray(channel_freq)
    if h.ndim != 3:
        raise ValueError("channel_freq must have shape (num_carriers, N_rx, N_tx)")
    num_carriers, n_rx, n_tx = h.shape
    if num_streams > min(n_rx, n_tx):
        raise ValueError("num_streams exceeds min(N_rx, N_tx)")

    angles: list[GivensAngles] = []
    phi_indices: list = []
    psi_indices: list = []
    singular_values = np.zeros((num_carriers, num_streams))
    rank_ok = np.zeros(num_carriers, dtype=bool)
    for n in range(num_carriers):
        _, s, vh = np.linalg.svd(h[n], full_matrices=True)
        top = s[:num_streams]
        singular_values[n] = top
        ok = bool(top.min() >= _RANK_TOL)
        rank_ok[n] = ok
        if not ok and quantizer is not None:
            phi_c, psi_c = _zero_index_angles(n_tx, num_streams, quantizer)
            phi_indices.append(phi_c)
            psi_indices.append(psi_c)
            angles.append(dequantize_angles(phi_c, psi_c, quantizer, n_tx))
            continue
        exact = givens_decompose(vh.conj().T[:, :num_streams])
        if quantizer is None:
            angles.append(exact)
        else:
            phi_c, psi_c = quantize_angles(exact, quantizer)
            phi_indices.append(phi_c)
            psi_indices.append(psi_c)
            angles.append(dequantize_angles(phi_c, psi_c, quantizer, n_tx))

    return FeedbackReport(
        user=user,
        num_streams=num_streams,
        n_tx=n_tx,
        num_carriers=num_carriers,
        psi_bits=None if quantizer is None else quantizer.psi_bits,
        phi_bits=None if quantizer is None else quantizer.phi_bits,
        angles=tuple(angles),
        phi_indices=tuple(phi_indices) if quantizer is not None else None,
        psi_indices=tuple(psi_indices) if quantizer is not None else None,
        singular_values=singular_values,
        rank_ok=rank_ok,
    )


def chordal_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Subspace distance ||aa* - bb*||_F / sqrt(2) between column spans."""
    pa = a @ a.conj().T
    pb = b @ b.conj().T
    return float(np.linalg.norm(pa - pb) / np.sqrt(2.0))
