"""Coded BICM-OFDM frame error rate simulation.

Every frame runs the full encode / interleave / map / AWGN / demap /
decode chain. The per-position noise is set by the post-processing SNR
grid (one value per stream and carrier, constant over the OFDM symbols of
a frame), which is the only channel the codec ever sees. Frames are
processed in fixed-size batches so the chain stays vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import convcode, interleave, mapping
from .mcs import McsEntry

__all__ = ["Frame", "FerMeasurement", "simulate_fer", "simulate_fer_grids", "uncoded_bpsk_ber"]

_CHUNK_FRAMES = 125


@dataclass(frozen=True)
class Frame:
    """A payload of 8*frame_bytes bits."""

    payload: np.ndarray

    def __post_init__(self):
        payload = np.asarray(self.payload, dtype=np.uint8)
        if payload.ndim != 1 or payload.size % 8 != 0:
            raise ValueError("payload must be a flat bit array with whole bytes")
        object.__setattr__(self, "payload", payload)

    @property
    def num_bytes(self) -> int:
        return self.payload.size // 8


@dataclass(frozen=True)
class FerMeasurement:
    mcs_id: int
    num_streams: int
    frames_simulated: int
    frames_in_error: int

    @property
    def fer(self) -> float:
        return self.frames_in_error / self.frames_simulated


def _grid_values(snr_grid) -> np.ndarray:
    values = getattr(snr_grid, "values", snr_grid)
    return np.asarray(values, dtype=np.float64)


def _frame_errors(grids: np.ndarray, mcs: McsEntry, frame_bytes: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate one frame per grid row; grids has shape (F, L, N)."""
    frames, num_streams, num_carriers = grids.shape
    k = 8 * frame_bytes
    b = mcs.bits_per_symbol
    block_bits = num_streams * num_carriers * b
    n_punct = convcode.num_coded_bits(k, mcs.code_rate)
    n_ofdm = -(-n_punct // block_bits)

    errors = np.empty(frames, dtype=bool)
    for start in range(0, frames, _CHUNK_FRAMES):
        stop = min(start + _CHUNK_FRAMES, frames)
        f = stop - start
        payload = rng.integers(0, 2, size=(f, k), dtype=np.uint8)
        coded = convcode.conv_encode(payload)
        kept = convcode.puncture(coded, mcs.code_rate)

        padded = np.zeros((f, n_ofdm * block_bits), dtype=np.uint8)
        padded[:, :n_punct] = kept
        blocks = padded.reshape(f, n_ofdm, num_streams, num_carriers * b)
        blocks = interleave.interleave(blocks, mcs, num_streams, num_carriers)
        symbols = mapping.map_symbols(blocks, mcs.modulation)  # (f, n_ofdm, L, N)

        snr = grids[start:stop, None, :, :]
        noise_scale = np.sqrt(0.5 / snr)
        noise = rng.standard_normal(symbols.shape) + 1j * rng.standard_normal(symbols.shape)
        received = symbols + noise_scale * noise

        llrs = mapping.llr(received, snr, mcs.modulation)
        llrs = llrs.reshape(f, n_ofdm, num_streams, num_carriers * b)
        llrs = interleave.deinterleave(llrs, mcs, num_streams, num_carriers)
        llrs = llrs.reshape(f, -1)[:, :n_punct]
        full = convcode.depuncture_llrs(llrs, mcs.code_rate, 2 * (k + convcode.TAIL_BITS))
        decoded = convcode.viterbi_decode(full, k)
        errors[start:stop] = np.any(decoded != payload, axis=1)
    return errors


def simulate_fer(
    snr_grid,
    mcs: McsEntry,
    num_streams: int,
    frame_bytes: int,
    num_frames: int,
    rng: np.random.Generator,
) -> FerMeasurement:
    """Measure the FER of ``mcs`` on a fixed (L, N) post-processing SNR grid."""
    values = _grid_values(snr_grid)
    if values.size == 0:
        raise ValueError("SNR grid is empty")
    if values.ndim == 1:
        values = values.reshape(num_streams, -1)
    if values.shape[0] != num_streams:
        raise ValueError("grid row count must equal the stream count")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValueError("SNR grid entries must be positive and finite")
    if num_frames < 1:
        raise ValueError("num_frames must be >= 1")
    grids = np.broadcast_to(values, (num_frames,) + values.shape)
    errors = _frame_errors(np.ascontiguousarray(grids), mcs, frame_bytes, rng)
    return FerMeasurement(mcs.id, num_streams, num_frames, int(errors.sum()))


def simulate_fer_grids(
    grids: np.ndarray,
    mcs: McsEntry,
    frame_bytes: int,
    frames_per_grid: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """FER for a batch of grids (G, L, N), ``frames_per_grid`` frames each.

    Amortizes the vectorized chain across grids; equivalent to calling
    simulate_fer per grid apart from the random draw order.
    """
    grids = np.asarray(grids, dtype=np.float64)
    if grids.ndim != 3 or grids.size == 0:
        raise ValueError("grids must have shape (G, L, N)")
    if np.any(grids <= 0) or not np.all(np.isfinite(grids)):
        raise ValueError("SNR grid entries must be positive and finite")
    expanded = np.repeat(grids, frames_per_grid, axis=0)
    errors = _frame_errors(expanded, mcs, frame_bytes, rng)
    return errors.reshape(grids.shape[0], frames_per_grid).mean(axis=1)


def uncoded_bpsk_ber(snr_linear: float, num_bits: int, rng: np.random.Generator) -> float:
    """Hard-decision BPSK bit error rate on an AWGN channel at the given SNR.

    Bypasses the codec entirely; the analytical reference is Q(sqrt(2 snr)).
    """
    if snr_linear <= 0:
        raise ValueError("snr must be positive")
    bits = rng.integers(0, 2, size=num_bits)
    symbols = 1.0 - 2.0 * bits
    noise = rng.standard_normal(num_bits) * np.sqrt(0.5 / snr_linear)
    decisions = (symbols + noise) < 0
    return float(np.mean(decisions != bits.astype(bool)))
