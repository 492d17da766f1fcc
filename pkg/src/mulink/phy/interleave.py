"""Row-column block interleaver applied per OFDM symbol and stream.

The permutation writes a block column-by-column into a 16-row grid and
reads it row-by-row. Blocks whose size is not a multiple of 16 use the
pruned form of the same grid (pad, permute, delete), which keeps the map
a bijection for any block size, e.g. the 104-bit QPSK blocks of a 52
carrier symbol.
"""

from __future__ import annotations

import numpy as np

__all__ = ["NUM_ROWS", "block_permutation", "interleave", "deinterleave"]

NUM_ROWS = 16


def block_permutation(block_size: int, num_rows: int = NUM_ROWS) -> np.ndarray:
    """perm such that interleaved[j] = block[perm[j]]."""
    if block_size < 1:
        raise ValueError("block_size must be positive")
    k = np.arange(block_size)
    rows = k % num_rows
    cols = k // num_rows
    order = np.lexsort((cols, rows))  # read row-major
    return order


def _inverse(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return inv


def _block_size(mcs, num_carriers: int) -> int:
    return num_carriers * mcs.bits_per_symbol


def interleave(bits: np.ndarray, mcs, num_streams: int, num_carriers: int) -> np.ndarray:
    """Interleave a (..., total) bit array; the last axis must tile whole
    per-stream OFDM-symbol blocks of num_carriers * bits_per_symbol bits."""
    bits = np.asarray(bits)
    block = _block_size(mcs, num_carriers)
    if bits.shape[-1] % block != 0:
        raise ValueError("bit count does not tile whole per-stream OFDM-symbol blocks")
    perm = block_permutation(block)
    shaped = bits.reshape(bits.shape[:-1] + (-1, block))
    return shaped[..., perm].reshape(bits.shape)


def deinterleave(bits: np.ndarray, mcs, num_streams: int, num_carriers: int) -> np.ndarray:
    bits = np.asarray(bits)
    block = _block_size(mcs, num_carriers)
    if bits.shape[-1] % block != 0:
        raise ValueError("bit count does not tile whole per-stream OFDM-symbol blocks")
    inv = _inverse(block_permutation(block))
    shaped = bits.reshape(bits.shape[:-1] + (-1, block))
    return shaped[..., inv].reshape(bits.shape)
