"""Gray-mapped unit-energy constellations and max-log soft demapping.

Bit convention: BPSK maps bit 0 to +1 and bit 1 to -1. Square QAM splits
each symbol word into I bits then Q bits; each half is Gray-decoded to a
PAM level, with the all-zeros word on the most positive level so QPSK is
consistent with BPSK per axis.
"""

from __future__ import annotations

import numpy as np

__all__ = ["constellation", "bits_per_symbol", "map_symbols", "llr"]

_CACHE: dict[str, tuple[np.ndarray, int]] = {}

_ORDERS = {"bpsk": 2, "qpsk": 4, "16qam": 16, "64qam": 64, "256qam": 256}


def _gray_to_binary(w: np.ndarray) -> np.ndarray:
    # prefix-XOR inverse of the reflected Gray code (widths up to 8 bits)
    out = w ^ (w >> 1)
    out ^= out >> 2
    out ^= out >> 4
    return out


def constellation(modulation: str) -> np.ndarray:
    """Unit-average-energy points indexed by the symbol bit word (MSB first)."""
    if modulation in _CACHE:
        return _CACHE[modulation][0]
    if modulation not in _ORDERS:
        raise ValueError(f"unsupported modulation {modulation!r}")
    order = _ORDERS[modulation]
    b = int(np.log2(order))
    words = np.arange(order)
    if modulation == "bpsk":
        points = np.where(words == 0, 1.0, -1.0).astype(np.complex128)
    else:
        half = b // 2
        i_word = words >> half
        q_word = words & ((1 << half) - 1)
        m = 1 << half
        i_amp = (m - 1) - 2 * _gray_to_binary(i_word)
        q_amp = (m - 1) - 2 * _gray_to_binary(q_word)
        points = i_amp + 1j * q_amp
        points = points / np.sqrt(np.mean(np.abs(points) ** 2))
    _CACHE[modulation] = (points, b)
    return points


def bits_per_symbol(modulation: str) -> int:
    constellation(modulation)
    return _CACHE[modulation][1]


def map_symbols(bits: np.ndarray, modulation: str) -> np.ndarray:
    """Map a (..., n*b) bit array to (..., n) complex symbols."""
    points = constellation(modulation)
    b = bits_per_symbol(modulation)
    bits = np.asarray(bits)
    if bits.shape[-1] % b != 0:
        raise ValueError("bit count must be divisible by bits per symbol")
    groups = bits.reshape(bits.shape[:-1] + (-1, b))
    weights = 1 << np.arange(b - 1, -1, -1)
    words = (groups * weights).sum(axis=-1)
    return points[words]


def _axis_levels(modulation: str) -> np.ndarray:
    """Per-axis PAM amplitudes indexed by the axis bit word, including the
    unit-energy normalization of the full constellation."""
    b = bits_per_symbol(modulation)
    half = b // 2
    m = 1 << half
    words = np.arange(m)
    amps = ((m - 1) - 2 * _gray_to_binary(words)).astype(np.float64)
    # unit mean symbol energy over the 2-D grid: E = 2 * mean(amp^2) per axis
    return amps / np.sqrt(2 * np.mean(amps**2))


def llr(received: np.ndarray, snr: np.ndarray, modulation: str) -> np.ndarray:
    """Max-log LLRs scaled by the per-position SNR.

    received and snr broadcast together with shape (..., n); the result has
    shape (..., n, b). Positive LLR means coded bit 0 is more likely, for
    the noise model y = x + CN(0, 1/snr). Square constellations demap per
    axis, which is exact under max-log because I and Q bits are independent.
    """
    b = bits_per_symbol(modulation)
    received = np.asarray(received)
    snr = np.broadcast_to(np.asarray(snr, dtype=np.float64), received.shape)
    out = np.empty(received.shape + (b,))
    if modulation == "bpsk":
        points = constellation(modulation)
        d2 = np.abs(received[..., None] - points) ** 2
        out[..., 0] = snr * (d2[..., 1] - d2[..., 0])
        return out
    half = b // 2
    levels = _axis_levels(modulation)
    words = np.arange(levels.size)
    for axis, comp in enumerate((received.real, received.imag)):
        d2 = (comp[..., None] - levels) ** 2
        for k in range(half):
            bit = (words >> (half - 1 - k)) & 1
            min0 = d2[..., bit == 0].min(axis=-1)
            min1 = d2[..., bit == 1].min(axis=-1)
            out[..., axis * half + k] = snr * (min1 - min0)
    return out
