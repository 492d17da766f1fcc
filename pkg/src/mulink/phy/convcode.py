"""Rate-1/2 convolutional codec (K=7, generators 133/171 octal) with
802.11-style puncturing to 2/3, 3/4 and 5/6, and a soft-decision Viterbi
decoder vectorized over a batch of frames.

Bit/state packing: the shift register state holds the previous six input
bits with the most recent in bit 5. The 7-bit word w = (input << 6) | state
then has bit k equal to the input delayed by 6-k steps, so the generator
masks are exactly the octal constants 133 and 171.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TAIL_BITS",
    "PUNCTURE_PATTERNS",
    "conv_encode",
    "puncture_mask",
    "puncture",
    "depuncture_llrs",
    "num_coded_bits",
    "viterbi_decode",
]

TAIL_BITS = 6
_G0 = 0o133
_G1 = 0o171
_NUM_STATES = 64

# Kept-bit patterns over (c0, c1) pairs per period, as in 802.11.
PUNCTURE_PATTERNS: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]] = {
    (1, 2): ((1,), (1,)),
    (2, 3): ((1, 1), (1, 0)),
    (3, 4): ((1, 1, 0), (1, 0, 1)),
    (5, 6): ((1, 1, 0, 1, 0), (1, 0, 1, 0, 1)),
}


def _parity_table(mask: int) -> np.ndarray:
    vals = np.arange(128, dtype=np.uint8)
    out = np.zeros(128, dtype=np.uint8)
    for bit in range(7):
        out ^= ((vals & mask) >> bit) & 1
    return out


_OUT0 = _parity_table(_G0)
_OUT1 = _parity_table(_G1)


def _build_trellis() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Predecessor tables: for each next state, the two (prev_state, pattern).

    pattern packs the branch output bits as (c0 << 1) | c1. The input bit
    on every branch into state ns equals ns >> 5.
    """
    prev = np.zeros((_NUM_STATES, 2), dtype=np.int64)
    pat = np.zeros((_NUM_STATES, 2), dtype=np.int64)
    for ns in range(_NUM_STATES):
        b = ns >> 5
        base = (ns & 0x1F) << 1
        for k, s in enumerate((base, base + 1)):
            w = (b << 6) | s
            prev[ns, k] = s
            pat[ns, k] = (int(_OUT0[w]) << 1) | int(_OUT1[w])
    return prev, pat, np.arange(_NUM_STATES) >> 5


_PREV, _PAT, _INPUT_OF_STATE = _build_trellis()


def conv_encode(payload: np.ndarray) -> np.ndarray:
    """Encode payload bits (..., k) into rate-1/2 coded bits (..., 2(k+6)).

    Six zero tail bits are appended so the trellis terminates in state 0.
    """
    payload = np.atleast_2d(np.asarray(payload, dtype=np.uint8))
    frames, k = payload.shape
    bits = np.zeros((frames, k + TAIL_BITS), dtype=np.uint8)
    bits[:, :k] = payload
    # w[:, t] emulates the 7-bit window [b_t, b_{t-1}, ..., b_{t-6}].
    padded = np.zeros((frames, k + TAIL_BITS + 6), dtype=np.uint8)
    padded[:, 6:] = bits
    c0 = np.zeros((frames, k + TAIL_BITS), dtype=np.uint8)
    c1 = np.zeros_like(c0)
    for delay in range(7):
        tap = padded[:, 6 - delay : 6 - delay + k + TAIL_BITS]
        if (_G0 >> (6 - delay)) & 1:
            c0 ^= tap
        if (_G1 >> (6 - delay)) & 1:
            c1 ^= tap
    coded = np.empty((frames, 2 * (k + TAIL_BITS)), dtype=np.uint8)
    coded[:, 0::2] = c0
    coded[:, 1::2] = c1
    return coded


def puncture_mask(code_rate: tuple[int, int], coded_len: int) -> np.ndarray:
    """Boolean keep-mask of length coded_len for the given output rate.

    The per-period pattern is applied cyclically, so any coded length is
    supported; the receiver reinserts zeros at the dropped positions.
    """
    if code_rate not in PUNCTURE_PATTERNS:
        raise ValueError(f"unsupported code rate {code_rate}")
    p0, p1 = PUNCTURE_PATTERNS[code_rate]
    period = len(p0)
    pair = np.empty(2 * period, dtype=bool)
    pair[0::2] = np.asarray(p0, dtype=bool)
    pair[1::2] = np.asarray(p1, dtype=bool)
    reps = -(-coded_len // (2 * period))
    return np.tile(pair, reps)[:coded_len]


def puncture(coded: np.ndarray, code_rate: tuple[int, int]) -> np.ndarray:
    coded = np.atleast_2d(coded)
    return coded[:, puncture_mask(code_rate, coded.shape[1])]


def depuncture_llrs(llrs: np.ndarray, code_rate: tuple[int, int], coded_len: int) -> np.ndarray:
    """Insert zero LLRs at punctured positions to restore rate-1/2 length."""
    llrs = np.atleast_2d(llrs)
    mask = puncture_mask(code_rate, coded_len)
    if llrs.shape[1] != int(mask.sum()):
        raise ValueError("LLR count does not match the punctured codeword length")
    full = np.zeros((llrs.shape[0], coded_len), dtype=llrs.dtype)
    full[:, mask] = llrs
    return full


def num_coded_bits(payload_bits: int, code_rate: tuple[int, int]) -> int:
    """Transmitted bit count for a payload of ``payload_bits`` (tail included)."""
    return int(puncture_mask(code_rate, 2 * (payload_bits + TAIL_BITS)).sum())


def viterbi_decode(llrs: np.ndarray, payload_bits: int) -> np.ndarray:
    """Soft-decision ML decoding over the 64-state trellis.

    llrs has shape (frames, 2(payload_bits+6)) with the convention
    llr > 0 meaning coded bit 0 is more likely (punctured positions 0).
    The path is forced to terminate in state 0; tail bits are stripped.
    """
    llrs = np.atleast_2d(np.asarray(llrs, dtype=np.float64))
    frames, n = llrs.shape
    steps = payload_bits + TAIL_BITS
    if n != 2 * steps:
        raise ValueError(f"expected {2 * steps} LLRs per frame, got {n}")

    metrics = np.full((frames, _NUM_STATES), -1e18)
    metrics[:, 0] = 0.0
    choices = np.empty((steps, frames, _NUM_STATES), dtype=bool)
    prev0, prev1 = _PREV[:, 0], _PREV[:, 1]
    pat0, pat1 = _PAT[:, 0], _PAT[:, 1]
    for t in range(steps):
        l0 = llrs[:, 2 * t]
        l1 = llrs[:, 2 * t + 1]
        # Branch metric by output pattern p=(c0<<1)|c1: +llr for bit 0, -llr for bit 1.
        bm = np.empty((frames, 4))
        bm[:, 0] = l0 + l1
        bm[:, 1] = l0 - l1
        bm[:, 2] = -l0 + l1
        bm[:, 3] = -l0 - l1
        cand0 = metrics[:, prev0] + bm[:, pat0]
        cand1 = metrics[:, prev1] + bm[:, pat1]
        take1 = cand1 > cand0
        metrics = np.where(take1, cand1, cand0)
        choices[t] = take1

    state = np.zeros(frames, dtype=np.int64)  # tail-terminated
    decoded = np.empty((frames, steps), dtype=np.uint8)
    rows = np.arange(frames)
    for t in range(steps - 1, -1, -1):
        decoded[:, t] = _INPUT_OF_STATE[state]
        branch = choices[t][rows, state].astype(np.int64)
        state = _PREV[state, branch]
    return decoded[:, :payload_bits]
