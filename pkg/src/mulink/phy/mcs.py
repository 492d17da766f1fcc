"""Modulation and coding scheme table (20 MHz single-stream base rates)."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["McsEntry", "MCS_TABLE", "NO_TRANSMISSION", "mcs_by_id", "mcs_rate"]


@dataclass(frozen=True)
class McsEntry:
    id: int
    name: str
    modulation: str  # one of bpsk, qpsk, 16qam, 64qam, 256qam
    bits_per_symbol: int
    code_rate: tuple[int, int]  # (numerator, denominator)
    base_rate_mbps: float


MCS_TABLE: tuple[McsEntry, ...] = (
    McsEntry(0, "BPSK 1/2", "bpsk", 1, (1, 2), 6.5),
    McsEntry(1, "QPSK 1/2", "qpsk", 2, (1, 2), 13.0),
    McsEntry(2, "QPSK 3/4", "qpsk", 2, (3, 4), 19.5),
    McsEntry(3, "16-QAM 1/2", "16qam", 4, (1, 2), 26.0),
    McsEntry(4, "16-QAM 3/4", "16qam", 4, (3, 4), 39.0),
    McsEntry(5, "64-QAM 2/3", "64qam", 6, (2, 3), 52.0),
    McsEntry(6, "64-QAM 3/4", "64qam", 6, (3, 4), 58.5),
    McsEntry(7, "64-QAM 5/6", "64qam", 6, (5, 6), 65.0),
    McsEntry(8, "256-QAM 3/4", "256qam", 8, (3, 4), 78.0),
)

# Distinguished zero-rate outcome when no MCS meets the error-rate target.
NO_TRANSMISSION = McsEntry(-1, "No Transmission", "none", 0, (0, 1), 0.0)

_BY_ID = {m.id: m for m in MCS_TABLE + (NO_TRANSMISSION,)}


def mcs_by_id(mcs_id: int) -> McsEntry:
    try:
        return _BY_ID[mcs_id]
    except KeyError:
        raise KeyError(f"unknown MCS id {mcs_id}") from None


def mcs_rate(mcs: McsEntry | int, num_streams: int) -> float:
    """Rate in Mb/s for ``num_streams`` spatial streams of the given MCS."""
    if isinstance(mcs, int):
        mcs = mcs_by_id(mcs)
    if num_streams < 1:
        raise ValueError("num_streams must be >= 1")
    return num_streams * mcs.base_rate_mbps
