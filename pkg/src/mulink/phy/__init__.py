"""Coded BICM-OFDM link-level layer: MCS table, codec, mapping, FER."""

from .convcode import conv_encode, depuncture_llrs, num_coded_bits, puncture, viterbi_decode
from .fer import FerMeasurement, Frame, simulate_fer, simulate_fer_grids, uncoded_bpsk_ber
from .interleave import block_permutation, deinterleave, interleave
from .mapping import bits_per_symbol, constellation, llr, map_symbols
from .mcs import MCS_TABLE, NO_TRANSMISSION, McsEntry, mcs_by_id, mcs_rate

__all__ = [
    "MCS_TABLE",
    "NO_TRANSMISSION",
    "McsEntry",
    "mcs_by_id",
    "mcs_rate",
    "conv_encode",
    "puncture",
    "depuncture_llrs",
    "num_coded_bits",
    "viterbi_decode",
    "block_permutation",
    "interleave",
    "deinterleave",
    "constellation",
    "bits_per_symbol",
    "map_symbols",
    "llr",
    "Frame",
    "FerMeasurement",
    "simulate_fer",
    "simulate_fer_grids",
    "uncoded_bpsk_ber",
]
