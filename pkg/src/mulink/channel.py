"""Random frequency-selective MIMO channel generation.

Channels are drawn in the time domain as a tapped delay line with iid
circularly-symmetric complex Gaussian entries per tap, then converted to
per-carrier frequency responses with a DFT. All randomness flows through
named substreams of a single master seed so that realizations are
reproducible and independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ChannelSpec",
    "ChannelRealization",
    "channel_rng",
    "draw_taps",
    "taps_to_frequency",
    "realize_channels",
]


def _default_tap_powers(num_taps: int) -> np.ndarray:
    return np.full(num_taps, 1.0 / num_taps)


@dataclass(frozen=True)
class ChannelSpec:
    """Static description of the multiuser downlink channel.

    tap_powers defaults to a uniform profile over ``num_taps`` taps with
    unit total power. An exponential profile and a receive-side
    correlation coefficient are accepted to approximate more structured
    indoor channels for robustness experiments.
    """

    num_tx_antennas: int
    rx_antennas_per_user: tuple[int, ...]
    num_carriers: int
    num_taps: int = 4
    tap_powers: tuple[float, ...] | None = None
    noise_variance: float = 1.0
    rx_correlation: float = 0.0  # rho in [0, 1); 0 keeps entries iid

    def __post_init__(self):
        if self.num_tx_antennas < 1:
            raise ValueError("num_tx_antennas must be positive")
        if not self.rx_antennas_per_user or any(n < 1 for n in self.rx_antennas_per_user):
            raise ValueError("each user needs at least one receive antenna")
        if self.num_taps < 1:
            raise ValueError("num_taps must be positive")
        if self.num_carriers < self.num_taps:
            raise ValueError("num_carriers must be >= num_taps")
        if self.noise_variance <= 0:
            raise ValueError("noise_variance must be positive")
        if not (0.0 <= self.rx_correlation < 1.0):
            raise ValueError("rx_correlation must be in [0, 1)")
        object.__setattr__(self, "rx_antennas_per_user", tuple(int(n) for n in self.rx_antennas_per_user))
        if self.tap_powers is None:
            object.__setattr__(self, "tap_powers", tuple(_default_tap_powers(self.num_taps)))
        else:
            powers = tuple(float(p) for p in self.tap_powers)
            if len(powers) != self.num_taps:
                raise ValueError("tap_powers length must equal num_taps")
            if any(p < 0 for p in powers) or sum(powers) <= 0:
                raise ValueError("tap powers must be nonnegative with positive sum")
            object.__setattr__(self, "tap_powers", powers)

    @property
    def num_users(self) -> int:
        return len(self.rx_antennas_per_user)

    @property
    def total_tap_power(self) -> float:
        return float(sum(self.tap_powers))

    @staticmethod
    def exponential_tap_powers(num_taps: int, decay: float, total: float = 1.0) -> tuple[float, ...]:
        """Exponentially decaying profile p_t ~ exp(-t/decay), normalized to ``total``."""
        if decay <= 0:
            raise ValueError("decay must be positive")
        raw = np.exp(-np.arange(num_taps) / decay)
        return tuple(total * raw / raw.sum())


@dataclass(frozen=True)
class ChannelRealization:
    """Per-carrier responses for every user: freq[u] has shape (N, N_rx_u, N_tx)."""

    spec: ChannelSpec
    freq: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.freq) != self.spec.num_users:
            raise ValueError("one response array per user expected")
        for u, h in enumerate(self.freq):
            expected = (self.spec.num_carriers, self.spec.rx_antennas_per_user[u], self.spec.num_tx_antennas)
            if h.shape != expected:
                raise ValueError(f"user {u}: expected shape {expected}, got {h.shape}")

    def user(self, u: int) -> np.ndarray:
        return self.freq[u]


def channel_rng(master_seed: int, *stream: int) -> np.random.Generator:
    """Generator for the named substream (master, *stream ids).

    Substreams are derived through SeedSequence composition, so results do
    not depend on the order in which streams are consumed.
    """
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, stream)]))


def draw_taps(spec: ChannelSpec, user: int, rng: np.random.Generator) -> np.ndarray:
    """Draw the tapped-delay-line realization for one user.

    Returns an array of shape (num_taps, N_rx_u, N_tx); tap t has iid
    CN(0, tap_powers[t]) entries. With rx_correlation > 0 the rows are
    colored by R^{1/2} with R_ij = rho^|i-j| (tap powers preserved).
    """
    n_rx = spec.rx_antennas_per_user[user]
    n_tx = spec.num_tx_antennas
    shape = (spec.num_taps, n_rx, n_tx)
    taps = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    taps *= np.sqrt(np.asarray(spec.tap_powers))[:, None, None]
    if spec.rx_correlation > 0.0 and n_rx > 1:
        rho = spec.rx_correlation
        corr = rho ** np.abs(np.subtract.outer(np.arange(n_rx), np.arange(n_rx)))
        w, q = np.linalg.eigh(corr)
        sqrt_corr = (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T
        taps = np.einsum("ij,tjk->tik", sqrt_corr, taps)
    return taps


def taps_to_frequency(taps: np.ndarray, num_carriers: int) -> np.ndarray:
    """DFT of the tap sequence: H[n] = sum_t taps[t] exp(-j 2 pi n t / N).

    Returns shape (num_carriers, N_rx, N_tx).
    """
    taps = np.asarray(taps)
    if taps.ndim != 3:
        raise ValueError("taps must have shape (num_taps, N_rx, N_tx)")
    if taps.shape[0] > num_carriers:
        raise ValueError("num_taps must not exceed num_carriers")
    padded = np.zeros((num_carriers,) + taps.shape[1:], dtype=np.complex128)
    padded[: taps.shape[0]] = taps
    return np.fft.fft(padded, axis=0)


def realize_channels(spec: ChannelSpec, master_seed: int, trial: int) -> ChannelRealization:
    """All users' per-carrier responses for one trial, from named substreams."""
    freq = []
    for u in range(spec.num_users):
        rng = channel_rng(master_seed, trial, u)
        freq.append(taps_to_frequency(draw_taps(spec, u, rng), spec.num_carriers))
    return ChannelRealization(spec=spec, freq=tuple(freq))
