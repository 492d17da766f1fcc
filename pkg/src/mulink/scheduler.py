"""Greedy user and spatial-mode selection with an exhaustive oracle.

Streams are added one at a time to the user whose increment yields the
best utility, evaluated through the full transmitter-side pipeline:
rebuild BD precoders from the feedback reports, estimate the residual
interference, compute predicted SNR grids, and pick each scheduled user's
MCS. The candidate utility uses the rate proxy eta(c, L); measured FER
enters only through the classifier's accept/reject. An increment is
committed when its utility is no worse than the incumbent, matching the
non-strict acceptance of the reference procedure (a strict mode exists
behind a flag).

The exhaustive search enumerates every feasible allocation through the
identical evaluation path, so greedy utility can never exceed it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .adaptation.classifiers import ClassifierBank, select_mcs
from .adaptation.snr import post_snr
from .feedback import FeedbackReport
from .leakage import LeakageModel, leakage_covariance
from .phy.mcs import NO_TRANSMISSION, McsEntry, mcs_rate
from .precoding import (
    InfeasibleConfiguration,
    PrecodingSolution,
    bd_precoders,
    effective_inverse,
    power_normalization,
    rejection_matrix,
    zf_equalizer,
)

__all__ = [
    "AdaptConfig",
    "CandidateEval",
    "ScheduleDecision",
    "utility_sum",
    "utility_log",
    "evaluate_allocation",
    "greedy_adapt",
    "exhaustive_adapt",
]

_RANK_TOL = 1e-12
NEG_INF = float("-inf")


@dataclass(frozen=True)
class AdaptConfig:
    interference_estimation: bool = True
    strict_improvement: bool = False
    utility: str = "sum"  # "sum" or "log"


def utility_sum(rates) -> float:
    rates = np.asarray(rates, dtype=np.float64)
    if np.any(rates < 0):
        raise ValueError("rates must be nonnegative")
    return float(rates.sum())


def utility_log(rates, stream_counts) -> float:
    """Sum of log rates over scheduled users; a scheduled user at zero rate
    yields the negative-infinity sentinel (configuration rejected)."""
    total = 0.0
    for rate, streams in zip(rates, stream_counts):
        if streams <= 0:
            continue
        if rate <= 0:
            return NEG_INF
        total += float(np.log(rate))
    return total


def _utility(cfg: AdaptConfig, rates, stream_counts) -> float:
    if cfg.utility == "sum":
        return utility_sum(rates)
    if cfg.utility == "log":
        return utility_log(rates, stream_counts)
    raise ValueError(f"unknown utility {cfg.utility!r}")


@dataclass
class CandidateEval:
    stream_counts: tuple[int, ...]
    utility: float
    mcs: tuple[McsEntry, ...]
    rates: tuple[float, ...]
    grids: dict[int, np.ndarray] = field(repr=False)
    precoders: list[list[np.ndarray]] = field(repr=False)  # [carrier][active slot]
    tx_equalizers: list[list[np.ndarray]] = field(repr=False)
    power: np.ndarray = field(repr=False)

    @property
    def active_users(self) -> tuple[int, ...]:
        return tuple(u for u, streams in enumerate(self.stream_counts) if streams > 0)


@dataclass
class ScheduleDecision:
    stream_counts: tuple[int, ...]
    mcs: tuple[McsEntry, ...]
    rates: tuple[float, ...]
    utility: float
    trajectory: tuple[float, ...]
    grids: dict[int, np.ndarray] = field(repr=False)
    solution: PrecodingSolution | None = field(repr=False, default=None)

    @property
    def active_users(self) -> tuple[int, ...]:
        return tuple(u for u, streams in enumerate(self.stream_counts) if streams > 0)

    def transmitting_users(self) -> tuple[int, ...]:
        return tuple(
            u
            for u, streams in enumerate(self.stream_counts)
            if streams > 0 and self.mcs[u].id != NO_TRANSMISSION.id
        )


def _empty_candidate(num_users: int, num_carriers: int) -> CandidateEval:
    return CandidateEval(
        stream_counts=(0,) * num_users,
        utility=0.0,
        mcs=(NO_TRANSMISSION,) * num_users,
        rates=(0.0,) * num_users,
        grids={},
        precoders=[[] for _ in range(num_carriers)],
        tx_equalizers=[[] for _ in range(num_carriers)],
        power=np.zeros(num_carriers),
    )


def evaluate_allocation(
    reports: list[FeedbackReport],
    stream_counts,
    noise_variance: float,
    bank: ClassifierBank,
    cfg: AdaptConfig,
    leakage_models: dict[int, LeakageModel] | None = None,
) -> CandidateEval | None:
    """Transmitter-side scoring of one stream allocation.

    Returns None when the allocation is infeasible on this channel (rank
    deficient carriers, empty nullspace, or singular effective channels).
    """
    stream_counts = tuple(int(s) for s in stream_counts)
    num_users = len(reports)
    num_carriers = reports[0].num_carriers
    active = [u for u, streams in enumerate(stream_counts) if streams > 0]
    if not active:
        return _empty_candidate(num_users, num_carriers)
    for u in active:
        if stream_counts[u] > reports[u].num_streams:
            return None
        if np.any(reports[u].singular_values[:, : stream_counts[u]].min(axis=1) < _RANK_TOL):
            return None

    if leakage_models is None:
        leakage_models = {}
    estimate = cfg.interference_estimation and any(reports[u].quantized for u in active)
    if estimate:
        for u in active:
            leakage_models.setdefault(u, LeakageModel(reports[u]))

    precoders_per_carrier: list[list[np.ndarray]] = []
    equalizers_per_carrier: list[list[np.ndarray]] = []
    interference: dict[int, list[np.ndarray]] = {u: [] for u in active}
    power = np.empty(num_carriers)
    try:
        for n in range(num_carriers):
            beams = [reports[u].beamformer(n, stream_counts[u]) for u in active]
            svs = [reports[u].singular_values[n, : stream_counts[u]] for u in active]
            precoders = bd_precoders(beams, svs, [stream_counts[u] for u in active])
            p = power_normalization(precoders)
            equalizers = [
                effective_inverse(np.diag(sv) @ v.conj().T @ f)
                for v, sv, f in zip(beams, svs, precoders)
            ]
            if estimate:
                for slot, u in enumerate(active):
                    total = np.zeros((stream_counts[u], stream_counts[u]), dtype=np.complex128)
                    model = leakage_models[u]
                    for other_slot, j in enumerate(active):
                        if j == u:
                            continue
                        outer = model.expected_outer(n, stream_counts[u], precoders[other_slot])
                        total += leakage_covariance(outer, svs[slot], equalizers[slot], p)
                    interference[u].append(total)
            precoders_per_carrier.append(precoders)
            equalizers_per_carrier.append(equalizers)
            power[n] = p
    except InfeasibleConfiguration:
        return None

    grids: dict[int, np.ndarray] = {}
    mcs: list[McsEntry] = [NO_TRANSMISSION] * num_users
    rates = [0.0] * num_users
    for slot, u in enumerate(active):
        per_user_eq = [equalizers_per_carrier[n][slot] for n in range(num_carriers)]
        grids[u] = post_snr(
            per_user_eq,
            power,
            noise_variance,
            interference[u] if estimate else None,
        )
        mcs[u] = select_mcs(grids[u], stream_counts[u], bank)
        rates[u] = mcs_rate(mcs[u], stream_counts[u])
    utility = _utility(cfg, rates, stream_counts)
    return CandidateEval(
        stream_counts=stream_counts,
        utility=utility,
        mcs=tuple(mcs),
        rates=tuple(rates),
        grids=grids,
        precoders=precoders_per_carrier,
        tx_equalizers=equalizers_per_carrier,
        power=power,
    )


def _finalize(
    candidate: CandidateEval,
    channels: list[np.ndarray] | None,
    trajectory: list[float],
) -> ScheduleDecision:
    solution = None
    if channels is not None and candidate.active_users:
        active = candidate.active_users
        rejections: list[list[np.ndarray]] = []
        equalizers: list[list[np.ndarray]] = []
        for n in range(len(candidate.precoders)):
            b_row = []
            g_row = []
            for slot, u in enumerate(active):
                b = rejection_matrix(channels[u][n], candidate.stream_counts[u])
                g = zf_equalizer(b, channels[u][n], candidate.precoders[n][slot])
                b_row.append(b)
                g_row.append(g)
            rejections.append(b_row)
            equalizers.append(g_row)
        solution = PrecodingSolution(
            users=active,
            stream_counts=tuple(candidate.stream_counts[u] for u in active),
            precoders=candidate.precoders,
            rejections=rejections,
            equalizers=equalizers,
            power=candidate.power,
        )
    return ScheduleDecision(
        stream_counts=candidate.stream_counts,
        mcs=candidate.mcs,
        rates=candidate.rates,
        utility=candidate.utility,
        trajectory=tuple(trajectory),
        grids=candidate.grids,
        solution=solution,
    )


def greedy_adapt(
    reports: list[FeedbackReport],
    channels: list[np.ndarray] | None,
    noise_variance: float,
    bank: ClassifierBank,
    cfg: AdaptConfig = AdaptConfig(),
) -> ScheduleDecision:
    """One stream per iteration to the utility-maximizing user.

    Stops when all transmit antennas are used, no user can take another
    stream, or the best increment would lower (strict mode: not raise) the
    incumbent utility. Ties go to the lowest user index.
    """
    if not reports:
        raise ValueError("at least one user report required")
    num_users = len(reports)
    n_tx = reports[0].n_tx
    caps = [r.num_streams for r in reports]
    leakage_models: dict[int, LeakageModel] = {}

    incumbent = _empty_candidate(num_users, reports[0].num_carriers)
    trajectory = [incumbent.utility]
    while sum(incumbent.stream_counts) < n_tx:
        best_candidate = None
        best_utility = NEG_INF
        for u in range(num_users):
            if incumbent.stream_counts[u] >= caps[u]:
                continue
            trial = list(incumbent.stream_counts)
            trial[u] += 1
            cand = evaluate_allocation(reports, trial, noise_variance, bank, cfg, leakage_models)
            if cand is None:
                continue
            if cand.utility > best_utility:
                best_utility = cand.utility
                best_candidate = cand
        if best_candidate is None:
            break
        accept = (
            best_candidate.utility > incumbent.utility
            if cfg.strict_improvement
            else best_candidate.utility >= incumbent.utility
        )
        if not accept:
            break
        incumbent = best_candidate
        trajectory.append(incumbent.utility)
    return _finalize(incumbent, channels, trajectory)


def exhaustive_adapt(
    reports: list[FeedbackReport],
    channels: list[np.ndarray] | None,
    noise_variance: float,
    bank: ClassifierBank,
    cfg: AdaptConfig = AdaptConfig(),
    limit: int = 100_000,
) -> ScheduleDecision:
    """Enumerate every feasible allocation; ties keep the lexicographically
    smallest one. Guarded by ``limit`` on the enumeration size."""
    if not reports:
        raise ValueError("at least one user report required")
    caps = [r.num_streams for r in reports]
    total = int(np.prod([c + 1 for c in caps]))
    if total > limit:
        raise ValueError(f"enumeration of {total} allocations exceeds limit {limit}")
    n_tx = reports[0].n_tx
    leakage_models: dict[int, LeakageModel] = {}
    best = None
    for allocation in itertools.product(*(range(c + 1) for c in caps)):
        if sum(allocation) > n_tx:
            continue
        cand = evaluate_allocation(reports, allocation, noise_variance, bank, cfg, leakage_models)
        if cand is None:
            continue
        if best is None or cand.utility > best.utility:
            best = cand
    return _finalize(best, channels, [best.utility])
