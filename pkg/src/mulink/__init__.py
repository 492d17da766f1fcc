"""Limited-feedback multiuser MIMO-OFDM link adaptation.

Subpackages cover the full transmit-side pipeline and its evaluation:
random frequency-selective channels (:mod:`mulink.channel`), the coded
link-level simulator (:mod:`mulink.phy`), Givens-angle feedback
(:mod:`mulink.feedback`), block-diagonalization precoding
(:mod:`mulink.precoding`), closed-form interference leakage under
quantized feedback (:mod:`mulink.leakage`), SNR features and MCS
classifiers (:mod:`mulink.adaptation`), greedy user and mode selection
(:mod:`mulink.scheduler`), and the experiment harness with a CLI
(:mod:`mulink.harness`).
"""

from .channel import ChannelRealization, ChannelSpec, draw_taps, realize_channels, taps_to_frequency
from .feedback import FeedbackReport, GivensAngles, QuantizerConfig, build_report
from .precoding import InfeasibleConfiguration, PrecodingSolution
from .scheduler import AdaptConfig, ScheduleDecision, exhaustive_adapt, greedy_adapt

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "ChannelRealization",
    "draw_taps",
    "taps_to_frequency",
    "realize_channels",
    "GivensAngles",
    "QuantizerConfig",
    "FeedbackReport",
    "build_report",
    "PrecodingSolution",
    "InfeasibleConfiguration",
    "AdaptConfig",
    "ScheduleDecision",
    "greedy_adapt",
    "exhaustive_adapt",
    "__version__",
]
