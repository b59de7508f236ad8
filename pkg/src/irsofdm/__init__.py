"""Joint transmit power allocation and passive reflect-array optimization
for an IRS-assisted single-user OFDM downlink."""

from .model import (SystemConfig, ChannelRealization, IrsCoefficients,
                    PowerAllocation, EffectiveChannel, build_v_matrix,
                    compose_cir, cfr, effective_channel, cnr,
                    achievable_rate, objective_p1)
from .wf import WaterfillResult, waterfill
from .sca import ScaResult, linearize, solve_p12, run_sca
from .sdr_init import (QcqpData, SdrSolution, build_qcqp, solve_sdr,
                       extract_phi, channel_power, initial_coefficients)
from .altopt import AltOptResult, alternate, run_scheme, SCHEMES
from .harness import (ChannelGenSpec, ExperimentSpec, ExperimentResult,
                      generate_channel, noise_variance, run_experiment)

__all__ = [
    "SystemConfig", "ChannelRealization", "IrsCoefficients",
    "PowerAllocation", "EffectiveChannel", "build_v_matrix", "compose_cir",
    "cfr", "effective_channel", "cnr", "achievable_rate", "objective_p1",
    "WaterfillResult", "waterfill",
    "ScaResult", "linearize", "solve_p12", "run_sca",
    "QcqpData", "SdrSolution", "build_qcqp", "solve_sdr", "extract_phi",
    "channel_power", "initial_coefficients",
    "AltOptResult", "alternate", "run_scheme", "SCHEMES",
    "ChannelGenSpec", "ExperimentSpec", "ExperimentResult",
    "generate_channel", "noise_variance", "run_experiment",
]

__version__ = "0.1.0"
