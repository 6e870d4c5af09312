"""Quantum Fisher information, LQFI and LQU of coherent-state probes as logical qubits."""

from .channel import apply_local_channel, dephase_rho12_closed, gamma_of_time, kraus_dephasing
from .errors import GlauberCorrError
from .measures import crb, lqfi, lqfi_bruteforce, lqu, lqu_bruteforce, qfi, qfi_via_sld
from .model import ModelParams, TwoQubitState, pure_split_state, rho12, rho12_via_partial_trace

__version__ = "0.1.0"

__all__ = [
    "GlauberCorrError",
    "ModelParams",
    "TwoQubitState",
    "apply_local_channel",
    "crb",
    "dephase_rho12_closed",
    "gamma_of_time",
    "kraus_dephasing",
    "lqfi",
    "lqfi_bruteforce",
    "lqu",
    "lqu_bruteforce",
    "pure_split_state",
    "qfi",
    "qfi_via_sld",
    "rho12",
    "rho12_via_partial_trace",
]
