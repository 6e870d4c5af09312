"""Local dephasing of one logical qubit.

The Kraus set is ``{sqrt(1-g) I, sqrt(g)|0><0|, sqrt(g)|1><1|}``: the two
projectors alone only sum to ``g I``, so the identity branch is what makes
the map trace preserving.  Coherences of the dephased qubit shrink by
``1 - g`` and populations are untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import InvalidChannel, InvalidParams
from .model import ModelParams, TwoQubitState, rho12_matrix

COMPLETENESS_TOL = 1e-12


def gamma_of_time(decay_rate: float, t: float) -> float:
    """Dephasing probability ``1 - exp(-decay_rate * t)``."""
    if decay_rate < 0 or t < 0 or not (math.isfinite(decay_rate) and math.isfinite(t)):
        raise InvalidParams(f"decay rate and time must be finite and >= 0, got {decay_rate}, {t}")
    return -math.expm1(-decay_rate * t)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise InvalidParams(f"dephasing probability must lie in [0, 1], got {gamma}")
    return gamma


@dataclass(frozen=True, eq=False)
class KrausSet:
    operators: tuple

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))

    def __iter__(self):
        return iter(self.operators)

    def __len__(self):
        return len(self.operators)


def kraus_dephasing(gamma: float) -> KrausSet:
    gamma = _check_gamma(gamma)
    keep = math.sqrt(1.0 - gamma)
    flip = math.sqrt(gamma)
    return KrausSet(
        (
            keep * linalg.I2,
            flip * np.diag([1.0, 0.0]).astype(complex),
            flip * np.diag([0.0, 1.0]).astype(complex),
        )
    )


def _lift(k: np.ndarray, target: str) -> np.ndarray:
    if target == "A":
        return linalg.kron(k, linalg.I2)
    if target == "B":
        return linalg.kron(linalg.I2, k)
    raise InvalidParams(f"target must be 'A' or 'B', got {target!r}")


def apply_local_channel(state, kraus: KrausSet | Sequence[np.ndarray], target: str = "A") -> TwoQubitState:
    """``sum_k (K_k (x) I) rho (K_k (x) I)^H`` for target ``A`` (mirror for ``B``)."""
    if not isinstance(kraus, KrausSet):
        kraus = KrausSet(tuple(np.asarray(k, dtype=complex) for k in kraus))
    if any(k.shape != (2, 2) for k in kraus):
        raise InvalidChannel("local Kraus operators must be 2x2")
    err = kraus.completeness_error()
    if err > COMPLETENESS_TOL:
        raise InvalidChannel(f"Kraus set is not trace preserving (completeness error {err:.3e})")
    rho = state.rho if isinstance(state, TwoQubitState) else np.asarray(state, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for k in kraus:
        big = _lift(k, target)
        out += big @ rho @ big.conj().T
    return TwoQubitState(out, "dephased")


# (row, col) entries of a two-qubit matrix that are coherences of qubit A
A_COHERENCES = ((0, 3), (3, 0), (1, 2), (2, 1), (0, 2), (2, 0), (1, 3), (3, 1))


def dephase_matrix(rho: np.ndarray, gamma: float) -> np.ndarray:
    """Scale every qubit-A coherence of a 4x4 matrix by ``1 - gamma``."""
    gamma = _check_gamma(gamma)
    out = np.array(rho, dtype=complex)
    for i, j in A_COHERENCES:
        out[i, j] *= 1.0 - gamma
    return out


def dephase_rho12_closed(params: ModelParams, gamma: float) -> TwoQubitState:
    """Dephased reduced state written down directly from its X-shape.

    Only the anti-diagonal entries ``eta_plus`` and ``eta_minus`` are
    A-coherences of the reduced state, so they alone pick up ``1 - gamma``.
    """
    rho, _ = rho12_matrix(params)
    return TwoQubitState(dephase_matrix(rho, gamma), "dephased")


def dephase_rho12_closed_many(params: ModelParams, gammas) -> np.ndarray:
    rho, _ = rho12_matrix(params)
    gammas = np.asarray(gammas, dtype=float)
    if not np.all((gammas >= 0) & (gammas <= 1)):
        raise InvalidParams("dephasing probabilities must lie in [0, 1]")
    mask = np.zeros((4, 4), dtype=bool)
    for i, j in A_COHERENCES:
        mask[i, j] = True
    scale = np.where(mask, (1.0 - gammas)[:, None, None], 1.0)
    return rho[None] * scale
