"""Multipartite Glauber coherent-state probes as logical qubits.

The n-mode state ``N(|a,...,a> + e^{i m pi}|-a,...,-a>)`` is mapped
mode-by-mode onto the even/odd cat basis, where ``|+-alpha> = a|0> +- b|1>``
with ``a = sqrt((1+p)/2)`` and ``b = sqrt((1-p)/2)``.  Everything here is
a function of the overlap ``p = exp(-2|alpha|^2)``, the mode count ``n``
and the parity ``m``.

Expressions of the form ``1 - p**k`` lose every significant digit as
``p -> 1``; they are evaluated through ``expm1`` so that the odd family
(m = 1) stays accurate right up to the degeneracy switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .errors import DegenerateNormalization, InvalidParams, UnsupportedSize

DEGENERACY_TOL = 1e-9
NORMALIZATION_TOL = 1e-15
MAX_ORACLE_MODES = 14
PROVENANCES = ("exact", "limit", "traced", "dephased")


def parity_sign(m: int) -> int:
    """``cos(m pi)`` for integer m."""
    return -1 if m % 2 else 1


def one_minus_pow(p: float, k: int) -> float:
    """``1 - p**k`` without cancellation near p = 1."""
    if k == 0:
        return 0.0
    if p == 0.0:
        return 1.0
    return -math.expm1(k * math.log(p))


def one_plus_signed_pow(p: float, k: int, sign: int) -> float:
    """``1 + sign * p**k`` for sign in {+1, -1}."""
    if sign > 0:
        return 1.0 + p**k
    return one_minus_pow(p, k)


def overlap_from_alpha(alpha: complex) -> float:
    return math.exp(-2.0 * abs(alpha) ** 2)


@dataclass(frozen=True)
class ModelParams:
    """One member of the coherent-state family.

    ``alpha`` is informational when given; construct through
    :meth:`from_alpha` to derive ``p`` from it.
    """

    p: float
    n: int
    m: int
    alpha: Optional[complex] = None

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or not 0.0 <= p <= 1.0:
            raise InvalidParams(f"overlap p must lie in [0, 1], got {self.p}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParams(f"mode count n must be an integer >= 2, got {self.n}")
        if self.m not in (0, 1):
            raise InvalidParams(f"parity m must be 0 or 1, got {self.m}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))

    @classmethod
    def from_alpha(cls, alpha: complex, n: int, m: int) -> "ModelParams":
        return cls(overlap_from_alpha(alpha), n, m, alpha=alpha)

    @property
    def sign(self) -> int:
        return parity_sign(self.m)

    @property
    def q(self) -> float:
        return self.p ** (self.n - 2)

    @property
    def degenerate(self) -> bool:
        """True where the printed entries of the reduced state become 0/0."""
        return abs(one_plus_signed_pow(self.p, self.n, self.sign)) < DEGENERACY_TOL


@dataclass(frozen=True)
class PureSplitState:
    """The pure state across a k | n-k split, in the logical two-qubit basis."""

    k: int
    c00: complex
    c01: complex
    c10: complex
    c11: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c00, self.c01, self.c10, self.c11], dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def density_matrix(self) -> "TwoQubitState":
        v = self.vector
        return TwoQubitState(np.outer(v, v.conj()), "exact")


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix in the basis |00>, |01>, |10>, |11>.

    ``provenance`` records how the matrix was obtained: ``exact`` closed
    form, analytic ``limit``, ``traced`` from the full state, or
    ``dephased`` by the channel.
    """

    rho: np.ndarray
    provenance: str = "exact"

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise InvalidParams(f"two-qubit state needs a 4x4 matrix, got {rho.shape}")
        if self.provenance not in PROVENANCES:
            raise InvalidParams(f"unknown provenance {self.provenance!r}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def invariant_errors(self) -> dict:
        """Deviations from unit trace, Hermiticity and positivity."""
        vals = linalg.eigh(self.rho, check=False).eigenvalues
        return {
            "trace": abs(complex(np.trace(self.rho)) - 1.0),
            "hermitian": linalg.hermiticity_error(self.rho),
            "min_eigenvalue": float(vals[0]),
        }

    def is_valid(self, tol: float = 1e-12, psd_tol: float = 1e-10) -> bool:
        err = self.invariant_errors()
        return err["trace"] < tol and err["hermitian"] < tol and err["min_eigenvalue"] >= -psd_tol


def normalization(params: ModelParams) -> float:
    """``N = (2 + 2 p^n cos(m pi))^(-1/2)``."""
    s = params.sign
    base = one_plus_signed_pow(params.p, params.n, s)
    if s < 0 and base < NORMALIZATION_TOL:
        raise DegenerateNormalization(
            f"odd superposition vanishes at p = {params.p}, n = {params.n}; use the limit state"
        )
    return 1.0 / math.sqrt(2.0 * base)


def logical_amplitudes(p: float, l: int) -> tuple[float, float]:
    """Amplitudes of ``|alpha>_l`` on the even/odd logical basis of l modes."""
    if not 0.0 <= p <= 1.0 or l < 1:
        raise InvalidParams(f"need 0 <= p <= 1 and l >= 1, got p={p}, l={l}")
    pl = p**l
    return math.sqrt((1.0 + pl) / 2.0), math.sqrt(one_minus_pow(p, l) / 2.0)


def pure_split_state(params: ModelParams, k: int) -> PureSplitState:
    n = params.n
    if not 1 <= k <= n - 1:
        raise InvalidParams(f"split index k must lie in 1..{n - 1}, got {k}")
    big_n = normalization(params)
    s = params.sign
    ak, bk = logical_amplitudes(params.p, k)
    ar, br = logical_amplitudes(params.p, n - k)
    even = big_n * (1 + s)
    odd = big_n * (1 - s)
    return PureSplitState(
        k=k,
        c00=complex(even * ak * ar),
        c01=complex(odd * ak * br),
        c10=complex(odd * ar * bk),
        c11=complex(even * bk * br),
    )


def w_limit_rho12(n: int) -> np.ndarray:
    """Two-mode reduction of the W state: ((n-2)/n)|00><00| + (2/n)|Psi+><Psi+|."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (n - 2) / n
    rho[1:3, 1:3] = 1.0 / n
    return rho


def eta_entries(params: ModelParams) -> tuple[float, float, float, float]:
    """``(eta_a, eta_b, eta_plus, eta_minus)`` of the reduced two-mode state."""
    p, s = params.p, params.sign
    k = params.n - 2
    a2 = (1.0 + p) / 2.0
    b2 = (1.0 - p) / 2.0
    same = one_plus_signed_pow(p, k, s)  # 1 + q cos(m pi)
    flip = one_plus_signed_pow(p, k, -s)  # 1 - q cos(m pi)
    return 2 * a2 * a2 * same, 2 * b2 * b2 * same, 2 * a2 * b2 * same, 2 * a2 * b2 * flip


def rho12_matrix(params: ModelParams) -> tuple[np.ndarray, str]:
    if params.n < 3:
        raise InvalidParams(f"rho12 traces n - 2 modes and needs n >= 3, got {params.n}")
    if params.degenerate:
        return w_limit_rho12(params.n), "limit"
    ea, eb, ep, em = eta_entries(params)
    rho = np.array(
        [
            [ea, 0, 0, ep],
            [0, em, em, 0],
            [0, em, em, 0],
            [ep, 0, 0, eb],
        ],
        dtype=complex,
    )
    return rho / (ea + eb + 2.0 * em), "exact"


def rho12(params: ModelParams) -> TwoQubitState:
    """Reduced state of modes 1 and 2 after tracing out the other n - 2.

    The eta-matrix is divided by its own trace rather than multiplied by
    ``N**2``; analytically identical, numerically better near the odd
    degeneracy, where the analytic W-limit state is returned instead.
    """
    rho, provenance = rho12_matrix(params)
    return TwoQubitState(rho, provenance)


def full_logical_state(params: ModelParams) -> np.ndarray:
    """State vector of all n logical qubits, mode 1 as the most significant bit.

    The component with ``j`` excited qubits is ``N a^(n-j) b^j (1 + s(-1)^j)``,
    so no cancellation occurs between the two branches.
    """
    n = params.n
    if not 3 <= n <= MAX_ORACLE_MODES:
        raise UnsupportedSize(f"full state limited to 3 <= n <= {MAX_ORACLE_MODES}, got n = {n}")
    big_n = normalization(params)
    a, b = logical_amplitudes(params.p, 1)
    s = params.sign
    weights = np.array([bin(i).count("1") for i in range(2**n)])
    branch = 1 + s * np.where(weights % 2, -1.0, 1.0)
    amps = a ** (n - weights) * b**weights
    return (big_n * branch * amps).astype(complex)


def rho12_via_partial_trace(params: ModelParams) -> TwoQubitState:
    psi = full_logical_state(params)
    rho = linalg.partial_trace_pure(psi, [4, 2 ** (params.n - 2)], [0])
    return TwoQubitState(rho, "traced")


def rho12_spectrum_oracle(params: ModelParams) -> tuple[float, float]:
    """Non-zero eigenvalues ``(mu1, mu2)`` from the X-state blocks.

    The outer |00>,|11> block is singular (eta_a eta_b = eta_plus^2) and
    contributes its trace; the inner block contributes twice eta_minus.
    """
    if params.n < 3:
        raise InvalidParams(f"rho12 needs n >= 3, got {params.n}")
    if params.degenerate:
        return (params.n - 2) / params.n, 2.0 / params.n
    p, s, k = params.p, params.sign, params.n - 2
    n2 = normalization(params) ** 2
    mu1 = n2 * (1 + p * p) * one_plus_signed_pow(p, k, s)
    mu2 = n2 * one_minus_pow(p, 2) * one_plus_signed_pow(p, k, -s)
    return mu1, mu2
