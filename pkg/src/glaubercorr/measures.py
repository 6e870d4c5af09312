"""Quantum Fisher information and the discord-type quantifiers LQFI and LQU.

Conventions
-----------
``qfi`` returns ``F = Tr(rho L^2)``, so a pure state gives ``4 Var(H)``;
``crb`` consumes this same convention.  The local quantifiers work with
``F / 4`` for a generator ``(r . sigma) (x) I`` on qubit A, which puts
``Q = 1 - lambda_max(M)`` and ``U = 1 - lambda_max(W)`` in ``[0, 1]``.

The M-matrix sum runs over every eigen-pair ``(i, j)`` including
``i == j``.  Those diagonal terms are what make
``F/4 = Tr(rho H^2) - r^T M r`` an identity; without them a classical
state such as ``(|++><++| + |--><--|)/2`` would get ``Q = 1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidMatrix, InvalidParams, InvalidState, NotPositiveSemidefinite, UnestimableParameter
from .model import TwoQubitState

PAIR_CUTOFF = 1e-12
STATE_TOL = 1e-10
DEFAULT_DIRECTIONS = 20000

LOCAL_A = np.stack([linalg.kron(s, linalg.I2) for s in linalg.PAULIS])
AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True, eq=False)
class CorrelationResult:
    value: float
    direction: np.ndarray
    matrix: np.ndarray
    method: str


def _matrix_of(state) -> np.ndarray:
    if isinstance(state, TwoQubitState):
        return state.rho
    return np.asarray(state, dtype=complex)


def _validated_spectrum(rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rho = _matrix_of(rho)
    try:
        rho = linalg.check_hermitian(rho, tol=STATE_TOL, name="rho")
    except InvalidMatrix as exc:
        raise InvalidState(str(exc)) from exc
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > STATE_TOL:
        raise InvalidState(f"density matrix trace is {trace:.12g}, expected 1")
    vals, vecs = linalg.eigh(rho, check=False)
    try:
        lam = linalg.clamp_spectrum(vals)
    except NotPositiveSemidefinite as exc:
        raise InvalidState(str(exc)) from exc
    return rho, lam, vecs


def _check_generator(h, dim: int) -> np.ndarray:
    h = linalg.check_hermitian(h, name="generator")
    if h.shape != (dim, dim):
        raise InvalidMatrix(f"generator shape {h.shape} does not match state dimension {dim}")
    return h


def _pair_weights(lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``lam_i + lam_j`` and a mask of the pairs above the cutoff."""
    total = lam[..., :, None] + lam[..., None, :]
    return total, total > PAIR_CUTOFF


def _qfi_from_spectrum(lam: np.ndarray, h_eig: np.ndarray) -> np.ndarray:
    # h_eig: generator in the eigenbasis, shape (..., d, d); lam broadcasts over the leading axes
    total, keep = _pair_weights(lam)
    diff = lam[..., :, None] - lam[..., None, :]
    coef = np.where(keep, diff**2 / np.where(keep, total, 1.0), 0.0)
    return 2.0 * np.sum(coef * np.abs(h_eig) ** 2, axis=(-2, -1))


def qfi(rho, h) -> float:
    """Quantum Fisher information ``2 sum (li-lj)^2/(li+lj) |<i|H|j>|^2``."""
    rho, lam, vecs = _validated_spectrum(rho)
    h = _check_generator(h, rho.shape[0])
    h_eig = linalg.dagger(vecs) @ h @ vecs
    return float(_qfi_from_spectrum(lam, h_eig))


def qfi_via_sld(rho, h) -> float:
    """QFI as ``Tr(rho L^2)`` with the symmetric logarithmic derivative L.

    ``L`` solves ``d rho = (L rho + rho L)/2`` for ``d rho = i[rho, H]``;
    it is built in the eigenbasis, rotated back, and traced against rho in
    the original basis.
    """
    rho, lam, vecs = _validated_spectrum(rho)
    h = _check_generator(h, rho.shape[0])
    drho = 1j * (rho @ h - h @ rho)
    d_eig = linalg.dagger(vecs) @ drho @ vecs
    total, keep = _pair_weights(lam)
    sld_eig = np.where(keep, 2.0 * d_eig / np.where(keep, total, 1.0), 0.0)
    sld = vecs @ sld_eig @ linalg.dagger(vecs)
    return float(np.trace(rho @ sld @ sld).real)


def pure_qfi_variance(psi, h) -> float:
    """``4 (<H^2> - <H>^2)`` for a unit-norm state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > STATE_TOL:
        raise InvalidState(f"state vector has norm {norm:.12g}, expected 1")
    h = _check_generator(h, psi.size)
    hpsi = h @ psi
    mean = np.vdot(psi, hpsi).real
    second = np.vdot(hpsi, hpsi).real
    return float(4.0 * (second - mean * mean))


def local_generator(direction) -> np.ndarray:
    """``(r . sigma) (x) I`` for a Bloch direction r (normalized here)."""
    r = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(r)
    if r.shape != (3,) or norm == 0:
        raise InvalidParams(f"direction must be a non-zero 3-vector, got {direction!r}")
    return np.einsum("l,lij->ij", r / norm, LOCAL_A)


def axis_generator(axis: str) -> np.ndarray:
    try:
        return LOCAL_A[AXES[axis]]
    except KeyError:
        raise InvalidParams(f"generator axis must be one of x, y, z; got {axis!r}") from None


def fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic near-uniform unit vectors, both poles included."""
    if count < 2:
        raise InvalidParams("need at least two directions")
    i = np.arange(count)
    z = 1.0 - 2.0 * i / (count - 1)
    rad = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    return np.stack([rad * np.cos(phi), rad * np.sin(phi), z], axis=1)


# ---------------------------------------------------------------------------
# stacked kernels; inputs are (B, 4, 4) density matrices built by this package


def _local_ops_in_eigenbasis(vecs: np.ndarray) -> np.ndarray:
    # (B, 3, 4, 4): <psi_i| sigma_l (x) I |psi_j>
    return np.einsum("bji,ljk,bkm->blim", vecs.conj(), LOCAL_A, vecs)


def m_matrix_many(rhos, include_diagonal: bool = True) -> np.ndarray:
    """M-matrices of a stack of two-qubit density matrices.

    ``M_lk = sum_ij 2 li lj/(li+lj) Re(<i|s_l|j><j|s_k|i>)``.  Setting
    ``include_diagonal=False`` restricts the sum to ``i != j``; that variant
    is kept for comparison only and does not give the LQFI.
    """
    vals, vecs = linalg.eigh(rhos, check=False)
    lam = linalg.clamp_spectrum(vals)
    ops = _local_ops_in_eigenbasis(vecs)
    total, keep = _pair_weights(lam)
    weight = np.where(keep, 2.0 * lam[:, :, None] * lam[:, None, :] / np.where(keep, total, 1.0), 0.0)
    if not include_diagonal:
        weight = weight * (1.0 - np.eye(weight.shape[-1]))
    m = np.einsum("bij,blij,bkji->blk", weight, ops, ops).real
    return 0.5 * (m + m.swapaxes(-1, -2))


def m_matrix(rho, include_diagonal: bool = True) -> np.ndarray:
    return m_matrix_many(_matrix_of(rho)[None], include_diagonal)[0]


def w_matrix_many(rhos) -> np.ndarray:
    """``W_lk = Tr(sqrt(rho) s_l sqrt(rho) s_k)`` for a stack of states."""
    roots = linalg.sqrtm_psd(rhos, check=False)
    left = np.einsum("bij,ljk->blik", roots, LOCAL_A)
    w = np.einsum("blij,bkji->blk", left, left).real
    return 0.5 * (w + w.swapaxes(-1, -2))


def w_matrix(rho) -> np.ndarray:
    return w_matrix_many(_matrix_of(rho)[None])[0]


def lqfi_many(rhos) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(values, directions, M)`` for a stack of states."""
    m = m_matrix_many(rhos)
    top, dirs = linalg.max_eig_sym3_many(m)
    return 1.0 - top, dirs, m


def lqu_many(rhos) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w = w_matrix_many(rhos)
    top, dirs = linalg.max_eig_sym3_many(w)
    return 1.0 - top, dirs, w


def lqfi(state) -> CorrelationResult:
    """Local quantum Fisher information ``min_r F(rho, (r.s)(x)I) / 4``."""
    rho, _, _ = _validated_spectrum(state)
    values, dirs, m = lqfi_many(rho[None])
    return CorrelationResult(float(values[0]), dirs[0], m[0], "spectral")


def lqu(state) -> CorrelationResult:
    """Local quantum uncertainty, the minimal skew information over qubit-A observables."""
    rho, _, _ = _validated_spectrum(state)
    values, dirs, w = lqu_many(rho[None])
    return CorrelationResult(float(values[0]), dirs[0], w[0], "spectral")


def skew_information(rho, k) -> float:
    """Wigner-Yanase skew information ``-Tr([sqrt(rho), K]^2) / 2``."""
    rho, _, _ = _validated_spectrum(rho)
    k = _check_generator(k, rho.shape[0])
    root = linalg.sqrtm_psd(rho, check=False)
    comm = root @ k - k @ root
    return float(-0.5 * np.trace(comm @ comm).real)


def local_fisher_profile(state, directions) -> np.ndarray:
    """``F / 4`` for each generator ``(r . sigma) (x) I`` in ``directions``."""
    _, lam, vecs = _validated_spectrum(state)
    dirs = np.asarray(directions, dtype=float)
    ops = _local_ops_in_eigenbasis(vecs[None])[0]
    h_eig = np.einsum("dl,lij->dij", dirs, ops)
    return _qfi_from_spectrum(lam, h_eig) / 4.0


def local_skew_profile(state, directions) -> np.ndarray:
    """Skew information of ``(r . sigma) (x) I`` for each direction, from the commutator."""
    rho, _, _ = _validated_spectrum(state)
    root = linalg.sqrtm_psd(rho, check=False)
    gens = np.einsum("dl,lij->dij", np.asarray(directions, dtype=float), LOCAL_A)
    comm = root @ gens - gens @ root
    return -0.5 * np.einsum("dij,dji->d", comm, comm).real


def _directions(count: int) -> np.ndarray:
    if int(count) < 100:
        raise InvalidParams(f"brute force needs at least 100 directions, got {count}")
    return fibonacci_sphere(int(count))


def lqfi_bruteforce(state, directions: int = DEFAULT_DIRECTIONS) -> float:
    """Grid minimum of ``F / 4`` over Fibonacci-sphere directions on qubit A."""
    return float(np.min(local_fisher_profile(state, _directions(directions))))


def lqu_bruteforce(state, directions: int = DEFAULT_DIRECTIONS) -> float:
    return float(np.min(local_skew_profile(state, _directions(directions))))


def crb(fisher: float, n_reps: int) -> float:
    """Cramer-Rao variance bound ``1 / (n_reps F)`` with ``F = Tr(rho L^2)``."""
    if int(n_reps) != n_reps or n_reps < 1:
        raise InvalidParams(f"repetition count must be a positive integer, got {n_reps}")
    if not fisher > 0:
        raise UnestimableParameter(f"Fisher information {fisher} carries no information on the phase")
    return 1.0 / (n_reps * fisher)
