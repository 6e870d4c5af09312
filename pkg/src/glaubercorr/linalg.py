"""Dense Hermitian linear algebra for small matrices.

Every routine accepts a single matrix of shape ``(n, n)`` or a stack of
shape ``(..., n, n)``; stacked inputs are processed element-wise, and an
element of a stack gets bit-identical results to the same matrix passed
alone.  The eigensolver is a cyclic complex Jacobi iteration, which is
deterministic and accurate to a few ulps for the 3x3 and 4x4 problems
that dominate this package.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceFailure, InvalidMatrix, NotPositiveSemidefinite

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12
MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-14
# relative slack used to call two eigenvector magnitudes or eigenvalues "tied"
TIE_TOL = 1e-10
# eigenvalues below this fraction of the spectral radius are roundoff; the
# square root would inflate 1e-16 noise to 1e-8
SQRT_NOISE_FLOOR = 64 * np.finfo(float).eps

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


class EigenDecomposition(NamedTuple):
    """Ascending real eigenvalues and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues[..., None, :]) @ v.conj().swapaxes(-1, -2)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _as_square(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2] or arr.shape[-1] == 0:
        raise InvalidMatrix(f"{name} must be square with dimension >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return arr


def hermiticity_error(a) -> float:
    arr = np.asarray(a)
    return float(np.max(np.abs(arr - dagger(arr)))) if arr.size else 0.0


def check_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a complex array, raising InvalidMatrix unless it is Hermitian.

    The tolerance is absolute for matrices with entries of order one and
    scales with the largest entry otherwise.
    """
    arr = _as_square(a, name).astype(complex, copy=False)
    scale = max(1.0, float(np.max(np.abs(arr))))
    err = hermiticity_error(arr)
    if err >= tol * scale:
        raise InvalidMatrix(f"{name} is not Hermitian (max |A - A^H| = {err:.3e})")
    return arr


def _off_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a * mask) ** 2, axis=(-2, -1)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, active: np.ndarray) -> None:
    """Annihilate a[:, p, q] in place for every active matrix of the stack.

    Inactive or already-diagonal entries get c = 1, s = 0, which leaves
    their rows and columns unchanged bit for bit.
    """
    apq = a[:, p, q]
    mag = np.abs(apq)
    rot = active & (mag > 0.0)
    safe = np.where(rot, mag, 1.0)
    phase = np.where(rot, apq / safe, 1.0 + 0.0j)
    app = a[:, p, p].real.copy()
    aqq = a[:, q, q].real.copy()
    theta = (aqq - app) / (2.0 * safe)
    t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(rot, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    sp = (s * phase)[:, None]
    sc = (s * np.conj(phase))[:, None]
    cc = c[:, None]

    colp = a[:, :, p].copy()
    colq = a[:, :, q].copy()
    a[:, :, p] = cc * colp - sc * colq
    a[:, :, q] = sp * colp + cc * colq
    rowp = a[:, p, :].copy()
    rowq = a[:, q, :].copy()
    a[:, p, :] = cc * rowp - sp * rowq
    a[:, q, :] = sc * rowp + cc * rowq
    a[:, p, q] = np.where(rot, 0.0, a[:, p, q])
    a[:, q, p] = np.where(rot, 0.0, a[:, q, p])
    a[:, p, p] = np.where(rot, app - t * mag, a[:, p, p])
    a[:, q, q] = np.where(rot, aqq + t * mag, a[:, q, q])

    vp = v[:, :, p].copy()
    vq = v[:, :, q].copy()
    v[:, :, p] = cc * vp - sc * vq
    v[:, :, q] = sp * vp + cc * vq


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component made real positive; near-ties go to the lowest index
    mags = np.abs(vecs)
    top = np.max(mags, axis=-2, keepdims=True)
    lead = np.argmax(mags >= top * (1.0 - TIE_TOL), axis=-2)
    pivot = np.take_along_axis(vecs, lead[..., None, :], axis=-2)
    return vecs * (np.conj(pivot) / np.abs(pivot))


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[-1]
    lead_shape = a.shape[:-2]
    work = a.reshape(-1, n, n).astype(complex, copy=True)
    work = 0.5 * (work + dagger(work))
    vecs = np.broadcast_to(np.eye(n, dtype=complex), work.shape).copy()
    scale = np.sqrt(np.sum(np.abs(work) ** 2, axis=(-2, -1)))
    tol = OFF_DIAGONAL_TOL * scale
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    sweeps = 0
    while True:
        active = _off_norm(work) > tol
        if not active.any():
            break
        if sweeps == MAX_SWEEPS:
            raise ConvergenceFailure(
                f"Jacobi did not converge in {MAX_SWEEPS} sweeps "
                f"({int(active.sum())} of {active.size} matrices unconverged)"
            )
        for p, q in pairs:
            _rotate(work, vecs, p, q, active)
        sweeps += 1

    vals = np.diagonal(work, axis1=-2, axis2=-1).real.copy()
    order = np.argsort(vals, axis=-1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=-1)
    vecs = _fix_phases(vecs)
    return vals.reshape(lead_shape + (n,)), vecs.reshape(lead_shape + (n, n))


def eigh(a, *, check: bool = True) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix (or stack of them).

    Parameters
    ----------
    a : array_like, shape (..., n, n)
        Hermitian input.  Only Hermiticity within ``HERMITIAN_TOL`` is
        accepted; the strictly Hermitian part is what gets diagonalized.
    check : bool
        Skip the Hermiticity scan when the caller built ``a`` Hermitian.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending along the last axis; eigenvector columns with
        their largest-magnitude component real and positive.

    Raises
    ------
    InvalidMatrix
        Non-square, empty, non-finite or non-Hermitian input.
    ConvergenceFailure
        More than ``MAX_SWEEPS`` Jacobi sweeps were needed.
    """
    arr = check_hermitian(a) if check else _as_square(a).astype(complex, copy=False)
    vals, vecs = _jacobi(arr)
    return EigenDecomposition(vals, vecs)


def clamp_spectrum(vals: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)``; raise on anything more negative."""
    vals = np.asarray(vals, dtype=float)
    if np.any(vals < -tol):
        raise NotPositiveSemidefinite(f"eigenvalue {float(np.min(vals)):.3e} below -{tol:g}")
    return np.where(vals < 0.0, 0.0, vals)


def sqrtm_psd(a, *, check: bool = True) -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite matrix."""
    vals, vecs = eigh(a, check=check)
    lam = clamp_spectrum(vals)
    floor = SQRT_NOISE_FLOOR * np.max(np.abs(lam), axis=-1, keepdims=True)
    roots = np.sqrt(np.where(lam <= floor, 0.0, lam))
    out = (vecs * roots[..., None, :]) @ dagger(vecs)
    return 0.5 * (out + dagger(out))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Subsystems are indexed from 0 in the order of ``dims`` and the kept
    ones appear in ascending order in the result.
    """
    rho = _as_square(rho, "rho")
    dims = [int(d) for d in dims]
    keep = sorted({int(k) for k in keep})
    total = int(np.prod(dims)) if dims else 0
    if rho.ndim != 2 or total != rho.shape[0] or any(d < 1 for d in dims):
        raise InvalidMatrix(f"dims {dims} do not factor a {rho.shape} matrix")
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidMatrix(f"keep must be a non-empty subset of 0..{len(dims) - 1}")

    k = len(dims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * k > len(letters):
        raise InvalidMatrix("too many subsystems")
    rows = list(letters[:k])
    cols = [rows[i] if i not in keep else letters[k + i] for i in range(k)]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(out)
    dk = int(np.prod([dims[i] for i in keep]))
    return np.einsum(spec, rho.reshape(dims + dims)).reshape(dk, dk)


def partial_trace_pure(psi, dims: Sequence[int], keep) -> np.ndarray:
    """Reduced density matrix of the pure state ``psi`` without forming |psi><psi|."""
    psi = np.asarray(psi, dtype=complex).ravel()
    dims = [int(d) for d in dims]
    keep = sorted({int(k) for k in keep})
    if int(np.prod(dims)) != psi.size:
        raise InvalidMatrix(f"dims {dims} do not factor a vector of length {psi.size}")
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidMatrix(f"keep must be a non-empty subset of 0..{len(dims) - 1}")
    rest = [i for i in range(len(dims)) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    mat = np.transpose(psi.reshape(dims), keep + rest).reshape(dk, -1)
    return mat @ mat.conj().T


def max_eig_sym3(s) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of a real symmetric 3x3 matrix and a unit eigenvector.

    The direction has its largest-magnitude component positive.  When the
    top eigenvalue is degenerate, the eigenvector whose leading component
    sits on the lowest axis is returned, so the identity gives ``e1``.
    """
    vals, vecs = max_eig_sym3_many(np.asarray(s, dtype=float)[None])
    return float(vals[0]), vecs[0]


def max_eig_sym3_many(s) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(s, dtype=float)
    if s.ndim != 3 or s.shape[1:] != (3, 3):
        raise InvalidMatrix(f"expected a stack of 3x3 matrices, got {s.shape}")
    if np.max(np.abs(s - s.swapaxes(-1, -2)), initial=0.0) > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(s), initial=0.0))):
        raise InvalidMatrix("matrix is not symmetric")
    s = 0.5 * (s + s.swapaxes(-1, -2))
    vals, vecs = _jacobi(s)
    vecs = vecs.real
    top = vals[:, -1:]
    tied = vals >= top - TIE_TOL * np.maximum(1.0, np.abs(top))
    lead_axis = np.argmax(np.abs(vecs) >= np.max(np.abs(vecs), axis=-2, keepdims=True) * (1.0 - TIE_TOL), axis=-2)
    # among tied columns prefer the lowest leading axis, then the last (largest) column
    score = np.where(tied, lead_axis * 3 - np.arange(3), 10**6)
    pick = np.argmin(score, axis=-1)
    direction = np.take_along_axis(vecs, pick[:, None, None], axis=-1)[..., 0]
    return vals[:, -1], direction
