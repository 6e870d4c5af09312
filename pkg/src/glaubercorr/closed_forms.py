"""Literal evaluation of the reference closed forms, and a comparator.

Each function evaluates a printed expression exactly as typeset, typos
included, so that disagreements with the first-principles values in
:mod:`glaubercorr.measures` can be measured rather than silently repaired.
Singular points are not errors: a denominator with ``|d| < 1e-12`` or a
square-root radicand below ``-1e-12`` makes the whole expression
undefined, represented by ``None``.  Radicands in ``[-1e-12, 0)`` are
clamped to zero.

Shorthand used throughout: ``c = cos(m pi)``, ``q = p^(n-2)``,
``N2 = 1 / (2 + 2 p^n c)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from . import channel, linalg, measures, model
from .model import ModelParams

DENOMINATOR_TOL = 1e-12
RADICAND_TOL = 1e-12
MATCH_TOL = 1e-8
MIN_P_FOR_PRINTED_EIGS = 1e-6

FAMILIES = (
    "Eq26-eigs",
    "Eq33-LQFI",
    "Eq38-40-omegas",
    "Eq49-50-DC-eigs",
    "Eq52-LQFI-DC",
    "Eq54-57-LQU-DC",
)
DEPHASED_FAMILIES = FAMILIES[3:]


class _Undefined(Exception):
    pass


def _div(num: float, den: float) -> float:
    if abs(den) < DENOMINATOR_TOL:
        raise _Undefined
    return num / den


def _sqrt(x: float) -> float:
    if x < -RADICAND_TOL:
        raise _Undefined
    return math.sqrt(max(x, 0.0))


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _Undefined:
            return None

    return wrapper


def _max_or_none(*values):
    if any(v is None for v in values):
        return None
    return max(values)


def _symbols(params: ModelParams) -> tuple[float, int, float, float]:
    p, n = params.p, params.n
    c = float(params.sign)
    return p, n, c, p ** (n - 2)


def _n2(p: float, n: int, c: float) -> float:
    return _div(1.0, 2.0 + 2.0 * p**n * c)


# ---------------------------------------------------------------------------
# undephased reduced state


@_guarded
def rho12_eigs_printed(params: ModelParams):
    """``(lambda3, lambda4)``, the printed non-zero eigenvalues; they divide by p^2."""
    p, n, c, _ = _symbols(params)
    if p <= MIN_P_FOR_PRINTED_EIGS:
        return None
    n2 = _n2(p, n, c)
    qc = p ** (n - 2) * c
    lam3 = _div(-n2 * (p**2 - qc) * (-1.0 + p**2), p**2)
    lam4 = _div(n2 * (p**2 + qc) * (1.0 + p**2), p**2)
    return lam3, lam4


def rho12_eigvecs_printed(params: ModelParams):
    """Printed eigenvectors ``psi1..psi4`` (``None`` where singular)."""
    p = params.p
    half = math.sqrt(2.0) / 2.0

    @_guarded
    def psi1():
        amp = _sqrt(_div((1 + p) ** 2, 2 * (1 + p**2)))
        return amp * np.array([1.0, 0.0, 0.0, _div(1 - p, 1 + p)])

    @_guarded
    def psi4():
        amp = _sqrt(_div((1 - p) ** 2, 2 * (1 + p**2)))
        return -amp * np.array([1.0, 0.0, 0.0, _div(1 + p, 1 - p)])

    return (
        psi1(),
        half * np.array([0.0, 1.0, -1.0, 0.0]),
        half * np.array([0.0, 1.0, 1.0, 0.0]),
        psi4(),
    )


@_guarded
def m33_closed(params: ModelParams):
    p, n, c, q = _symbols(params)
    return _div((1 - p**2) ** 2 * (1 - (q * c) ** 2), 2 * (1 + p**n * c) ** 2)


@_guarded
def lqfi_closed(params: ModelParams):
    """Printed LQFI of the reduced two-mode state."""
    p, n, c, q = _symbols(params)
    lead = 2 * (1 + p**n * c) ** 2
    return _div(lead - (1 - p**2) ** 2 * (1 - (q * c) ** 2), lead)


@dataclass(frozen=True)
class Omegas:
    omega11: Optional[float]
    omega22: Optional[float]
    omega33: Optional[float]
    lqu: Optional[float]


def lqu_omegas_closed(params: ModelParams) -> Omegas:
    """Printed W-matrix entries and ``U = 1 - max(omega11, omega33)``."""
    p, n, c, q = _symbols(params)

    @_guarded
    def omega11():
        num = _n2(p, n, c) * (1 - p**2) ** 2 * (1 - (q * c) ** 2)
        return _div(num, _sqrt(2 * (1 - q**2 * c) ** 2 * (1 - p**4)))

    @_guarded
    def omega22():
        num = _n2(p, n, c) * (1 - p**2) ** 2 * (1 - (q * c) ** 2)
        return _div(num, _sqrt(2 * (1 - q**2 * c) ** 2 * (1 - p**4))) * p**2

    @_guarded
    def omega33():
        num = _n2(p, n, c) * (1 + p ** (n + 2) * c - 3 * (p**2 + p**n * c))
        return 0.5 - _div(num, 1 + p**2)

    w11, w22, w33 = omega11(), omega22(), omega33()
    top = _max_or_none(w11, w33)
    return Omegas(w11, w22, w33, None if top is None else 1.0 - top)


# ---------------------------------------------------------------------------
# dephased reduced state


@dataclass(frozen=True)
class DCAuxiliaries:
    xi_plus: Optional[float]
    xi_minus: Optional[float]
    chi_plus: Optional[float]
    chi_minus: Optional[float]
    beta: Optional[float]
    delta: Optional[float]
    Lambda: Optional[float]
    Delta: Optional[float]


def _xi(p: float, gamma: float, sign: int) -> float:
    return 1 + sign * _sqrt(1 - _div(gamma * (2 - gamma) * (1 - p**2) ** 2, (1 + p**2) ** 2))


def _chi(p: float, n: int, c: float, gamma: float, xi: float) -> float:
    num = (1 - p**2) ** 2 * (2 + gamma**2 - 2 * gamma) - xi * (1 + p**2) * (4 * p + xi * (1 + p**2))
    den = 2 * (1 - gamma) * (1 - p**2) * ((1 + p) ** 2 + (1 + p**2) * xi)
    return _n2(p, n, c) * _div(num, den)


def dc_auxiliaries(params: ModelParams, gamma: float) -> DCAuxiliaries:
    p, n, c, q = _symbols(params)
    qc = q * c
    g = float(gamma)

    xi_plus = _guarded(_xi)(p, g, +1)
    xi_minus = _guarded(_xi)(p, g, -1)

    @_guarded
    def chi(xi):
        if xi is None:
            raise _Undefined
        return _chi(p, n, c, g, xi)

    @_guarded
    def beta():
        n2 = _n2(p, n, c)
        return _div(1 - n2 * g + qc * (1 + n2 * g), (1 + qc) * (1 - p))

    @_guarded
    def delta():
        return 1 - _div(p, qc * (2 + p - g * (1 + p)))

    @_guarded
    def big_lambda():
        return _div(_sqrt((1 + p**2) ** 2 - (1 - p**2) ** 2 * (2 - g) ** 2 * g**2), 1 + p**2)

    @_guarded
    def big_delta():
        return 1 + _div((1 - p**2) * _sqrt(g * (2 - g)), 1 + p**2)

    return DCAuxiliaries(
        xi_plus=xi_plus,
        xi_minus=xi_minus,
        chi_plus=chi(xi_plus),
        chi_minus=chi(xi_minus),
        beta=beta(),
        delta=delta(),
        Lambda=big_lambda(),
        Delta=big_delta(),
    )


def dc_eigs_printed(params: ModelParams, gamma: float):
    """Printed ``(lambda1, lambda2, lambda3, lambda4)`` of the dephased state."""
    p, n, c, q = _symbols(params)
    qc = q * c
    g = float(gamma)

    @_guarded
    def outer(sign):
        ratio = _div((2 * g - g**2) * (1 - p**2) ** 2, (1 + p**2) ** 2)
        return _n2(p, n, c) / 2 * (1 + qc) * (1 + p**2) * (1 + _sqrt(1 + sign * ratio))

    @_guarded
    def inner(sign):
        return _n2(p, n, c) / 2 * (1 - qc) * (1 - p**2) * (1 - sign * (g - 1))

    return outer(+1), inner(+1), inner(-1), outer(-1)


def dc_eigvecs_printed(params: ModelParams, gamma: float):
    """Printed dephased eigenvectors; the chi-branches have radicand ``-chi^2/(1+chi^2)``."""
    aux = dc_auxiliaries(params, gamma)

    @_guarded
    def minus_branch(chi):
        if chi is None:
            raise _Undefined
        return np.array([_sqrt(-chi**2 / (1 + chi**2)), 0.0, 0.0, _sqrt(1 / (1 + chi**2))])

    @_guarded
    def plus_branch(x):
        if x is None:
            raise _Undefined
        return np.array([_sqrt(1 / (1 + x**2)), 0.0, 0.0, -_sqrt(x**2 / (1 + x**2))])

    return (
        minus_branch(aux.chi_plus),
        minus_branch(aux.chi_minus),
        plus_branch(aux.delta),
        plus_branch(aux.beta),
    )


def m33_dc_printed(params: ModelParams, gamma: float):
    p, n, c, q = _symbols(params)
    qc = q * c
    g = float(gamma)
    aux = dc_auxiliaries(params, g)

    @_guarded
    def evaluate():
        xp, xm = aux.xi_plus, aux.xi_minus
        chp, chm, beta = aux.chi_plus, aux.chi_minus, aux.beta
        if None in (xp, xm, chp, chm, beta):
            raise _Undefined
        n2 = _n2(p, n, c)
        corr = 1 - qc**2
        t1 = _div(
            2 * (1 - p**4) * xp * g * n2 * corr * (beta - chp) ** 2,
            (1 + beta**2) * (1 + chp**2) * (g * (1 - qc) * (1 - p**2) + (1 + p**2) * (1 + qc) * xp),
        )
        t2 = _div(g * (1 - p**2) * (1 - qc) * (beta**2 - 1), 2 * (beta**2 + 1))
        t3 = _div(
            2 * g * n2 * (1 - p**4) * xm * corr * (beta - chm) ** 2,
            (1 + chm**2) * (1 + beta**2) * (g * (1 - qc) * (1 - p**2) + (1 + p**2) * (1 + qc) * xm),
        )
        t4 = _div(
            n2 * (1 + qc) * g * (2 - g) * (1 - p**2) ** 2 * (chp * chm - 1) ** 2,
            2 * (1 + p**2) * (1 + beta**2) * (1 + chm**2),
        )
        return t1 + t2 + t3 + t4

    return evaluate()


def lqfi_dc_printed(params: ModelParams, gamma: float):
    """``1 - max(M33_dc, 0)``: every other printed M-entry is zero."""
    m33 = m33_dc_printed(params, gamma)
    return None if m33 is None else 1.0 - max(m33, 0.0)


@dataclass(frozen=True)
class DephasedOmegas:
    w11: Optional[float]
    w22: Optional[float]
    w33: Optional[float]
    lqu: Optional[float]


def lqu_dc_omegas(params: ModelParams, gamma: float) -> DephasedOmegas:
    p, n, c, q = _symbols(params)
    qc = q * c
    g = float(gamma)
    aux = dc_auxiliaries(params, g)

    @_guarded
    def w_transverse(sign):
        lam, dlt = aux.Lambda, aux.Delta
        if lam is None or dlt is None:
            raise _Undefined
        n2 = _n2(p, n, c)
        den = (
            _sqrt((1 - p**4) * (1 - qc**2))
            * (_sqrt(g) + _sqrt(2 - g))
            * (_sqrt(1 + lam) + _sqrt(1 - lam))
        )
        first = _div(2 * n2 * (1 - p**4) * (1 - qc**2) * (1 + _sqrt(g * (2 - g))) * dlt, den)
        second = _div(n2 * (1 - g) ** 2 * ((1 - p**2) ** 2 - 16 * qc**2), den)
        return first + sign * second

    @_guarded
    def w33():
        dlt = aux.Delta
        if dlt is None:
            raise _Undefined
        n2 = _n2(p, n, c)
        t1 = _div(
            2 * n2 * (1 + qc) ** 2 * p**2 - (1 - g) ** 2 * ((1 - p**2) + 4 * qc) ** 2,
            (1 + qc) * (1 + p**2) * dlt,
        )
        t2 = n2 / 2 * 4 * (1 + qc) * (1 + p**2) * dlt
        t3 = n2 / 2 * (1 - qc) * (1 - p**2) * (1 + _sqrt(2 * g - g**2))
        t4 = _div(n2 * (1 - g) ** 2 * ((1 - p**2) - 4 * qc) ** 2, 2 * (1 + qc) * (1 - p**2) * dlt)
        return t1 + t2 + t3 - t4

    w11, w22, w33v = w_transverse(+1), w_transverse(-1), w33()
    top = _max_or_none(w11, w33v)
    return DephasedOmegas(w11, w22, w33v, None if top is None else 1.0 - top)


def lqu_dc_printed(params: ModelParams, gamma: float):
    return lqu_dc_omegas(params, gamma).lqu


def lqfi_offdiagonal_only(state) -> float:
    """LQFI with the M-sum restricted to ``i != j`` as the printed sum suggests."""
    m = measures.m_matrix(state, include_diagonal=False)
    return 1.0 - linalg.max_eig_sym3(m)[0]


# ---------------------------------------------------------------------------
# comparator


@dataclass(frozen=True)
class DiscrepancyRecord:
    quantity: str
    p: float
    n: int
    m: int
    gamma: Optional[float]
    numeric: Optional[float]
    paper: Optional[float]
    abs_diff: Optional[float]
    verdict: str
    component: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def make_record(quantity, params: ModelParams, gamma, numeric, paper, component=None) -> DiscrepancyRecord:
    if numeric is None or paper is None:
        diff, verdict = None, "UNDEFINED"
    else:
        diff = abs(float(numeric) - float(paper))
        verdict = "MATCH" if diff < MATCH_TOL else "MISMATCH"
    return DiscrepancyRecord(
        quantity=quantity,
        p=params.p,
        n=params.n,
        m=params.m,
        gamma=None if gamma is None else float(gamma),
        numeric=None if numeric is None else float(numeric),
        paper=None if paper is None else float(paper),
        abs_diff=diff,
        verdict=verdict,
        component=component,
    )


def _vector_record(quantity, params, gamma, numeric: Sequence[float], paper, labels: Sequence[str]):
    if paper is None or any(v is None for v in paper):
        return make_record(quantity, params, gamma, numeric[-1], None, labels[-1])
    diffs = [abs(a - b) for a, b in zip(numeric, paper)]
    worst = int(np.argmax(diffs))
    return make_record(quantity, params, gamma, numeric[worst], paper[worst], labels[worst])


@dataclass(frozen=True)
class CompareGrid:
    p_values: tuple
    n_values: tuple
    m_values: tuple
    gamma_values: tuple

    @property
    def size(self) -> int:
        return len(self.p_values) * len(self.n_values) * len(self.m_values) * len(self.gamma_values)


def _point_records(params: ModelParams, gammas: Sequence[float]) -> list:
    base = model.rho12(params)
    mu1, mu2 = model.rho12_spectrum_oracle(params)
    q_num, _, _ = measures.lqfi_many(base.rho[None])
    u_num, _, _ = measures.lqu_many(base.rho[None])
    undephased = (
        _vector_record("Eq26-eigs", params, None, (mu2, mu1), rho12_eigs_printed(params), ("lambda3", "lambda4")),
        make_record("Eq33-LQFI", params, None, q_num[0], lqfi_closed(params)),
        make_record("Eq38-40-omegas", params, None, u_num[0], lqu_omegas_closed(params).lqu),
    )
    # gamma-independent families are evaluated once and stamped on every gamma of the grid
    out = [replace(rec, gamma=float(g)) for g in gammas for rec in undephased]

    stack = channel.dephase_rho12_closed_many(params, gammas)
    eig_num = linalg.eigh(stack, check=False).eigenvalues
    q_dc, _, _ = measures.lqfi_many(stack)
    u_dc, _, _ = measures.lqu_many(stack)
    for idx, g in enumerate(gammas):
        printed = dc_eigs_printed(params, g)
        if any(v is None for v in printed):
            printed_sorted = None
        else:
            printed_sorted = sorted(printed)
        out.append(
            _vector_record(
                "Eq49-50-DC-eigs", params, g, list(eig_num[idx]), printed_sorted, ("sorted0", "sorted1", "sorted2", "sorted3")
            )
        )
        out.append(make_record("Eq52-LQFI-DC", params, g, q_dc[idx], lqfi_dc_printed(params, g)))
        out.append(make_record("Eq54-57-LQU-DC", params, g, u_dc[idx], lqu_dc_printed(params, g)))
    return out


def record_sort_key(rec: DiscrepancyRecord):
    return (rec.quantity, rec.p, rec.n, rec.m, -1.0 if rec.gamma is None else rec.gamma)


def compare_all(grid: CompareGrid, workers: int = 1) -> list:
    """One record per family and grid point, sorted by quantity then parameters.

    Undephased families are evaluated once per ``(p, n, m)``; the dephased
    ones once per ``(p, n, m, gamma)``.
    """
    points = [ModelParams(p, n, m) for p in grid.p_values for n in grid.n_values for m in grid.m_values]
    gammas = list(grid.gamma_values)
    records = []
    if workers > 1 and len(points) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_point_records, points, [gammas] * len(points)):
                records.extend(chunk)
    else:
        for params in points:
            records.extend(_point_records(params, gammas))
    records.sort(key=record_sort_key)
    return records


def summarize(records: Iterable[DiscrepancyRecord]) -> dict:
    counts = {"MATCH": 0, "MISMATCH": 0, "UNDEFINED": 0}
    for rec in records:
        counts[rec.verdict] += 1
    return counts
