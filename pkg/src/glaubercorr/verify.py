"""Oracle self-consistency checks and the printed-formula comparison report."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import channel, closed_forms, linalg, measures, model
from .errors import DegenerateNormalization, InvalidParams
from .model import ModelParams

GRIDS = {
    "coarse": closed_forms.CompareGrid(
        p_values=(0.0, 0.25, 0.5, 0.75, 1.0),
        n_values=(3, 4, 5, 25),
        m_values=(0, 1),
        gamma_values=(0.0, 0.25, 0.5, 0.75, 1.0),
    ),
    "fine": closed_forms.CompareGrid(
        p_values=tuple(round(0.05 * i, 12) for i in range(21)),
        n_values=(3, 4, 5, 10, 25),
        m_values=(0, 1),
        gamma_values=tuple(round(0.1 * i, 12) for i in range(11)),
    ),
}

TOLERANCES = {
    "rho12-vs-partial-trace": 1e-12,
    "state-validity": 1e-12,
    "kraus-completeness": 1e-13,
    "kraus-vs-closed-channel": 1e-13,
    "channel-operator-identity": 1e-13,
    "qfi-vs-sld": 1e-10,
    "pure-qfi-variance": 1e-10,
    "lqfi-spectral-vs-bruteforce": 1e-4,
    "lqu-spectral-vs-bruteforce": 1e-4,
    "luo-sandwich": 1e-9,
    "pure-state-equality": 1e-9,
    "zero-on-classical": 1e-8,
    "random-qfi-vs-sld": 1e-10,
    "random-luo-sandwich": 1e-9,
}
# spectral minimum may undercut the sampled one by at most this much, never exceed it
BRACKET_SLACK = 1e-9
RANDOM_SEED = 20240611
GENERATOR_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name: str, errors, extra_ok: bool = True) -> CheckResult:
    errors = [float(e) for e in errors]
    worst = max(errors) if errors else 0.0
    tol = TOLERANCES[name]
    return CheckResult(name, bool(extra_ok and worst <= tol), worst, tol)


def _points(grid) -> list:
    return [ModelParams(p, n, m) for p in grid.p_values for n in grid.n_values for m in grid.m_values]


def grid_states(grid) -> tuple[list, np.ndarray]:
    """``([(params, gamma), ...], stack)`` of every dephased reduced state on the grid."""
    labels, mats = [], []
    for params in _points(grid):
        stack = channel.dephase_rho12_closed_many(params, grid.gamma_values)
        labels.extend((params, g) for g in grid.gamma_values)
        mats.append(stack)
    return labels, np.concatenate(mats)


def _pure_splits(grid) -> list:
    out = []
    for params in _points(grid):
        for k in sorted({1, params.n // 2}):
            try:
                out.append(model.pure_split_state(params, k))
            except DegenerateNormalization:
                continue
    return out


def _max_abs(a) -> float:
    return float(np.max(np.abs(a)))


# ---------------------------------------------------------------------------
# individual checks


def check_partial_trace(grid) -> CheckResult:
    errors = []
    for params in _points(grid):
        if params.n > model.MAX_ORACLE_MODES:
            continue
        try:
            traced = model.rho12_via_partial_trace(params).rho
        except DegenerateNormalization:
            continue
        errors.append(_max_abs(model.rho12(params).rho - traced))
    return _result("rho12-vs-partial-trace", errors)


def check_state_validity(stack) -> CheckResult:
    vals = linalg.eigh(stack, check=False).eigenvalues
    trace = np.abs(np.trace(stack, axis1=1, axis2=2) - 1.0)
    herm = np.max(np.abs(stack - linalg.dagger(stack)), axis=(1, 2))
    neg = np.clip(-vals[:, 0], 0.0, None)
    return _result("state-validity", np.maximum(np.maximum(trace, herm), neg))


def check_channel(grid) -> list:
    complete, closed, identity = [], [], []
    zz = linalg.kron(linalg.SIGMA_Z, linalg.I2)
    for g in grid.gamma_values:
        complete.append(channel.kraus_dephasing(g).completeness_error())
    for params in _points(grid):
        base = model.rho12(params)
        for g in grid.gamma_values:
            via_kraus = channel.apply_local_channel(base, channel.kraus_dephasing(g)).rho
            closed.append(_max_abs(via_kraus - channel.dephase_rho12_closed(params, g).rho))
            expected = (1 - g / 2) * base.rho + (g / 2) * zz @ base.rho @ zz
            identity.append(_max_abs(via_kraus - expected))
    return [
        _result("kraus-completeness", complete),
        _result("kraus-vs-closed-channel", closed),
        _result("channel-operator-identity", identity),
    ]


def check_qfi_sld(stack, name: str = "qfi-vs-sld", generators=None) -> CheckResult:
    if generators is None:
        generators = [measures.axis_generator(a) for a in GENERATOR_AXES]
    errors = []
    for rho in stack:
        for h in generators:
            errors.append(abs(measures.qfi(rho, h) - measures.qfi_via_sld(rho, h)))
    return _result(name, errors)


def check_pure_variance(splits) -> CheckResult:
    errors = []
    for split in splits:
        rho = split.density_matrix().rho
        for axis in GENERATOR_AXES:
            h = measures.axis_generator(axis)
            errors.append(abs(measures.qfi(rho, h) - measures.pure_qfi_variance(split.vector, h)))
    return _result("pure-qfi-variance", errors)


def check_bruteforce(stack, q, u) -> list:
    out = []
    for name, values, brute in (
        ("lqfi-spectral-vs-bruteforce", q, measures.lqfi_bruteforce),
        ("lqu-spectral-vs-bruteforce", u, measures.lqu_bruteforce),
    ):
        sampled = np.array([brute(rho) for rho in stack])
        bracket_ok = bool(np.all(values <= sampled + BRACKET_SLACK))
        out.append(_result(name, np.abs(values - sampled), bracket_ok))
    return out


def luo_violation(q, u) -> np.ndarray:
    """Amount by which ``U <= Q <= 2U`` fails (0 where it holds)."""
    return np.maximum(np.maximum(u - q, q - 2 * u), 0.0)


def check_pure_equality(splits) -> CheckResult:
    if not splits:
        return _result("pure-state-equality", [])
    stack = np.stack([s.density_matrix().rho for s in splits])
    q = measures.lqfi_many(stack)[0]
    u = measures.lqu_many(stack)[0]
    return _result("pure-state-equality", np.abs(q - u))


def is_classical_point(params: ModelParams, gamma: float) -> bool:
    return params.p == 0.0 or (params.p == 1.0 and params.m == 0) or gamma == 1.0


def check_zero_on_classical(labels, q, u) -> CheckResult:
    errors = [max(abs(qv), abs(uv)) for (params, g), qv, uv in zip(labels, q, u) if is_classical_point(params, g)]
    return _result("zero-on-classical", errors)


def random_states(count: int, rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """Mixed states ``G G^H / Tr`` from complex Ginibre matrices of random rank."""
    out = np.empty((count, dim, dim), dtype=complex)
    for i in range(count):
        rank = int(rng.integers(1, dim + 1))
        g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
        rho = g @ g.conj().T
        out[i] = rho / np.trace(rho).real
    return out


def random_hermitian(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def check_random(seed: int = RANDOM_SEED, n_qfi: int = 1000, n_luo: int = 500) -> list:
    rng = np.random.default_rng(seed)
    states = random_states(n_qfi, rng)
    errors = [abs(measures.qfi(rho, h) - measures.qfi_via_sld(rho, h)) for rho, h in ((r, random_hermitian(rng)) for r in states)]
    qfi_check = _result("random-qfi-vs-sld", errors)
    luo_states = random_states(n_luo, rng)
    q = measures.lqfi_many(luo_states)[0]
    u = measures.lqu_many(luo_states)[0]
    return [qfi_check, _result("random-luo-sandwich", luo_violation(q, u))]


# ---------------------------------------------------------------------------
# driver


def oracle_checks(grid, strict: bool = False) -> list:
    labels, stack = grid_states(grid)
    q = measures.lqfi_many(stack)[0]
    u = measures.lqu_many(stack)[0]
    splits = _pure_splits(grid)
    checks = [
        check_partial_trace(grid),
        check_state_validity(stack),
        *check_channel(grid),
        check_qfi_sld(stack),
        check_pure_variance(splits),
        *check_bruteforce(stack, q, u),
        _result("luo-sandwich", luo_violation(q, u)),
        check_pure_equality(splits),
        check_zero_on_classical(labels, q, u),
    ]
    if strict:
        checks.extend(check_random())
    return checks


@dataclass(frozen=True)
class VerifyOutcome:
    report: dict
    exit_code: int
    summary: str


def run_verify(grid_name: str, strict: bool = False, workers: int = 1, progress: Callable[[str], None] | None = None) -> VerifyOutcome:
    if grid_name not in GRIDS:
        raise InvalidParams(f"unknown grid {grid_name!r}; expected one of {', '.join(GRIDS)}")
    grid = GRIDS[grid_name]
    checks = oracle_checks(grid, strict=strict)
    if progress:
        progress(f"oracle checks done ({sum(c.passed for c in checks)}/{len(checks)} passed)")
    records = closed_forms.compare_all(grid, workers=workers)
    counts = closed_forms.summarize(records)
    report = {
        "grid": {
            "name": grid_name,
            "p_values": list(grid.p_values),
            "n_values": list(grid.n_values),
            "m_values": list(grid.m_values),
            "gamma_values": list(grid.gamma_values),
        },
        "oracle_checks": [c.to_dict() for c in checks],
        "discrepancies": [r.to_dict() for r in records],
        "summary": counts,
    }
    failed = [c.name for c in checks if not c.passed]
    summary = (
        f"verify {grid_name}: {len(checks) - len(failed)}/{len(checks)} oracle checks passed; "
        f"{len(records)} discrepancy records (MATCH {counts['MATCH']}, MISMATCH {counts['MISMATCH']}, "
        f"UNDEFINED {counts['UNDEFINED']})"
    )
    if failed:
        summary += "; FAILED: " + ", ".join(failed)
    return VerifyOutcome(report, 2 if failed else 0, summary)


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
