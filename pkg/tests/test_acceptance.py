"""Acceptance criteria 1-8, each at its stated tolerance.

Every test records a single PASS/FAIL line (shown in the pytest terminal
summary) before asserting.  Run directly with ``python3
tests/test_acceptance.py`` to print the lines without pytest.
"""

import itertools
import json
import math
import time

import numpy as np

from glaubercorr import channel, cli, closed_forms, measures, model
from glaubercorr.model import ModelParams

from conftest import (
    ACCEPTANCE_LINES,
    GRID_GAMMA,
    LOCAL,
    grid_params,
    random_density,
    random_hermitian,
    random_pure,
)

SEED = 20240611


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def dephased_grid():
    return [(params, g, channel.dephase_rho12_closed(params, g).rho) for params in grid_params() for g in GRID_GAMMA]


def test_criterion_1_model_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for params in grid_params():
        diff = np.max(np.abs(model.rho12(params).rho - model.rho12_via_partial_trace(params).rho))
        worst = max(worst, float(diff))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 60
    record(1, "rho12 vs partial trace", ok, f"max |diff| = {worst:.2e} (< 1e-12), {elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_2_channel_consistency():
    za = LOCAL[2]
    complete = closed = identity = 0.0
    for params in grid_params():
        base = model.rho12(params).rho
        for g in GRID_GAMMA:
            kraus = channel.kraus_dephasing(g)
            complete = max(complete, kraus.completeness_error())
            via_kraus = channel.apply_local_channel(base, kraus).rho
            closed = max(closed, float(np.max(np.abs(via_kraus - channel.dephase_rho12_closed(params, g).rho))))
            expected = (1 - g / 2) * base + (g / 2) * za @ base @ za
            identity = max(identity, float(np.max(np.abs(via_kraus - expected))))
    ok = max(complete, closed, identity) < 1e-13
    record(
        2,
        "channel consistency",
        ok,
        f"completeness {complete:.1e}, Kraus vs closed form {closed:.1e}, operator identity {identity:.1e} (all < 1e-13)",
    )
    assert ok


def test_criterion_3_qfi_cross_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    sld_err = var_err = 0.0
    for _ in range(1000):
        rho, h = random_density(rng), random_hermitian(rng)
        sld_err = max(sld_err, abs(measures.qfi(rho, h) - measures.qfi_via_sld(rho, h)))
        psi, h2 = random_pure(rng), random_hermitian(rng)
        var_err = max(var_err, abs(measures.qfi(np.outer(psi, psi.conj()), h2) - measures.pure_qfi_variance(psi, h2)))
    for _, _, rho in dephased_grid():
        for h in LOCAL:
            sld_err = max(sld_err, abs(measures.qfi(rho, h) - measures.qfi_via_sld(rho, h)))
    for params in grid_params():
        for k in range(1, params.n):
            split = model.pure_split_state(params, k)
            rho = split.density_matrix().rho
            for h in LOCAL:
                var_err = max(var_err, abs(measures.qfi(rho, h) - measures.pure_qfi_variance(split.vector, h)))
    elapsed = time.perf_counter() - start
    ok = sld_err < 1e-10 and var_err < 1e-10 and elapsed < 30
    record(3, "QFI cross-oracles", ok, f"|qfi - sld| {sld_err:.1e}, |qfi - 4 Var| {var_err:.1e} (< 1e-10), {elapsed:.1f} s (< 30 s)")
    assert ok


def test_criterion_4_limit_points():
    classical = [ModelParams(0.0, n, m) for n in range(3, 26) for m in (0, 1)]
    classical += [ModelParams(1.0, n, 0) for n in range(3, 26)]
    stack = [model.rho12(p).rho for p in classical]
    stack += [channel.dephase_rho12_closed(params, 1.0).rho for params in grid_params()]
    stack = np.stack(stack)
    worst_zero = float(max(np.max(np.abs(measures.lqfi_many(stack)[0])), np.max(np.abs(measures.lqu_many(stack)[0]))))

    bell_err = qfi_err = 0.0
    for n in range(2, 12):
        for k in range(1, n):
            split = model.pure_split_state(ModelParams(0.0, n, 0), k)
            rho = split.density_matrix().rho
            bell_err = max(bell_err, abs(measures.lqfi(rho).value - 1), abs(measures.lqu(rho).value - 1))
            qfi_err = max(qfi_err, abs(measures.qfi(rho, LOCAL[2]) - 4))
    ok = worst_zero < 1e-8 and bell_err < 1e-9 and qfi_err < 1e-10
    record(
        4,
        "limit-point values",
        ok,
        f"max Q,U at classical points {worst_zero:.1e} (< 1e-8); |Q-1|,|U-1| for the Bell probe {bell_err:.1e} (< 1e-9); "
        f"|F - 4| {qfi_err:.1e} (< 1e-10)",
    )
    assert ok


def test_criterion_5_luo_sandwich():
    rng = np.random.default_rng(SEED + 1)
    mixed = [rho for _, _, rho in dephased_grid()] + [random_density(rng) for _ in range(500)]
    stack = np.stack(mixed)
    q, u = measures.lqfi_many(stack)[0], measures.lqu_many(stack)[0]
    lower = float(np.max(u - q))
    upper = float(np.max(q - 2 * u))

    pures = [model.pure_split_state(params, k).vector for params in grid_params() for k in range(1, params.n)]
    pures += [random_pure(rng) for _ in range(500)]
    pstack = np.stack([np.outer(v, v.conj()) for v in pures])
    equality = float(np.max(np.abs(measures.lqfi_many(pstack)[0] - measures.lqu_many(pstack)[0])))

    ok = lower <= 1e-9 and upper <= 1e-9 and equality < 1e-9
    record(
        5,
        "Luo sandwich",
        ok,
        f"max(U - Q) {lower:.1e}, max(Q - 2U) {upper:.1e} (<= 1e-9) over {len(stack)} states; "
        f"pure |Q - U| {equality:.1e} (< 1e-9) over {len(pstack)} states",
    )
    assert ok


def test_criterion_6_spectral_vs_bruteforce():
    start = time.perf_counter()
    states = dephased_grid()[::8][:100]
    assert len(states) == 100
    q_gap = u_gap = 0.0
    bracket = True
    for _, _, rho in states:
        q, u = measures.lqfi(rho).value, measures.lqu(rho).value
        q_bf, u_bf = measures.lqfi_bruteforce(rho, 20000), measures.lqu_bruteforce(rho, 20000)
        q_gap, u_gap = max(q_gap, abs(q - q_bf)), max(u_gap, abs(u - u_bf))
        bracket &= q <= q_bf + 1e-9 and u <= u_bf + 1e-9
    elapsed = time.perf_counter() - start
    ok = q_gap <= 1e-4 and u_gap <= 1e-4 and bracket and elapsed < 120
    record(
        6,
        "spectral vs brute force",
        ok,
        f"LQFI gap {q_gap:.1e}, LQU gap {u_gap:.1e} (<= 1e-4) on 100 states x 20000 directions, {elapsed:.1f} s (< 120 s)",
    )
    assert ok


def test_criterion_7_discrepancy_suite(tmp_path):
    report_path = tmp_path / "report.json"
    code = cli.main(["verify", "--grid", "coarse", "--report", str(report_path)])
    report = json.loads(report_path.read_text())
    checks_ok = all(c["passed"] for c in report["oracle_checks"])
    recs = report["discrepancies"]
    at_zero = [r for r in recs if r["p"] == 0.0]
    lqfi_zero = [r for r in at_zero if r["quantity"] == "Eq33-LQFI"]
    lqu_zero = [r for r in at_zero if r["quantity"] == "Eq38-40-omegas"]
    lqfi_ok = bool(lqfi_zero) and all(
        r["verdict"] == "MISMATCH" and abs(r["paper"] - 0.5) < 1e-12 and abs(r["numeric"]) < 1e-8 for r in lqfi_zero
    )
    lqu_ok = bool(lqu_zero) and all(r["verdict"] == "MISMATCH" and abs(r["numeric"]) < 1e-8 for r in lqu_zero)
    lqu_ok &= any(abs(r["paper"] - (1 - math.sqrt(2) / 4)) < 1e-12 for r in lqu_zero)
    small_p = min(r["p"] for r in recs if r["quantity"] == "Eq26-eigs")
    eig_ok = all(r["verdict"] in ("UNDEFINED", "MISMATCH") for r in recs if r["quantity"] == "Eq26-eigs" and r["p"] == small_p)
    grid = report["grid"]
    points = set(itertools.product(grid["p_values"], grid["n_values"], grid["m_values"], grid["gamma_values"]))
    coverage = all(
        {(r["p"], r["n"], r["m"], r["gamma"]) for r in recs if r["quantity"] == fam} == points for fam in closed_forms.FAMILIES
    )
    ok = code == 0 and checks_ok and lqfi_ok and lqu_ok and eig_ok and coverage
    record(
        7,
        "discrepancy suite",
        ok,
        f"exit {code}, {sum(c['passed'] for c in report['oracle_checks'])}/{len(report['oracle_checks'])} oracle checks, "
        f"p=0 LQFI MISMATCH {lqfi_ok}, p=0 LQU MISMATCH {lqu_ok}, small-p eigenvalues flagged {eig_ok}, "
        f"{len(recs)} records covering 6 families x {len(points)} points {coverage}",
    )
    assert ok


def test_criterion_8_figure_reproduction(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    start = time.perf_counter()
    code = cli.main(["figure", "all", "--outdir", str(first)])
    elapsed = time.perf_counter() - start
    code2 = cli.main(["figure", "all", "--outdir", str(second)])
    files = sorted(p.name for p in first.iterdir())
    identical = files == sorted(p.name for p in second.iterdir()) and all(
        (first / f).read_bytes() == (second / f).read_bytes() for f in files
    )
    both_methods = True
    vanish = 0.0
    for f in files:
        lines = (first / f).read_text().splitlines()[1:]
        methods = {line.split(",")[5] for line in lines}
        both_methods &= methods == {"numeric", "paper"}
        if f.startswith(("fig7", "fig8")):
            for line in lines:
                p, n, m, gamma, quantity, method, value = line.split(",")
                if method == "numeric" and gamma and float(gamma) == 1.0:
                    vanish = max(vanish, abs(float(value)))
    expected_files = 4 + 4 * 4
    ok = code == code2 == 0 and len(files) == expected_files and identical and both_methods and vanish < 1e-8 and elapsed < 300
    record(
        8,
        "figure reproduction",
        ok,
        f"{len(files)} CSV files, byte-identical rerun {identical}, both methods {both_methods}, "
        f"fig7/fig8 numeric at gamma=1 max {vanish:.1e} (< 1e-8), {elapsed:.1f} s (< 300 s)",
    )
    assert ok


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    tests = [
        test_criterion_1_model_oracle_equivalence,
        test_criterion_2_channel_consistency,
        test_criterion_3_qfi_cross_oracles,
        test_criterion_4_limit_points,
        test_criterion_5_luo_sandwich,
        test_criterion_6_spectral_vs_bruteforce,
    ]
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
    with tempfile.TemporaryDirectory() as tmp:
        for fn in (test_criterion_7_discrepancy_suite, test_criterion_8_figure_reproduction):
            try:
                fn(Path(tmp) / fn.__name__)
            except AssertionError:
                pass
