"""Parameter sweeps and figure grids written as deterministic CSV.

Rows are computed per ``(n, m)`` group as one stacked batch of density
matrices, optionally in worker processes, and sorted after the merge, so
the output never depends on completion order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import channel, closed_forms, measures, model
from .errors import InvalidParams
from .model import ModelParams

QUANTITIES = ("qfi", "lqfi", "lqu", "lqfi-dc", "lqu-dc")
DEPHASED = ("lqfi-dc", "lqu-dc")
METHODS = ("numeric", "paper", "both")
CSV_HEADER = ("p", "n", "m", "gamma", "quantity", "method", "value")
UNDEFINED = "undefined"

FIGURE_N = (3, 4, 5, 10, 25)
FIGURE_N_DEPHASED = (3, 4, 5, 25)
FIGURES = {
    "fig1": ("lqfi", 0),
    "fig2": ("lqfi", 1),
    "fig3": ("lqu", 0),
    "fig4": ("lqu", 1),
    "fig5": ("lqfi-dc", 0),
    "fig6": ("lqfi-dc", 1),
    "fig7": ("lqu-dc", 0),
    "fig8": ("lqu-dc", 1),
}


def format_value(x) -> str:
    """Fixed-point with 12 fractional digits; ``undefined`` for missing values."""
    if x is None:
        return UNDEFINED
    x = float(x)
    if not math.isfinite(x):
        return UNDEFINED
    text = f"{x:.12f}"
    return "0.000000000000" if text == "-0.000000000000" else text


def parse_grid(text: str, lo: Optional[float] = 0.0, hi: Optional[float] = 1.0) -> tuple:
    """``start:stop:step`` (stop inclusive), a single number, or a comma list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if not step > 0:
                raise InvalidParams(f"grid step must be > 0 in {text!r}")
            if stop < start:
                raise InvalidParams(f"grid stop below start in {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [round(start + i * step, 12) for i in range(count)]
            if abs(values[-1] - stop) <= 1e-9 * max(1.0, abs(stop)):
                values[-1] = stop
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidParams(f"cannot parse grid {text!r}; expected start:stop:step") from None
    if not values:
        raise InvalidParams("grid is empty")
    for v in values:
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            raise InvalidParams(f"grid value {v} outside [{lo}, {hi}]")
    return tuple(sorted(set(values)))


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    method: str
    p_values: tuple
    n_values: tuple
    m_values: tuple
    gamma_values: Optional[tuple] = None
    generator: str = "z"

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise InvalidParams(f"unknown quantity {self.quantity!r}")
        if self.method not in METHODS:
            raise InvalidParams(f"unknown method {self.method!r}")
        if not self.p_values or not self.n_values or not self.m_values:
            raise InvalidParams("sweep grids must be non-empty")
        if any(not 0 <= p <= 1 for p in self.p_values):
            raise InvalidParams("p values must lie in [0, 1]")
        if any(n < 3 for n in self.n_values):
            raise InvalidParams("reduced two-mode states need n >= 3")
        if any(m not in (0, 1) for m in self.m_values):
            raise InvalidParams("m values must be 0 or 1")
        if self.quantity in DEPHASED and not self.gamma_values:
            raise InvalidParams(f"{self.quantity} needs a gamma grid")
        if self.quantity in ("lqfi", "lqu") and self.gamma_values:
            raise InvalidParams(f"{self.quantity} is undephased; use {self.quantity}-dc with a gamma grid")
        if self.gamma_values and any(not 0 <= g <= 1 for g in self.gamma_values):
            raise InvalidParams("gamma values must lie in [0, 1]")

    @property
    def methods(self) -> tuple:
        return ("numeric", "paper") if self.method == "both" else (self.method,)


@dataclass(frozen=True)
class SweepRow:
    p: float
    n: int
    m: int
    gamma: Optional[float]
    quantity: str
    method: str
    value: Optional[float]

    def sort_key(self):
        return (self.quantity, self.m, self.n, self.p, -1.0 if self.gamma is None else self.gamma, self.method)

    def csv_fields(self) -> list:
        return [
            format_value(self.p),
            str(self.n),
            str(self.m),
            "" if self.gamma is None else format_value(self.gamma),
            self.quantity,
            self.method,
            format_value(self.value),
        ]


# ---------------------------------------------------------------------------
# point evaluation


def state_matrix(params: ModelParams, gamma: Optional[float] = None, split_k: Optional[int] = None) -> np.ndarray:
    """Density matrix probed by the CLI: the reduced state or a pure k-split, optionally dephased."""
    if split_k is not None:
        rho = model.pure_split_state(params, split_k).density_matrix().rho
    else:
        rho = model.rho12(params).rho
    if gamma is not None:
        rho = channel.dephase_matrix(rho, gamma)
    return rho


def numeric_value(quantity: str, params: ModelParams, gamma=None, split_k=None, generator: str = "z"):
    rho = state_matrix(params, gamma, split_k)
    if quantity == "qfi":
        return measures.qfi(rho, measures.axis_generator(generator))
    if quantity in ("lqfi", "lqfi-dc"):
        return measures.lqfi(rho).value
    return measures.lqu(rho).value


def paper_value(quantity: str, params: ModelParams, gamma=None, split_k=None):
    """Printed closed form for the reduced state; ``None`` where none exists."""
    if split_k is not None or quantity == "qfi":
        return None
    if quantity == "lqfi":
        return closed_forms.lqfi_closed(params)
    if quantity == "lqu":
        return closed_forms.lqu_omegas_closed(params).lqu
    if quantity == "lqfi-dc":
        return closed_forms.lqfi_dc_printed(params, gamma)
    return closed_forms.lqu_dc_printed(params, gamma)


def _group_rows(spec: SweepSpec, n: int, m: int) -> list:
    gammas = list(spec.gamma_values) if spec.gamma_values else [None]
    points = [(p, g) for p in spec.p_values for g in gammas]
    rows = []
    if "numeric" in spec.methods:
        stack = np.empty((len(points), 4, 4), dtype=complex)
        for idx, (p, g) in enumerate(points):
            stack[idx] = state_matrix(ModelParams(p, n, m), g)
        if spec.quantity == "qfi":
            gen = measures.axis_generator(spec.generator)
            values = [measures.qfi(rho, gen) for rho in stack]
        elif spec.quantity in ("lqfi", "lqfi-dc"):
            values = measures.lqfi_many(stack)[0]
        else:
            values = measures.lqu_many(stack)[0]
        for (p, g), v in zip(points, values):
            rows.append(SweepRow(p, n, m, g, spec.quantity, "numeric", float(v)))
    if "paper" in spec.methods:
        for p, g in points:
            rows.append(SweepRow(p, n, m, g, spec.quantity, "paper", paper_value(spec.quantity, ModelParams(p, n, m), g)))
    return rows


def _group_task(args):
    return _group_rows(*args)


def default_workers() -> int:
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    groups = [(spec, n, m) for n in spec.n_values for m in spec.m_values]
    rows = []
    if workers > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(groups))) as pool:
            for chunk in pool.map(_group_task, groups):
                rows.extend(chunk)
    else:
        for group in groups:
            rows.extend(_group_rows(*group))
    rows.sort(key=SweepRow.sort_key)
    return rows


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def rows_to_json(rows: Sequence[SweepRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# figures


def figure_specs(fig_id: str, resolution: int = 101) -> list:
    """``[(filename, SweepSpec), ...]`` for one figure id."""
    if fig_id not in FIGURES:
        raise InvalidParams(f"unknown figure {fig_id!r}; expected one of {', '.join(FIGURES)}")
    if resolution < 2:
        raise InvalidParams("figure resolution must be at least 2")
    quantity, m = FIGURES[fig_id]
    axis = tuple(float(v) for v in np.linspace(0.0, 1.0, resolution))
    if quantity in DEPHASED:
        return [
            (f"{fig_id}_n{n}.csv", SweepSpec(quantity, "both", axis, (n,), (m,), gamma_values=axis))
            for n in FIGURE_N_DEPHASED
        ]
    return [(f"{fig_id}.csv", SweepSpec(quantity, "both", axis, FIGURE_N, (m,)))]


def run_figure(fig_id: str, outdir, resolution: int = 101, workers: int = 1) -> list:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    specs = figure_specs(fig_id, resolution)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(specs))) as pool:
            results = list(pool.map(run_sweep, [s for _, s in specs]))
    else:
        results = [run_sweep(s, workers) for _, s in specs]
    for (name, _), rows in zip(specs, results):
        path = outdir / name
        write_text(path, rows_to_csv(rows))
        written.append(path)
    return written
