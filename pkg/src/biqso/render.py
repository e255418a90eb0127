"""Text renderings of reports, classifications and trajectories.

Machine formats (json-lines, csv) write floats with ``repr`` so they parse
back to the identical double; human tables use 6 significant digits.
"""

from __future__ import annotations

import io
import json
from typing import Iterable, Optional, TextIO

import numpy as np

from .contraction import ContractionReport
from .dynamics import LipschitzEstimate, TrajectoryClassification
from .model import PopulationState

FORMATS = ("table", "json", "csv")
UNDEFINED = "undefined"


def _num(v: float) -> str:
    return f"{v:.6g}"


def _verdict(v: Optional[bool]) -> str:
    if v is None:
        return UNDEFINED
    return "yes" if v else "no"


def _jsonable(v):
    if v is None:
        return UNDEFINED
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def state_text(z: PopulationState, digits: Optional[int] = 6) -> str:
    fmt = (lambda v: f"{v:.{digits}g}") if digits else (lambda v: repr(float(v)))
    return "(" + ", ".join(fmt(v) for v in z.z) + ")"


def _state_json(z: PopulationState) -> dict:
    return {"x": [float(v) for v in z.x], "y": [float(v) for v in z.y]}


_REPORT_ROWS = [
    ("zeta", "zeta"),
    ("zeta_term_female", "zeta female-parent term"),
    ("zeta_argmax_female", "  argmax (i1, i2, j)"),
    ("zeta_term_male", "zeta male-parent term"),
    ("zeta_argmax_male", "  argmax (j1, j2, i)"),
    ("is_strict_contraction_by_cor1", "strict contraction (zeta < 1)"),
    ("mu_f", "mu_f"),
    ("mu_m", "mu_m"),
    ("lemma4_bound", "ratio bound on zeta"),
    ("corollary3_holds", "7 mu_f mu_m - (mu_f + mu_m) < 9"),
    ("corollary4_bound", "8 (mu - 1)/(mu + 1), mu = max"),
    ("corollary4_holds", "mu < 9/7"),
]


def render_report(report: ContractionReport, fmt: str = "table") -> str:
    d = report.as_dict()
    if fmt == "json":
        return json.dumps({k: _jsonable(d[k]) for k, _ in _REPORT_ROWS}) + "\n"
    if fmt == "csv":
        rows = ["field,value"]
        for k, _ in _REPORT_ROWS:
            v = d[k]
            if isinstance(v, bool) or v is None:
                s = _verdict(v)
            elif isinstance(v, tuple):
                s = " ".join(str(i) for i in v)
            else:
                s = repr(float(v))
            rows.append(f"{k},{s}")
        return "\n".join(rows) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    width = max(len(label) for _, label in _REPORT_ROWS)
    out = []
    for k, label in _REPORT_ROWS:
        v = d[k]
        if isinstance(v, bool) or v is None:
            s = _verdict(v)
        elif isinstance(v, tuple):
            s = str(v)
        else:
            s = _num(v)
        out.append(f"{label:<{width}}  {s}")
    return "\n".join(out) + "\n"


def render_classification(c: TrajectoryClassification, fmt: str = "table") -> str:
    if fmt == "json":
        obj = {"verdict": c.kind, "steps": c.steps, "tol": c.tol, "max_steps": c.max_steps}
        if c.periodic:
            obj["period"] = c.period
            obj["cycle"] = [_state_json(s) for s in c.cycle]
        else:
            obj["state"] = _state_json(c.state)
        return json.dumps(obj) + "\n"
    if fmt == "csv":
        head = "verdict,steps,period," + ",".join(
            [f"x{i + 1}" for i in range(c.state.n)] + [f"y{j + 1}" for j in range(c.state.nu)]
        )
        states = c.cycle if c.periodic else [c.state]
        period = str(c.period) if c.periodic else ""
        rows = [head] + [
            f"{c.kind},{c.steps},{period}," + ",".join(repr(float(v)) for v in s.z)
            for s in states
        ]
        return "\n".join(rows) + "\n"
    if c.converged:
        return f"converged {state_text(c.state)} steps={c.steps}\n"
    if c.periodic:
        cyc = " -> ".join(state_text(s) for s in c.cycle)
        return f"periodic period={c.period} steps={c.steps} cycle={cyc}\n"
    return f"undecided last={state_text(c.state)} steps={c.steps}\n"


def render_lipschitz(est: LipschitzEstimate, jac_sup: float, zeta: float, fmt: str = "table") -> str:
    z, t = est.witness_pair
    if fmt == "json":
        obj = {
            "samples": est.samples,
            "seed": est.seed,
            "lower_bound": est.lower_bound,
            "jacobian_sup": jac_sup,
            "zeta": zeta,
            "witness_z": _state_json(z),
            "witness_t": _state_json(t),
        }
        return json.dumps(obj) + "\n"
    if fmt == "csv":
        rows = [
            "samples,seed,lower_bound,jacobian_sup,zeta",
            f"{est.samples},{est.seed},{est.lower_bound!r},{jac_sup!r},{zeta!r}",
        ]
        return "\n".join(rows) + "\n"
    return (
        f"samples        {est.samples}\n"
        f"seed           {est.seed}\n"
        f"sampled lower bound   {est.lower_bound!r}\n"
        f"jacobian sup estimate {jac_sup!r}\n"
        f"zeta upper bound      {zeta!r}\n"
        f"witness z  {state_text(z, None)}\n"
        f"witness t  {state_text(t, None)}\n"
    )


class TrajectoryWriter:
    """Streams trajectory rows: ``t, x1..xn, y1..ynu``."""

    def __init__(self, out: TextIO, n: int, nu: int, fmt: str = "csv"):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}")
        self.out, self.n, self.nu, self.fmt = out, n, nu, fmt
        self._header()

    def _header(self) -> None:
        cols = ["t"] + [f"x{i + 1}" for i in range(self.n)] + [f"y{j + 1}" for j in range(self.nu)]
        if self.fmt == "csv":
            self.out.write(",".join(cols) + "\n")
        elif self.fmt == "table":
            self.out.write(" ".join(f"{c:>12}" for c in cols) + "\n")

    def write(self, t: int, x: Iterable[float], y: Iterable[float]) -> None:
        x = [float(v) for v in x]
        y = [float(v) for v in y]
        if self.fmt == "csv":
            self.out.write(",".join([str(t)] + [repr(v) for v in x + y]) + "\n")
        elif self.fmt == "json":
            self.out.write(json.dumps({"t": t, "x": x, "y": y}) + "\n")
        else:
            self.out.write(" ".join([f"{t:>12}"] + [f"{v:>12.6g}" for v in x + y]) + "\n")


def read_trajectory_csv(text: str) -> np.ndarray:
    """Inverse of the csv :class:`TrajectoryWriter`; returns ``(rows, 1 + n + nu)``."""
    lines = [ln for ln in io.StringIO(text).read().splitlines() if ln]
    return np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
