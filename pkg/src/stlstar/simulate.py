"""Repressilator model, fixed-step RK4 integration and parameter sweeps."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .formula import FormulaError, parse
from .signal import Signal, SignalError

SPECIES = ("m1", "m2", "m3", "p1", "p2", "p3")
DEFAULT_INIT = (0.1, 0.3, 0.2, 0.2, 0.1, 0.3)

# Oscillation with period below 50 min, checked on [10, 190].
OSCILLATION = "G[10,190] F[0,50] *((F[1,50] m1* < m1) && (F[1,50] m1* > m1))"
# Peaks do not decrease.  Written with < since boundary points carry no information.
NON_DAMPED = "G[10,200] *(F[1,50] m1* < m1)"
# m3 follows m1 within 30 min.
PRECEDENCE = "G[0,270] *(F[0,30] (m1* + 1 > m3 && m1* - 1 < m3))"


class IntegrationError(ArithmeticError):
    def __init__(self, t: float):
        self.t = t
        super().__init__(f"state became non-finite at t = {t:g}")


@dataclass(frozen=True)
class RepressilatorParams:
    alpha: float = 400.0
    alpha0: float = 0.2
    beta: float = 0.2
    n: float = 2.0
    init: tuple[float, ...] = DEFAULT_INIT
    t_end: float = 300.0
    dt: float = 0.05
    samples: int = 80

    def __post_init__(self):
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))
        problems = []
        if not self.alpha > 0:
            problems.append("alpha must be positive")
        if not self.beta > 0:
            problems.append("beta must be positive")
        if not self.dt > 0:
            problems.append("dt must be positive")
        if not self.t_end > 0:
            problems.append("t_end must be positive")
        if not self.n >= 1:
            problems.append("n must be at least 1")
        if not self.alpha0 >= 0:
            problems.append("alpha0 must be non-negative")
        if len(self.init) != 6 or not all(v >= 0 and math.isfinite(v) for v in self.init):
            problems.append("init must be 6 finite non-negative values")
        if self.samples < 2:
            problems.append("samples must be at least 2")
        if problems:
            raise ValueError("; ".join(problems))


def repressilator_rhs(state: Sequence[float], p: RepressilatorParams) -> np.ndarray:
    """Time derivative of ``(m1, m2, m3, p1, p2, p3)``; p3 represses m1, p1 m2, p2 m3."""
    return np.array(_rhs(tuple(float(v) for v in state), p.alpha, p.alpha0, p.beta, p.n))


# Plain floats: numpy call overhead dominates on a 6-vector.
def _rhs(y, alpha, alpha0, beta, n):
    m1, m2, m3, p1, p2, p3 = y
    return (
        -m1 + alpha / (1.0 + p3 ** n) + alpha0,
        -m2 + alpha / (1.0 + p1 ** n) + alpha0,
        -m3 + alpha / (1.0 + p2 ** n) + alpha0,
        -beta * (p1 - m1),
        -beta * (p2 - m2),
        -beta * (p3 - m3),
    )


def _rk4_step(y, h: float, args) -> tuple:
    k1 = _rhs(y, *args)
    k2 = _rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k1)), *args)
    k3 = _rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k2)), *args)
    k4 = _rhs(tuple(a + h * b for a, b in zip(y, k3)), *args)
    return tuple(a + (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))


def integrate_states(p: RepressilatorParams, steps_per_sample: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """RK4 trajectory at the ``p.samples`` output times, as ``(times, states)``.

    The step is the largest value not above ``p.dt`` that puts every output
    time on the integration grid.  Pass ``steps_per_sample`` to fix the step
    count instead (used for convergence studies).
    """
    interval = p.t_end / (p.samples - 1)
    k = steps_per_sample or max(1, math.ceil(interval / p.dt - 1e-9))
    h = interval / k
    args = (p.alpha, p.alpha0, p.beta, p.n)
    y = tuple(p.init)
    out = np.empty((p.samples, 6))
    out[0] = y
    for i in range(1, p.samples):
        try:
            for _ in range(k):
                y = _rk4_step(y, h, args)
        except (OverflowError, ZeroDivisionError):
            raise IntegrationError(i * interval) from None
        if not all(map(math.isfinite, y)):
            raise IntegrationError(i * interval)
        out[i] = y
    return np.linspace(0.0, p.t_end, p.samples), out


def integrate(p: RepressilatorParams) -> Signal:
    """Sampled trajectory as a six-component signal with schema ``m1..p3``."""
    _, states = integrate_states(p)
    t_end = Fraction(repr(p.t_end))
    times = [t_end * i / (p.samples - 1) for i in range(p.samples)]
    return Signal(SPECIES, times, states)


def fixed_point(p: RepressilatorParams, tol: float = 1e-12) -> float:
    """Root of ``v = alpha / (1 + v**n) + alpha0`` by bisection on ``[0, alpha + alpha0]``."""
    lo, hi = 0.0, p.alpha + p.alpha0
    g = lambda v: p.alpha / (1.0 + v ** p.n) + p.alpha0 - v  # noqa: E731
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


SWEEP_FIELDS = ("alpha", "alpha0", "beta", "n", "formula", "verdict", "wall_ms")


def sweep(grid: Iterable[RepressilatorParams | dict], formulas: Sequence[str],
          base: RepressilatorParams | None = None) -> list[dict]:
    """Integrate and monitor every grid cell against every formula.

    Grid entries are parameter objects or dicts of overrides on ``base``.
    A cell that fails records ``ERROR: ...`` as its verdict and the sweep
    carries on.  Rows come out in grid order, then formula order.
    """
    from .satset import monitor

    base = base or RepressilatorParams()
    rows: list[dict] = []
    for cell in grid:
        started = time.perf_counter()
        try:
            p = cell if isinstance(cell, RepressilatorParams) else replace(base, **cell)
            key = {"alpha": p.alpha, "alpha0": p.alpha0, "beta": p.beta, "n": p.n}
        except (TypeError, ValueError) as exc:
            key = {k: (cell.get(k, "") if isinstance(cell, dict) else "") for k in ("alpha", "alpha0", "beta", "n")}
            rows += [{**key, "formula": f, "verdict": f"ERROR: {exc}", "wall_ms": 0.0} for f in formulas]
            continue
        try:
            s = integrate(p)
        except (IntegrationError, SignalError) as exc:
            ms = (time.perf_counter() - started) * 1000.0
            rows += [{**key, "formula": f, "verdict": f"ERROR: {exc}", "wall_ms": round(ms, 3)} for f in formulas]
            continue
        for text in formulas:
            t0 = time.perf_counter()
            try:
                verdict = monitor(s, parse(text, s.schema)).verdict.value
            except (FormulaError, SignalError) as exc:
                verdict = f"ERROR: {exc}"
            rows.append({**key, "formula": text, "verdict": verdict,
                         "wall_ms": round((time.perf_counter() - t0) * 1000.0, 3)})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def load_grid(path) -> list[dict]:
    """Read a grid CSV whose header names any of the parameter fields."""
    allowed = {"alpha", "alpha0", "beta", "n", "t_end", "dt", "samples"}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        unknown = set(reader.fieldnames or ()) - allowed
        if unknown:
            raise ValueError(f"unknown grid columns: {', '.join(sorted(unknown))}")
        cells = []
        for row in reader:
            cell: dict = {}
            for k, v in row.items():
                if v is None or v.strip() == "":
                    continue
                cell[k] = int(v) if k == "samples" else float(v)
            cells.append(cell)
    return cells
