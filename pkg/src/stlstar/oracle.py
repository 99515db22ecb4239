"""Reference monitor evaluated column by column on a ``(t, t*)`` lattice.

The polygon engine is checked against this module, so it shares no geometry
with it.  For a fixed frozen time ``t*`` every subformula is a union of open
intervals along ``t``; these are computed exactly with the textbook interval
algorithm for bounded until.  Freeze needs the child on the diagonal
``t = t*``, which is sampled on the lattice and refined by bisection where
the sampled truth value changes.  Features narrower than the lattice step
can therefore be missed, but quantifier witnesses never are.

Sets are regular open: boundary points are dropped and gaps narrower than
``tol`` are filled, which mirrors the engine's boundary don't-care policy.
Filling point gaps is only right on a column that meets every boundary edge
transversally, so a lattice column ``t* = c`` is read off the column at
``c + offset`` (breakpoints and vertices often sit exactly on lattice
columns), and a diagonal point counts only when it is covered just above and
just below the diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .formula import (
    And,
    Atomic,
    Cmp,
    Eventually,
    Formula,
    Freeze,
    Globally,
    Implies,
    Not,
    Or,
    TrueF,
    Until,
    check_schema,
)
from .geometry import Region
from .signal import Signal, check_length

Intervals = list[tuple[float, float]]


@dataclass(frozen=True)
class GridSpec:
    """Lattice step; the lattice is ``{0, delta, 2*delta, ...}`` plus every breakpoint."""

    delta: Fraction

    def __post_init__(self):
        d = Fraction(self.delta)
        if d <= 0:
            raise ValueError("lattice step must be positive")
        object.__setattr__(self, "delta", d)

    def points(self, s: Signal) -> np.ndarray:
        n = int(s.length / self.delta)
        pts = {k * self.delta for k in range(n + 1)} | set(s.times)
        return np.array([float(p) for p in sorted(pts)])


def default_grid(s: Signal) -> GridSpec:
    return GridSpec(min(b - a for a, b in s.segment_partition()) / 8)


# -- interval algebra on [0, r] ---------------------------------------------------------


class _Line:
    """Open-interval sets on ``[0, r]``, relatively open at the two ends."""

    def __init__(self, r: float, tol: float):
        self.r = r
        self.tol = tol
        self.full: Intervals = [(0.0, r)]

    def norm(self, iv: Intervals) -> Intervals:
        out: Intervals = []
        for lo, hi in sorted((max(lo, 0.0), min(hi, self.r)) for lo, hi in iv):
            if hi - lo <= self.tol:
                continue
            if out and lo <= out[-1][1] + self.tol:
                out[-1] = (out[-1][0], max(out[-1][1], hi))
            else:
                out.append((lo, hi))
        return out

    def neg(self, iv: Intervals) -> Intervals:
        gaps, cur = [], 0.0
        for lo, hi in iv:
            gaps.append((cur, lo))
            cur = hi
        gaps.append((cur, self.r))
        return self.norm(gaps)

    def meet(self, a: Intervals, b: Intervals) -> Intervals:
        out, i, j = [], 0, 0
        while i < len(a) and j < len(b):
            lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return self.norm(out)

    def until(self, s1: Intervals, s2: Intervals, a: float, b: float) -> Intervals:
        # t works iff t and some witness t' in [t+a, t+b] share one interval of s1
        out = []
        for l1, u1 in s1:
            for l2, u2 in s2:
                p, q = max(l1, l2), min(u1, u2)
                if p >= q:
                    continue
                if q >= self.r:
                    q = self.r + self.tol  # the witness may sit on the end point
                out.append((max(p - b, l1), min(q - a, u1)))
        return self.norm(out)

    def contains(self, iv: Intervals, t: float) -> bool:
        for lo, hi in iv:
            if (lo < t or (lo <= 0.0 and t <= 0.0)) and (t < hi or (hi >= self.r and t >= self.r)):
                return True
        return False


def _atom(s: Signal, f: Atomic, tstar: float, line: _Line) -> Intervals:
    p = f.pred
    sign = 1.0 if p.cmp is Cmp.GT else -1.0
    frozen_val = s.sample([tstar])[0]
    c = sum(k * frozen_val[i] for i, k in p.frozen) - p.bound
    g = sign * (sum(k * s.values[:, i] for i, k in p.plain) + c) if p.plain else np.full(len(s.tf), sign * c)
    out = []
    for k in range(s.segments):
        t0, t1 = s.tf[k], s.tf[k + 1]
        g0, g1 = g[k], g[k + 1]
        if g0 > 0 and g1 > 0:
            out.append((t0, t1))
        elif g0 > 0 or g1 > 0:
            root = t0 + (t1 - t0) * g0 / (g0 - g1)
            out.append((t0, root) if g0 > 0 else (root, t1))
    return line.norm(out)


class _Evaluator:
    def __init__(self, s: Signal, lattice: np.ndarray, tol: float, offset: float):
        self.s = s
        self.lattice = lattice
        self.line = _Line(float(s.length), tol)
        self.offset = offset
        self.cols: dict[tuple[Formula, float], Intervals] = {}
        self.diag: dict[Formula, Intervals] = {}

    def column(self, f: Formula, tstar: float) -> Intervals:
        key = (f, tstar)
        if key in self.cols:
            return self.cols[key]
        L = self.line
        col = self.column
        if isinstance(f, Atomic):
            out = _atom(self.s, f, tstar, L)
        elif isinstance(f, TrueF):
            out = L.full
        elif isinstance(f, Not):
            out = L.neg(col(f.child, tstar))
        elif isinstance(f, Or):
            out = L.norm(col(f.left, tstar) + col(f.right, tstar))
        elif isinstance(f, And):
            out = L.meet(col(f.left, tstar), col(f.right, tstar))
        elif isinstance(f, Implies):
            out = L.norm(L.neg(col(f.left, tstar)) + col(f.right, tstar))
        elif isinstance(f, Until):
            out = L.until(col(f.left, tstar), col(f.right, tstar), float(f.lo), float(f.hi))
        elif isinstance(f, Eventually):
            out = L.until(L.full, col(f.child, tstar), float(f.lo), float(f.hi))
        elif isinstance(f, Globally):
            out = L.neg(L.until(L.full, L.neg(col(f.child, tstar)), float(f.lo), float(f.hi)))
        elif isinstance(f, Freeze):
            out = self.diagonal(f.child)
        else:
            raise TypeError(f"not a formula node: {f!r}")
        self.cols[key] = out
        return out

    def diagonal(self, child: Formula) -> Intervals:
        """``{t : child holds at (t, t)}``, sampled on the lattice and bisected at changes."""
        if child in self.diag:
            return self.diag[child]
        L = self.line
        h = self.offset

        def on_diag(t: float) -> bool:
            above = t + h > L.r or L.contains(self.column(child, t + h), t)
            below = t - h < 0.0 or L.contains(self.column(child, t - h), t)
            return above and below

        ts = self.lattice
        vals = [on_diag(float(t)) for t in ts]
        out, start = [], (0.0 if vals[0] else None)
        for k in range(1, len(ts)):
            if vals[k] != vals[k - 1]:
                edge = _bisect(on_diag, float(ts[k - 1]), float(ts[k]), vals[k - 1], L.tol)
                if vals[k]:
                    start = edge
                else:
                    out.append((start, edge))
                    start = None
        if start is not None:
            out.append((start, L.r))
        res = L.norm(out)
        self.diag[child] = res
        return res


def _bisect(pred: Callable[[float], bool], lo: float, hi: float, at_lo: bool, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == at_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid_eval(s: Signal, f: Formula, g: GridSpec | None = None,
              tol: float | None = None, offset: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Truth matrix ``M[i, j]`` of ``f`` at ``(T[i], T[j])`` and the lattice ``T``.

    ``tol`` (default ``1e-11*r``) is the gap-filling width and ``offset``
    (default ``3.7e-9*r``) the distance between a lattice column and the
    generic column it is read from.
    """
    check_schema(f, s.schema)
    ok = check_length(s, f)
    if not ok:
        from .satset import ShortSignalError

        raise ShortSignalError(ok)
    g = g or default_grid(s)
    ts = g.points(s)
    r = float(s.length)
    h = 3.7e-9 * r if offset is None else offset
    ev = _Evaluator(s, ts, 1e-11 * r if tol is None else tol, h)
    m = np.zeros((len(ts), len(ts)), dtype=bool)
    for j, tstar in enumerate(ts):
        c = float(tstar)
        col = ev.column(f, c + h if c + h <= r else c - h)
        for i, t in enumerate(ts):
            m[i, j] = ev.line.contains(col, float(t))
    return m, ts


def region_membership(region: Region, ts: np.ndarray, margin: float) -> tuple[np.ndarray, np.ndarray]:
    """Lattice membership of ``region`` and a mask of points within ``margin`` of a member boundary."""
    n = len(ts)
    inside = np.zeros((n, n), dtype=bool)
    near = np.zeros((n, n), dtype=bool)
    for p in region.polygons:
        i0 = int(np.searchsorted(ts, p.xmin - margin, side="left"))
        i1 = int(np.searchsorted(ts, p.xmax + margin, side="right"))
        j0 = int(np.searchsorted(ts, p.ymin - margin, side="left"))
        j1 = int(np.searchsorted(ts, p.ymax + margin, side="right"))
        if i0 >= i1 or j0 >= j1:
            continue
        X = ts[i0:i1][:, None]
        Y = ts[j0:j1][None, :]
        mind = np.full((i1 - i0, j1 - j0), np.inf)
        segd = np.full((i1 - i0, j1 - j0), np.inf)
        for (x0, y0), (x1, y1) in p.edges():
            dx, dy = x1 - x0, y1 - y0
            ln = float(np.hypot(dx, dy))
            mind = np.minimum(mind, (dx * (Y - y0) - dy * (X - x0)) / ln)
            u = np.clip(((X - x0) * dx + (Y - y0) * dy) / (ln * ln), 0.0, 1.0)
            segd = np.minimum(segd, np.hypot(X - x0 - u * dx, Y - y0 - u * dy))
        inside[i0:i1, j0:j1] |= mind >= 0.0
        near[i0:i1, j0:j1] |= segd <= margin
    return inside, near


def compare(s: Signal, f: Formula, g: GridSpec | None, engine,
            margin: float | None = None) -> list[tuple[float, float, bool, bool]]:
    """Lattice points where the engine's root set and the oracle disagree.

    ``engine`` is a :class:`Region` or anything with a ``root`` Region (a
    monitor report); it must cover the whole square, so monitor with
    ``prune=False``.  Points within ``margin`` (default ``2*eps``) of any
    member boundary are skipped.  Each entry is ``(t, t*, oracle, engine)``.
    """
    region = engine if isinstance(engine, Region) else engine.root
    truth, ts = grid_eval(s, f, g)
    margin = 2.0 * region.eps if margin is None else margin
    inside, near = region_membership(region, ts, margin)
    bad = (truth != inside) & ~near
    return [(float(ts[i]), float(ts[j]), bool(truth[i, j]), bool(inside[i, j]))
            for i, j in zip(*np.nonzero(bad))]


def dump_json(m: np.ndarray, ts: np.ndarray) -> str:
    return json.dumps({"lattice": ts.tolist(), "rows": m.astype(int).tolist()})


def dump_pgm(m: np.ndarray) -> bytes:
    """Binary PGM with ``t`` to the right and ``t*`` upward; white means true."""
    img = np.flipud(m.T).astype(np.uint8) * 255
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
