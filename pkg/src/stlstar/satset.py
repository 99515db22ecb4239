"""Satisfaction sets of STL* formulas over piecewise-linear signals.

Sets are built bottom-up over the desugared parse tree.  Each set is a
:class:`~stlstar.geometry.Region` in the ``(t, t*)`` square; the formula holds
on the signal iff ``(0, 0)`` lies in the root set.
"""

from __future__ import annotations

import enum
import logging
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .formula import (
    Atomic,
    Cmp,
    Formula,
    Freeze,
    LinearPredicate,
    Not,
    Or,
    TrueF,
    Until,
    check_schema,
    desugar,
    pretty,
)
from .geometry import ConvexPolygon, Region
from .signal import ShortSignal, Signal, SignalError, check_length

log = logging.getLogger(__name__)


class ShortSignalError(SignalError):
    def __init__(self, short: ShortSignal):
        self.needed = short.needed
        self.have = short.have
        super().__init__(str(short))


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BOUNDARY = "BOUNDARY"


# -- per-operator constructions ------------------------------------------------------


def _domain(r: float, eps: float, domain: ConvexPolygon | None) -> ConvexPolygon:
    return domain if domain is not None else geo.square(r)


def atomic_satset(s: Signal, pred: LinearPredicate, domain: ConvexPolygon | None = None,
                  eps: float | None = None) -> Region:
    """Union over segment pairs of the rectangle clipped by the predicate's half-plane.

    On ``I_i x I_j`` the predicate is affine in ``(t, t*)``; cells entirely on
    one side (within eps) are kept or dropped whole.
    """
    r = float(s.length)
    eps = geo.EPS_REL * r if eps is None else eps
    bad = [i for i in pred.variables() if not 0 <= i < s.order]
    if bad:
        raise SignalError(f"predicate uses variable index {bad[0]} outside the signal schema")
    a = np.zeros(s.order)
    b = np.zeros(s.order)
    for i, c in pred.plain:
        a[i] = c
    for i, c in pred.frozen:
        b[i] = c
    g = s.values @ a
    h = s.values @ b
    c = pred.bound
    if pred.cmp is Cmp.GT:
        g, h, c = -g, -h, -c
    t = s.tf
    dt = np.diff(t)
    ga = np.diff(g) / dt  # slope in t per segment
    hb = np.diff(h) / dt  # slope in t* per segment
    g0, g1 = g[:-1] - c, g[1:] - c
    f00 = g0[:, None] + h[None, :-1]
    f10 = g1[:, None] + h[None, :-1]
    f11 = g1[:, None] + h[None, 1:]
    f01 = g0[:, None] + h[None, 1:]
    fmax = np.maximum(np.maximum(f00, f10), np.maximum(f11, f01))
    fmin = np.minimum(np.minimum(f00, f10), np.minimum(f11, f01))
    tol = eps * np.hypot(ga[:, None], hb[None, :])
    full = fmax <= tol
    some = fmin < -tol
    dom = _domain(r, eps, domain)
    square_dom = len(dom) == 4 and dom.xmin <= 0.0 and dom.ymin <= 0.0 and dom.xmax >= r and dom.ymax >= r
    mask = some
    if not square_dom:
        # keep only cells whose rectangle meets the domain's bounding box
        ti0, ti1 = t[:-1], t[1:]
        mask = mask & (ti1[:, None] >= dom.xmin) & (ti0[:, None] <= dom.xmax)
        mask = mask & (ti1[None, :] >= dom.ymin) & (ti0[None, :] <= dom.ymax)
    out: list[ConvexPolygon] = []
    for i, j in zip(*np.nonzero(mask)):
        x0, x1, y0, y1 = t[i], t[i + 1], t[j], t[j + 1]
        if full[i, j]:
            poly = ConvexPolygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))
        else:
            poly = _clip_cell(
                ((x0, y0), (x1, y0), (x1, y1), (x0, y1)),
                (f00[i, j], f10[i, j], f11[i, j], f01[i, j]),
                eps,
            )
        if not square_dom and poly.verts:
            poly = geo.intersect(poly, dom, eps)
        if poly.verts:
            out.append(poly)
    return Region(tuple(out), r, eps)


def _clip_cell(corners, vals, eps: float) -> ConvexPolygon:
    pts = []
    for k in range(4):
        m = (k + 1) % 4
        fk, fm = vals[k], vals[m]
        if fk <= 0.0:
            pts.append(corners[k])
        if (fk <= 0.0) != (fm <= 0.0):
            u = fk / (fk - fm)
            pts.append((
                corners[k][0] + u * (corners[m][0] - corners[k][0]),
                corners[k][1] + u * (corners[m][1] - corners[k][1]),
            ))
    return ConvexPolygon.from_points(pts, eps)


def negate_satset(r: Region, domain: ConvexPolygon | None = None) -> Region:
    return geo.complement(r, domain)


def or_satset(r1: Region, r2: Region) -> Region:
    return geo.union(r1, r2)


def freeze_satset(r: Region, domain: ConvexPolygon | None = None) -> Region:
    """Vertical bands over the stretches of the diagonal ``t* = t`` inside ``r``."""
    return geo.cylindrify(geo.diagonal_trace(r), r.r, r.eps, domain)


def eventually_satset(r: Region, a, b, domain: ConvexPolygon | None = None) -> Region:
    """``F[a,b]`` as a leftward sweep of every member by ``[a, b]``."""
    return geo.erode_shift(r, float(a), float(b), domain)


def until_satset(r1: Region, r2: Region, a, b, domain: ConvexPolygon | None = None) -> Region:
    """Bounded until, solved per convex piece ``P`` of ``r1 & r2`` in horizontal stripes.

    For each ``P`` the stripe boundaries are the ``t*`` coordinates of the
    vertices of ``P`` and of the ``r1`` members near it.  Inside a stripe every
    member is a trapezoid; the run of ``r1`` containing ``P`` is cut at the
    right boundary of ``P`` and intersected with ``P`` swept left by ``[a, b]``.
    """
    a = float(a)
    b = float(b)
    if not 0.0 <= a < b:
        raise ValueError(f"until needs 0 <= a < b, got [{a}, {b}]")
    eps = min(r1.eps, r2.eps)
    dom = _domain(r1.r, eps, domain)
    polys1 = r1.polygons
    if not polys1 or r2.is_empty:
        return Region((), r1.r, eps)
    index = geo._BucketIndex(polys1, geo.square(r1.r).bbox(), geo._bucket_count(len(polys1)))
    out: list[ConvexPolygon] = []
    for q in r2.polygons:
        for k in index.query(q.xmin, q.ymin, q.xmax, q.ymax):
            piece = geo.intersect(polys1[k], q, eps)
            if not piece.verts:
                continue
            cands = index.query(piece.xmin - b - eps, piece.ymin, piece.xmax + eps, piece.ymax)
            members = [polys1[c] for c in cands]
            out.extend(_until_piece(piece, cands.index(k), members, a, b, eps))
    res = Region(tuple(out), r1.r, eps)
    return geo.merge_adjacent(geo.clip_region(res, dom))


def _until_piece(P: ConvexPolygon, anchor: int, members: list[ConvexPolygon], a: float, b: float,
                 eps: float) -> list[ConvexPolygon]:
    ys = {y for _, y in P.verts}
    for q in members:
        ys.update(y for _, y in q.verts if P.ymin < y < P.ymax)
    ys = sorted(ys)
    out = []
    for y0, y1 in zip(ys, ys[1:]):
        if y1 - y0 <= eps:
            continue
        ym = 0.5 * (y0 + y1)
        active = [k for k, q in enumerate(members) if q.ymin < ym < q.ymax]
        if anchor not in active:
            continue
        # boundary lines of each active member, as (x at y0, x at y1)
        left = {}
        right = {}
        for k in active:
            l0, r0 = members[k].row(y0)
            l1, r1_ = members[k].row(y1)
            left[k] = (l0, l1)
            right[k] = (r0, r1_)
        pl0, pr0 = P.row(y0)
        pl1, pr1 = P.row(y1)
        lines = list(left.values()) + list(right.values())
        cuts = {y0, y1}
        for i in range(len(lines)):
            u0, u1 = lines[i]
            for j in range(i + 1, len(lines)):
                d0 = u0 - lines[j][0]
                d1 = u1 - lines[j][1]
                if d0 * d1 < 0.0:
                    cuts.add(y0 + (y1 - y0) * d0 / (d0 - d1))
        cuts = sorted(cuts)
        for ya, yb in zip(cuts, cuts[1:]):
            if yb - ya <= eps:
                continue
            fa = (ya - y0) / (y1 - y0)
            fb = (yb - y0) / (y1 - y0)

            def at(line, f):
                return line[0] + f * (line[1] - line[0])

            fm = 0.5 * (fa + fb)
            rows = sorted((at(left[k], fm), at(right[k], fm), k) for k in active)
            chain: list[int] = []
            reach = -math.inf
            found = False
            for lo, hi, k in rows:
                if chain and lo > reach + eps:
                    if found:
                        break
                    chain = []
                    reach = -math.inf
                chain.append(k)
                reach = max(reach, hi)
                if k == anchor:
                    found = True
            if not found:
                continue
            cla = min(at(left[k], fa) for k in chain)
            clb = min(at(left[k], fb) for k in chain)
            pla, pra = at((pl0, pl1), fa), at((pr0, pr1), fa)
            plb, prb = at((pl0, pl1), fb), at((pr0, pr1), fb)
            run = ConvexPolygon.from_points([(cla, ya), (pra, ya), (prb, yb), (clb, yb)], eps)
            if not run.verts:
                continue
            sl = [(pla, ya), (pra, ya), (prb, yb), (plb, yb)]
            swept = geo.convex_hull([(x - a, y) for x, y in sl] + [(x - b, y) for x, y in sl], eps)
            piece = geo.intersect(run, swept, eps)
            if piece.verts:
                out.append(piece)
    return out


# -- monitoring ------------------------------------------------------------------------


@dataclass
class NodeResult:
    id: int
    formula: Formula
    text: str
    region: Region

    def to_json(self) -> dict:
        return {"id": self.id, "formula": self.text, "region": self.region.to_json()}


@dataclass
class MonitorReport:
    verdict: Verdict
    closed_verdict: bool
    root: Region
    nodes: list[NodeResult] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    short: ShortSignal | None = None

    @property
    def satisfied(self) -> bool:
        return self.verdict is Verdict.SAT

    def node(self, selector: str | int) -> NodeResult:
        if selector == "root":
            return self.nodes[-1]
        key = int(selector)
        for n in self.nodes:
            if n.id == key:
                return n
        raise KeyError(f"no node with id {selector!r}")

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "nodes": [n.to_json() for n in self.nodes],
            "stats": dict(self.stats),
        }


def _unique_nodes(f: Formula) -> list[Formula]:
    seen: dict[Formula, None] = {}
    for node in f.walk():
        if node not in seen:
            seen[node] = None
    return list(seen)


def _regions_of_interest(order: list[Formula], r: float, width: float) -> dict[Formula, tuple[float, float] | None]:
    """Diagonal band ``lo <= t - t* <= hi`` outside of which a node's set is never read.

    The root is only read at ``(0, 0)``; an until reads its operands up to
    ``hi`` further right; a freeze reads its operand on the diagonal only.
    """
    roi: dict[Formula, tuple[float, float] | None] = {order[-1]: (-width, width)}
    for node in reversed(order):
        band = roi.get(node, (-width, width))
        if isinstance(node, Freeze):
            child_bands = [(node.child, (-width, width))]
        elif isinstance(node, Until):
            hb = None if band is None else (band[0], band[1] + float(node.hi))
            child_bands = [(node.left, hb), (node.right, hb)]
        else:
            child_bands = [(c, band) for c in node.children()]
        for child, cb in child_bands:
            if child not in roi:
                roi[child] = cb
            else:
                old = roi[child]
                roi[child] = None if old is None or cb is None else (min(old[0], cb[0]), max(old[1], cb[1]))
    for node, band in roi.items():
        if band is not None and band[0] <= -r and band[1] >= r:
            roi[node] = None
    return roi


def monitor(s: Signal, f: Formula, keep_intermediate: bool = False, eps: float | None = None,
            allow_short: bool = False, prune: bool = True) -> MonitorReport:
    """Decide ``s |= f`` by building satisfaction sets bottom-up.

    With ``prune`` the sets are only computed inside the diagonal band the
    verdict depends on; disable it to get whole-square sets for rendering.
    """
    started = time.perf_counter()
    check_schema(f, s.schema)
    short = None
    ok = check_length(s, f)
    if not ok:
        if not allow_short:
            raise ShortSignalError(ok)
        warnings.warn(f"{ok}; the verdict may be wrong", RuntimeWarning, stacklevel=2)
        short = ok
    r = float(s.length)
    eps = geo.EPS_REL * r if eps is None else eps
    core = desugar(f)
    order = _unique_nodes(core)
    width = max(1e-6 * r, 100.0 * eps)
    roi = _regions_of_interest(order, r, width) if prune else {n: None for n in order}
    domains: dict[tuple[float, float] | None, ConvexPolygon] = {}

    def domain_of(node: Formula) -> ConvexPolygon:
        band = roi[node]
        if band not in domains:
            domains[band] = geo.square(r) if band is None else geo.diagonal_band(r, band[0], band[1], eps)
        return domains[band]

    sets: dict[Formula, Region] = {}
    peak = 0

    def get(node: Formula) -> Region:
        nonlocal peak
        if node not in sets:
            reg = geo.merge_adjacent(_evaluate(node, s, get, domain_of(node), r, eps))
            sets[node] = reg
            peak = max(peak, len(reg))
            log.debug("node %s: %d polygons", type(node).__name__, len(reg))
        return sets[node]

    get(core)
    root = sets[core]
    cov = geo.corner_coverage(root, 0.0, 0.0)
    verdict = {"inside": Verdict.SAT, "outside": Verdict.UNSAT, "boundary": Verdict.BOUNDARY}[cov]
    closed = geo.contains_point(root, 0.0, 0.0, "closed")
    nodes = []
    keep = [n for n in order if n in sets] if keep_intermediate else [core]
    for node in keep:
        nodes.append(NodeResult(order.index(node), node, pretty(node, s.schema), sets[node]))
    stats = {
        "polygons_peak": peak,
        "wall_ms": round((time.perf_counter() - started) * 1000.0, 3),
        "nodes": len(order),
        "segments": s.segments,
    }
    return MonitorReport(verdict, closed, root, nodes, stats, short)


def _evaluate(node: Formula, s: Signal, get, dom: ConvexPolygon, r: float, eps: float) -> Region:
    if isinstance(node, Atomic):
        return atomic_satset(s, node.pred, dom, eps)
    if isinstance(node, TrueF):
        return Region((dom,), r, eps)
    if isinstance(node, Not):
        if isinstance(node.child, Not):
            return geo.clip_region(get(node.child.child), dom)
        return negate_satset(get(node.child), dom)
    if isinstance(node, Or):
        return geo.clip_region(or_satset(get(node.left), get(node.right)), dom)
    if isinstance(node, Freeze):
        return freeze_satset(get(node.child), dom)
    if isinstance(node, Until):
        if isinstance(node.left, TrueF):
            return eventually_satset(get(node.right), node.lo, node.hi, dom)
        return until_satset(get(node.left), get(node.right), node.lo, node.hi, dom)
    raise TypeError(f"unexpected node after desugaring: {node!r}")


def satisfies(s: Signal, f: Formula, **kwargs) -> bool:
    return monitor(s, f, **kwargs).satisfied
