"""Convex polygon kernel over the (t, t*) plane.

Polygons are stored topologically closed as counter-clockwise vertex rings of
floats.  Every operation treats points within ``eps`` of a polygon boundary as
don't-care, so clipping never has to decide on which side a border point lies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Point = tuple[float, float]

EPS_REL = 1e-9


class ConvexPolygon:
    """Closed convex polygon given by a CCW ring without collinear vertices.

    The constructor trusts its input; use :meth:`from_points` or
    :func:`convex_hull` for arbitrary point lists.
    """

    __slots__ = ("verts", "xmin", "xmax", "ymin", "ymax")

    def __init__(self, verts: Sequence[Point] = ()):
        self.verts = tuple(verts)
        if self.verts:
            xs = [v[0] for v in self.verts]
            ys = [v[1] for v in self.verts]
            self.xmin, self.xmax = min(xs), max(xs)
            self.ymin, self.ymax = min(ys), max(ys)
        else:
            self.xmin = self.ymin = math.inf
            self.xmax = self.ymax = -math.inf

    @classmethod
    def from_points(cls, points: Iterable[Point], eps: float) -> "ConvexPolygon":
        """Normalize a ring that is already in convex position (either orientation)."""
        return _normalize(list(points), eps)

    @classmethod
    def rectangle(cls, x0: float, x1: float, y0: float, y1: float) -> "ConvexPolygon":
        if x1 <= x0 or y1 <= y0:
            return EMPTY
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    @property
    def is_empty(self) -> bool:
        return not self.verts

    def __len__(self) -> int:
        return len(self.verts)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.verts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConvexPolygon) and self.verts == other.verts

    def __hash__(self) -> int:
        return hash(self.verts)

    def __repr__(self) -> str:
        if not self.verts:
            return "ConvexPolygon(EMPTY)"
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.verts)
        return f"ConvexPolygon([{pts}])"

    def area(self) -> float:
        return _signed_area(self.verts) if self.verts else 0.0

    def bbox(self) -> tuple[float, float, float, float]:
        return self.xmin, self.ymin, self.xmax, self.ymax

    def bbox_overlaps(self, other: "ConvexPolygon", pad: float = 0.0) -> bool:
        return not (
            self.xmax < other.xmin - pad
            or other.xmax < self.xmin - pad
            or self.ymax < other.ymin - pad
            or other.ymax < self.ymin - pad
        )

    def translate(self, dx: float, dy: float = 0.0) -> "ConvexPolygon":
        if not self.verts:
            return self
        return ConvexPolygon(tuple((x + dx, y + dy) for x, y in self.verts))

    def edges(self) -> Iterator[tuple[Point, Point]]:
        v = self.verts
        for i in range(len(v)):
            yield v[i], v[(i + 1) % len(v)]

    def signed_distance(self, x: float, y: float) -> float:
        """Distance to the boundary, positive inside and negative outside."""
        if not self.verts:
            return -math.inf
        inside = math.inf
        for (x0, y0), (x1, y1) in self.edges():
            dx, dy = x1 - x0, y1 - y0
            inside = min(inside, (dx * (y - y0) - dy * (x - x0)) / math.hypot(dx, dy))
        if inside >= 0.0:
            return inside
        return -min(_segment_distance(x, y, a, b) for a, b in self.edges())

    def row(self, y: float) -> tuple[float, float]:
        """Horizontal slice ``[x_left, x_right]`` at height ``y`` (clamped to the polygon)."""
        y = min(max(y, self.ymin), self.ymax)
        lo, hi = math.inf, -math.inf
        for (x0, y0), (x1, y1) in self.edges():
            if (y0 - y) * (y1 - y) > 0.0:
                continue
            if y0 == y1:
                xs = (x0, x1)
            else:
                xs = (x0 + (y - y0) * (x1 - x0) / (y1 - y0),)
            for xv in xs:
                lo = min(lo, xv)
                hi = max(hi, xv)
        return lo, hi


EMPTY = ConvexPolygon()


def _signed_area(v: Sequence[Point]) -> float:
    s = 0.0
    n = len(v)
    for i in range(n):
        x0, y0 = v[i]
        x1, y1 = v[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _segment_distance(px: float, py: float, a: Point, b: Point) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    ll = dx * dx + dy * dy
    u = 0.0 if ll == 0.0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / ll))
    return math.hypot(px - ax - u * dx, py - ay - u * dy)


def _normalize(pts: list[Point], eps: float) -> ConvexPolygon:
    # drop coincident and collinear vertices, fix orientation, reject slivers
    if len(pts) < 3:
        return EMPTY
    out: list[Point] = []
    for p in pts:
        if not out or abs(p[0] - out[-1][0]) > eps or abs(p[1] - out[-1][1]) > eps:
            out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= eps and abs(out[0][1] - out[-1][1]) <= eps:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        i = 0
        while i < len(out) and len(out) >= 3:
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            cx, cy = c[0] - a[0], c[1] - a[1]
            chord = math.hypot(cx, cy)
            off = abs(cx * (b[1] - a[1]) - cy * (b[0] - a[0]))
            if chord == 0.0 or off <= eps * chord:
                out.pop(i)
                changed = True
            else:
                i += 1
    if len(out) < 3:
        return EMPTY
    area = _signed_area(out)
    if area < 0.0:
        out.reverse()
        area = -area
    perim = sum(math.dist(out[i - 1], out[i]) for i in range(len(out)))
    if 2.0 * area <= eps * perim:
        return EMPTY
    return ConvexPolygon(out)


def convex_hull(points: Iterable[Point], eps: float) -> ConvexPolygon:
    pts = sorted(set(points))
    if len(pts) < 3:
        return EMPTY

    def cross(o: Point, a: Point, b: Point) -> float:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    return _normalize(lower[:-1] + upper[:-1], eps)


def is_convex_ring(v: Sequence[Point], eps: float) -> bool:
    n = len(v)
    if n < 3:
        return False
    for i in range(n):
        a, b, c = v[i - 1], v[i], v[(i + 1) % n]
        cx, cy = c[0] - a[0], c[1] - a[1]
        turn = cx * (b[1] - a[1]) - cy * (b[0] - a[0])
        # b left of the chord a->c is a reflex vertex in a CCW ring
        if turn > eps * math.hypot(cx, cy):
            return False
    return True


# -- half-plane and polygon clipping ---------------------------------------------


def _clip_le(p: ConvexPolygon, a: float, b: float, c: float, eps: float) -> ConvexPolygon:
    """Keep ``{a*t + b*t* <= c}``; polygons within eps of the line are decided whole."""
    if not p.verts:
        return p
    vals = [a * x + b * y - c for x, y in p.verts]
    tol = eps * math.hypot(a, b)
    if max(vals) <= tol:
        return p
    if min(vals) >= -tol:
        return EMPTY
    v = p.verts
    n = len(v)
    out: list[Point] = []
    for i in range(n):
        j = (i + 1) % n
        fi, fj = vals[i], vals[j]
        if fi <= 0.0:
            out.append(v[i])
        if (fi <= 0.0) != (fj <= 0.0):
            s = fi / (fi - fj)
            out.append((v[i][0] + s * (v[j][0] - v[i][0]), v[i][1] + s * (v[j][1] - v[i][1])))
    return _normalize(out, eps)


def clip_halfplane(p: ConvexPolygon, a: float, b: float, c: float, eps: float = 0.0) -> ConvexPolygon:
    """Part of ``p`` in the open half-plane ``a*t + b*t* < c`` (boundary is don't-care)."""
    return _clip_le(p, a, b, c, eps)


def _edge_halfplanes(q: ConvexPolygon) -> Iterator[tuple[float, float, float]]:
    # interior of a CCW ring lies left of each edge: dy*x - dx*y <= dy*x0 - dx*y0
    for (x0, y0), (x1, y1) in q.edges():
        dx, dy = x1 - x0, y1 - y0
        yield dy, -dx, dy * x0 - dx * y0


def intersect(p: ConvexPolygon, q: ConvexPolygon, eps: float = 0.0) -> ConvexPolygon:
    if not p.verts or not q.verts or not p.bbox_overlaps(q):
        return EMPTY
    out = p
    for a, b, c in _edge_halfplanes(q):
        out = _clip_le(out, a, b, c, eps)
        if not out.verts:
            break
    return out


def difference(p: ConvexPolygon, q: ConvexPolygon, eps: float) -> list[ConvexPolygon]:
    """``p \\ q`` as disjoint convex pieces, one per edge of ``q`` that cuts ``p``."""
    if not p.verts:
        return []
    if not q.verts or not p.bbox_overlaps(q):
        return [p]
    pieces = []
    rest = p
    for a, b, c in _edge_halfplanes(q):
        outside = _clip_le(rest, -a, -b, -c, eps)
        if outside.verts:
            pieces.append(outside)
        rest = _clip_le(rest, a, b, c, eps)
        if not rest.verts:
            break
    return pieces


def square(r: float) -> ConvexPolygon:
    return ConvexPolygon.rectangle(0.0, r, 0.0, r)


def diagonal_band(r: float, lo: float, hi: float, eps: float) -> ConvexPolygon:
    """Domain square restricted to ``lo <= t - t* <= hi``."""
    sq = square(r)
    sq = _clip_le(sq, 1.0, -1.0, hi, eps)
    return _clip_le(sq, -1.0, 1.0, -lo, eps)


# -- regions ---------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Finite union of convex polygons inside the square ``[0, r]^2``."""

    polygons: tuple[ConvexPolygon, ...]
    r: float
    eps: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "polygons", tuple(p for p in self.polygons if p.verts))
        if self.eps < 0.0:
            object.__setattr__(self, "eps", EPS_REL * self.r)

    @classmethod
    def empty(cls, r: float, eps: float = -1.0) -> "Region":
        return cls((), r, eps)

    @classmethod
    def full(cls, r: float, eps: float = -1.0, domain: ConvexPolygon | None = None) -> "Region":
        return cls((domain if domain is not None else square(r),), r, eps)

    @property
    def is_empty(self) -> bool:
        return not self.polygons

    def __len__(self) -> int:
        return len(self.polygons)

    def __iter__(self) -> Iterator[ConvexPolygon]:
        return iter(self.polygons)

    def with_polygons(self, polys: Iterable[ConvexPolygon]) -> "Region":
        return Region(tuple(polys), self.r, self.eps)

    def domain(self) -> ConvexPolygon:
        return square(self.r)

    def contains(self, t: float, tstar: float, mode: str = "closed") -> bool:
        return contains_point(self, t, tstar, mode)

    def area(self) -> float:
        """Sum of member areas (overlaps counted repeatedly)."""
        return sum(p.area() for p in self.polygons)

    def to_json(self) -> dict:
        return {"domain": self.r, "polygons": [[list(v) for v in p.verts] for p in self.polygons]}

    @classmethod
    def from_json(cls, data: dict | str, eps: float = -1.0) -> "Region":
        if isinstance(data, str):
            data = json.loads(data)
        r = float(data["domain"])
        e = EPS_REL * r if eps < 0.0 else eps
        polys = [ConvexPolygon.from_points([tuple(map(float, v)) for v in ring], e) for ring in data["polygons"]]
        return cls(tuple(polys), r, e)


class _BucketIndex:
    """Uniform-grid bucket index of polygon bounding boxes."""

    def __init__(self, polys: Sequence[ConvexPolygon], bounds: tuple[float, float, float, float], k: int):
        self.polys = polys
        self.x0, self.y0, x1, y1 = bounds
        self.k = max(1, k)
        self.wx = max(x1 - self.x0, 1e-300) / self.k
        self.wy = max(y1 - self.y0, 1e-300) / self.k
        self.buckets: dict[tuple[int, int], list[int]] = {}
        for idx, p in enumerate(polys):
            for key in self._keys(p.xmin, p.ymin, p.xmax, p.ymax):
                self.buckets.setdefault(key, []).append(idx)

    def _span(self, lo: float, hi: float, origin: float, w: float) -> range:
        a = int(math.floor((lo - origin) / w))
        b = int(math.floor((hi - origin) / w))
        return range(max(a, 0), min(b, self.k - 1) + 1)

    def _keys(self, xmin, ymin, xmax, ymax) -> Iterator[tuple[int, int]]:
        for i in self._span(xmin, xmax, self.x0, self.wx):
            for j in self._span(ymin, ymax, self.y0, self.wy):
                yield i, j

    def cell(self, i: int, j: int) -> tuple[float, float, float, float]:
        return (
            self.x0 + i * self.wx,
            self.y0 + j * self.wy,
            self.x0 + (i + 1) * self.wx,
            self.y0 + (j + 1) * self.wy,
        )

    def query(self, xmin, ymin, xmax, ymax) -> list[int]:
        found: set[int] = set()
        for key in self._keys(xmin, ymin, xmax, ymax):
            found.update(self.buckets.get(key, ()))
        return sorted(
            i
            for i in found
            if not (
                self.polys[i].xmax < xmin
                or self.polys[i].xmin > xmax
                or self.polys[i].ymax < ymin
                or self.polys[i].ymin > ymax
            )
        )


def _bucket_count(n: int) -> int:
    return max(1, min(256, int(math.sqrt(n))))


def union(r1: Region, r2: Region) -> Region:
    """Set union; overlapping members are kept as they are."""
    if r1.is_empty:
        return r2
    if r2.is_empty:
        return r1
    return Region(r1.polygons + r2.polygons, max(r1.r, r2.r), min(r1.eps, r2.eps))


def clip_region(r: Region, domain: ConvexPolygon) -> Region:
    out = []
    for p in r.polygons:
        if domain.xmin <= p.xmin and p.xmax <= domain.xmax and domain.ymin <= p.ymin and p.ymax <= domain.ymax and len(domain) == 4:
            out.append(p)
        else:
            out.append(intersect(p, domain, r.eps))
    return r.with_polygons(out)


def complement(r: Region, domain: ConvexPolygon | None = None) -> Region:
    """``domain \\ r`` as convex pieces.

    The domain is cut into a bucket grid and each bucket is reduced by the
    polygons touching it through successive convex differences; the fragments
    are then merged across bucket seams.
    """
    dom = domain if domain is not None else square(r.r)
    eps = r.eps
    polys = [p for p in r.polygons if p.bbox_overlaps(dom)]
    if dom.is_empty:
        return r.with_polygons(())
    if not polys:
        return r.with_polygons((dom,))
    k = _bucket_count(len(polys))
    index = _BucketIndex(polys, dom.bbox(), k)
    out: list[ConvexPolygon] = []
    for i in range(index.k):
        for j in range(index.k):
            x0, y0, x1, y1 = index.cell(i, j)
            if i == index.k - 1:
                x1 = dom.xmax
            if j == index.k - 1:
                y1 = dom.ymax
            cell = ConvexPolygon.rectangle(x0, x1, y0, y1)
            cell = intersect(cell, dom, eps) if len(dom) != 4 or not _rect_inside(cell, dom) else cell
            if cell.is_empty:
                continue
            pieces = [cell]
            for q in (polys[m] for m in index.buckets.get((i, j), ())):
                nxt: list[ConvexPolygon] = []
                for pc in pieces:
                    nxt.extend(difference(pc, q, eps))
                pieces = nxt
                if not pieces:
                    break
            out.extend(pieces)
    return merge_adjacent(r.with_polygons(out))


def _rect_inside(cell: ConvexPolygon, dom: ConvexPolygon) -> bool:
    return dom.xmin <= cell.xmin and cell.xmax <= dom.xmax and dom.ymin <= cell.ymin and cell.ymax <= dom.ymax


def erode_shift(r: Region, lo: float, hi: float, domain: ConvexPolygon | None = None) -> Region:
    """Leftward sweep ``{(t, t*) | exists c in (lo, hi): (t + c, t*) in r}``.

    Each member becomes the hull of its translates by ``-lo`` and ``-hi``,
    clipped to the domain.
    """
    if lo < 0 or hi < lo:
        raise ValueError(f"erode_shift needs 0 <= lo <= hi, got ({lo}, {hi})")
    dom = domain if domain is not None else square(r.r)
    out = []
    for p in r.polygons:
        if hi == lo:
            swept = p.translate(-lo)
        else:
            pts = [(x - lo, y) for x, y in p.verts] + [(x - hi, y) for x, y in p.verts]
            swept = convex_hull(pts, r.eps)
        out.append(intersect(swept, dom, r.eps))
    return r.with_polygons(out)


def _merge_intervals(iv: Iterable[tuple[float, float]], eps: float) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for u, v in sorted(iv):
        if out and u <= out[-1][1] + eps:
            out[-1][1] = max(out[-1][1], v)
        else:
            out.append([u, v])
    return [(u, v) for u, v in out if v - u > eps]


def _intersect_intervals(xs: list[tuple[float, float]], ys: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        u = max(xs[i][0], ys[j][0])
        v = min(xs[i][1], ys[j][1])
        if u < v:
            out.append((u, v))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def diagonal_trace(r: Region) -> list[tuple[float, float]]:
    """Maximal intervals of ``{t | (t, t) in r}``, ignoring boundary-only contact.

    A member whose edge runs along the diagonal covers it from one side only;
    such a stretch counts when the other side is covered too.
    """
    eps = r.eps
    through, above, below = [], [], []
    for p in r.polygons:
        if p.xmax < p.ymin - eps or p.ymax < p.xmin - eps:
            continue
        # exact clip; touching stretches are joined by the eps merge below
        lo, hi = max(p.xmin, p.ymin), min(p.xmax, p.ymax)
        for a, b, c in _edge_halfplanes(p):
            k = a + b
            if abs(k) <= eps * math.hypot(a, b):
                if c < -eps * math.hypot(a, b):
                    hi = -math.inf
            elif k > 0.0:
                hi = min(hi, c / k)
            else:
                lo = max(lo, c / k)
            if hi - lo <= eps:
                break
        if hi - lo <= eps:
            continue
        offs = [y - x for x, y in p.verts]
        if max(offs) <= eps * math.sqrt(2.0):
            below.append((lo, hi))
        elif min(offs) >= -eps * math.sqrt(2.0):
            above.append((lo, hi))
        else:
            through.append((lo, hi))
    both = _intersect_intervals(_merge_intervals(above, 0.0), _merge_intervals(below, 0.0))
    merged = _merge_intervals(through + both, eps)
    return [(max(0.0, u), min(r.r, v)) for u, v in merged]


def cylindrify(intervals: Iterable[tuple[float, float]], r: float, eps: float = -1.0,
               domain: ConvexPolygon | None = None) -> Region:
    """Each ``[u, v]`` becomes the band ``[u, v] x [0, r]``."""
    e = EPS_REL * r if eps < 0.0 else eps
    out = []
    for u, v in intervals:
        band = ConvexPolygon.rectangle(max(0.0, u), min(r, v), 0.0, r)
        if domain is not None:
            band = intersect(band, domain, e)
        out.append(band)
    return Region(tuple(out), r, e)


def _edge_key(a: Point, b: Point, q: float) -> tuple:
    return (round(a[0] / q), round(a[1] / q), round(b[0] / q), round(b[1] / q))


def merge_adjacent(r: Region) -> Region:
    """Fuse members sharing a full edge whenever the union stays convex."""
    eps = r.eps
    q = max(4.0 * eps, 1e-300)
    alive: dict[int, ConvexPolygon] = {}
    edge_owner: dict[tuple, tuple[int, int]] = {}
    next_id = 0
    pending = list(r.polygons)
    pending.reverse()
    while pending:
        poly = pending.pop()
        pid = next_id
        next_id += 1
        merged = None
        v = poly.verts
        n = len(v)
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            hit = edge_owner.get(_edge_key(b, a, q))
            if hit is None or hit[0] not in alive:
                continue
            other = hit[0]
            cand = _splice(poly, i, alive[other], hit[1], eps)
            if cand is not None:
                merged = (other, cand)
                break
        if merged is not None:
            other, cand = merged
            ov = alive.pop(other).verts
            for k in range(len(ov)):
                key = _edge_key(ov[k], ov[(k + 1) % len(ov)], q)
                if edge_owner.get(key, (None,))[0] == other:
                    del edge_owner[key]
            pending.append(cand)
            continue
        alive[pid] = poly
        for i in range(n):
            edge_owner[_edge_key(v[i], v[(i + 1) % n], q)] = (pid, i)
    return r.with_polygons(alive[k] for k in sorted(alive))


def _splice(p: ConvexPolygon, i: int, q: ConvexPolygon, j: int, eps: float) -> ConvexPolygon | None:
    # p has edge v[i] -> v[i+1]; edge j of q runs the other way
    pv = p.verts
    n = len(pv)
    qv = q.verts
    m = len(qv)
    # walk p from v[i+1] around to v[i], then the rest of q
    ring = [pv[(i + 1 + k) % n] for k in range(n)]
    ring += [qv[(j + 2 + k) % m] for k in range(m - 2)]
    if not is_convex_ring(ring, eps):
        return None
    out = _normalize(ring, eps)
    return out if out.verts else None


def contains_point(r: Region, t: float, tstar: float, mode: str = "closed") -> bool:
    """Membership test; ``closed`` accepts points within eps, ``strict`` needs interior points."""
    if mode not in ("closed", "strict"):
        raise ValueError(f"unknown mode {mode!r}")
    eps = r.eps
    for p in r.polygons:
        if not (p.xmin - eps <= t <= p.xmax + eps and p.ymin - eps <= tstar <= p.ymax + eps):
            continue
        d = p.signed_distance(t, tstar)
        if (mode == "closed" and d >= -eps) or (mode == "strict" and d > eps):
            return True
    return False


def near_boundary(r: Region, t: float, tstar: float, tol: float) -> bool:
    """True when the point is within ``tol`` of some member's boundary."""
    for p in r.polygons:
        if p.xmin - tol <= t <= p.xmax + tol and p.ymin - tol <= tstar <= p.ymax + tol:
            if abs(p.signed_distance(t, tstar)) <= tol:
                return True
    return False


def corner_coverage(r: Region, t: float = 0.0, tstar: float = 0.0) -> str:
    """Classify a domain corner point as ``inside``, ``outside`` or ``boundary``.

    The tangent cones at the point of all members within eps are united and
    compared with the quarter-plane of directions pointing into the domain.
    """
    eps = r.eps
    sectors: list[tuple[float, float]] = []
    for p in r.polygons:
        if not (p.xmin - eps <= t <= p.xmax + eps and p.ymin - eps <= tstar <= p.ymax + eps):
            continue
        if p.signed_distance(t, tstar) < -eps:
            continue
        lo, hi = 0.0, math.pi / 2.0
        for (x0, y0), (x1, y1) in p.edges():
            dx, dy = x1 - x0, y1 - y0
            ln = math.hypot(dx, dy)
            if abs(dx * (tstar - y0) - dy * (t - x0)) / ln > eps:
                continue
            normal = math.atan2(dx, -dy)
            lo, hi = _clip_sector(lo, hi, normal)
            if hi <= lo:
                break
        if hi > lo:
            sectors.append((lo, hi))
    if not sectors:
        return "outside"
    covered = _merge_intervals(sectors, 1e-9)
    if covered and covered[0][0] <= 1e-9 and covered[0][1] >= math.pi / 2.0 - 1e-9:
        return "inside"
    return "boundary"


def _clip_sector(lo: float, hi: float, normal: float) -> tuple[float, float]:
    # directions d allowed by a half-plane with inward normal n: angle(d) within n +- pi/2
    best = (lo, lo)
    for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
        a = max(lo, normal + shift - math.pi / 2.0)
        b = min(hi, normal + shift + math.pi / 2.0)
        if b - a > best[1] - best[0]:
            best = (a, b)
    return best
