"""SVG plots of satisfaction sets in the ``(t, t*)`` square."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .geometry import Region

SIZE = 480
MARGIN = 48
LEGEND = 56


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_region(region: Region, title: str = "", size: int = SIZE) -> str:
    """Draw ``region`` with ``t`` to the right, ``t*`` upward and the diagonal dashed.

    The output depends only on the region and title, so identical inputs give
    byte-identical files.
    """
    r = region.r if region.r > 0 else 1.0
    scale = size / r
    w = size + 2 * MARGIN
    h = size + 2 * MARGIN + LEGEND

    def px(t: float, ts: float) -> str:
        return f"{_fmt(MARGIN + t * scale)},{_fmt(MARGIN + size - ts * scale)}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{size}" height="{size}" fill="white" stroke="black"/>',
        '<g fill="#3b7dd8" fill-opacity="0.45" stroke="#1d4f91" stroke-width="0.6">',
    ]
    for p in region.polygons:
        out.append(f'<polygon points="{" ".join(px(x, y) for x, y in p.verts)}"/>')
    out.append("</g>")
    out.append(f'<line x1="{MARGIN}" y1="{MARGIN + size}" x2="{MARGIN + size}" y2="{MARGIN}" '
               'stroke="#c0392b" stroke-dasharray="5,4" stroke-width="1"/>')
    ticks = 5
    for k in range(ticks + 1):
        v = r * k / ticks
        x = MARGIN + v * scale
        y = MARGIN + size - v * scale
        out.append(f'<text x="{_fmt(x)}" y="{MARGIN + size + 16}" font-size="11" text-anchor="middle">{_fmt(v)}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{_fmt(y + 4)}" font-size="11" text-anchor="end">{_fmt(v)}</text>')
    out.append(f'<text x="{MARGIN + size / 2}" y="{MARGIN + size + 34}" font-size="13" text-anchor="middle">t</text>')
    out.append(f'<text x="{MARGIN - 34}" y="{MARGIN + size / 2}" font-size="13" text-anchor="middle">t*</text>')
    ly = MARGIN + size + 44
    out.append(f'<rect x="{MARGIN}" y="{ly}" width="14" height="10" fill="#3b7dd8" fill-opacity="0.45" stroke="#1d4f91"/>')
    label = f"{title}  ({len(region)} polygons)" if title else f"{len(region)} polygons"
    out.append(f'<text x="{MARGIN + 20}" y="{ly + 9}" font-size="11">{escape(label)}</text>')
    out.append(f'<line x1="{MARGIN}" y1="{ly + 22}" x2="{MARGIN + 14}" y2="{ly + 22}" stroke="#c0392b" stroke-dasharray="5,4"/>')
    out.append(f'<text x="{MARGIN + 20}" y="{ly + 26}" font-size="11">t* = t</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
