"""Static SVG figures of ranges, their support lines and angle sets.

World coordinates are drawn with the y axis pointing up: a point ``x + iy``
is placed at SVG ``(x, -y)``. Every number is written with 12 significant
digits so that output is byte-for-byte reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rankrange.closed_form import AngleSet, RegionDescriptor, boundary_pieces
from rankrange.geometry import ConvexRegion

GRID_STEP = 0.2
MARGIN = 0.10
SIZE_PX = 600


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def _xy(z: complex) -> str:
    return f"{fmt(z.real)},{fmt(-z.imag)}"


@dataclass
class Canvas:
    """Collects SVG elements and the world-frame points they cover."""

    elements: list[str] = field(default_factory=list)
    extent: list[complex] = field(default_factory=list)

    def cover(self, pts) -> None:
        self.extent.extend(complex(p) for p in np.atleast_1d(pts))

    def add(self, element: str, pts) -> None:
        self.elements.append(element)
        self.cover(pts)

    def bounds(self) -> tuple[float, float, float, float]:
        z = np.asarray(self.extent, dtype=complex)
        if len(z) == 0:
            return -1.0, -1.0, 1.0, 1.0
        return float(z.real.min()), float(z.imag.min()), float(z.real.max()), float(z.imag.max())


def _clip_line(theta: float, offset: float, box) -> tuple[complex, complex] | None:
    """Part of ``x cos(theta) - y sin(theta) = offset`` inside ``box``."""
    x0, y0, x1, y1 = box
    c, s = math.cos(theta), -math.sin(theta)
    base = complex(offset * c, offset * s)
    direction = complex(-s, c)
    lo, hi = -math.inf, math.inf
    for p, d, a, b in ((base.real, direction.real, x0, x1), (base.imag, direction.imag, y0, y1)):
        if abs(d) < 1e-15:
            if p < a or p > b:
                return None
            continue
        t0, t1 = sorted(((a - p) / d, (b - p) / d))
        lo, hi = max(lo, t0), min(hi, t1)
    if lo >= hi:
        return None
    return base + lo * direction, base + hi * direction


def _arc_path(center: complex, radius: float, start: float, end: float) -> tuple[str, list[complex]]:
    """Path commands for a counterclockwise world arc, split into pieces below pi."""
    pieces = max(1, math.ceil((end - start) / (0.5 * math.pi)))
    angles = np.linspace(start, end, pieces + 1)
    pts = [center + radius * complex(math.cos(a), math.sin(a)) for a in angles]
    r = fmt(radius)
    # y is flipped, so a world counterclockwise arc uses sweep-flag 0
    cmds = [f"A {r} {r} 0 0 0 {_xy(p)}" for p in pts[1:]]
    # extreme points of the circle reached by the arc, for the bounding box
    cover = list(pts)
    for q in range(-8, 9):
        a = q * 0.5 * math.pi
        if start <= a <= end:
            cover.append(center + radius * complex(math.cos(a), math.sin(a)))
    return f"M {_xy(pts[0])} " + " ".join(cmds), cover


def draw_descriptor(canvas: Canvas, desc: RegionDescriptor, color: str = "#3366cc") -> None:
    """Exact boundary of a closed-form region: arcs as arc commands."""
    kind = desc.kind
    pieces = boundary_pieces(desc)
    if kind == "point":
        p = desc.to_world(pieces[0][1])
        canvas.add(
            f'<circle cx="{fmt(p.real)}" cy="{fmt(-p.imag)}" r="0.02" fill="{color}" class="region"/>', [p]
        )
        return
    if kind == "segment":
        a, b = desc.to_world(pieces[0][1]), desc.to_world(pieces[0][2])
        canvas.add(
            f'<path d="M {_xy(a)} L {_xy(b)}" stroke="{color}" fill="none" class="region line"/>',
            [a, b],
        )
        return
    parts, cover = [], []
    for pc in pieces:
        if pc[0] == "arc":
            start = pc[2] + desc.psi
            cmd, pts = _arc_path(desc.alpha, pc[1], start, start + (pc[3] - pc[2]))
            # continue the outline instead of opening a new subpath
            parts.append(cmd.replace("M", "L", 1))
            cover += pts
        else:
            a, b = desc.to_world(pc[1]), desc.to_world(pc[2])
            parts.append(f"L {_xy(a)} L {_xy(b)}")
            cover += [a, b]
    d = "M" + " ".join(parts)[1:] + " Z"
    canvas.add(
        f'<path d="{d}" fill="{color}" fill-opacity="0.25" stroke="{color}" class="region"/>',
        cover,
    )


def draw_region(canvas: Canvas, region: ConvexRegion, color: str = "#cc6633") -> None:
    """A polygonal region (for example the sampled outer approximation)."""
    if region.is_empty:
        return
    z = region.points
    if region.kind == "point":
        canvas.add(f'<circle cx="{fmt(z[0].real)}" cy="{fmt(-z[0].imag)}" r="0.02" fill="{color}"/>', z)
        return
    d = "M " + " L ".join(_xy(p) for p in z) + (" Z" if region.kind == "polygon" else "")
    fill = f'fill="{color}" fill-opacity="0.25"' if region.kind == "polygon" else 'fill="none"'
    cls = "outer" if region.kind == "polygon" else "outer line"
    canvas.add(f'<path d="{d}" {fill} stroke="{color}" class="{cls}"/>', z)


def draw_support_lines(canvas: Canvas, thetas, offsets, box) -> None:
    """One thin line per sampled angle, clipped to ``box``."""
    segs = []
    for theta, off in zip(thetas, offsets):
        seg = _clip_line(float(theta), float(off), box)
        if seg is not None:
            segs.append(seg)
    if not segs:
        return
    d = " ".join(f"M {_xy(a)} L {_xy(b)}" for a, b in segs)
    canvas.add(
        f'<path d="{d}" stroke="#777777" fill="none" class="support"/>',
        [p for seg in segs for p in seg],
    )


def draw_angle_set(canvas: Canvas, aset: AngleSet, center: complex, radius: float, psi: float, color: str) -> None:
    """Mark an angle set as arcs of the circle ``|z - center| = radius``."""
    for lo, hi, _, _ in aset.intervals():
        if hi - lo <= 0.0 or radius <= 0.0:
            continue
        cmd, cover = _arc_path(center, radius, lo + psi, hi + psi)
        canvas.add(f'<path d="{cmd}" stroke="{color}" fill="none" class="angle-set"/>', cover)


def render(canvas: Canvas, title: str = "", note: str | None = None) -> str:
    """Finish the document: 0.2 grid, axes, 10% margin around all geometry."""
    x0, y0, x1, y1 = canvas.bounds()
    w, h = max(x1 - x0, 1e-3), max(y1 - y0, 1e-3)
    x0, x1 = x0 - MARGIN * w, x1 + MARGIN * w
    y0, y1 = y0 - MARGIN * h, y1 + MARGIN * h
    w, h = x1 - x0, y1 - y0
    grid = []
    for i in range(math.ceil(x0 / GRID_STEP), math.floor(x1 / GRID_STEP) + 1):
        x = i * GRID_STEP
        grid.append(f"M {fmt(x)},{fmt(-y1)} L {fmt(x)},{fmt(-y0)}")
    for j in range(math.ceil(y0 / GRID_STEP), math.floor(y1 / GRID_STEP) + 1):
        y = j * GRID_STEP
        grid.append(f"M {fmt(x0)},{fmt(-y)} L {fmt(x1)},{fmt(-y)}")
    unit = max(w, h) / SIZE_PX
    style = (
        f".grid{{stroke-width:{fmt(unit)}}} .support{{stroke-width:{fmt(0.6 * unit)};stroke-opacity:0.5}} "
        f".region,.outer{{stroke-width:{fmt(1.5 * unit)}}} .line{{stroke-width:{fmt(3 * unit)}}} "
        f".angle-set{{stroke-width:{fmt(3 * unit)}}}"
    )
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE_PX}" '
            f'height="{fmt(SIZE_PX * h / w)}" viewBox="{fmt(x0)} {fmt(-y1)} {fmt(w)} {fmt(h)}">'
        ),
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<style type="text/css">{style}</style>')
    out.append(f'<rect x="{fmt(x0)}" y="{fmt(-y1)}" width="{fmt(w)}" height="{fmt(h)}" fill="#ffffff"/>')
    out.append(f'<path d="{" ".join(grid)}" stroke="#e4e4e4" fill="none" class="grid"/>')
    out.extend(canvas.elements)
    if note:
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        out.append(
            f'<text x="{fmt(cx)}" y="{fmt(-cy)}" font-size="{fmt(0.08 * max(w, h))}" '
            f'text-anchor="middle" fill="#aa0000" class="note">{note}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
