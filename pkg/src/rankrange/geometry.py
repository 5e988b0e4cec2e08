"""Half-planes, their intersection, and metric queries on convex regions.

A :class:`HalfPlane` with angle ``theta`` and offset ``c`` is the set
``{x + iy : x cos(theta) - y sin(theta) <= c}``, i.e. ``Re(e^{i theta} mu) <= c``.
Intersections come back as a :class:`ConvexRegion`, which may be a polygon, a
segment, a point or empty.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from rankrange.core_linalg import TWO_PI, principal_angle

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

RTOL = 1e-9
ANGLE_TOL = 1e-12
DUPLICATE_RTOL = 1e-12
KINDS = ("polygon", "segment", "point", "empty")


class UnboundedRegionError(ValueError):
    """The half-plane directions leave a gap of at least pi: the intersection is unbounded."""


class EmptyRegionError(ValueError):
    """An operation that needs a non-empty region got an empty one."""


@dataclass(frozen=True)
class HalfPlane:
    theta: float
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "theta", principal_angle(float(self.theta)))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def normal(self) -> tuple[float, float]:
        return math.cos(self.theta), -math.sin(self.theta)

    def slack(self, x: float, y: float) -> float:
        """``offset - (x cos theta - y sin theta)``; non-negative inside."""
        nx, ny = self.normal
        return self.offset - (nx * x + ny * y)


@dataclass(frozen=True)
class ConvexRegion:
    """Closed convex set in the plane.

    ``vertices`` is a ``(k, 2)`` array: counterclockwise polygon vertices,
    the two endpoints of a segment, the single point, or nothing.
    """

    kind: str
    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        expected = {"segment": 2, "point": 1, "empty": 0}
        if self.kind in expected and len(v) != expected[self.kind]:
            raise ValueError(f"{self.kind} needs {expected[self.kind]} vertices, got {len(v)}")
        if self.kind == "polygon" and len(v) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def empty(cls) -> ConvexRegion:
        return cls("empty")

    @classmethod
    def point(cls, z: complex) -> ConvexRegion:
        return cls("point", [[z.real, z.imag]])

    @classmethod
    def segment(cls, a: complex, b: complex) -> ConvexRegion:
        return cls("segment", [[a.real, a.imag], [b.real, b.imag]])

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def points(self) -> np.ndarray:
        """Vertices as complex numbers."""
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def diameter(self) -> float:
        return _diameter(self.vertices)

    def area(self) -> float:
        return _area(self.vertices) if self.kind == "polygon" else 0.0

    def transformed(self, rotation: complex, shift: complex) -> ConvexRegion:
        """Image under ``mu -> rotation * mu + shift`` (``|rotation| == 1``)."""
        if self.is_empty:
            return self
        z = rotation * self.points + shift
        return ConvexRegion(self.kind, np.column_stack([z.real, z.imag]))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": [[float(x), float(y)] for x, y in self.vertices]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> ConvexRegion:
        return cls(data["kind"], np.asarray(data.get("vertices", []), dtype=float).reshape(-1, 2))

    @classmethod
    def from_json(cls, text: str) -> ConvexRegion:
        return cls.from_dict(json.loads(text))


# --- small polygon helpers -------------------------------------------------


def _area(v: np.ndarray) -> float:
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _edge_normal_angles(v: np.ndarray) -> np.ndarray:
    """Unwrapped, increasing outward normal angles of the edges v[i] -> v[i+1]."""
    e = np.roll(v, -1, axis=0) - v
    ang = np.arctan2(e[:, 1], e[:, 0]) - 0.5 * math.pi
    return ang[0] + np.mod(ang - ang[0], TWO_PI)


def _support_index(v: np.ndarray, normal_angles: np.ndarray, omega) -> np.ndarray:
    """Index of the vertex maximizing ``<u(omega), v>`` for each query angle."""
    omega = np.asarray(omega, dtype=float)
    if len(v) == 1:
        return np.zeros(omega.shape, dtype=int)
    w = normal_angles[0] + np.mod(omega - normal_angles[0], TWO_PI)
    edge = np.searchsorted(normal_angles, w, side="right") - 1
    return (edge + 1) % len(v)


def _diameter(v: np.ndarray) -> float:
    if len(v) < 2:
        return 0.0
    if len(v) <= 400:
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.sum(d * d, axis=-1))))
    # antipodal pairs via the support map of each edge normal, plus neighbours
    ang = _edge_normal_angles(v)
    anti = _support_index(v, ang, ang + math.pi)
    n = len(v)
    best = 0.0
    for shift_a in (0, 1):
        for shift_b in (-1, 0, 1):
            a = v[(np.arange(n) + shift_a) % n]
            b = v[(anti + shift_b) % n]
            best = max(best, float(np.max(np.hypot(*(a - b).T))))
    return best


def min_width(v: np.ndarray) -> float:
    """Minimum width of the convex hull of the ccw vertex list ``v``."""
    if len(v) < 3:
        return 0.0
    ang = _edge_normal_angles(v)
    normals = np.column_stack([np.cos(ang), np.sin(ang)])
    anti = _support_index(v, ang, ang + math.pi)
    widths = np.einsum("ij,ij->i", normals, v - v[anti])
    return float(max(np.min(widths), 0.0))


def narrowest_direction(v: np.ndarray) -> tuple[float, float]:
    """``(width, angle)`` of the thinnest strip holding the polygon ``v``.

    ``angle`` is the direction of the strip's outward normal.
    """
    ang = _edge_normal_angles(v)
    normals = np.column_stack([np.cos(ang), np.sin(ang)])
    anti = _support_index(v, ang, ang + math.pi)
    widths = np.einsum("ij,ij->i", normals, v - v[anti])
    i = int(np.argmin(widths))
    return float(max(widths[i], 0.0)), float(ang[i])


def _clean_polygon(v: np.ndarray, tol: float) -> np.ndarray:
    """Drop repeated and collinear vertices from a ccw convex vertex list."""
    v = np.asarray(v, dtype=float).reshape(-1, 2)
    while len(v) >= 2:
        step = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        dup = step <= tol
        if not dup.any():
            break
        if dup.all():
            return v[:1]
        v = v[~dup]
    while len(v) >= 3:
        e1 = v - np.roll(v, 1, axis=0)
        e2 = np.roll(v, -1, axis=0) - v
        cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        flat = cross <= 1e-12 * np.hypot(*e1.T) * np.hypot(*e2.T)
        if not flat.any():
            break
        # drop every other flat vertex per pass so neighbours are re-examined
        idx = np.flatnonzero(flat)
        drop = idx[np.r_[True, np.diff(idx) > 1]]
        v = np.delete(v, drop, axis=0)
    return v


# --- intersection ----------------------------------------------------------


def _merge_parallel(normal_angle: np.ndarray, offsets: np.ndarray):
    order = np.argsort(normal_angle, kind="stable")
    ang, off = normal_angle[order], offsets[order]
    starts = np.r_[0, np.flatnonzero(np.diff(ang) > ANGLE_TOL) + 1]
    ang = ang[starts]
    off = np.minimum.reduceat(off, starts)
    if len(ang) > 1 and ang[0] + TWO_PI - ang[-1] <= ANGLE_TOL:
        off[0] = min(off[0], off[-1])
        ang, off = ang[:-1], off[:-1]
    return ang, off


def _max_gap(normal_angle: np.ndarray) -> float:
    if len(normal_angle) == 0:
        return TWO_PI
    gaps = np.diff(np.append(normal_angle, normal_angle[0] + TWO_PI))
    return float(np.max(gaps))


def _hpi_kernel(nx, ny, b, eps, tol, dq, pts):
    # Sorted-angle deque intersection; dq is scratch of size 2n, pts receives vertices.
    n = len(b)
    head = n
    tail = n  # dq[head:tail]
    for i in range(n):
        while tail - head > 1:
            j, k = dq[tail - 1], dq[tail - 2]
            det = nx[j] * ny[k] - ny[j] * nx[k]
            px = (b[j] * ny[k] - b[k] * ny[j]) / det
            py = (nx[j] * b[k] - nx[k] * b[j]) / det
            if nx[i] * px + ny[i] * py - b[i] > eps:
                tail -= 1
            else:
                break
        while tail - head > 1:
            j, k = dq[head], dq[head + 1]
            det = nx[j] * ny[k] - ny[j] * nx[k]
            px = (b[j] * ny[k] - b[k] * ny[j]) / det
            py = (nx[j] * b[k] - nx[k] * b[j]) / det
            if nx[i] * px + ny[i] * py - b[i] > eps:
                head += 1
            else:
                break
        if tail > head:
            j = dq[tail - 1]
            if abs(nx[i] * ny[j] - ny[i] * nx[j]) < 1e-15:
                if nx[i] * nx[j] + ny[i] * ny[j] < 0.0:
                    return -1
                if b[i] < b[j]:
                    tail -= 1
                else:
                    continue
        dq[tail] = i
        tail += 1
    while tail - head > 2:
        j, k = dq[tail - 1], dq[tail - 2]
        det = nx[j] * ny[k] - ny[j] * nx[k]
        px = (b[j] * ny[k] - b[k] * ny[j]) / det
        py = (nx[j] * b[k] - nx[k] * b[j]) / det
        i = dq[head]
        if nx[i] * px + ny[i] * py - b[i] > eps:
            tail -= 1
        else:
            break
    while tail - head > 2:
        j, k = dq[head], dq[head + 1]
        det = nx[j] * ny[k] - ny[j] * nx[k]
        px = (b[j] * ny[k] - b[k] * ny[j]) / det
        py = (nx[j] * b[k] - nx[k] * b[j]) / det
        i = dq[tail - 1]
        if nx[i] * px + ny[i] * py - b[i] > eps:
            head += 1
        else:
            break
    count = tail - head
    if count < 3:
        return -1
    for t in range(count):
        j = dq[head + t]
        k = dq[head + (t + 1) % count]
        det = nx[j] * ny[k] - ny[j] * nx[k]
        if det <= 0.0:
            # consecutive kept lines must turn left by less than pi
            return -2
        pts[t, 0] = (b[j] * ny[k] - b[k] * ny[j]) / det
        pts[t, 1] = (nx[j] * b[k] - nx[k] * b[j]) / det
    # The sweep is not reliable when many lines nearly meet in one point, so
    # check the result: every edge runs forward along its line, and each input
    # line holds at the vertex that supports the polygon in its direction.
    for t in range(count):
        j = dq[head + t]
        prev = pts[(t - 1) % count]
        dx = pts[t, 0] - prev[0]
        dy = pts[t, 1] - prev[1]
        if -ny[j] * dx + nx[j] * dy < -tol:
            return -2
    t = 0
    for i in range(n):
        # vertex t joins kept lines t and t+1; advance while line i is past line t+1
        while t < count - 1 and dq[head + t + 1] <= i:
            t += 1
        v = t if dq[head] <= i else count - 1
        if nx[i] * pts[v, 0] + ny[i] * pts[v, 1] - b[i] > tol:
            return -2
    return count


def _clip_kernel(nx, ny, b, box, tol, buf_a, buf_b):
    # Clip the box [-box, box]^2 by each half-plane in turn; returns vertex count.
    buf_a[0, 0] = -box
    buf_a[0, 1] = -box
    buf_a[1, 0] = box
    buf_a[1, 1] = -box
    buf_a[2, 0] = box
    buf_a[2, 1] = box
    buf_a[3, 0] = -box
    buf_a[3, 1] = box
    count = 4
    src = buf_a
    dst = buf_b
    for i in range(len(b)):
        out = 0
        for t in range(count):
            px, py = src[t, 0], src[t, 1]
            qx, qy = src[(t + 1) % count, 0], src[(t + 1) % count, 1]
            sp = nx[i] * px + ny[i] * py - b[i]
            sq = nx[i] * qx + ny[i] * qy - b[i]
            if sp <= tol:
                dst[out, 0] = px
                dst[out, 1] = py
                out += 1
            if (sp < -tol and sq > tol) or (sp > tol and sq < -tol):
                f = sp / (sp - sq)
                dst[out, 0] = px + f * (qx - px)
                dst[out, 1] = py + f * (qy - py)
                out += 1
        count = out
        if count == 0:
            return 0
        src, dst = dst, src
    if src is not buf_a:
        for t in range(count):
            buf_a[t, 0] = src[t, 0]
            buf_a[t, 1] = src[t, 1]
    return count


if njit is not None:
    _hpi_kernel = njit(cache=True)(_hpi_kernel)
    _clip_kernel = njit(cache=True)(_clip_kernel)


def _hpi(nx, ny, b, eps) -> np.ndarray | None:
    """Vertices (ccw, possibly repeated) of ``{nx*x + ny*y <= b}`` or None if empty.

    Lines must be sorted by normal angle; the classic deque sweep, O(n).
    """
    n = len(b)
    nx, ny, b = np.ascontiguousarray(nx), np.ascontiguousarray(ny), np.ascontiguousarray(b)
    tol = max(float(eps), 1e-12 * max(1.0, float(np.max(np.abs(b)))))
    dq = np.zeros(2 * n + 2, dtype=np.int64)
    pts = np.zeros((n, 2))
    count = _hpi_kernel(nx, ny, b, float(eps), tol, dq, pts)
    if count > 0:
        return pts[:count]
    # empty or failed the self-check: settle it by plain clipping
    box = 2.0 * float(np.max(np.abs(b)))
    buf_a = np.zeros((n + 5, 2))
    buf_b = np.zeros((n + 5, 2))
    count = _clip_kernel(nx, ny, b, box, float(eps), buf_a, buf_b)
    if count == 0:
        return None
    return buf_a[:count].copy()


def _feasible_core(normal_angle, offsets, relax, eps, box) -> np.ndarray | None:
    """Vertices of ``{n.x <= b + relax}`` clipped to a box, or None if empty."""
    ang = np.concatenate([normal_angle, [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]])
    off = np.concatenate([offsets + relax, [box] * 4])
    ang, off = _merge_parallel(ang, off)
    return _hpi(np.cos(ang), np.sin(ang), off, eps)


def _touches_box(v: np.ndarray, box: float) -> bool:
    return bool(np.any(np.abs(v) >= box * (1.0 - 1e-9)))


def _classify_thin(v: np.ndarray, point_tol: float) -> ConvexRegion:
    """Collapse a thin polygon to a segment or a point."""
    centroid = v.mean(axis=0)
    diam = _diameter(v)
    if diam <= point_tol:
        return ConvexRegion("point", centroid[None, :])
    d = v[:, None, :] - v[None, :, :]
    i, j = np.unravel_index(np.argmax(np.sum(d * d, axis=-1)), (len(v), len(v)))
    u = (v[j] - v[i]) / diam
    proj = (v - centroid) @ u
    a = centroid + proj.min() * u
    c = centroid + proj.max() * u
    return ConvexRegion("segment", np.vstack([a, c]))


def intersect_halfplanes(planes, rtol: float = RTOL) -> ConvexRegion:
    """Intersection of half-planes as a classified :class:`ConvexRegion`.

    Tolerances scale with ``max(1, max |offset|)``. A region whose minimum
    width is at most ``rtol * scale`` is degenerate: it becomes a point when
    its diameter is also that small, otherwise a segment. Emptiness is judged
    after relaxing every offset by ``rtol * scale / 100``.
    """
    planes = list(planes)
    if len(planes) < 3:
        raise ValueError(f"need at least 3 half-planes, got {len(planes)}")
    thetas = np.array([p.theta for p in planes], dtype=float)
    offsets = np.array([p.offset for p in planes], dtype=float)
    return intersect_arrays(thetas, offsets, rtol)


def intersect_arrays(thetas, offsets, rtol: float = RTOL) -> ConvexRegion:
    """Array form of :func:`intersect_halfplanes` (same conventions)."""
    thetas = np.asarray(thetas, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    if thetas.shape != offsets.shape or thetas.ndim != 1:
        raise ValueError("thetas and offsets must be 1-D arrays of equal length")
    if len(thetas) < 3:
        raise ValueError(f"need at least 3 half-planes, got {len(thetas)}")
    if not (np.all(np.isfinite(thetas)) and np.all(np.isfinite(offsets))):
        raise ValueError("half-plane data must be finite")
    normal_angle, offsets = _merge_parallel(np.mod(-thetas, TWO_PI), offsets)
    if _max_gap(normal_angle) >= math.pi - ANGLE_TOL:
        raise UnboundedRegionError("half-plane directions do not positively span the plane")
    scale = max(1.0, float(np.max(np.abs(offsets))))
    eps = rtol * scale
    dup_tol = DUPLICATE_RTOL * scale
    box = 10.0 * scale
    for _ in range(8):
        exact = _feasible_core(normal_angle, offsets, 0.0, 0.0, box)
        if exact is not None and _touches_box(exact, box):
            box *= 100.0
            continue
        if exact is not None:
            poly = _clean_polygon(exact, dup_tol)
            if len(poly) >= 3 and min_width(poly) > eps:
                return ConvexRegion("polygon", poly)
        relaxed = _feasible_core(normal_angle, offsets, 0.01 * eps, 0.0, box)
        if relaxed is None:
            return ConvexRegion.empty()
        if _touches_box(relaxed, box):
            box *= 100.0
            continue
        core = _clean_polygon(relaxed, 0.0)
        if len(core) == 0:
            core = relaxed
        if len(core) >= 3 and min_width(core) > eps:
            # wide after relaxation but not before: exact run was unstable
            return ConvexRegion("polygon", core)
        return _classify_thin(core, eps)
    raise UnboundedRegionError("intersection does not fit a bounding box of any tried size")


# --- queries ---------------------------------------------------------------


def support_value(region: ConvexRegion, theta: float) -> float:
    """``max over the region of x cos(theta) - y sin(theta)``."""
    if region.is_empty:
        raise EmptyRegionError("support value of an empty region")
    v = region.vertices
    return float(np.max(v[:, 0] * math.cos(theta) - v[:, 1] * math.sin(theta)))


def support_values(region: ConvexRegion, thetas) -> np.ndarray:
    if region.is_empty:
        raise EmptyRegionError("support value of an empty region")
    thetas = np.asarray(thetas, dtype=float)
    v = region.vertices
    if len(v) < 3:
        return np.max(np.outer(np.cos(thetas), v[:, 0]) - np.outer(np.sin(thetas), v[:, 1]), axis=1)
    # support direction for angle theta is u = (cos theta, -sin theta), angle -theta
    ang = _edge_normal_angles(v)
    idx = _support_index(v, ang, -thetas)
    return v[idx, 0] * np.cos(thetas) - v[idx, 1] * np.sin(thetas)


def distance_to_region(region: ConvexRegion, z) -> np.ndarray:
    """Euclidean distance from each point ``z`` (complex, array-like) to the region."""
    if region.is_empty:
        raise EmptyRegionError("distance to an empty region")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    p = np.column_stack([z.real, z.imag])
    v = region.vertices
    if len(v) == 1:
        return np.hypot(*(p - v[0]).T)
    a = v
    b = np.roll(v, -1, axis=0) if len(v) >= 3 else v[::-1]
    best = np.full(len(p), np.inf)
    for s, e in zip(a, b):
        d = e - s
        dd = float(d @ d)
        t = np.clip(((p - s) @ d) / dd, 0.0, 1.0) if dd > 0 else np.zeros(len(p))
        q = s + t[:, None] * d
        best = np.minimum(best, np.hypot(*(p - q).T))
    if len(v) >= 3:
        e = np.roll(v, -1, axis=0) - v
        # inside iff left of every ccw edge
        cross = e[None, :, 0] * (p[:, None, 1] - v[None, :, 1]) - e[None, :, 1] * (p[:, None, 0] - v[None, :, 0])
        inside = np.all(cross >= 0.0, axis=1)
        best = np.where(inside, 0.0, best)
    return best


def contains(region: ConvexRegion, mu, tol: float = 0.0) -> bool:
    """True iff ``mu`` is within distance ``tol`` of the closed region."""
    if region.is_empty:
        return False
    return bool(distance_to_region(region, complex(mu))[0] <= tol)


def _breakpoints(v: np.ndarray) -> np.ndarray:
    if len(v) < 2:
        return np.zeros(0)
    return np.mod(_edge_normal_angles(v), TWO_PI)


def hausdorff_distance(a: ConvexRegion, b: ConvexRegion) -> float:
    """Hausdorff distance between two non-empty convex regions.

    For convex compact sets this is the sup-norm distance of the support
    functions, which for polygons is piecewise ``(p - q) . u`` with fixed
    maximizers ``p, q`` between consecutive edge-normal breakpoints; the
    maximum over each piece is taken exactly.
    """
    if a.is_empty or b.is_empty:
        raise EmptyRegionError("Hausdorff distance needs two non-empty regions")
    va, vb = a.vertices, b.vertices
    brk = np.unique(np.concatenate([_breakpoints(va), _breakpoints(vb), [0.0]]))
    lo = brk
    hi = np.append(brk[1:], brk[0] + TWO_PI)
    mid = 0.5 * (lo + hi)
    ia = _support_index(va, _edge_normal_angles(va), mid) if len(va) > 1 else np.zeros(len(mid), int)
    ib = _support_index(vb, _edge_normal_angles(vb), mid) if len(vb) > 1 else np.zeros(len(mid), int)
    d = va[ia] - vb[ib]
    best = 0.0
    for ang in (lo, hi):
        val = np.abs(d[:, 0] * np.cos(ang) + d[:, 1] * np.sin(ang))
        best = max(best, float(np.max(val)))
    # interior critical points: u parallel to +-d
    norm = np.hypot(d[:, 0], d[:, 1])
    for flip in (0.0, math.pi):
        phi = np.arctan2(d[:, 1], d[:, 0]) + flip
        phi = lo + np.mod(phi - lo, TWO_PI)
        inside = phi < hi
        if np.any(inside):
            best = max(best, float(np.max(norm[inside])))
    return best
