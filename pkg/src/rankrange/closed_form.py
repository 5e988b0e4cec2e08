"""Exact higher rank numerical ranges of ``J_n(alpha) (+) beta I_m``.

Everything is computed in the normalized frame of
``T0 = e^{-i psi} J_n(0) (+) |beta - alpha| I_m`` and mapped back with
``mu -> alpha + e^{i psi} mu``. Notation follows the usual one for this family:

* ``phi_k = k pi/(n+1)`` and ``psi_km = (k-m) pi/(n+1)``;
* ``D_k = {theta : R cos(theta) <= cos(phi_k)}`` and, for ``k > m``,
  ``C_km = {theta : R cos(theta) > cos(psi_km)}``, with ``R = |beta - alpha|``;
* ``delta_k`` / ``eta_km`` are the half-widths that describe those sets;
* the cone ``R_{r,k}`` has apex ``r`` and edges
  ``x cos(delta_k) +- y sin(delta_k) = r cos(delta_k)``.

The range is one of seven shapes (:func:`classify`): a disk, the convex hull
of a disk and the point ``R`` (optionally capped by a larger disk), a segment
on the real axis, a point, or empty.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from rankrange.core_linalg import TWO_PI, JordanScalarModel, principal_angle
from rankrange.geometry import ConvexRegion, EmptyRegionError, _clean_polygon

ACOS_SLACK = 1e-12
TIE_RTOL = 1e-12
POINT_RTOL = 1e-9

CASE_KINDS = {1: "polygon", 2: "polygon", 3: "polygon", 4: "segment", 5: "segment", 6: "point", 7: "empty"}


def _acos(x: float) -> float:
    if x > 1.0 + ACOS_SLACK or x < -1.0 - ACOS_SLACK:
        raise ValueError(f"arccos argument {x!r} is outside [-1, 1] beyond rounding")
    return math.acos(min(1.0, max(-1.0, x)))


def _cos_pi_fraction(num: int, den: int) -> float:
    """``cos(num*pi/den)`` with exact zeros when ``2*num/den`` is an odd integer."""
    if (2 * num) % den == 0 and ((2 * num) // den) % 2 == 1:
        return 0.0
    return math.cos(num * math.pi / den)


def _check_k(model: JordanScalarModel, k: int) -> int:
    if int(k) != k or not 1 <= k <= model.dim:
        raise ValueError(f"k={k!r} out of range 1..{model.dim}")
    return int(k)


@dataclass(frozen=True)
class AngleData:
    phi_k: float
    psi_km: float
    delta_k: float
    eta_km: float
    cos_phi_k: float
    cos_psi_km: float


def angle_data(model: JordanScalarModel, k: int) -> AngleData:
    k = _check_k(model, k)
    n, m, gap = model.n, model.m, model.gap
    cos_phi = _cos_pi_fraction(k, n + 1)
    cos_psi = _cos_pi_fraction(k - m, n + 1)
    delta = 0.0
    if gap > 0.0 and gap >= abs(cos_phi):
        delta = _acos(cos_phi / gap)
    eta = 0.0
    if k > m and gap > 0.0 and gap >= abs(cos_psi):
        eta = _acos(cos_psi / gap)
    return AngleData(
        phi_k=k * math.pi / (n + 1),
        psi_km=(k - m) * math.pi / (n + 1),
        delta_k=delta,
        eta_km=eta,
        cos_phi_k=cos_phi,
        cos_psi_km=cos_psi,
    )


@dataclass(frozen=True)
class AngleSet:
    """A symmetric set of angles: everything, nothing, or an arc about ``center``.

    ``D_k`` is the closed arc about ``pi``; ``C_km`` is the open arc about 0.
    """

    kind: str
    center: float = 0.0
    half_width: float = 0.0
    closed: bool = True

    def __contains__(self, theta: float) -> bool:
        if self.kind == "full":
            return True
        if self.kind == "empty":
            return False
        d = abs(principal_angle(theta - self.center + math.pi) - math.pi)
        return d <= self.half_width if self.closed else d < self.half_width

    def contains_array(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        if self.kind == "full":
            return np.ones(thetas.shape, dtype=bool)
        if self.kind == "empty":
            return np.zeros(thetas.shape, dtype=bool)
        d = np.abs(np.mod(thetas - self.center + math.pi, TWO_PI) - math.pi)
        return d <= self.half_width if self.closed else d < self.half_width

    def intervals(self) -> list[tuple[float, float, bool, bool]]:
        """Pieces ``(lo, hi, lo_closed, hi_closed)`` inside ``[0, 2 pi]``."""
        if self.kind == "full":
            return [(0.0, TWO_PI, True, True)]
        if self.kind == "empty":
            return []
        lo, hi = self.center - self.half_width, self.center + self.half_width
        if lo >= 0.0 and hi <= TWO_PI:
            return [(lo, hi, self.closed, self.closed)]
        # arc about 0: [0, hw) u (2pi - hw, 2pi] when open
        return [(0.0, hi, True, self.closed), (TWO_PI + lo, TWO_PI, self.closed, True)]


def set_Dk(model: JordanScalarModel, k: int) -> AngleSet:
    """``D_k`` as an exact :class:`AngleSet` (meaningful for ``k <= n``)."""
    ad = angle_data(model, k)
    if ad.delta_k > 0.0:
        return AngleSet("arc", math.pi, math.pi - ad.delta_k, closed=True)
    if 2 * k <= model.n + 1:
        return AngleSet("full")
    return AngleSet("empty")


def set_Ckm(model: JordanScalarModel, k: int) -> AngleSet:
    ad = angle_data(model, k)
    if ad.eta_km > 0.0:
        return AngleSet("arc", 0.0, ad.eta_km, closed=False)
    if k <= model.m or ad.cos_psi_km >= 0.0:
        # cos(psi) == 0 only reaches here when beta == alpha, where C is empty
        return AngleSet("empty")
    return AngleSet("full")


def cone_slack(x, y, r: float, delta: float):
    """Signed slack of ``x + iy`` against the cone ``R_{r,k}``; >= 0 inside.

    The two edge inequalities ``x cos(delta) +- y sin(delta) <= r cos(delta)``
    pin down the cone only while ``delta < pi/2``. From ``pi/2`` on they also
    admit a wedge with ``x > r``, so the cone's defining bound ``x <= r`` is
    kept as a third constraint (it is implied when ``delta < pi/2``).
    """
    c, s = math.cos(delta), math.sin(delta)
    x = np.asarray(x, dtype=float)
    edges = r * c - (x * c + np.abs(np.asarray(y, dtype=float)) * s)
    return np.minimum(edges, r - x)


def in_cone(x: float, y: float, r: float, delta_k: float, tol: float = 0.0) -> bool:
    """Membership of ``x + iy`` in the cone ``R_{r,k}``, for ``0 < delta_k < pi``."""
    if not 0.0 < delta_k < math.pi:
        raise ValueError(f"cone half-angle must lie in (0, pi), got {delta_k!r}")
    return bool(cone_slack(x, y, r, delta_k) >= -tol)


def lambda_k_closed(model: JordanScalarModel, k: int, theta) -> np.ndarray | float:
    """k-th largest eigenvalue of ``Re(e^{i theta} T0)`` from the piecewise formula."""
    k = _check_k(model, k)
    ad = angle_data(model, k)
    scalar = np.ndim(theta) == 0
    theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    out = model.gap * np.cos(theta)
    if k <= model.n:
        out = np.where(set_Dk(model, k).contains_array(theta), ad.cos_phi_k, out)
    out = np.where(set_Ckm(model, k).contains_array(theta), ad.cos_psi_km, out)
    return float(out) if scalar else out


def lambda_k_world(model: JordanScalarModel, k: int, theta):
    """Support data of ``T`` itself: ``Re(e^{i theta} alpha) + lambda_k(Re e^{i(theta+psi)} T0)``."""
    theta = np.asarray(theta, dtype=float)
    shift = model.alpha.real * np.cos(theta) - model.alpha.imag * np.sin(theta)
    return shift + lambda_k_closed(model, k, theta + model.psi)


@dataclass(frozen=True)
class RegionDescriptor:
    """One row of the case table, with its geometry in the normalized frame.

    ``params`` holds exactly the quantities the case uses:
    ``disk_radius`` (cases 1-3), ``apex`` and ``half_angle`` (2-3),
    ``cap_radius`` (3), ``segment`` as ``(start, end)`` on the real axis (4-5),
    ``point`` (6).
    """

    case_id: int
    alpha: complex
    psi: float
    params: dict = field(default_factory=dict)
    n: int = 0
    m: int = 0
    k: int = 0

    @property
    def kind(self) -> str:
        kind = CASE_KINDS[self.case_id]
        if kind == "segment":
            a, b = self.params["segment"]
            if abs(b - a) <= POINT_RTOL * max(1.0, abs(b)):
                return "point"
        return kind

    @property
    def is_empty(self) -> bool:
        return self.case_id == 7

    def to_world(self, mu):
        return self.alpha + cmath.exp(1j * self.psi) * mu

    def to_normalized(self, z):
        return (z - self.alpha) * cmath.exp(-1j * self.psi)

    def to_dict(self) -> dict:
        params = {}
        for key, val in self.params.items():
            params[key] = list(val) if isinstance(val, tuple) else val
        return {
            "case": self.case_id,
            "kind": self.kind,
            "alpha": [self.alpha.real, self.alpha.imag],
            "psi": self.psi,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "params": params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> RegionDescriptor:
        params = {}
        for key, val in data.get("params", {}).items():
            params[key] = tuple(val) if isinstance(val, list) else val
        return cls(
            case_id=int(data["case"]),
            alpha=complex(*data["alpha"]),
            psi=float(data["psi"]),
            params=params,
            n=int(data.get("n", 0)),
            m=int(data.get("m", 0)),
            k=int(data.get("k", 0)),
        )


def classify(model: JordanScalarModel, k: int) -> RegionDescriptor:
    """Pick the row of the case table for ``(model, k)`` and fill in its parameters.

    The conditions on ``k`` use exact integer comparisons (``2k`` against ``n``
    and ``n + 1``). Comparisons of ``R = |beta - alpha|`` against a cosine
    treat differences below ``1e-12 * max(1, R)`` as equality, so ties land on
    the non-strict side as in the table.
    """
    k = _check_k(model, k)
    ad = angle_data(model, k)
    n, m, gap = model.n, model.m, model.gap
    tie = TIE_RTOL * max(1.0, gap)
    base = {"alpha": model.alpha, "psi": model.psi, "n": n, "m": m, "k": k}

    if 2 * k <= n:
        r1 = ad.cos_phi_k
        if gap <= r1 + tie:
            return RegionDescriptor(1, params={"disk_radius": r1}, **base)
        if k <= m:
            return RegionDescriptor(
                2, params={"disk_radius": r1, "apex": gap, "half_angle": ad.delta_k}, **base
            )
        return RegionDescriptor(
            3,
            params={
                "disk_radius": r1,
                "apex": gap,
                "half_angle": ad.delta_k,
                "cap_radius": ad.cos_psi_km,
            },
            **base,
        )
    if 2 * k == n + 1:
        if k <= m or gap <= ad.cos_psi_km + tie:
            return RegionDescriptor(4, params={"segment": (0.0, gap)}, **base)
        return RegionDescriptor(5, params={"segment": (0.0, ad.cos_psi_km)}, **base)
    if k <= m or gap <= ad.cos_psi_km + tie:
        return RegionDescriptor(6, params={"point": gap}, **base)
    return RegionDescriptor(7, **base)


def _scale(desc: RegionDescriptor) -> float:
    vals = [abs(v) for v in desc.params.values() if isinstance(v, float)]
    return max([1.0] + vals)


def region_contains(desc: RegionDescriptor, mu, tol: float | None = None) -> bool:
    """Membership of ``mu`` (world frame) in the closed region.

    ``tol`` (default ``1e-12`` times the region scale) only absorbs rounding
    on the boundary.
    """
    if desc.is_empty:
        return False
    if tol is None:
        tol = 1e-12 * _scale(desc)
    z = desc.to_normalized(complex(mu))
    x, y = z.real, z.imag
    p = desc.params
    if desc.case_id in (4, 5):
        a, b = p["segment"]
        return abs(y) <= tol and a - tol <= x <= b + tol
    if desc.case_id == 6:
        return abs(z - p["point"]) <= tol
    r1 = p["disk_radius"]
    if abs(z) <= r1 + tol:
        return True
    if desc.case_id == 1:
        return False
    delta = p["half_angle"]
    # outside the closed disk, so arg z must avoid D_k = [delta, 2pi - delta]
    ang = abs(math.atan2(y, x))
    if ang >= delta:
        return False
    if not in_cone(x, y, p["apex"], delta, tol):
        return False
    if desc.case_id == 3:
        return abs(z) <= p["cap_radius"] + tol
    return True


def _cap_corner(r1: float, delta: float, apex: float, cap: float) -> complex:
    """Where the upper cone edge leaves the cap circle (normalized frame).

    Parametrize the edge from its tangency point ``t = r1 e^{i delta}``
    toward the apex; ``t`` is perpendicular to the edge, so the quadratic
    ``|t + s u|^2 = cap^2`` reduces to ``s = sqrt(cap^2 - r1^2)``.
    """
    t = r1 * cmath.exp(1j * delta)
    u = (apex - t) / abs(apex - t)
    s = math.sqrt(max(cap * cap - r1 * r1, 0.0))
    return t + s * u


def boundary_pieces(desc: RegionDescriptor) -> list[tuple]:
    """Exact boundary in the normalized frame, counterclockwise.

    Each piece is ``("arc", radius, start_angle, end_angle)`` or
    ``("line", start, end)`` with complex endpoints. Segments and points are
    returned as a single degenerate line piece.
    """
    if desc.is_empty:
        raise EmptyRegionError("empty region has no boundary")
    p = desc.params
    if desc.case_id in (4, 5):
        a, b = p["segment"]
        return [("line", complex(a), complex(b))]
    if desc.case_id == 6:
        return [("line", complex(p["point"]), complex(p["point"]))]
    r1 = p["disk_radius"]
    if desc.case_id == 1:
        return [("arc", r1, 0.0, TWO_PI)]
    delta, apex = p["half_angle"], p["apex"]
    upper = r1 * cmath.exp(1j * delta)
    lower = upper.conjugate()
    pieces = [("arc", r1, delta, TWO_PI - delta)]
    cap = p.get("cap_radius")
    if desc.case_id == 3 and apex > cap:
        corner = _cap_corner(r1, delta, apex, cap)
        omega = math.atan2(corner.imag, corner.real)
        pieces += [
            ("line", lower, corner.conjugate()),
            ("arc", cap, -omega, omega),
            ("line", corner, upper),
        ]
    else:
        pieces += [("line", lower, complex(apex)), ("line", complex(apex), upper)]
    return pieces


def _piece_length(piece) -> float:
    if piece[0] == "arc":
        return piece[1] * (piece[3] - piece[2])
    return abs(piece[2] - piece[1])


def boundary_points(desc: RegionDescriptor, count: int) -> np.ndarray:
    """``count`` points on the exact boundary (world frame), spread by arc length."""
    pieces = boundary_pieces(desc)
    lengths = np.array([_piece_length(pc) for pc in pieces])
    total = float(lengths.sum())
    if total == 0.0:
        return np.full(count, desc.to_world(pieces[0][1]), dtype=complex)
    s = (np.arange(count) + 0.5) * total / count
    edges = np.concatenate([[0.0], np.cumsum(lengths)])
    out = np.empty(count, dtype=complex)
    which = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(pieces) - 1)
    for i, pc in enumerate(pieces):
        sel = which == i
        if not sel.any():
            continue
        frac = (s[sel] - edges[i]) / max(lengths[i], 1e-300)
        if pc[0] == "arc":
            ang = pc[2] + frac * (pc[3] - pc[2])
            out[sel] = pc[1] * np.exp(1j * ang)
        else:
            out[sel] = pc[1] + frac * (pc[2] - pc[1])
    return desc.to_world(out)


def discretize(desc: RegionDescriptor, arc_steps: int = 720) -> ConvexRegion:
    """Polygonal (or segment/point) approximation of the region, world frame.

    Arcs are replaced by inscribed chords subtending at most
    ``2 pi / arc_steps``; straight pieces are exact. The Hausdorff error is at
    most ``radius * (1 - cos(pi / arc_steps))``.
    """
    if desc.is_empty:
        raise EmptyRegionError("cannot discretize an empty region")
    if arc_steps < 3:
        raise ValueError("arc_steps must be at least 3")
    kind = desc.kind
    pieces = boundary_pieces(desc)
    if kind == "point":
        # a one-point case or a segment shorter than the point tolerance
        return ConvexRegion.point(desc.to_world(0.5 * (pieces[0][1] + pieces[0][2])))
    if kind == "segment":
        return ConvexRegion.segment(desc.to_world(pieces[0][1]), desc.to_world(pieces[0][2]))
    pts = []
    for pc in pieces:
        if pc[0] == "arc":
            span = pc[3] - pc[2]
            steps = max(1, math.ceil(arc_steps * span / TWO_PI - 1e-9))
            ang = pc[2] + span * np.arange(steps) / steps
            pts.extend(pc[1] * np.exp(1j * ang))
        else:
            pts.append(pc[1])
    z = desc.to_world(np.asarray(pts, dtype=complex))
    v = _clean_polygon(np.column_stack([z.real, z.imag]), 1e-12 * _scale(desc))
    return ConvexRegion("polygon", v)
