"""Independent checks that do not go through the Li-Sze support data.

* Normal matrices: ``Lambda_k`` of a normal matrix with eigenvalues ``E``
  (``|E| = N``) is the intersection of ``conv(G)`` over all subsets ``G`` of
  ``E`` with ``N - k + 1`` elements. :func:`normal_range_oracle` evaluates
  that by brute force.
* Definition: ``mu`` is in ``Lambda_k(T)`` iff some rank-k orthogonal
  projection ``P`` has ``P T P = mu P``. :func:`verify_witness` checks a
  supplied ``P``; :func:`odd_jordan_witness` builds the standard one for
  ``J_{2l+1}(0) (+) 0_m``.
* Cone conditions: the angular and cotangent descriptions of the cone
  ``R_{r,k}``, written out literally.

Everything here uses plain numpy (LAPACK for eigenvalues) and its own small
hull routine, so it shares no code with the engines it checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from rankrange.core_linalg import (
    InvalidInputError,
    as_complex,
    as_square,
    direct_sum,
    jordan_block,
)

MAX_ORACLE_EIGS = 12
WITNESS_TOL = 1e-9


def _hull(points: np.ndarray) -> np.ndarray:
    """Convex hull (monotone chain), ccw, collinear points dropped; (k, 2)."""
    pts = np.unique(np.round(points, 15), axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-15:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-15:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _segment_distances(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each row of ``p`` to the segment ``[a, b]``."""
    ab = b - a
    denom = float(ab @ ab)
    t = np.zeros(len(p)) if denom == 0.0 else np.clip((p - a) @ ab / denom, 0.0, 1.0)
    return np.hypot(*(p - a - t[:, None] * ab).T)


def hull_margins(points, probes) -> np.ndarray:
    """Signed distance from each probe to the boundary of ``conv(points)``.

    Positive inside (distance to the nearest edge), negative outside. A
    degenerate hull (segment or point) has no interior, so the margin is
    ``-distance`` (zero on the set).
    """
    pts = np.array([[complex(z).real, complex(z).imag] for z in points], dtype=float)
    probes = np.atleast_1d(np.asarray(probes, dtype=complex))
    p = np.column_stack([probes.real, probes.imag])
    hull = _hull(pts)
    if len(hull) == 1:
        return -np.hypot(*(p - hull[0]).T)
    if len(hull) == 2:
        return -_segment_distances(p, hull[0], hull[1])
    nxt = np.roll(hull, -1, axis=0)
    edge = nxt - hull
    length = np.hypot(edge[:, 0], edge[:, 1])
    # inward distance to each edge line (ccw: interior on the left)
    signed = (edge[None, :, 0] * (p[:, None, 1] - hull[None, :, 1]) - edge[None, :, 1] * (p[:, None, 0] - hull[None, :, 0])) / length
    inside = np.all(signed >= 0.0, axis=1)
    outside = np.min([_segment_distances(p, hull[i], nxt[i]) for i in range(len(hull))], axis=0)
    return np.where(inside, np.min(signed, axis=1), -outside)


def hull_margin(points, probe) -> float:
    """:func:`hull_margins` for a single probe."""
    return float(hull_margins(points, [probe])[0])


def normal_range_margins(eigs, k: int, probes) -> np.ndarray:
    """``min`` over subsets ``G`` with ``N - k + 1`` elements of ``hull_margins(G, probes)``."""
    eigs = [as_complex(z, "eigenvalue") for z in eigs]
    n = len(eigs)
    if n == 0 or n > MAX_ORACLE_EIGS:
        raise InvalidInputError(f"need 1..{MAX_ORACLE_EIGS} eigenvalues, got {n}")
    if int(k) != k or not 1 <= k <= n:
        raise InvalidInputError(f"k={k!r} out of range 1..{n}")
    return np.min([hull_margins(sub, probes) for sub in combinations(eigs, n - int(k) + 1)], axis=0)


def normal_range_margin(eigs, k: int, probe) -> float:
    return float(normal_range_margins(eigs, k, [probe])[0])


def normal_range_oracle(eigs, k: int, probe, tol: float = 1e-9) -> bool:
    """Whether ``probe`` lies in ``Lambda_k`` of a normal matrix with eigenvalues ``eigs``."""
    return normal_range_margin(eigs, k, probe) >= -tol


@dataclass(frozen=True)
class ProjectionWitness:
    """Outcome of checking ``P T P = mu P`` for a candidate projection ``P``."""

    matrix: np.ndarray
    rank: int
    mu: complex
    residual: float
    hermitian_error: float
    idempotent_error: float
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "mu": [self.mu.real, self.mu.imag],
            "residual": self.residual,
            "accepted": self.accepted,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_witness(t, p, mu, k: int, tol: float = WITNESS_TOL) -> ProjectionWitness:
    """Check that ``p`` is a rank-``k`` orthogonal projection with ``p t p = mu p``.

    Rank is the number of eigenvalues of ``p`` above 1/2. Each defect
    (Hermitian, idempotent, residual) must be at most ``tol`` entrywise.
    """
    t = as_square(t, "matrix")
    p = as_square(p, "projection")
    if t.shape != p.shape:
        raise InvalidInputError(f"dimension mismatch: matrix {t.shape} vs projection {p.shape}")
    mu = as_complex(mu, "mu")
    herm = float(np.max(np.abs(p - p.conj().T), initial=0.0))
    idem = float(np.max(np.abs(p @ p - p), initial=0.0))
    sym = 0.5 * (p + p.conj().T)
    rank = int(np.sum(np.linalg.eigvalsh(sym) > 0.5)) if p.size else 0
    residual = float(np.max(np.abs(p @ t @ p - mu * p), initial=0.0))
    accepted = herm <= tol and idem <= tol and rank == int(k) and residual <= tol
    return ProjectionWitness(p, rank, mu, residual, herm, idem, accepted)


def odd_jordan_witness(ell: int, m: int) -> np.ndarray:
    """Rank ``ell + 1 + m`` projection ``P`` with ``P (J_{2 ell+1}(0) (+) 0_m) P = 0``.

    ``P`` keeps the odd coordinates of the Jordan block and all of the
    scalar block. ``J`` only maps coordinate ``j + 1`` to ``j``, and ``j``,
    ``j + 1`` are never both odd, so the compression vanishes identically.
    """
    if int(ell) != ell or ell < 1:
        raise InvalidInputError(f"ell must be a positive integer, got {ell!r}")
    if int(m) != m or m < 0:
        raise InvalidInputError(f"m must be a non-negative integer, got {m!r}")
    size = 2 * int(ell) + 1
    q = np.diag([1.0 if j % 2 == 0 else 0.0 for j in range(size)]).astype(np.complex128)
    return direct_sum(q, np.eye(int(m), dtype=np.complex128))


def odd_jordan_matrix(ell: int, m: int) -> np.ndarray:
    """``J_{2 ell+1}(0) (+) 0_m``, the matrix :func:`odd_jordan_witness` compresses."""
    return direct_sum(jordan_block(2 * int(ell) + 1, 0.0), np.zeros((int(m), int(m)), dtype=np.complex128))


def cone_by_angles(x: float, y: float, r: float, delta: float, samples: int = 3600) -> float:
    """Min slack of ``x cos t - y sin t <= r cos t`` over ``t`` in ``[-delta, delta]``.

    The angles outside ``D_k`` form the open arc ``(-delta, delta)``; by
    continuity its closure gives the same constraint set.
    """
    t = np.linspace(-delta, delta, samples)
    return float(np.min(r * np.cos(t) - (x * np.cos(t) - y * np.sin(t))))


def cone_by_cotangent(x: float, y: float, r: float, delta: float) -> float:
    """Min slack of ``x <= r`` and ``(x - r) cot(delta) <= y <= (r - x) cot(delta)``."""
    cot = math.cos(delta) / math.sin(delta)
    return min(r - x, y - (x - r) * cot, (r - x) * cot - y)


def cone_by_edges(x: float, y: float, r: float, delta: float) -> float:
    """Min slack of the bare edge pair ``x cos(delta) +- y sin(delta) <= r cos(delta)``."""
    c, s = math.cos(delta), math.sin(delta)
    return min(r * c - (x * c + y * s), r * c - (x * c - y * s))
