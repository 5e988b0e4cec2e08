"""Numerical range estimates for arbitrary square matrices.

For each angle ``theta`` on a grid, the k-th largest eigenvalue of
``Re(e^{i theta} T)`` bounds the range from outside:
``Lambda_k(T)`` lies in ``{mu : Re(e^{i theta} mu) <= lambda_k(theta)}``,
with equality over all angles. Intersecting the sampled half-planes gives an
outer approximation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from rankrange.core_linalg import TWO_PI, as_square, hermitian_pair
from rankrange.eigen import EigenConvergenceError, eigenvalues_hermitian_batch
from rankrange.geometry import (
    RTOL,
    ConvexRegion,
    _diameter,
    intersect_arrays,
    narrowest_direction,
)

DEFAULT_RESOLUTION = 3600
MEMBER_RTOL = 1e-7
# a sampled polygon thinner than this many grid gaps times its diameter gets
# its narrow direction located exactly
THIN_FACTOR = 2.0
GOLDEN_STEPS = 80


@dataclass(frozen=True)
class SupportProfile:
    """Sampled support data: ``lambdas[i] = lambda_k(Re(e^{i thetas[i]} T))``."""

    k: int
    thetas: np.ndarray
    lambdas: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.thetas, dtype=float)
        lam = np.asarray(self.lambdas, dtype=float)
        if th.shape != lam.shape or th.ndim != 1:
            raise ValueError("thetas and lambdas must be 1-D arrays of equal length")
        th.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "lambdas", lam)

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.lambdas)))) if len(self.lambdas) else 1.0

    def with_samples(self, thetas, lambdas) -> SupportProfile:
        return SupportProfile(
            self.k,
            np.concatenate([self.thetas, np.asarray(thetas, dtype=float)]),
            np.concatenate([self.lambdas, np.asarray(lambdas, dtype=float)]),
        )

    def to_dict(self) -> dict:
        return {"k": self.k, "samples": [[float(a), float(b)] for a, b in zip(self.thetas, self.lambdas)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> SupportProfile:
        samples = np.asarray(data["samples"], dtype=float).reshape(-1, 2)
        return cls(int(data["k"]), samples[:, 0], samples[:, 1])

    @classmethod
    def from_json(cls, text: str) -> SupportProfile:
        return cls.from_dict(json.loads(text))


def angle_grid(resolution: int) -> np.ndarray:
    if int(resolution) != resolution or resolution < 8:
        raise ValueError(f"resolution must be an integer >= 8, got {resolution!r}")
    return TWO_PI * np.arange(int(resolution)) / int(resolution)


def _blocks(t: np.ndarray) -> list[np.ndarray]:
    """Index sets of the connected components of the coupling graph of ``T``.

    ``Re(e^{i theta} T)`` is block diagonal along these for every angle, so
    each block can be diagonalized on its own.
    """
    d = t.shape[0]
    linked = (np.abs(t) + np.abs(t.T)) > 0.0
    label = -np.ones(d, dtype=int)
    comps = []
    for start in range(d):
        if label[start] >= 0:
            continue
        stack, members = [start], []
        label[start] = len(comps)
        while stack:
            i = stack.pop()
            members.append(i)
            for j in np.flatnonzero(linked[i]):
                if label[j] < 0:
                    label[j] = len(comps)
                    stack.append(j)
        comps.append(np.array(sorted(members)))
    return comps


class SpectrumSampler:
    """Full spectra of ``Re(e^{i theta} T)`` for batches of angles.

    Decomposes ``T`` into decoupled blocks once; identical repeated blocks
    (for instance the scalar part of ``J_n (+) beta I_m``) are solved once.
    """

    def __init__(self, t):
        t = as_square(t)
        self.dim = t.shape[0]
        # Lipschitz bound for every lambda_k(theta)
        self.norm = float(np.linalg.norm(t, 2)) if t.size else 0.0
        a, b = hermitian_pair(t)
        self._groups: list[tuple[np.ndarray, np.ndarray, int]] = []
        seen: dict[bytes, int] = {}
        for idx in _blocks(t):
            ab = np.stack([a[np.ix_(idx, idx)], b[np.ix_(idx, idx)]])
            key = bytes(np.int64(len(idx))) + ab.tobytes()
            if key in seen:
                pa, pb, count = self._groups[seen[key]]
                self._groups[seen[key]] = (pa, pb, count + 1)
            else:
                seen[key] = len(self._groups)
                self._groups.append((ab[0], ab[1], 1))

    def spectra(self, thetas) -> np.ndarray:
        """``(len(thetas), dim)`` array, each row non-increasing."""
        thetas = np.asarray(thetas, dtype=float)
        c = np.cos(thetas)[:, None, None]
        s = np.sin(thetas)[:, None, None]
        parts = []
        for a, b, count in self._groups:
            try:
                vals = eigenvalues_hermitian_batch(c * a + s * b, check=False)
            except EigenConvergenceError as exc:
                item = getattr(exc, "item", None)
                where = f" at theta={thetas[item]!r}" if item is not None else ""
                raise EigenConvergenceError(f"{exc}{where}") from exc
            parts.extend([vals] * count)
        if not parts:
            return np.zeros((len(thetas), 0))
        allv = np.concatenate(parts, axis=1)
        return -np.sort(-allv, axis=1, kind="stable")

    def grid_spectra(self, resolution: int) -> tuple[np.ndarray, np.ndarray]:
        """Spectra on the uniform grid, using ``H(theta + pi) = -H(theta)``."""
        thetas = angle_grid(resolution)
        if resolution % 2:
            return thetas, self.spectra(thetas)
        half = resolution // 2
        first = self.spectra(thetas[:half])
        second = -first[:, ::-1]
        return thetas, np.concatenate([first, second], axis=0)


def _check_k(dim: int, k: int) -> int:
    if int(k) != k or not 1 <= k <= dim:
        raise ValueError(f"k={k!r} out of range 1..{dim}")
    return int(k)


def sample_support(t, k: int, resolution: int = DEFAULT_RESOLUTION) -> SupportProfile:
    """``lambda_k`` of ``Re(e^{i theta} T)`` on ``resolution`` equally spaced angles."""
    t = as_square(t)
    k = _check_k(t.shape[0], k)
    thetas, spec = SpectrumSampler(t).grid_spectra(resolution)
    return SupportProfile(k, thetas, spec[:, k - 1])


def outer_region(profile: SupportProfile, rtol: float = RTOL) -> ConvexRegion:
    """Intersection of the sampled half-planes."""
    return intersect_arrays(profile.thetas, profile.lambdas, rtol)


def _golden_min(f, lo: float, hi: float, steps: int = GOLDEN_STEPS) -> float:
    """Minimizer of a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Runs a fixed number of steps so the bracket shrinks to rounding level;
    library scalar minimizers stop at a relative ``sqrt(eps)``, too coarse
    for a kink that has to be hit to ~1e-15.
    """
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if b - a <= 4.0 * np.finfo(float).eps * max(1.0, abs(a)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def refine_thin(
    sampler: SpectrumSampler, profile: SupportProfile, region: ConvexRegion, rtol: float = RTOL
) -> tuple[SupportProfile, ConvexRegion]:
    """Resolve a range that is a segment not aligned with the grid.

    Between grid angles the sampled half-planes leave a sliver whose width is
    about ``grid gap * length / 4``. When the outer polygon is that thin, the
    direction minimizing ``lambda_k(theta) + lambda_k(theta + pi)`` (the
    width of the range across ``theta``) is located by golden-section search
    and both support lines at that angle are added. Extra half-planes are
    valid constraints, so this only tightens the outer approximation.
    """
    if region.kind != "polygon" or len(profile.thetas) < 2:
        return profile, region
    gap = float(np.max(np.diff(np.sort(np.mod(profile.thetas, TWO_PI)))))
    gap = max(gap, TWO_PI - float(np.ptp(np.mod(profile.thetas, TWO_PI))))
    width, normal_angle = narrowest_direction(region.vertices)
    if width > THIN_FACTOR * gap * max(_diameter(region.vertices), 1e-300):
        return profile, region
    k = profile.k
    center = -normal_angle

    def across(theta: float) -> float:
        spec = sampler.spectra(np.array([theta, theta + math.pi]))
        return float(spec[0, k - 1] + spec[1, k - 1])

    best = _golden_min(across, center - 2.0 * gap, center + 2.0 * gap)
    extra = np.array([best, best + math.pi])
    lam = sampler.spectra(extra)[:, k - 1]
    profile = profile.with_samples(np.mod(extra, TWO_PI), lam)
    return profile, outer_region(profile, rtol)


def estimate_range(
    t, k: int, resolution: int = DEFAULT_RESOLUTION, refine: bool = True, rtol: float = RTOL
) -> tuple[SupportProfile, ConvexRegion]:
    """Sampled profile and outer region for ``Lambda_k(T)``."""
    t = as_square(t)
    k = _check_k(t.shape[0], k)
    sampler = SpectrumSampler(t)
    thetas, spec = sampler.grid_spectra(resolution)
    profile = SupportProfile(k, thetas, spec[:, k - 1])
    region = outer_region(profile, rtol)
    if refine:
        profile, region = refine_thin(sampler, profile, region, rtol)
    return profile, region


def estimate_all_k(
    t, resolution: int = DEFAULT_RESOLUTION, refine: bool = True, rtol: float = RTOL
) -> list[tuple[SupportProfile, ConvexRegion]]:
    """:func:`estimate_range` for ``k = 1..dim`` sharing one set of spectra."""
    t = as_square(t)
    sampler = SpectrumSampler(t)
    thetas, spec = sampler.grid_spectra(resolution)
    out = []
    for k in range(1, t.shape[0] + 1):
        profile = SupportProfile(k, thetas, spec[:, k - 1])
        region = outer_region(profile, rtol)
        if refine:
            profile, region = refine_thin(sampler, profile, region, rtol)
        out.append((profile, region))
    return out


def _refined_excess(sampler: SpectrumSampler, k: int, mu: complex, thetas, excess, floor: float, gap: float) -> float:
    """Largest ``Re(e^{i theta} mu) - lambda_k(theta)`` found near the grid's local maxima.

    Only local maxima of the sampled excess above ``floor`` are searched,
    each over one grid gap on either side. Every evaluated angle is a valid
    constraint, so the result never exceeds the true maximum.
    """
    peaks = np.flatnonzero((excess >= np.roll(excess, 1)) & (excess >= np.roll(excess, -1)) & (excess >= floor))
    peaks = peaks[np.argsort(-excess[peaks], kind="stable")][:8]
    best = float(np.max(excess))
    x, y = mu.real, mu.imag

    def deficit(theta: float) -> float:
        lam = sampler.spectra(np.array([theta]))[0, k - 1]
        return -(x * math.cos(theta) - y * math.sin(theta) - lam)

    for i in peaks:
        theta = _golden_min(deficit, thetas[i] - gap, thetas[i] + gap)
        best = max(best, -deficit(theta))
    return best


def member_profile(
    profile: SupportProfile, mus, tol: float | None = None, sampler: SpectrumSampler | None = None
) -> np.ndarray:
    """Vectorized :func:`member` against a precomputed profile (array of labels).

    With ``sampler`` (built from the same matrix), points whose verdict could
    still change are re-checked between grid angles, see :func:`member`.
    """
    mus = np.atleast_1d(np.asarray(mus, dtype=complex))
    if tol is None:
        tol = MEMBER_RTOL * profile.scale
    proj = np.cos(profile.thetas)[None, :] * mus.real[:, None] - np.sin(profile.thetas)[None, :] * mus.imag[:, None]
    excess = proj - profile.lambdas[None, :]
    worst = np.max(excess, axis=1)
    if sampler is not None and len(profile.thetas) >= 2:
        order = np.argsort(profile.thetas, kind="stable")
        thetas, excess = profile.thetas[order], excess[:, order]
        gap = float(np.max(np.diff(thetas)))
        gap = max(gap, TWO_PI - float(thetas[-1] - thetas[0]))
        for i, mu in enumerate(mus):
            # between grid angles the excess rises by at most slope * gap / 2
            floor = -tol - (abs(mu) + sampler.norm) * gap / 2
            if floor <= worst[i] <= tol:
                worst[i] = _refined_excess(sampler, profile.k, mu, thetas, excess[i], floor, gap)
    out = np.full(mus.shape, "boundary-uncertain", dtype=object)
    out[worst < -tol] = "inside"
    out[worst > tol] = "outside"
    return out


def member_many(
    t, k: int, mus, resolution: int = DEFAULT_RESOLUTION, tol: float | None = None, refine: bool = True
) -> np.ndarray:
    """:func:`member` for many points, sharing one set of spectra."""
    t = as_square(t)
    k = _check_k(t.shape[0], k)
    sampler = SpectrumSampler(t)
    thetas, spec = sampler.grid_spectra(resolution)
    profile = SupportProfile(k, thetas, spec[:, k - 1])
    return member_profile(profile, mus, tol, sampler if refine else None)


def member(
    t, k: int, mu, resolution: int = DEFAULT_RESOLUTION, tol: float | None = None, refine: bool = True
) -> str:
    """``"inside"``, ``"outside"`` or ``"boundary-uncertain"`` for ``mu`` in ``Lambda_k(T)``.

    ``"outside"`` is certain: some half-plane excludes ``mu`` by more than
    ``tol``. On the grid alone a point just outside an edge whose normal
    falls between two grid angles looks inside (the blind band is about
    ``edge length * gap / 2`` wide). With ``refine`` the violation
    ``Re(e^{i theta} mu) - lambda_k(theta)`` is maximized by golden-section
    search around each of its grid peaks, which closes that band whenever the
    violation is unimodal within a grid gap of its peak.
    """
    return str(member_many(t, k, [complex(mu)], resolution, tol, refine)[0])
