"""Eigenvalues of Hermitian matrices by cyclic complex Jacobi rotations.

The solver works on a stack of matrices at once (shape ``(batch, d, d)``);
every rotation is applied to the whole stack with numpy, which is what makes
sampling thousands of angles affordable. Only eigenvalues are produced.
"""

from __future__ import annotations

import math

import numpy as np

from rankrange.core_linalg import InvalidInputError, as_square

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HERMITIAN_TOL = 1e-10
OFFDIAG_RTOL = 1e-12
MAX_SWEEPS = 100


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps hit the cap before the off-diagonal mass vanished.

    ``item`` is the index of the failing matrix within a batch, if known.
    """

    def __init__(self, message: str, item: int | None = None):
        super().__init__(message)
        self.item = item


class NotHermitianError(InvalidInputError):
    def __init__(self, deviation: float):
        super().__init__(f"matrix is not Hermitian: max |H - H*| entry is {deviation:.3e}")
        self.deviation = deviation


def _offdiag_norm(a: np.ndarray) -> np.ndarray:
    d = a.shape[-1]
    mask = ~np.eye(d, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[..., mask]) ** 2, axis=-1))


def _jacobi_batch(a: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Diagonalize a stack of Hermitian matrices in place; returns the diagonals."""
    d = a.shape[1]
    if d == 1:
        return a[:, :1, 0].real.copy()
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    target = OFFDIAG_RTOL * scale
    # entries this small are dropped instead of rotated away
    negligible = 1e-3 * OFFDIAG_RTOL * scale / d
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]
    for _ in range(max_sweeps):
        off = _offdiag_norm(a)
        if np.all(off <= target):
            break
        for p, q in pairs:
            z = a[:, p, q]
            w = np.abs(z)
            live = w > negligible
            if not live.any():
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                continue
            app = a[:, p, p].real
            aqq = a[:, q, q].real
            w_safe = np.where(live, w, 1.0)
            phase = np.where(live, z * (1.0 / w_safe), 1.0)
            tau = (aqq - app) / (2.0 * w_safe)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # Rotation G = diag(1, conj(phase)) @ [[c, s], [-s, c]]; A <- G^H A G.
            sp = (s * phase.conj())[:, None]
            cp = (c * phase.conj())[:, None]
            cc = c[:, None]
            ss = s[:, None]
            col_p = a[:, :, p].copy()
            col_q = a[:, :, q]
            a[:, :, p] = cc * col_p - sp * col_q
            a[:, :, q] = ss * col_p + cp * col_q
            row_p = a[:, p, :].copy()
            row_q = a[:, q, :]
            a[:, p, :] = cc * row_p - sp.conj() * row_q
            a[:, q, :] = ss * row_p + cp.conj() * row_q
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
            a[:, p, p] = a[:, p, p].real
            a[:, q, q] = a[:, q, q].real
    else:
        off = _offdiag_norm(a)
        if not np.all(off <= target):
            worst = int(np.argmax(off - target))
            raise EigenConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off[worst]:.3e} for batch item {worst})",
                worst,
            )
    return np.diagonal(a, axis1=1, axis2=2).real.copy()


def _jacobi_one(a, target, negligible, max_sweeps):
    # Scalar twin of _jacobi_batch for a single matrix; compiled with numba.
    d = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(d):
            for j in range(d):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= target:
            return True
        if sweep == max_sweeps:
            return False
        for p in range(d - 1):
            for q in range(p + 1, d):
                z = a[p, q]
                w = abs(z)
                if w <= negligible:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                phase = z / w
                tau = (a[q, q].real - a[p, p].real) / (2.0 * w)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase.conjugate()
                cp = c * phase.conjugate()
                for i in range(d):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - sp * aiq
                    a[i, q] = s * aip + cp * aiq
                for j in range(d):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = c * apj - sp.conjugate() * aqj
                    a[q, j] = s * apj + cp.conjugate() * aqj
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return False


if njit is not None:
    _jacobi_one_jit = njit(cache=True)(_jacobi_one)

    @njit(cache=True)
    def _jacobi_stack_jit(a, max_sweeps):
        batch, d, _ = a.shape
        out = np.empty((batch, d))
        bad = -1
        for b in range(batch):
            m = a[b]
            scale = 0.0
            for i in range(d):
                for j in range(d):
                    scale += m[i, j].real ** 2 + m[i, j].imag ** 2
            scale = math.sqrt(scale)
            target = OFFDIAG_RTOL * scale
            if not _jacobi_one_jit(m, target, 1e-3 * target / d, max_sweeps):
                bad = b
            for i in range(d):
                out[b, i] = m[i, i].real
        return out, bad


def _diagonalize(h: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    if njit is None or h.shape[1] == 1:
        return _jacobi_batch(h, max_sweeps)
    vals, bad = _jacobi_stack_jit(h, max_sweeps)
    if bad >= 0:
        raise EigenConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps for batch item {bad}", int(bad)
        )
    return vals


def eigenvalues_hermitian_batch(h: np.ndarray, check: bool = True, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of each matrix in a ``(batch, d, d)`` stack, sorted non-increasing."""
    h = np.array(h, dtype=np.complex128, copy=True)
    if h.ndim != 3 or h.shape[1] != h.shape[2]:
        raise InvalidInputError(f"expected a (batch, d, d) stack, got shape {h.shape}")
    if check and h.size:
        dev = float(np.max(np.abs(h - np.conj(np.swapaxes(h, 1, 2)))))
        if dev > HERMITIAN_TOL:
            raise NotHermitianError(dev)
    if h.shape[1] == 0:
        return np.zeros((h.shape[0], 0))
    h = 0.5 * (h + np.conj(np.swapaxes(h, 1, 2)))
    vals = _diagonalize(h, max_sweeps)
    # stable sort keeps ties adjacent
    return -np.sort(-vals, axis=1, kind="stable")


def eigenvalues_hermitian(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in non-increasing order (with multiplicity)."""
    h = as_square(h)
    return eigenvalues_hermitian_batch(h[None, :, :])[0]


def kth_eigenvalue(spectrum, k: int) -> float:
    """k-th largest entry (1-based) of a non-increasing spectrum."""
    spectrum = np.asarray(spectrum, dtype=float)
    if int(k) != k or not 1 <= k <= spectrum.shape[-1]:
        raise IndexError(f"k={k!r} out of range 1..{spectrum.shape[-1]}")
    return spectrum[..., int(k) - 1]


def jordan_spectrum_fast(n: int, theta: float = 0.0, psi: float = 0.0) -> np.ndarray:
    """Spectrum of ``Re(e^{i(theta - psi)} J_n(0))``: ``cos(j pi/(n+1))``, j = 1..n.

    Conjugating by ``diag(e^{i j (theta - psi)})`` removes the phase, so the
    result does not depend on either angle.
    """
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")
    j = np.arange(1, int(n) + 1)
    return np.cos(j * math.pi / (int(n) + 1))
