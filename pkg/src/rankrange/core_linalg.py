"""Dense complex matrices and the constructions used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; scalars are
Python ``complex``. The only structured type is :class:`JordanScalarModel`,
which describes ``J_n(alpha) + beta*I_m`` (a direct sum).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidInputError(ValueError):
    """Raised for malformed matrices, non-finite scalars and similar."""


def as_complex(value, name: str = "value") -> complex:
    """Coerce ``value`` to a finite Python complex."""
    if isinstance(value, (tuple, list)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not a complex number: {value!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"{name} must be finite, got {z!r}")
    return z


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (a copy is not forced)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def as_square(a, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}")
    return arr


def principal_angle(theta: float) -> float:
    """Map an angle into ``[0, 2*pi)``."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if t >= TWO_PI:
        t = 0.0
    return t


def arg(z: complex) -> float:
    """Argument of ``z`` in ``[0, 2*pi)``; ``arg(0) == 0``."""
    if z == 0:
        return 0.0
    return principal_angle(cmath.phase(z))


def jordan_block(n: int, alpha=0.0) -> np.ndarray:
    """``n x n`` Jordan block: ``alpha`` on the diagonal, ones just above it."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"Jordan block size must be a positive integer, got {n!r}")
    n = int(n)
    a = as_complex(alpha, "alpha")
    out = np.diag(np.full(n, a, dtype=np.complex128))
    if n > 1:
        out += np.diag(np.ones(n - 1, dtype=np.complex128), 1)
    return out


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal matrix ``a (+) b``. A 0x0 operand is the identity of the sum."""
    a = as_square(a, "left operand")
    b = as_square(b, "right operand")
    na, nb = a.shape[0], b.shape[0]
    out = np.zeros((na + nb, na + nb), dtype=np.complex128)
    out[:na, :na] = a
    out[na:, na:] = b
    return out


def hermitian_part(t, theta: float = 0.0) -> np.ndarray:
    """``Re(e^{i theta} T) = (e^{i theta} T + e^{-i theta} T^*) / 2``.

    The result is symmetrized so that it equals its conjugate transpose
    exactly.
    """
    t = as_square(t)
    rotated = cmath.exp(1j * theta) * t
    h = 0.5 * (rotated + rotated.conj().T)
    return 0.5 * (h + h.conj().T)


def hermitian_pair(t) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian ``A, B`` with ``Re(e^{i theta} T) = cos(theta) A + sin(theta) B``."""
    t = as_square(t)
    tc = t.conj().T
    a = 0.5 * (t + tc)
    b = 0.5j * (t - tc)
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.conj().T)
    return a, b


@dataclass(frozen=True)
class JordanScalarModel:
    """The matrix ``J_n(alpha) (+) beta I_m``.

    ``psi`` is ``arg(beta - alpha)`` in ``[0, 2*pi)``, and 0 when
    ``beta == alpha``. ``m == 0`` is the pure Jordan block; ``beta`` is then
    carried along but plays no role in the matrix.
    """

    n: int
    m: int
    alpha: complex = 0j
    beta: complex = 0j
    psi: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidInputError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.m) != self.m or self.m < 0:
            raise InvalidInputError(f"m must be an integer >= 0, got {self.m!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "alpha", as_complex(self.alpha, "alpha"))
        object.__setattr__(self, "beta", as_complex(self.beta, "beta"))
        object.__setattr__(self, "psi", arg(self.beta - self.alpha))

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def gap(self) -> float:
        """``|beta - alpha|``: distance between the two eigenvalues."""
        return abs(self.beta - self.alpha)

    def to_world(self, mu):
        """Map normalized-frame coordinates to the frame of ``T``: ``alpha + e^{i psi} mu``."""
        return self.alpha + cmath.exp(1j * self.psi) * mu

    def to_normalized(self, z):
        """Inverse of :meth:`to_world`."""
        return (z - self.alpha) * cmath.exp(-1j * self.psi)


def materialize(model: JordanScalarModel, normalized: bool = False) -> np.ndarray:
    """Dense matrix of ``model``.

    With ``normalized=True`` returns ``T0 = e^{-i psi} J_n(0) (+) |beta-alpha| I_m``,
    the translated and rotated copy with ``T = alpha I + e^{i psi} T0``.
    """
    m_block = np.eye(model.m, dtype=np.complex128)
    if normalized:
        jb = cmath.exp(-1j * model.psi) * jordan_block(model.n, 0.0)
        return direct_sum(jb, model.gap * m_block)
    return direct_sum(jordan_block(model.n, model.alpha), model.beta * m_block)
