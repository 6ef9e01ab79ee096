"""Arithmetic and sampling on SU(2) in the quaternion model.

An element is the matrix

    h(alpha, beta) = [[alpha, -conj(beta)],
                      [beta,   conj(alpha)]],   |alpha|^2 + |beta|^2 = 1.

``SU2Element`` stores the pair (alpha, beta). Both fields may be numpy
arrays of a common shape, in which case every operation acts elementwise
on the batch. Half-integer indices (l, m, s) are passed around as their
doubled integer values ``two_ell``, ``two_m``, ``two_s``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import InvalidIndexError, NearZeroError

ArrayLike = Union[complex, np.ndarray]

#: Doubled half-integer: the integer 2*l, 2*m or 2*s.
HalfIndex = int

#: Volume of SU(2) carried as the round 3-sphere of radius 2.
SU2_VOLUME = 16.0 * math.pi**2

_NORM_FLOOR = 1e-30


def check_degree(two_ell: HalfIndex) -> None:
    if int(two_ell) != two_ell or two_ell < 0:
        raise InvalidIndexError(f"degree must be a non-negative doubled integer, got {two_ell!r}")


def check_triple(two_ell: HalfIndex, two_m: HalfIndex, two_s: HalfIndex = None) -> None:
    """Raise ``InvalidIndexError`` unless l +- m (and l +- s) are natural numbers."""
    check_degree(two_ell)
    for name, idx in (("m", two_m), ("s", two_s)):
        if idx is None:
            continue
        if int(idx) != idx or abs(idx) > two_ell or (two_ell - idx) % 2:
            raise InvalidIndexError(
                f"invalid index 2{name}={idx} for 2l={two_ell}: need |{name}| <= l and l-{name} integer"
            )


def index_range(two_ell: HalfIndex) -> range:
    """Doubled values of m = -l, -l+1, ..., l in ascending order."""
    return range(-two_ell, two_ell + 1, 2)


@dataclass(frozen=True)
class SU2Element:
    alpha: ArrayLike
    beta: ArrayLike

    @property
    def shape(self) -> tuple:
        return np.shape(self.alpha)

    def matrix(self) -> np.ndarray:
        """The 2x2 complex matrix h(alpha, beta), with batch axes in front."""
        a = np.asarray(self.alpha, dtype=complex)
        b = np.asarray(self.beta, dtype=complex)
        return np.stack(
            [np.stack([a, -np.conj(b)], axis=-1), np.stack([b, np.conj(a)], axis=-1)],
            axis=-2,
        )

    def norm_defect(self) -> float:
        return float(np.max(np.abs(np.abs(self.alpha) ** 2 + np.abs(self.beta) ** 2 - 1.0)))

    def __getitem__(self, key) -> "SU2Element":
        return SU2Element(np.asarray(self.alpha)[key], np.asarray(self.beta)[key])

    def __len__(self) -> int:
        return len(np.asarray(self.alpha))

    def __neg__(self) -> "SU2Element":
        return SU2Element(-self.alpha, -self.beta)

    def __matmul__(self, other: "SU2Element") -> "SU2Element":
        return su2_mul(self, other)


IDENTITY = SU2Element(1 + 0j, 0j)


class EulerAngles(NamedTuple):
    """Angles of g3(phi) g2(theta) g3(psi).

    Ranges produced by ``euler_from_su2``: phi in [0, 2pi), theta in
    [0, pi], psi in [0, 4pi). At theta = 0 or pi only phi +- psi is
    determined and phi is set to 0.
    """

    phi: float
    theta: float
    psi: float


def su2_new(alpha: ArrayLike, beta: ArrayLike) -> SU2Element:
    """Normalize (alpha, beta) onto the unit sphere of C^2."""
    a = np.asarray(alpha, dtype=complex)
    b = np.asarray(beta, dtype=complex)
    norm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    if np.any(norm**2 <= _NORM_FLOOR):
        raise NearZeroError("cannot normalize a pair with |alpha|^2 + |beta|^2 <= 1e-30")
    a, b = a / norm, b / norm
    if a.ndim == 0:
        return SU2Element(complex(a), complex(b))
    return SU2Element(a, b)


def g3(psi) -> SU2Element:
    """Diagonal element diag(e^{i psi/2}, e^{-i psi/2})."""
    psi = np.asarray(psi, dtype=float)
    alpha = np.exp(0.5j * psi)
    beta = np.zeros_like(alpha)
    if alpha.ndim == 0:
        return SU2Element(complex(alpha), 0j)
    return SU2Element(alpha, beta)


def g2(theta) -> SU2Element:
    """Real rotation [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]."""
    theta = np.asarray(theta, dtype=float)
    alpha = np.cos(theta / 2) + 0j
    beta = np.sin(theta / 2) + 0j
    if alpha.ndim == 0:
        return SU2Element(complex(alpha), complex(beta))
    return SU2Element(alpha, beta)


def su2_from_euler(e: EulerAngles) -> SU2Element:
    phi, theta, psi = (np.asarray(x, dtype=float) for x in e)
    alpha = np.cos(theta / 2) * np.exp(0.5j * (phi + psi))
    beta = np.sin(theta / 2) * np.exp(0.5j * (psi - phi))
    if alpha.ndim == 0:
        return SU2Element(complex(alpha), complex(beta))
    return SU2Element(alpha, beta)


def _wrap(x: float, period: float) -> float:
    x = math.fmod(x, period)
    if x < 0:
        x += period
    # fmod of a tiny negative number can round up to the period itself
    return 0.0 if x >= period else x


def euler_from_su2(g: SU2Element, degenerate_tol: float = 1e-14) -> EulerAngles:
    """Inverse of ``su2_from_euler`` for a single element."""
    alpha, beta = complex(g.alpha), complex(g.beta)
    theta = 2.0 * math.atan2(abs(beta), abs(alpha))
    if abs(beta) <= degenerate_tol:
        return EulerAngles(0.0, theta, _wrap(2.0 * cmath.phase(alpha), 4 * math.pi))
    if abs(alpha) <= degenerate_tol:
        return EulerAngles(0.0, theta, _wrap(2.0 * cmath.phase(beta), 4 * math.pi))
    arg_a, arg_b = cmath.phase(alpha), cmath.phase(beta)
    phi = _wrap(arg_a - arg_b, 2 * math.pi)
    psi = _wrap(2.0 * arg_a - phi, 4 * math.pi)
    return EulerAngles(phi, theta, psi)


def su2_mul(a: SU2Element, b: SU2Element) -> SU2Element:
    """Matrix product h(a) h(b)."""
    alpha = a.alpha * b.alpha - np.conj(a.beta) * b.beta
    beta = a.beta * b.alpha + np.conj(a.alpha) * b.beta
    return SU2Element(alpha, beta)


def su2_inv(g: SU2Element) -> SU2Element:
    """Inverse, equal to the conjugate transpose."""
    return SU2Element(np.conj(g.alpha), -g.beta)


def su2_conj_entries(g: SU2Element) -> SU2Element:
    """Entrywise complex conjugate of the 2x2 matrix."""
    return SU2Element(np.conj(g.alpha), np.conj(g.beta))


def haar_sample(rng: np.random.Generator, size=None) -> SU2Element:
    """Draw Haar-distributed elements: four i.i.d. normals, normalized.

    With ``size=None`` a single element is returned, otherwise a batch.
    """
    shape = () if size is None else np.atleast_1d(size)
    shape = tuple(int(n) for n in shape)
    x = rng.standard_normal(shape + (4,))
    norm2 = np.sum(x * x, axis=-1)
    bad = norm2 <= _NORM_FLOOR
    while np.any(bad):
        x[bad] = rng.standard_normal((int(np.sum(bad)), 4))
        norm2 = np.sum(x * x, axis=-1)
        bad = norm2 <= _NORM_FLOOR
    x = x / np.sqrt(norm2)[..., None]
    alpha = x[..., 0] + 1j * x[..., 1]
    beta = x[..., 2] + 1j * x[..., 3]
    if size is None:
        return SU2Element(complex(alpha), complex(beta))
    return SU2Element(alpha, beta)


# -- Riemann sphere ---------------------------------------------------------

#: The point at infinity of the Riemann sphere.
INFINITY = complex(math.inf, 0.0)


def is_infinity(z: complex) -> bool:
    return cmath.isinf(z)


def _from_homogeneous(z0: complex, z1: complex) -> complex:
    if z1 == 0:
        return INFINITY
    return z0 / z1


def _to_homogeneous(z: complex) -> tuple:
    if is_infinity(z):
        return 1.0 + 0j, 0j
    return complex(z), 1.0 + 0j


def hopf_project(g: SU2Element) -> complex:
    """Hopf fibration h(alpha, beta) -> alpha / beta, i.e. g acting on infinity."""
    return _from_homogeneous(complex(g.alpha), complex(g.beta))


def moebius(g: SU2Element, z: complex) -> complex:
    """Action (alpha z0 - conj(beta) z1) / (beta z0 + conj(alpha) z1) on [z0 : z1]."""
    alpha, beta = complex(g.alpha), complex(g.beta)
    z0, z1 = _to_homogeneous(z)
    return _from_homogeneous(
        alpha * z0 - beta.conjugate() * z1, beta * z0 + alpha.conjugate() * z1
    )


def stereographic(p) -> complex:
    """Projection from the north pole: p = (x, y, t) -> (x + iy) / (1 - t)."""
    x, y, t = (float(c) for c in p)
    if abs(math.sqrt(x * x + y * y + t * t) - 1.0) > 1e-12:
        raise ValueError("stereographic expects a unit vector")
    # (x + iy)/(1 - t) == (1 + t)/(x - iy) on the sphere; pick the better-conditioned form
    if t <= 0:
        return complex(x, y) / (1.0 - t)
    w = complex(x, -y)
    if w == 0:
        return INFINITY
    return (1.0 + t) / w


def inverse_stereographic(z: complex) -> np.ndarray:
    if is_infinity(z):
        return np.array([0.0, 0.0, 1.0])
    r2 = abs(z) ** 2
    return np.array([2 * z.real / (r2 + 1), 2 * z.imag / (r2 + 1), (r2 - 1) / (r2 + 1)])


def chordal_distance(z: complex, w: complex) -> float:
    """Euclidean distance between the preimages on the unit sphere."""
    return float(np.linalg.norm(inverse_stereographic(z) - inverse_stereographic(w)))


def so3_from_su2(g: SU2Element) -> np.ndarray:
    """Rotation matrix of the covering map SU(2) -> SO(3).

    Uses the unit quaternion (w, x, y, z) = (Re alpha, Im beta, Re beta, Im alpha),
    the identification under which stereographic(R p) = moebius(g, stereographic(p)).
    Works on batches; the rotation axes are appended last.
    """
    alpha = np.asarray(g.alpha, dtype=complex)
    beta = np.asarray(g.beta, dtype=complex)
    w, z = alpha.real, alpha.imag
    y, x = beta.real, beta.imag
    rows = [
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)
