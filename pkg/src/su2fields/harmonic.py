"""Band-limited harmonic analysis on SU(2) = 2S^3.

Fields are expanded in the orthonormal basis

    phi^l_{m,s} = sqrt(2l+1) / (4 pi) * D^l_{m,s},

orthonormal for the unnormalized volume measure of the radius-2 sphere
(total volume 16 pi^2). Coefficients of degree l are stored as a
(2l+1) x (2l+1) block with rows m and columns s in ascending order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .errors import (
    BandLimitExceededError,
    ExactnessGateFailedError,
    InvalidIndexError,
    ZeroFieldError,
)
from .group import SU2_VOLUME, SU2Element, check_degree, check_triple, index_range
from .wigner import BAND_LIMIT_CAP, matrix_index, wigner_matrix

GATE_TOLERANCE = 1e-8

Triple = Tuple[int, int, int]


def basis_scale(two_ell: int) -> float:
    """Factor turning D^l into the orthonormal phi^l."""
    return math.sqrt(two_ell + 1) / (4 * math.pi)


def coefficient_indices(two_L: int) -> List[Triple]:
    """All (2l, 2m, 2s) with 2l <= two_L, in storage order."""
    return [
        (n, tm, ts) for n in range(two_L + 1) for tm in index_range(n) for ts in index_range(n)
    ]


# -- coefficients -----------------------------------------------------------


@dataclass
class SpectralCoefficients:
    """Coefficients a^l_{m,s} for 2l = 0..two_L.

    ``blocks[two_ell]`` has shape ``batch_shape + (2l+1, 2l+1)``; a leading
    batch shape holds independent samples of a random field.
    """

    two_L: int
    blocks: List[np.ndarray]

    def __post_init__(self):
        check_degree(self.two_L)
        if len(self.blocks) != self.two_L + 1:
            raise ValueError("need exactly one block per degree 2l = 0..two_L")
        self.blocks = [np.asarray(b, dtype=complex) for b in self.blocks]
        for n, b in enumerate(self.blocks):
            if b.shape[-2:] != (n + 1, n + 1):
                raise ValueError(f"block 2l={n} has shape {b.shape[-2:]}, expected {(n + 1, n + 1)}")

    @classmethod
    def zeros(cls, two_L: int, batch_shape: tuple = ()) -> "SpectralCoefficients":
        return cls(two_L, [np.zeros(tuple(batch_shape) + (n + 1, n + 1), complex) for n in range(two_L + 1)])

    @classmethod
    def delta(cls, two_ell: int, two_m: int, two_s: int, two_L: Optional[int] = None, value=1.0):
        check_triple(two_ell, two_m, two_s)
        out = cls.zeros(two_ell if two_L is None else two_L)
        out.blocks[two_ell][matrix_index(two_ell, two_m), matrix_index(two_ell, two_s)] = value
        return out

    @classmethod
    def from_flat(cls, two_L: int, flat: np.ndarray) -> "SpectralCoefficients":
        flat = np.asarray(flat, dtype=complex)
        blocks, pos = [], 0
        for n in range(two_L + 1):
            d = n + 1
            blocks.append(flat[..., pos : pos + d * d].reshape(flat.shape[:-1] + (d, d)))
            pos += d * d
        if pos != flat.shape[-1]:
            raise ValueError("flat vector length does not match the band limit")
        return cls(two_L, blocks)

    @property
    def batch_shape(self) -> tuple:
        return self.blocks[0].shape[:-2]

    def flat(self) -> np.ndarray:
        """Concatenate all blocks along the last axis, in ``coefficient_indices`` order."""
        return np.concatenate([b.reshape(b.shape[:-2] + (-1,)) for b in self.blocks], axis=-1)

    def __getitem__(self, key) -> "SpectralCoefficients":
        return SpectralCoefficients(self.two_L, [b[key] for b in self.blocks])

    def get(self, two_ell: int, two_m: int, two_s: int):
        check_triple(two_ell, two_m, two_s)
        return self.blocks[two_ell][..., matrix_index(two_ell, two_m), matrix_index(two_ell, two_s)]

    def copy(self) -> "SpectralCoefficients":
        return SpectralCoefficients(self.two_L, [b.copy() for b in self.blocks])

    def degree_norm_squared(self, two_ell: int) -> np.ndarray:
        return np.sum(np.abs(self.blocks[two_ell]) ** 2, axis=(-2, -1))

    def norm_squared(self) -> np.ndarray:
        """Squared L^2 norm of the synthesized field (Parseval)."""
        return sum(self.degree_norm_squared(n) for n in range(self.two_L + 1))

    def norm(self) -> np.ndarray:
        return np.sqrt(self.norm_squared())

    # serialization: {band_limit_doubled, blocks: [{two_ell, rows}]}
    def to_dict(self) -> dict:
        if self.batch_shape:
            raise ValueError("serialize samples one at a time")
        return {
            "band_limit_doubled": self.two_L,
            "blocks": [
                {
                    "two_ell": n,
                    "rows": [[[float(z.real), float(z.imag)] for z in row] for row in b],
                }
                for n, b in enumerate(self.blocks)
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SpectralCoefficients":
        two_L = int(obj["band_limit_doubled"])
        blocks = [None] * (two_L + 1)
        for entry in obj["blocks"]:
            rows = np.asarray(entry["rows"], dtype=float)
            blocks[int(entry["two_ell"])] = rows[..., 0] + 1j * rows[..., 1]
        if any(b is None for b in blocks):
            raise ValueError("coefficient file is missing a degree")
        return cls(two_L, blocks)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SpectralCoefficients":
        return cls.from_dict(json.loads(text))


# -- basis evaluation -------------------------------------------------------


def basis_matrix(two_L: int, g: SU2Element) -> np.ndarray:
    """Values phi^l_{m,s}(g) for all indices up to two_L, shape (..., n_coeffs)."""
    cols = []
    for n in range(two_L + 1):
        D = wigner_matrix(n, g) * basis_scale(n)
        cols.append(D.reshape(D.shape[:-2] + (-1,)))
    return np.concatenate(cols, axis=-1)


def synthesize(coeffs: SpectralCoefficients) -> Callable[[SU2Element], np.ndarray]:
    """Return the function g -> sum a^l_{m,s} phi^l_{m,s}(g).

    Output shape is ``coeffs.batch_shape + g.shape``.
    """

    def field_fn(g: SU2Element):
        total = 0
        for n, block in enumerate(coeffs.blocks):
            phi = wigner_matrix(n, g) * basis_scale(n)
            g_shape = phi.shape[:-2]
            phi = phi.reshape((-1, (n + 1) ** 2))
            a = block.reshape(block.shape[:-2] + ((n + 1) ** 2,))
            vals = a @ phi.T
            total = total + vals.reshape(block.shape[:-2] + g_shape)
        return total

    return field_fn


# -- quadrature -------------------------------------------------------------


@dataclass
class QuadratureGrid:
    """Product rule in Euler angles exact for degrees up to two_L.

    Nodes: 2L+2 uniform phi in [0, 2pi), 2L+2 Gauss-Legendre nodes in
    cos(theta), 4L+2 uniform psi in [0, 4pi), with L = two_L / 2. The volume
    element in these coordinates is sin(theta) dphi dtheta dpsi, so the
    weights sum to 16 pi^2.
    """

    two_L: int
    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    weights: np.ndarray
    _basis: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def elements(self) -> SU2Element:
        alpha = np.cos(self.theta / 2) * np.exp(0.5j * (self.phi + self.psi))
        beta = np.sin(self.theta / 2) * np.exp(0.5j * (self.psi - self.phi))
        return SU2Element(alpha, beta)

    def __len__(self) -> int:
        return self.weights.size

    def degree_basis(self, two_ell: int) -> np.ndarray:
        """phi^l at the nodes, shape (n_nodes, (2l+1)^2); cached."""
        if two_ell not in self._basis:
            D = wigner_matrix(two_ell, self.elements) * basis_scale(two_ell)
            self._basis[two_ell] = D.reshape(len(self), -1)
        return self._basis[two_ell]

    def basis(self, two_L: Optional[int] = None) -> np.ndarray:
        two_L = self.two_L if two_L is None else two_L
        return np.concatenate([self.degree_basis(n) for n in range(two_L + 1)], axis=-1)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Volume integral of node values (node axis last)."""
        return np.asarray(values) @ self.weights

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """<f, g> = integral of conj(f) g."""
        return self.integrate(np.conj(f) * g)

    def gram(self, two_L: Optional[int] = None) -> np.ndarray:
        B = self.basis(two_L)
        return (np.conj(B).T * self.weights) @ B

    def gate_defect(self) -> float:
        G = self.gram()
        return float(np.max(np.abs(G - np.eye(G.shape[0]))))

    def to_csv(self) -> str:
        lines = ["phi,theta,psi,weight"]
        for row in zip(self.phi, self.theta, self.psi, self.weights):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def build_grid(two_L: int, cap: int = BAND_LIMIT_CAP, check: bool = True) -> QuadratureGrid:
    """Build the product grid for band limit ``two_L`` and run the exactness gate.

    Raises ``ExactnessGateFailedError`` if the Gram matrix of the basis
    deviates from the identity by more than 1e-8.
    """
    check_degree(two_L)
    if two_L > cap:
        raise BandLimitExceededError(f"band limit 2L={two_L} exceeds cap {cap}")
    n_phi, n_theta, n_psi = two_L + 2, two_L + 2, 2 * two_L + 2
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    psi = 4 * np.pi * np.arange(n_psi) / n_psi
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    P, T, S = np.meshgrid(phi, theta, psi, indexing="ij")
    W = (2 * np.pi / n_phi) * (4 * np.pi / n_psi) * w[None, :, None] * np.ones_like(P)
    grid = QuadratureGrid(two_L, P.ravel(), T.ravel(), S.ravel(), W.ravel())
    if check:
        defect = grid.gate_defect()
        if not defect <= GATE_TOLERANCE:
            raise ExactnessGateFailedError(
                f"orthonormality defect {defect:.3e} exceeds {GATE_TOLERANCE:g} at 2L={two_L}"
            )
    return grid


def analyze(
    field_fn: Callable[[SU2Element], np.ndarray],
    two_L: int,
    grid: Optional[QuadratureGrid] = None,
) -> SpectralCoefficients:
    """Coefficients <phi^l_{m,s}, field> by quadrature.

    The field must be band-limited at ``two_L``; higher degrees alias. A grid
    built for a larger band limit may be passed and is used as is.
    """
    if grid is None:
        grid = build_grid(two_L)
    if grid.two_L < two_L:
        raise ValueError("grid band limit is below the requested analysis band limit")
    values = np.asarray(field_fn(grid.elements), dtype=complex)
    weighted = values * grid.weights
    blocks = []
    for n in range(two_L + 1):
        a = weighted @ np.conj(grid.degree_basis(n))
        blocks.append(a.reshape(a.shape[:-1] + (n + 1, n + 1)))
    return SpectralCoefficients(two_L, blocks)


# -- Laplacians -------------------------------------------------------------

LAPLACIAN_KINDS = ("full", "vertical", "horizontal", "spin")


def laplacian_multiplier_x4(kind: str, two_ell: int, two_s: int) -> int:
    """Four times the eigenvalue on the span of D^l_{., s}, exact in integers.

    full: -l(l+1); vertical: -s^2; horizontal: -(l-s)(l+s+1) - s;
    spin (eth eth-bar): -(l-s)(l+s+1).
    """
    check_triple(two_ell, two_s)
    L, S = two_ell, two_s
    if kind == "full":
        return -L * (L + 2)
    if kind == "vertical":
        return -S * S
    if kind == "horizontal":
        return -(L - S) * (L + S + 2) - 2 * S
    if kind == "spin":
        return -(L - S) * (L + S + 2)
    raise ValueError(f"unknown Laplacian kind {kind!r}; expected one of {LAPLACIAN_KINDS}")


def laplacian_multiplier(kind: str, two_ell: int, two_s: int) -> float:
    return laplacian_multiplier_x4(kind, two_ell, two_s) / 4.0


def apply_laplacian(coeffs: SpectralCoefficients, kind: str) -> SpectralCoefficients:
    blocks = []
    for n, b in enumerate(coeffs.blocks):
        mult = np.array([laplacian_multiplier(kind, n, ts) for ts in index_range(n)])
        blocks.append(b * mult)
    return SpectralCoefficients(coeffs.two_L, blocks)


# -- spin ---------------------------------------------------------------------


def project_spin(coeffs: SpectralCoefficients, side: str, two_k: int) -> SpectralCoefficients:
    """Keep only row m = k (``side='left'``) or column s = k (``side='right'``).

    The right projection at s = k has pure right spin -k: it is the
    pull-back of a section of the spin-k bundle.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    out = SpectralCoefficients.zeros(coeffs.two_L, coeffs.batch_shape)
    for n, b in enumerate(coeffs.blocks):
        if abs(two_k) > n or (n - two_k) % 2:
            continue
        j = matrix_index(n, two_k)
        if side == "left":
            out.blocks[n][..., j, :] = b[..., j, :]
        else:
            out.blocks[n][..., :, j] = b[..., :, j]
    return out


@dataclass
class SpinMeasureSet:
    """Spectral probability and its left, right and bi spin marginals.

    Keys are doubled indices: ``total[(2l, 2m, 2s)]``, ``left[2m]``,
    ``right[2s]``, ``bi[(2m, 2s)]``.
    """

    total: Dict[Triple, float]
    left: Dict[int, float]
    right: Dict[int, float]
    bi: Dict[Tuple[int, int], float]

    @classmethod
    def from_masses(cls, masses: Dict[Triple, float]) -> "SpinMeasureSet":
        left: Dict[int, float] = {}
        right: Dict[int, float] = {}
        bi: Dict[Tuple[int, int], float] = {}
        for (n, tm, ts), p in masses.items():
            left[tm] = left.get(tm, 0.0) + p
            right[ts] = right.get(ts, 0.0) + p
            bi[(tm, ts)] = bi.get((tm, ts), 0.0) + p
        order = lambda d: dict(sorted(d.items()))  # noqa: E731
        return cls(dict(masses), order(left), order(right), order(bi))

    def to_dict(self) -> dict:
        return {
            "total": [[*k, v] for k, v in self.total.items()],
            "left": [[k, v] for k, v in self.left.items()],
            "right": [[k, v] for k, v in self.right.items()],
            "bi": [[*k, v] for k, v in self.bi.items()],
        }


def _mass_array(coeffs: SpectralCoefficients, degree: Optional[int]) -> Tuple[List[Triple], np.ndarray]:
    if degree is None:
        idx = coefficient_indices(coeffs.two_L)
        sq = np.abs(coeffs.flat()) ** 2
    else:
        if degree > coeffs.two_L:
            raise InvalidIndexError(f"degree 2l={degree} above band limit {coeffs.two_L}")
        idx = [(degree, tm, ts) for tm in index_range(degree) for ts in index_range(degree)]
        b = coeffs.blocks[degree]
        sq = np.abs(b.reshape(b.shape[:-2] + (-1,))) ** 2
    return idx, sq


def spin_measures(coeffs: SpectralCoefficients, degree: Optional[int] = None) -> SpinMeasureSet:
    """Normalized squared-coefficient masses of one field.

    With ``degree`` set, the measures of the degree-2l component X^l alone.
    """
    if coeffs.batch_shape:
        raise ValueError("spin_measures takes a single field; see random_fields for samples")
    idx, sq = _mass_array(coeffs, degree)
    total = float(np.sum(sq))
    if not total > 0:
        raise ZeroFieldError("spin measures are undefined for the zero field")
    return SpinMeasureSet.from_masses({k: float(v) / total for k, v in zip(idx, sq)})


def iter_degrees(two_L: int) -> Iterator[int]:
    return iter(range(two_L + 1))


__all__ = [
    "SU2_VOLUME",
    "GATE_TOLERANCE",
    "LAPLACIAN_KINDS",
    "QuadratureGrid",
    "SpectralCoefficients",
    "SpinMeasureSet",
    "analyze",
    "apply_laplacian",
    "basis_matrix",
    "basis_scale",
    "build_grid",
    "coefficient_indices",
    "laplacian_multiplier",
    "laplacian_multiplier_x4",
    "project_spin",
    "spin_measures",
    "synthesize",
]
