"""Deterministic self-checks of the Wigner, quadrature and moment identities.

``run_checks`` returns one ``CheckResult`` per check, in a fixed order;
the command-line ``verify`` subcommand writes them out and exits nonzero
if any fails.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .group import SU2Element, g2, haar_sample, index_range, su2_mul, su2_new
from .harmonic import (
    SpectralCoefficients,
    apply_laplacian,
    build_grid,
    synthesize,
)
from .random_fields import haar_cross_moment, haar_pseudo_moment, schur_prediction
from .wigner import symmetry_check, wigner_matrix, wigner_polynomial

DEFAULT_THRESHOLDS: Dict[str, float] = {
    "unitarity": 1e-10,
    "homomorphism": 1e-10,
    "symmetry": 1e-12,
    "little_d_real": 1e-12,
    "harmonicity": 1e-5,
    "grid_gate": 1e-8,
    "laplacian": 1e-4,
    "haar_moments": 1e-9,
    "schur": 1e-9,
}

FD_STEP = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    metric: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.metric <= self.threshold)


def results_to_csv(results: List[CheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "metric", "threshold", "pass"])
    for r in results:
        w.writerow([r.name, repr(r.metric), repr(r.threshold), int(r.passed)])
    return buf.getvalue()


def results_to_dict(results: List[CheckResult]) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "checks": [
            {"name": r.name, "metric": r.metric, "threshold": r.threshold, "pass": r.passed} for r in results
        ],
    }


# -- individual metrics -------------------------------------------------------


def unitarity_defect(two_ell: int, g: SU2Element) -> float:
    D = wigner_matrix(two_ell, g)
    eye = np.eye(two_ell + 1)
    return float(np.max(np.abs(np.conj(np.swapaxes(D, -1, -2)) @ D - eye)))


def homomorphism_defect(two_ell: int, g: SU2Element, h: SU2Element) -> float:
    lhs = wigner_matrix(two_ell, su2_mul(g, h))
    rhs = wigner_matrix(two_ell, g) @ wigner_matrix(two_ell, h)
    return float(np.max(np.abs(lhs - rhs)))


def little_d_imag(two_ell: int, thetas) -> float:
    D = wigner_matrix(two_ell, g2(np.asarray(thetas, dtype=float)))
    return float(np.max(np.abs(D.imag)))


def ambient_laplacian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central-difference Laplacian on R^4 of f at points x of shape (n, 4).

    ``f`` maps (k, 4) real points to an array with leading axis k.
    """
    x = np.asarray(x, dtype=float)
    f0 = f(x)
    total = -8.0 * f0
    for axis in range(4):
        step = np.zeros(4)
        step[axis] = h
        total = total + f(x + step) + f(x - step)
    return total / (h * h)


def _as_pair(x: np.ndarray):
    return x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]


def harmonicity_defect(two_ell: int, points: np.ndarray, h: float = FD_STEP) -> float:
    """Largest relative finite-difference R^4 Laplacian of the extended D^l entries.

    Each entry is scaled by max(n(n+2), 1) |x|^(n-2), n = 2l, the size of
    the Laplacian of a degree-n monomial.
    """
    n = two_ell

    def f(x):
        return wigner_polynomial(n, *_as_pair(x))

    lap = ambient_laplacian(f, points, h)
    r = np.linalg.norm(points, axis=1)
    scale = max(n * (n + 2), 1) * r ** (n - 2)
    return float(np.max(np.abs(lap) / scale[:, None, None]))


def sphere_laplacian_fd(field_fn, g: SU2Element, h: float = FD_STEP) -> np.ndarray:
    """Laplace-Beltrami operator of the radius-2 sphere by finite differences.

    The field is extended to R^4 as F(x / |x|), which is constant along rays,
    so its flat Laplacian on the unit sphere is the sphere's own. Scaling to
    radius 2 divides by 4.
    """
    a, b = np.asarray(g.alpha), np.asarray(g.beta)
    x = np.stack([a.real, a.imag, b.real, b.imag], axis=-1)

    def f(y):
        return field_fn(su2_new(*_as_pair(y)))

    return ambient_laplacian(f, x, h) / 4.0


def laplacian_defect(coeffs: SpectralCoefficients, g: SU2Element) -> float:
    """Relative gap between the spectral and finite-difference full Laplacians."""
    spectral = synthesize(apply_laplacian(coeffs, "full"))(g)
    fd = sphere_laplacian_fd(synthesize(coeffs), g)
    return float(np.max(np.abs(spectral - fd)) / np.max(np.abs(spectral)))


def haar_moment_defect(two_L: int, grid=None) -> float:
    """Largest deviation of quadrature Haar moments of D entries from the closed forms.

    Both E{D conj(D')} and E{D D'} for every index pair with degrees up to two_L.
    """
    grid = build_grid(two_L) if grid is None else grid
    g = grid.elements
    w = grid.weights / grid.weights.sum()
    labels, cols = [], []
    for n in range(two_L + 1):
        D = wigner_matrix(n, g)
        for i, tm in enumerate(index_range(n)):
            for j, ts in enumerate(index_range(n)):
                labels.append((n, tm, ts))
                cols.append(D[:, i, j])
    V = np.stack(cols)
    cross = (V * w) @ np.conj(V).T
    pseudo = (V * w) @ V.T
    worst = 0.0
    for p, a in enumerate(labels):
        for q, b in enumerate(labels):
            worst = max(worst, abs(cross[p, q] - haar_cross_moment(a, b)), abs(pseudo[p, q] - haar_pseudo_moment(a, b)))
    return float(worst)


def schur_defect(two_L: int, rng: np.random.Generator, grid=None) -> float:
    """Quadrature moments of D(gamma)v against ``schur_prediction`` for random vectors."""
    grid = build_grid(two_L) if grid is None else grid
    g = grid.elements
    w = grid.weights / grid.weights.sum()
    worst = 0.0
    for n in range(two_L + 1):
        D = wigner_matrix(n, g)
        v = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        u = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        Dv, Du = D @ v, D @ u
        cross = np.einsum("k,ki,kj->ij", w, Dv, np.conj(Du))
        pseudo = np.einsum("k,ki,kj->ij", w, Dv, Du)
        pc, pp = schur_prediction(v, u)
        worst = max(worst, float(np.max(np.abs(cross - pc))), float(np.max(np.abs(pseudo - pp))))
    return worst


# -- suite --------------------------------------------------------------------


def run_checks(
    two_L: int = 4,
    seed: int = 0,
    thresholds: Optional[Dict[str, float]] = None,
    n_elements: int = 50,
) -> List[CheckResult]:
    """Run every check at band limit ``two_L`` with a seeded random stream."""
    th = dict(DEFAULT_THRESHOLDS)
    for key, value in (thresholds or {}).items():
        if key not in th:
            raise KeyError(f"unknown check {key!r}; known: {', '.join(th)}")
        th[key] = float(value)
    rng = np.random.default_rng(seed)
    ga, gb = haar_sample(rng, n_elements), haar_sample(rng, n_elements)
    degrees = range(two_L + 1)
    metrics: Dict[str, float] = {}
    metrics["unitarity"] = max(unitarity_defect(n, ga) for n in degrees)
    metrics["homomorphism"] = max(homomorphism_defect(n, ga, gb) for n in degrees)
    metrics["symmetry"] = max(symmetry_check(n, ga) for n in degrees)
    thetas = rng.uniform(0, np.pi, n_elements)
    metrics["little_d_real"] = max(little_d_imag(n, thetas) for n in degrees)

    pts = rng.standard_normal((20, 4))
    pts *= (rng.uniform(0.5, 1.5, 20) / np.linalg.norm(pts, axis=1))[:, None]
    # the step-1e-3 difference quotient loses accuracy quickly above 2l = 4
    fd_degrees = range(1, min(max(two_L, 1), 4) + 1)
    metrics["harmonicity"] = max(harmonicity_defect(n, pts) for n in fd_degrees)

    grid = build_grid(two_L, check=False)
    metrics["grid_gate"] = grid.gate_defect()

    lap_L = min(max(two_L, 1), 3)
    coeffs = SpectralCoefficients.zeros(lap_L)
    for n in range(1, lap_L + 1):
        coeffs.blocks[n] = rng.standard_normal((n + 1, n + 1)) + 1j * rng.standard_normal((n + 1, n + 1))
    metrics["laplacian"] = laplacian_defect(coeffs, haar_sample(rng, 20))

    metrics["haar_moments"] = haar_moment_defect(two_L, grid)
    metrics["schur"] = schur_defect(two_L, rng, grid)
    return [CheckResult(name, metrics[name], th[name]) for name in DEFAULT_THRESHOLDS]


__all__ = [
    "CheckResult",
    "DEFAULT_THRESHOLDS",
    "ambient_laplacian",
    "haar_moment_defect",
    "harmonicity_defect",
    "homomorphism_defect",
    "laplacian_defect",
    "results_to_csv",
    "results_to_dict",
    "run_checks",
    "schur_defect",
    "sphere_laplacian_fd",
    "unitarity_defect",
]
