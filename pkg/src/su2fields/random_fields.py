"""Random fields on SU(2) at the level of spectral coefficients.

Generators take an explicit ``numpy.random.Generator`` and an optional
``size``; with ``size=None`` they return one field, otherwise a
``SpectralCoefficients`` whose blocks carry a leading sample axis.

Prediction models give the closed-form first and second moments
E{a conj(a')} ("cross") and E{a a'} ("pseudo") that the Monte Carlo
estimators are checked against. The Haar moments they rest on are

    E{D_{m,s} conj(D_{m',s'})} = delta_{m,m'} delta_{s,s'} / (2l+1)
    E{D_{m,s} D_{m',s'}}       = delta_{-m,m'} delta_{-s,s'} (-1)^(s-m) / (2l+1)

(same degree; different degrees are uncorrelated).
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidSpecError, NotPSDError, ZeroFieldError
from .group import SU2Element, check_triple, g2, g3, haar_sample, index_range
from .harmonic import SpectralCoefficients, SpinMeasureSet, coefficient_indices
from .wigner import epsilon_matrix, matrix_index, wigner_matrix

Triple = Tuple[int, int, int]
Generator = Callable[[np.random.Generator, Optional[int]], Union[SpectralCoefficients, np.ndarray]]

PSD_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
SIGMA_GATE = 5.0
ABS_FLOOR = 1e-12


def _sign(k: int) -> float:
    return -1.0 if k % 2 else 1.0


# -- specifications -----------------------------------------------------------


@dataclass(frozen=True)
class SpinMeasure:
    """Probability vector over s = -l..l (ascending)."""

    two_ell: int
    masses: Tuple[float, ...]

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if m.shape != (self.two_ell + 1,):
            raise InvalidSpecError(f"spin measure of degree 2l={self.two_ell} needs {self.two_ell + 1} masses")
        if np.any(m < 0) or abs(m.sum() - 1.0) > 1e-12:
            raise InvalidSpecError("spin measure masses must be nonnegative and sum to 1")
        object.__setattr__(self, "masses", tuple(float(x) for x in m))

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(index_range(self.two_ell), self.masses))


def _psd_sqrt(K: np.ndarray, what: str) -> np.ndarray:
    if np.max(np.abs(K - K.conj().T), initial=0.0) > HERMITIAN_TOLERANCE:
        raise InvalidSpecError(f"{what} is not Hermitian")
    w, V = np.linalg.eigh(K)
    floor = -PSD_TOLERANCE * max(float(np.trace(K).real), 0.0)
    if w.size and w.min() < floor:
        raise NotPSDError(f"{what} has eigenvalue {w.min():.3e} below {floor:.3e}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


@dataclass
class CovarianceSpec:
    """Second-order law of a Gaussian field.

    ``bi_invariant``: ``power_spectrum[two_ell]`` = sigma(l)^2.
    ``left_invariant``: ``K[two_ell]`` is the Hermitian PSD matrix K(s, s')
    over s, s' = -l..l (ascending).
    """

    variant: str
    two_L: int
    power_spectrum: Optional[Sequence[float]] = None
    K: Optional[Sequence[np.ndarray]] = None
    _factors: List[np.ndarray] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.two_L < 0:
            raise InvalidSpecError("band limit must be nonnegative")
        if self.variant == "bi_invariant":
            ps = np.asarray(self.power_spectrum, dtype=float)
            if ps.shape != (self.two_L + 1,) or np.any(ps < 0) or not np.all(np.isfinite(ps)):
                raise InvalidSpecError("power_spectrum needs one nonnegative value per degree 2l = 0..two_L")
            self.power_spectrum = ps
        elif self.variant == "left_invariant":
            if self.K is None or len(self.K) != self.two_L + 1:
                raise InvalidSpecError("K needs one matrix per degree 2l = 0..two_L")
            Ks = [np.asarray(k, dtype=complex) for k in self.K]
            for n, k in enumerate(Ks):
                if k.shape != (n + 1, n + 1):
                    raise InvalidSpecError(f"K for 2l={n} must be {n + 1}x{n + 1}")
            self.K = Ks
            self._factors = [_psd_sqrt(k, f"K for 2l={n}") for n, k in enumerate(Ks)]
        else:
            raise InvalidSpecError(f"unknown covariance variant {self.variant!r}")


def _complex_normal(rng: np.random.Generator, shape: tuple) -> np.ndarray:
    """Circular complex Gaussian with E|z|^2 = 1 and E z^2 = 0."""
    x = rng.standard_normal(shape + (2,))
    return (x[..., 0] + 1j * x[..., 1]) / math.sqrt(2.0)


def _batch(size) -> tuple:
    return () if size is None else (int(size),)


# -- generators -------------------------------------------------------------


def gen_gaussian_bi_invariant(spec: CovarianceSpec, rng: np.random.Generator, size=None) -> SpectralCoefficients:
    """Independent circular Gaussian coefficients with variance sigma(l)^2."""
    if spec.variant != "bi_invariant":
        raise InvalidSpecError("expected a bi_invariant covariance spec")
    b = _batch(size)
    blocks = [
        math.sqrt(spec.power_spectrum[n]) * _complex_normal(rng, b + (n + 1, n + 1))
        for n in range(spec.two_L + 1)
    ]
    return SpectralCoefficients(spec.two_L, blocks)


def gen_gaussian_left_invariant(spec: CovarianceSpec, rng: np.random.Generator, size=None) -> SpectralCoefficients:
    """Rows a_{m,.} i.i.d. with covariance K across s: a_{m,.} = K^{1/2} z_m."""
    if spec.variant != "left_invariant":
        raise InvalidSpecError("expected a left_invariant covariance spec")
    b = _batch(size)
    blocks = []
    for n, R in enumerate(spec._factors):
        Z = _complex_normal(rng, b + (n + 1, n + 1))
        blocks.append(Z @ R.T)
    return SpectralCoefficients(spec.two_L, blocks)


def rotate_coefficients(coeffs: SpectralCoefficients, g: SU2Element, side: str) -> SpectralCoefficients:
    """Coefficients of X(g^{-1} z) (``left``) or X(z g) (``right``).

    Per degree, with A the (m, s) block: left A -> conj(D(g)) A,
    right A -> A D(g)^T. A batched ``g`` pairs with the sample axis.
    """
    blocks = []
    for n, A in enumerate(coeffs.blocks):
        D = wigner_matrix(n, g)
        if side == "left":
            blocks.append(np.conj(D) @ A)
        elif side == "right":
            blocks.append(A @ np.swapaxes(D, -1, -2))
        else:
            raise ValueError("side must be 'left' or 'right'")
    return SpectralCoefficients(coeffs.two_L, blocks)


def gen_rotated(template: SpectralCoefficients, side: str, rng: np.random.Generator, size=None) -> SpectralCoefficients:
    """X(z) = F(gamma1^{-1} z gamma2) with independent Haar gamma1, gamma2.

    ``side='left'`` uses gamma1 only, ``'right'`` gamma2 only, ``'bi'`` both.
    """
    if side not in ("left", "right", "bi"):
        raise ValueError("side must be 'left', 'right' or 'bi'")
    if not float(np.max(template.norm_squared())) > 0:
        raise ZeroFieldError("template field is zero")
    b = _batch(size)
    base = template if size is None else SpectralCoefficients(
        template.two_L, [np.broadcast_to(x, b + x.shape) for x in template.blocks]
    )
    out = base
    if side in ("left", "bi"):
        out = rotate_coefficients(out, haar_sample(rng, size), "left")
    if side in ("right", "bi"):
        out = rotate_coefficients(out, haar_sample(rng, size), "right")
    return out


def realize_spin_measure(mu: SpinMeasure, rng: np.random.Generator, size=None) -> SpectralCoefficients:
    """Left-invariant field of degree l whose right spin measure is mu.

    a_{m,s} = mu(s)^{1/2} D_{s,m}(gamma_s) with independent Haar gamma_s, so
    every column has squared norm mu(s) in every sample.
    """
    n = mu.two_ell
    b = _batch(size)
    A = np.zeros(b + (n + 1, n + 1), dtype=complex)
    for j, p in enumerate(mu.masses):
        D = wigner_matrix(n, haar_sample(rng, size))
        # draw gamma_s even when mu(s) = 0 so the stream does not depend on mu
        A[..., :, j] = math.sqrt(p) * D[..., j, :]
    out = SpectralCoefficients.zeros(n, b)
    out.blocks[n] = A
    return out


def d_invariantize(vectors: Sequence[np.ndarray], rng: np.random.Generator, size=None) -> List[np.ndarray]:
    """Apply D^{l_i}(gamma) to each v_i with one shared Haar gamma.

    Each vector has length 2l_i + 1 (a leading sample axis is allowed when
    ``size`` is given).
    """
    gamma = haar_sample(rng, size)
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=complex)
        D = wigner_matrix(v.shape[-1] - 1, gamma)
        out.append(np.einsum("...ij,...j->...i", D, v))
    return out


def wigner_sampler(two_L: int) -> Generator:
    """Generator emitting the blocks D^l(gamma), 2l = 0..two_L, for Haar gamma."""

    def draw(rng, size=None):
        gamma = haar_sample(rng, size)
        return SpectralCoefficients(two_L, [wigner_matrix(n, gamma) for n in range(two_L + 1)])

    return draw


# -- prediction models --------------------------------------------------------


def haar_cross_moment(first: Triple, second: Triple) -> float:
    """E{D^l_{m,s}(gamma) conj(D^l'_{m',s'}(gamma))}."""
    return 1.0 / (first[0] + 1) if first == second else 0.0


def haar_pseudo_moment(first: Triple, second: Triple) -> float:
    """E{D^l_{m,s}(gamma) D^l'_{m',s'}(gamma)}."""
    (n, tm, ts), (n2, tm2, ts2) = first, second
    if n != n2 or tm2 != -tm or ts2 != -ts:
        return 0.0
    return _sign((ts - tm) // 2) / (n + 1)


class CorrelationModel:
    """Closed-form (cross, pseudo) moments for pairs of coefficient indices."""

    def predict(self, first: Triple, second: Triple) -> Tuple[complex, complex]:
        raise NotImplementedError


class HaarWignerModel(CorrelationModel):
    """Moments of the entries of D^l(gamma) for Haar gamma."""

    def predict(self, first, second):
        return complex(haar_cross_moment(first, second)), complex(haar_pseudo_moment(first, second))


class GaussianModel(CorrelationModel):
    def __init__(self, spec: CovarianceSpec):
        self.spec = spec

    def predict(self, first, second):
        (n, tm, ts), (n2, tm2, ts2) = first, second
        if n != n2 or tm != tm2:
            return 0j, 0j
        if self.spec.variant == "bi_invariant":
            return complex(self.spec.power_spectrum[n] if ts == ts2 else 0.0), 0j
        K = self.spec.K[n]
        return complex(K[matrix_index(n, ts), matrix_index(n, ts2)]), 0j


class RotatedTemplateModel(CorrelationModel):
    """Moments of ``gen_rotated(template, side)``.

    With A the template block of degree l, e = epsilon(l) and d = 2l+1:
      left   cross  delta_{m,m'} (A^H A)_{s',s} / d
             pseudo e_{m,m'} (A^T e A)_{s,s'} / d
      right  cross  delta_{s,s'} (A A^H)_{m,m'} / d
             pseudo e_{s,s'} (A e A^T)_{m,m'} / d
      bi     cross  delta_{m,m'} delta_{s,s'} |A|^2 / d^2
             pseudo e_{m,m'} e_{s,s'} <conj X^l, X^l> / d^2
    where <conj X^l, X^l> = sum (-1)^(m-s) a_{m,s} a_{-m,-s}.
    """

    def __init__(self, template: SpectralCoefficients, side: str):
        if template.batch_shape:
            raise ValueError("template must be a single field")
        self.template = template
        self.side = side

    def predict(self, first, second):
        (n, tm, ts), (n2, tm2, ts2) = first, second
        if n != n2 or n > self.template.two_L:
            return 0j, 0j
        A = self.template.blocks[n]
        e = epsilon_matrix(n)
        d = n + 1
        i, j = matrix_index(n, tm), matrix_index(n, ts)
        i2, j2 = matrix_index(n, tm2), matrix_index(n, ts2)
        if self.side == "left":
            cross = (A.conj().T @ A)[j2, j] / d if i == i2 else 0j
            pseudo = e[i, i2] * (A.T @ e @ A)[j, j2] / d
        elif self.side == "right":
            cross = (A @ A.conj().T)[i, i2] / d if j == j2 else 0j
            pseudo = e[j, j2] * (A @ e @ A.T)[i, i2] / d
        else:
            cross = np.sum(np.abs(A) ** 2) / d**2 if (i, j) == (i2, j2) else 0j
            pseudo = e[i, i2] * e[j, j2] * conj_pairing(self.template, n) / d**2
        return complex(cross), complex(pseudo)


class SpinMeasureModel(CorrelationModel):
    """Moments of ``realize_spin_measure(mu)``."""

    def __init__(self, mu: SpinMeasure):
        self.mu = mu

    def predict(self, first, second):
        (n, tm, ts), (n2, tm2, ts2) = first, second
        if n != self.mu.two_ell or n2 != n:
            return 0j, 0j
        d = n + 1
        p = self.mu.masses[matrix_index(n, ts)]
        cross = p / d if (tm, ts) == (tm2, ts2) else 0.0
        pseudo = 0.0
        if ts == 0 and ts2 == 0 and tm2 == -tm:
            pseudo = _sign(tm // 2) * p / d
        return complex(cross), complex(pseudo)


def conj_pairing(coeffs: SpectralCoefficients, two_ell: int) -> complex:
    """<conj X^l, X^l> = integral of (X^l)^2, from the coefficients."""
    A = coeffs.blocks[two_ell]
    signs = np.array([[_sign((tm - ts) // 2) for ts in index_range(two_ell)] for tm in index_range(two_ell)])
    return complex(np.sum(signs * A * A[..., ::-1, ::-1], axis=(-2, -1)))


def schur_prediction(v: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """E{(D v)(conj(D w))^T} and E{(D v)(D w)^T} for Haar D of a common degree.

    Cross = <w, v> I / d with <w, v> = conj(w) . v; pseudo = (v^T e w) e / d.
    Vectors of different lengths are uncorrelated.
    """
    v, w = np.asarray(v, complex), np.asarray(w, complex)
    if v.shape != w.shape:
        return np.zeros((v.size, w.size), complex), np.zeros((v.size, w.size), complex)
    d = v.size
    e = epsilon_matrix(d - 1)
    return np.vdot(w, v) * np.eye(d) / d, (v @ e @ w) * e / d


# -- Monte Carlo ---------------------------------------------------------------

DEFAULT_CHUNK = 8192


def draw_samples(
    generator: Generator,
    N: int,
    seed: int,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
):
    """Draw N samples in fixed-size chunks with independent child streams.

    Chunk k always uses child k of ``SeedSequence(seed)``, and results are
    concatenated in chunk order, so the output does not depend on ``threads``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    sizes = [min(chunk, N - lo) for lo in range(0, N, chunk)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(k):
        return generator(np.random.default_rng(children[k]), sizes[k])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]
    if isinstance(parts[0], SpectralCoefficients):
        return SpectralCoefficients(
            parts[0].two_L,
            [np.concatenate([p.blocks[n] for p in parts]) for n in range(parts[0].two_L + 1)],
        )
    return np.concatenate(parts)


def _features(samples) -> Tuple[np.ndarray, Dict]:
    if isinstance(samples, SpectralCoefficients):
        labels = coefficient_indices(samples.two_L)
        return samples.flat(), {k: i for i, k in enumerate(labels)}
    arr = np.asarray(samples)
    return arr.reshape(arr.shape[0], -1), None


def _mean_stderr(x: np.ndarray) -> Tuple[complex, float]:
    mean = x.mean()
    sd = math.sqrt(float(np.mean(np.abs(x - mean) ** 2)))
    return complex(mean), sd / math.sqrt(x.size)


def within_gate(estimate: complex, prediction: complex, stderr: float) -> bool:
    return abs(estimate - prediction) <= SIGMA_GATE * stderr + ABS_FLOOR


@dataclass
class CorrelationRow:
    first: object
    second: object
    kind: str  # "cross" = E{a conj(a')}, "pseudo" = E{a a'}
    estimate: complex
    prediction: complex
    stderr: float

    @property
    def passed(self) -> bool:
        return within_gate(self.estimate, self.prediction, self.stderr)


@dataclass
class CorrelationReport:
    N: int
    rows: List[CorrelationRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> List[CorrelationRow]:
        return [r for r in self.rows if not r.passed]

    def row(self, first, second, kind: str) -> CorrelationRow:
        for r in self.rows:
            if r.first == first and r.second == second and r.kind == kind:
                return r
        raise KeyError((first, second, kind))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["first", "second", "kind", "est_re", "est_im", "pred_re", "pred_im", "stderr", "pass"])
        for r in self.rows:
            w.writerow([
                _label(r.first), _label(r.second), r.kind,
                repr(r.estimate.real), repr(r.estimate.imag),
                repr(r.prediction.real), repr(r.prediction.imag),
                repr(r.stderr), int(r.passed),
            ])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "samples": self.N,
            "rows": [
                {
                    "first": _jsonable(r.first),
                    "second": _jsonable(r.second),
                    "kind": r.kind,
                    "estimate": [r.estimate.real, r.estimate.imag],
                    "prediction": [r.prediction.real, r.prediction.imag],
                    "stderr": r.stderr,
                    "pass": r.passed,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _label(key) -> str:
    return ":".join(str(k) for k in key) if isinstance(key, tuple) else str(key)


def _jsonable(key):
    return list(key) if isinstance(key, tuple) else key


def correlate(samples, targets, predict) -> CorrelationReport:
    """Compare sample moments of coefficient pairs with predicted values.

    ``samples`` is a batched ``SpectralCoefficients`` (targets are index
    triples) or an (N, k) array (targets are column numbers).
    ``predict(first, second)`` returns the (cross, pseudo) pair.
    """
    X, lookup = _features(samples)
    col = (lambda k: lookup[k]) if lookup is not None else (lambda k: k)
    rows = []
    for first, second in targets:
        a, b = X[:, col(first)], X[:, col(second)]
        cross_pred, pseudo_pred = predict(first, second)
        est, se = _mean_stderr(a * np.conj(b))
        rows.append(CorrelationRow(first, second, "cross", est, complex(cross_pred), se))
        est, se = _mean_stderr(a * b)
        rows.append(CorrelationRow(first, second, "pseudo", est, complex(pseudo_pred), se))
    return CorrelationReport(X.shape[0], rows)


def estimate_correlations(
    generator: Generator,
    N: int,
    targets,
    predict,
    seed: int = 0,
    threads: int = 1,
) -> CorrelationReport:
    """Monte Carlo estimate of E{a conj(a')} and E{a a'} for each target pair."""
    if N < 100:
        raise ValueError("estimate_correlations needs N >= 100")
    if isinstance(predict, CorrelationModel):
        predict = predict.predict
    return correlate(draw_samples(generator, N, seed, threads), targets, predict)


def all_pairs(two_L: int, max_two_ell: Optional[int] = None) -> List[Tuple[Triple, Triple]]:
    idx = [t for t in coefficient_indices(two_L) if max_two_ell is None or t[0] <= max_two_ell]
    return [(a, b) for a in idx for b in idx]


# -- spin measures ------------------------------------------------------------


@dataclass
class SpinMeasureEstimate:
    mode: str
    N: int
    measures: SpinMeasureSet
    stderr: SpinMeasureSet

    def to_dict(self) -> dict:
        return {"mode": self.mode, "samples": self.N, "measures": self.measures.to_dict(), "stderr": self.stderr.to_dict()}


def _marginal_table(labels: List[Triple]):
    groups = {"left": {}, "right": {}, "bi": {}}
    for i, (n, tm, ts) in enumerate(labels):
        groups["left"].setdefault(tm, []).append(i)
        groups["right"].setdefault(ts, []).append(i)
        groups["bi"].setdefault((tm, ts), []).append(i)
    return {k: dict(sorted(v.items())) for k, v in groups.items()}


def spin_measure_statistics(samples: SpectralCoefficients, mode: str, degree: Optional[int] = None) -> SpinMeasureEstimate:
    """Weak (ratio of means) or strong (mean of ratios) spin measures of samples."""
    if degree is None:
        labels = coefficient_indices(samples.two_L)
        sq = np.abs(samples.flat()) ** 2
    else:
        labels = [(degree, tm, ts) for tm in index_range(degree) for ts in index_range(degree)]
        b = samples.blocks[degree]
        sq = np.abs(b.reshape(b.shape[0], -1)) ** 2
    norms = sq.sum(axis=1)
    keep = norms > 0
    if not np.any(keep):
        raise ZeroFieldError("all samples vanish")
    sq, norms = sq[keep], norms[keep]
    N = sq.shape[0]
    groups = _marginal_table(labels)

    if mode == "strong":
        P = sq / norms[:, None]

        def stat(cols):
            x = P[:, cols].sum(axis=1)
            return float(x.mean()), float(x.std() / math.sqrt(N))

    elif mode == "weak":
        total = norms.mean()

        def stat(cols):
            x = sq[:, cols].sum(axis=1)
            r = float(x.mean() / total)
            # delta-method error of a ratio of means
            return r, float(np.std(x - r * norms) / (total * math.sqrt(N)))

    else:
        raise ValueError("mode must be 'weak' or 'strong'")

    est, err = {}, {}
    est["total"], err["total"] = {}, {}
    for i, key in enumerate(labels):
        est["total"][key], err["total"][key] = stat([i])
    for name, table in groups.items():
        est[name], err[name] = {}, {}
        for key, cols in table.items():
            est[name][key], err[name][key] = stat(cols)
    measures = SpinMeasureSet(est["total"], est["left"], est["right"], est["bi"])
    errors = SpinMeasureSet(err["total"], err["left"], err["right"], err["bi"])
    return SpinMeasureEstimate(mode, N, measures, errors)


def estimate_spin_measures(
    generator: Generator,
    N: int,
    mode: str,
    seed: int = 0,
    threads: int = 1,
    degree: Optional[int] = None,
) -> SpinMeasureEstimate:
    if N < 100:
        raise ValueError("estimate_spin_measures needs N >= 100")
    return spin_measure_statistics(draw_samples(generator, N, seed, threads), mode, degree)


# -- orbits -------------------------------------------------------------------


@dataclass
class OrbitReport:
    two_ell: int
    two_s: int
    fixing_exact: bool  # every enumerated stabilizer angle satisfies e^{-i s psi} = 1
    fixing_defect: float  # max |D(g) e_s - e_s| over the enumerated stabilizer elements
    moved_distance: Optional[float]  # |D(g) e_s - e_s| for a random element, None at l = 0
    span_ranks: List[int]
    span_min_ratio: float

    @property
    def passed(self) -> bool:
        moved = self.moved_distance is None or self.moved_distance > 1e-6
        full = all(r == self.two_ell + 1 for r in self.span_ranks)
        return self.fixing_exact and self.fixing_defect <= 1e-10 and moved and full


def orbit_checks(two_ell: int, two_s: int, rng: np.random.Generator, span_trials: int = 1) -> OrbitReport:
    """Stabilizer of the basis vector e_s and spanning of sampled orbits.

    For s != 0 the elements g3(2 pi k / s), k = 1..2|s|, must fix e_s; the
    condition e^{-i s psi} = 1 is checked exactly as the integer
    divisibility s psi / 2 pi = k. For s = 0 the whole diagonal circle fixes
    e_0, and g2(pi) maps e_0 to (-1)^l e_0.
    """
    check_triple(two_ell, two_s)

    j = matrix_index(two_ell, two_s)
    e = np.zeros(two_ell + 1, complex)
    e[j] = 1.0
    if two_s != 0:
        ks = range(1, abs(two_s) + 1)
        # psi / (2 pi) = k / s = 2k / two_s as an exact rational; s psi / (2 pi) must be an integer
        turns = [Fraction(2 * k, two_s) for k in ks]
        fixing_exact = all((Fraction(two_s, 2) * t).denominator == 1 for t in turns)
        psis = np.array([2 * math.pi * float(t) for t in turns])
        D = wigner_matrix(two_ell, g3(psis))
        fixing_defect = float(np.max(np.abs(D @ e - e)))
    else:
        fixing_exact = True
        psis = np.linspace(0, 4 * math.pi, 17)
        D = wigner_matrix(two_ell, g3(psis))
        fixing_defect = float(np.max(np.abs(D @ e - e)))
        flip = wigner_matrix(two_ell, g2(math.pi)) @ e
        fixing_defect = max(fixing_defect, float(np.max(np.abs(flip - _sign(two_ell // 2) * e))))
    moved = None
    if two_ell > 0:
        moved = float(np.linalg.norm(wigner_matrix(two_ell, haar_sample(rng)) @ e - e))
    ranks, ratio = [], math.inf
    for _ in range(span_trials):
        v = _complex_normal(rng, (two_ell + 1,))
        M = np.einsum("kij,j->ik", wigner_matrix(two_ell, haar_sample(rng, two_ell + 1)), v)
        sv = np.linalg.svd(M, compute_uv=False)
        ranks.append(int(np.sum(sv > 1e-8 * sv[0])))
        ratio = min(ratio, float(sv[-1] / sv[0]))
    return OrbitReport(two_ell, two_s, fixing_exact, fixing_defect, moved, ranks, ratio)
