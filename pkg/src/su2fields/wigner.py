"""Wigner matrices D^l(g) in the monomial basis.

The matrix of degree l is defined by expanding

    sum_m psi_m(z) D_{m,s}(h) = C(2l, l-s)^{1/2} (conj(a) z0 + conj(b) z1)^{l+s} (-b z0 + a z1)^{l-s}

with psi_m(z) = C(2l, l+m)^{1/2} z0^{l+m} z1^{l-m}, and reading off the
coefficient of z0^{l+m} z1^{l-m}. This gives the finite sum

    D_{m,s} = sqrt(C(2l, l-s) / C(2l, l+m))
              * sum_k C(l+s, l+m-k) C(l-s, k) conj(a)^{l+m-k} conj(b)^{s-m+k} (-b)^k a^{l-s-k},

which is evaluated directly, with exact integer binomials and the term sums
accumulated in extended precision (long double) to contain the cancellation
of the alternating sum at high degree. The same sum is a homogeneous polynomial in
(a, b, conj(a), conj(b)) and is valid off the unit sphere.

Layout: rows are m = -l..l ascending, columns s = -l..l ascending; batch
axes of the input element come first.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BandLimitExceededError
from .group import SU2Element, check_degree, check_triple, g2, index_range

#: Largest doubled degree accepted by default.
BAND_LIMIT_CAP = 64

# upper bound on batch * terms materialized at once
_CHUNK_BUDGET = 4_000_000


def _check_cap(two_ell: int, cap: int) -> None:
    check_degree(two_ell)
    if two_ell > cap:
        raise BandLimitExceededError(f"2l={two_ell} exceeds the band-limit cap {cap}")


def monomial_eval(two_ell: int, two_m: int, z) -> complex:
    """Rescaled monomial C(2l, l+m)^{1/2} z0^{l+m} z1^{l-m}.

    ``z`` is an ``SU2Element`` or any pair (z0, z1).
    """
    check_triple(two_ell, two_m)
    z0, z1 = (z.alpha, z.beta) if isinstance(z, SU2Element) else z
    p, q = (two_ell + two_m) // 2, (two_ell - two_m) // 2
    return math.sqrt(math.comb(two_ell, p)) * np.power(z0, p) * np.power(z1, q)


@lru_cache(maxsize=None)
def _term_table(two_ell: int):
    """Flattened term list of the closed-form sum, grouped by output entry."""
    n = two_ell
    coef, e_ac, e_bc, e_b, e_a, starts = [], [], [], [], [], []
    for tm in index_range(n):
        lpm = (n + tm) // 2
        for ts in index_range(n):
            lps, lms = (n + ts) // 2, (n - ts) // 2
            prefactor = np.sqrt(_exact(math.comb(n, lms)) / _exact(math.comb(n, lpm)))
            starts.append(len(coef))
            smm = (ts - tm) // 2
            for k in range(max(0, -smm), min(lms, lpm) + 1):
                c = math.comb(lps, lpm - k) * math.comb(lms, k)
                coef.append((-1) ** k * _exact(c) * prefactor)
                e_ac.append(lpm - k)
                e_bc.append(smm + k)
                e_b.append(k)
                e_a.append(lms - k)
    arrays = [np.asarray(x, dtype=np.intp) for x in (e_ac, e_bc, e_b, e_a, starts)]
    return (np.asarray(coef, dtype=np.longdouble), *arrays)


def _exact(n: int) -> np.longdouble:
    # via str: integers above 2**53 would otherwise round through float64
    return np.longdouble(str(n))


def _powers(x: np.ndarray, n: int) -> np.ndarray:
    out = np.empty(x.shape + (n + 1,), dtype=np.clongdouble)
    out[..., 0] = 1.0
    for j in range(1, n + 1):
        out[..., j] = out[..., j - 1] * x
    return out


def wigner_polynomial(two_ell: int, alpha, beta, cap: int = BAND_LIMIT_CAP) -> np.ndarray:
    """Extended Wigner matrix at an arbitrary point (alpha, beta) of C^2.

    On the unit sphere this is D^l(h(alpha, beta)); elsewhere it is the
    homogeneous harmonic polynomial extension of degree 2l.
    """
    _check_cap(two_ell, cap)
    a = np.asarray(alpha, dtype=complex)
    b = np.asarray(beta, dtype=complex)
    a, b = np.broadcast_arrays(a, b)
    batch_shape = a.shape
    d = two_ell + 1
    if two_ell == 0:
        return np.ones(batch_shape + (1, 1), dtype=complex)
    coef, e_ac, e_bc, e_b, e_a, starts = _term_table(two_ell)
    a, b = a.reshape(-1), b.reshape(-1)
    out = np.empty((a.size, d * d), dtype=complex)
    chunk = max(1, _CHUNK_BUDGET // coef.size)
    for lo in range(0, a.size, chunk):
        sl = slice(lo, lo + chunk)
        pa = _powers(a[sl].astype(np.clongdouble), two_ell)
        pb = _powers(b[sl].astype(np.clongdouble), two_ell)
        pac, pbc = np.conj(pa), np.conj(pb)
        terms = coef * pac[:, e_ac] * pbc[:, e_bc] * pb[:, e_b] * pa[:, e_a]
        out[sl] = np.add.reduceat(terms, starts, axis=-1)
    return out.reshape(batch_shape + (d, d))


def wigner_matrix(two_ell: int, g: SU2Element, cap: int = BAND_LIMIT_CAP) -> np.ndarray:
    """D^l(g), shape (..., 2l+1, 2l+1) for a (batched) element ``g``."""
    return wigner_polynomial(two_ell, g.alpha, g.beta, cap=cap)


def matrix_index(two_ell: int, two_m: int) -> int:
    """Row/column position of the doubled index in the ascending layout."""
    return (two_m + two_ell) // 2


def wigner_entry(two_ell: int, two_m: int, two_s: int, g: SU2Element) -> complex:
    check_triple(two_ell, two_m, two_s)
    D = wigner_matrix(two_ell, g)
    return D[..., matrix_index(two_ell, two_m), matrix_index(two_ell, two_s)]


def wigner_entry_at_g3(two_ell: int, two_m: int, two_s: int, psi: float) -> complex:
    """D^l_{m,s}(g3(psi)) = delta_{m,s} exp(-i s psi)."""
    check_triple(two_ell, two_m, two_s)
    if two_m != two_s:
        return 0j
    return complex(np.exp(-0.5j * two_s * psi))


def conjugation_sign(two_ell: int, two_m: int, two_s: int) -> int:
    """Sign c with conj(D_{m,s}(g)) = c * D_{-m,-s}(g); equals (-1)^(m-s)."""
    check_triple(two_ell, two_m, two_s)
    return -1 if ((two_m - two_s) // 2) % 2 else 1


def conjugation_signs(two_ell: int) -> np.ndarray:
    idx = np.arange(-two_ell, two_ell + 1, 2)
    return np.where(((idx[:, None] - idx[None, :]) // 2) % 2, -1.0, 1.0)


def symmetry_check(two_ell: int, g: SU2Element) -> float:
    """Largest defect in the two conjugation identities

        conj(D_{m,s}(g)) = D_{m,s}(conj g)   and   conj(D_{m,s}(g)) = (-1)^(m-s) D_{-m,-s}(g).
    """
    D = wigner_matrix(two_ell, g)
    Dc = wigner_matrix(two_ell, SU2Element(np.conj(g.alpha), np.conj(g.beta)))
    flipped = D[..., ::-1, ::-1] * conjugation_signs(two_ell)
    return float(max(np.max(np.abs(np.conj(D) - Dc)), np.max(np.abs(np.conj(D) - flipped))))


def normalized_harmonic(two_ell: int, two_m: int, two_s: int, g: SU2Element):
    """Orthonormal hyperspherical harmonic sqrt(2l+1)/(4 pi) * D^l_{m,s}."""
    return math.sqrt(two_ell + 1) / (4 * math.pi) * wigner_entry(two_ell, two_m, two_s, g)


def spin_weighted_harmonic(two_ell: int, two_m: int, two_s: int, g: SU2Element):
    """sqrt((2l+1)/(4 pi)) * D^l_{m,s}, normalized as a section over S^2."""
    return math.sqrt((two_ell + 1) / (4 * math.pi)) * wigner_entry(two_ell, two_m, two_s, g)


def epsilon_matrix(two_ell: int) -> np.ndarray:
    """Antidiagonal sign matrix eps_{m,m'} = delta_{-m,m'} (-1)^(l-m), ascending layout."""
    check_degree(two_ell)
    d = two_ell + 1
    eps = np.zeros((d, d))
    for i, tm in enumerate(index_range(two_ell)):
        eps[i, d - 1 - i] = -1.0 if ((two_ell - tm) // 2) % 2 else 1.0
    return eps


def little_d(two_ell: int, theta: float) -> np.ndarray:
    """Real matrix D^l(g2(theta))."""
    D = wigner_matrix(two_ell, g2(theta))
    if np.max(np.abs(D.imag)) > 1e-12:
        raise AssertionError("little-d matrix acquired an imaginary part")
    return D.real
