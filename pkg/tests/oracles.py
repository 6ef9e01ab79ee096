"""Reference values computed independently of the library's closed-form sum."""

import math

import numpy as np
from numpy.polynomial import polynomial as P


def wigner_by_expansion(two_ell, alpha, beta):
    """D^l from the generating relation by polynomial multiplication.

    With z1 = 1 and z0 = t, the column s of D is read off the coefficients of
    C(2l, l-s)^{1/2} (conj(a) t + conj(b))^{l+s} (-b t + a)^{l-s}:
    the coefficient of t^{l+m} equals C(2l, l+m)^{1/2} D_{m,s}.
    """
    n = two_ell
    D = np.zeros((n + 1, n + 1), dtype=complex)
    a, b = complex(alpha), complex(beta)
    for j in range(n + 1):  # j = l + s
        poly = P.polymul(
            P.polypow([b.conjugate(), a.conjugate()], j),
            P.polypow([a, -b], n - j),
        )
        poly = np.pad(poly, (0, n + 1 - len(poly)))
        for i in range(n + 1):  # i = l + m
            D[i, j] = math.sqrt(math.comb(n, n - j)) * poly[i] / math.sqrt(math.comb(n, i))
    return D


def ambient_point(rng, radius_range=(0.5, 1.5)):
    x = rng.standard_normal(4)
    return x * rng.uniform(*radius_range) / np.linalg.norm(x)
