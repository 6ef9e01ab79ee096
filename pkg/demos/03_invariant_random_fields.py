"""
Invariant random fields and their second moments
================================================

Each generator draws coefficient samples; ``estimate_correlations``
compares sample moments E{a conj(a')} and E{a a'} with closed forms,
passing a row when the gap is within five standard errors.
"""

import numpy as np

import su2fields as sf
from su2fields.random_fields import GaussianModel, RotatedTemplateModel, all_pairs

N = 20_000

# bi-invariant Gaussian field: diagonal covariance sigma_l^2
spec = sf.CovarianceSpec("bi_invariant", 2, power_spectrum=[1.0, 0.5, 0.25])
report = sf.estimate_correlations(lambda r, s: sf.gen_gaussian_bi_invariant(spec, r, s), N, all_pairs(2), GaussianModel(spec), seed=1)
print("bi-invariant Gaussian:", len(report.failures()), "of", len(report.rows), "rows outside the gate")

# a fixed template rotated by random elements on both sides
template = sf.SpectralCoefficients.delta(2, 0, 0)
draw = lambda r, s: sf.gen_rotated(template, "bi", r, s)  # noqa: E731
report = sf.estimate_correlations(draw, N, all_pairs(2), RotatedTemplateModel(template, "bi"), seed=2)
row = report.row((2, 0, 0), (2, 0, 0), "pseudo")
print("rotated template, E{a00 a00}:", round(row.estimate.real, 4), "predicted", round(row.prediction.real, 4))

# a common Haar rotation applied to several vectors
rng = np.random.default_rng(3)
v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
(x,) = sf.d_invariantize([v], rng, N)
print("E{x conj(x)^T} ~ |v|^2 I / 3:")
print(np.round(x.T @ x.conj() / N, 2))
print("|v|^2 / 3 =", round(np.vdot(v, v).real / 3, 2))

# the isotropy group of a basis vector and the span of a random orbit
rep = sf.orbit_checks(3, 1, rng, span_trials=20)
print("orbit check passed:", rep.passed, " ranks:", set(rep.span_ranks))
