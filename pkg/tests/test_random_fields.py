import math

import numpy as np
import pytest

from su2fields.errors import InvalidSpecError, NotPSDError, ZeroFieldError
from su2fields.group import IDENTITY, g3, haar_sample, index_range, su2_inv
from su2fields.harmonic import SpectralCoefficients, spin_measures, synthesize
from su2fields.random_fields import (
    CovarianceSpec,
    GaussianModel,
    HaarWignerModel,
    RotatedTemplateModel,
    SpinMeasure,
    SpinMeasureModel,
    all_pairs,
    conj_pairing,
    correlate,
    d_invariantize,
    draw_samples,
    estimate_correlations,
    estimate_spin_measures,
    gen_gaussian_bi_invariant,
    gen_gaussian_left_invariant,
    gen_rotated,
    haar_cross_moment,
    haar_pseudo_moment,
    orbit_checks,
    realize_spin_measure,
    rotate_coefficients,
    schur_prediction,
    spin_measure_statistics,
    wigner_sampler,
)
from su2fields.wigner import epsilon_matrix, matrix_index, wigner_matrix

N = 40_000


def random_coeffs(rng, two_L):
    n = sum((k + 1) ** 2 for k in range(two_L + 1))
    return SpectralCoefficients.from_flat(two_L, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_psd(rng, d):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return A @ A.conj().T / d


def assert_report(report):
    bad = [(r.first, r.second, r.kind, r.estimate, r.prediction, r.stderr) for r in report.failures()]
    assert not bad, bad[:5]


# -- specs ---------------------------------------------------------------------------


def test_spec_validation():
    with pytest.raises(InvalidSpecError):
        CovarianceSpec("bi_invariant", 1, power_spectrum=[1.0])
    with pytest.raises(InvalidSpecError):
        CovarianceSpec("bi_invariant", 1, power_spectrum=[1.0, -1.0])
    with pytest.raises(InvalidSpecError):
        CovarianceSpec("left_invariant", 1, K=[[[1]], [[1, 1j], [1j, 1]]])
    with pytest.raises(NotPSDError):
        CovarianceSpec("left_invariant", 1, K=[[[1]], [[1, 2], [2, 1]]])
    with pytest.raises(InvalidSpecError):
        CovarianceSpec("isotropic", 1)
    with pytest.raises(InvalidSpecError):
        SpinMeasure(2, (0.5, 0.5))


def test_psd_clamp_tolerates_rounding():
    K = np.diag([1.0, 0.0, -1e-13])
    spec = CovarianceSpec("left_invariant", 2, K=[[[1]], np.eye(2), K])
    assert np.all(np.isfinite(spec._factors[2]))


# -- Gaussian generators --------------------------------------------------------------


def test_bi_gaussian_zero_spectrum(rng):
    spec = CovarianceSpec("bi_invariant", 2, power_spectrum=[0, 0, 0])
    assert np.all(gen_gaussian_bi_invariant(spec, rng).flat() == 0)


def test_bi_gaussian_moments():
    spec = CovarianceSpec("bi_invariant", 2, power_spectrum=[2.0, 0.5, 1.5])
    draw = lambda r, s: gen_gaussian_bi_invariant(spec, r, s)  # noqa: E731
    assert_report(estimate_correlations(draw, N, all_pairs(2), GaussianModel(spec), seed=1))


def test_left_gaussian_diagonal_covariance(rng):
    K = [np.eye(1), np.diag([2.0, 0.0]), np.diag([1.0, 3.0, 0.5])]
    spec = CovarianceSpec("left_invariant", 2, K=K)
    a = gen_gaussian_left_invariant(spec, rng, 1000)
    assert np.all(a.blocks[1][:, :, 1] == 0)
    var = np.mean(np.abs(a.blocks[2]) ** 2, axis=0)
    assert np.allclose(var, [[1.0, 3.0, 0.5]] * 3, rtol=0.15)


def test_left_gaussian_moments(rng):
    spec = CovarianceSpec("left_invariant", 2, K=[random_psd(rng, n + 1) for n in range(3)])
    draw = lambda r, s: gen_gaussian_left_invariant(spec, r, s)  # noqa: E731
    assert_report(estimate_correlations(draw, N, all_pairs(2), GaussianModel(spec), seed=2))


# -- rotations ---------------------------------------------------------------------------


def test_rotate_by_identity(rng):
    a = random_coeffs(rng, 3)
    for side in ("left", "right"):
        assert np.allclose(rotate_coefficients(a, IDENTITY, side).flat(), a.flat(), atol=1e-15)


@pytest.mark.parametrize("side", ["left", "right"])
def test_rotate_pointwise_contract(side, rng):
    a = random_coeffs(rng, 4)
    g = haar_sample(rng)
    z = haar_sample(rng, 20)
    rotated = synthesize(rotate_coefficients(a, g, side))(z)
    moved = su2_inv(g) @ z if side == "left" else z @ g
    assert np.max(np.abs(rotated - synthesize(a)(moved))) <= 1e-9
    assert abs(float(rotate_coefficients(a, g, side).norm()) - float(a.norm())) <= 1e-11


def test_rotate_batched_elements(rng):
    a = random_coeffs(rng, 2)
    g = haar_sample(rng, 4)
    batch = rotate_coefficients(SpectralCoefficients(2, [np.broadcast_to(b, (4,) + b.shape) for b in a.blocks]), g, "left")
    for k in range(4):
        assert np.allclose(batch[k].flat(), rotate_coefficients(a, g[k], "left").flat(), atol=1e-15)


def test_rotated_bi_template_moments():
    template = SpectralCoefficients.delta(2, 0, 0)
    draw = lambda r, s: gen_rotated(template, "bi", r, s)  # noqa: E731
    model = RotatedTemplateModel(template, "bi")
    report = estimate_correlations(draw, N, all_pairs(2), model, seed=3)
    assert_report(report)
    assert model.predict((2, 0, 0), (2, 0, 0)) == (1 / 9, 1 / 9)


def test_rotated_left_template_keeps_right_spin(rng):
    template = SpectralCoefficients.delta(2, 0, 2)
    samples = gen_rotated(template, "left", rng, 200)
    stats = spin_measure_statistics(samples, "strong")
    assert abs(stats.measures.right[2] - 1) < 1e-12 and stats.stderr.right[2] < 1e-12


@pytest.mark.parametrize("side", ["left", "right", "bi"])
def test_rotated_random_template_moments(side, rng):
    template = random_coeffs(rng, 3)
    draw = lambda r, s: gen_rotated(template, side, r, s)  # noqa: E731
    assert_report(estimate_correlations(draw, N, all_pairs(3), RotatedTemplateModel(template, side), seed=4))


def test_rotated_zero_template(rng):
    with pytest.raises(ZeroFieldError):
        gen_rotated(SpectralCoefficients.zeros(2), "bi", rng)


def test_half_integer_pseudo_correlation_sign():
    # for a left-rotated template of degree 1/2 the pseudo-correlation
    # E{a_{m,s} a_{-m,s'}} is nonzero; a sign (-1)^(l+k) in place of (-1)^(l-k)
    # in the k-sum would force it to vanish for every half-integer degree
    template = SpectralCoefficients.zeros(1)
    template.blocks[1][:] = [[1.0, 0.5], [0.3j, 2.0]]
    draw = lambda r, s: gen_rotated(template, "left", r, s)  # noqa: E731
    model = RotatedTemplateModel(template, "left")
    report = estimate_correlations(draw, N, [((1, 1, 1), (1, -1, -1))], model, seed=5)
    assert_report(report)
    pseudo = report.row((1, 1, 1), (1, -1, -1), "pseudo")
    assert abs(pseudo.estimate) > 10 * pseudo.stderr


def test_conj_pairing_matches_quadrature(rng, grid4):
    a = random_coeffs(rng, 4)
    for n in range(5):
        part = SpectralCoefficients.zeros(4)
        part.blocks[n] = a.blocks[n]
        values = synthesize(part)(grid4.elements)
        assert abs(grid4.integrate(values * values) - conj_pairing(a, n)) < 1e-9


def test_weak_invariance_under_fixed_rotations(rng):
    template = random_coeffs(rng, 2)
    model = RotatedTemplateModel(template, "bi")
    samples = draw_samples(lambda r, s: gen_rotated(template, "bi", r, s), N, seed=6)
    for _ in range(10):
        g = haar_sample(rng)
        for side in ("left", "right"):
            assert_report(correlate(rotate_coefficients(samples, g, side), all_pairs(2), model.predict))


# -- spin measures -----------------------------------------------------------------------


def test_realize_delta_measure(rng):
    mu = SpinMeasure(2, (0.0, 1.0, 0.0))
    a = realize_spin_measure(mu, rng)
    block = a.blocks[2]
    assert np.all(block[:, [0, 2]] == 0) and np.any(block[:, 1] != 0)


def test_realize_measure_exact_per_sample(rng):
    for _ in range(10):
        n = int(rng.integers(0, 5))
        mu = SpinMeasure(n, tuple(rng.dirichlet(np.ones(n + 1))))
        samples = realize_spin_measure(mu, rng, 50)
        assert np.allclose(samples.norm_squared(), 1, atol=1e-10)
        for k in range(50):
            rs = spin_measures(samples[k]).right
            assert max(abs(rs[ts] - p) for ts, p in zip(index_range(n), mu.masses)) <= 1e-10


def test_realize_measure_moments():
    mu = SpinMeasure(2, (0.2, 0.3, 0.5))
    draw = lambda r, s: realize_spin_measure(mu, r, s)  # noqa: E731
    assert_report(estimate_correlations(draw, N, all_pairs(2), SpinMeasureModel(mu), seed=7))


def test_strong_bi_spin_uniform():
    spec = CovarianceSpec("bi_invariant", 2, power_spectrum=[1.0, 1.0, 1.0])
    est = estimate_spin_measures(lambda r, s: gen_gaussian_bi_invariant(spec, r, s), N, "strong", seed=8, degree=2)
    for key, p in est.measures.bi.items():
        assert abs(p - 1 / 9) <= 5 * est.stderr.bi[key]


def test_weak_and_strong_agree_for_deterministic_field():
    a = SpectralCoefficients.delta(2, 0, -2)
    draw = lambda r, s: SpectralCoefficients(2, [np.broadcast_to(b, (s,) + b.shape) for b in a.blocks])  # noqa: E731
    for mode in ("weak", "strong"):
        m = estimate_spin_measures(draw, 100, mode).measures
        assert m.total[(2, 0, -2)] == 1 and m.right[-2] == 1


def test_spin_estimate_zero_field():
    with pytest.raises(ZeroFieldError):
        spin_measure_statistics(SpectralCoefficients.zeros(2, (10,)), "weak")


# -- Haar moments and D-invariance -------------------------------------------------------


def test_wigner_moment_examples():
    assert haar_cross_moment((1, 1, 1), (1, 1, 1)) == 0.5
    assert haar_pseudo_moment((1, 1, 1), (1, -1, -1)) == 0.5


def test_wigner_moments_monte_carlo():
    report = estimate_correlations(wigner_sampler(2), N, all_pairs(2), HaarWignerModel(), seed=9)
    assert_report(report)
    assert abs(report.row((1, 1, 1), (1, 1, 1), "cross").estimate - 0.5) < 0.01


def test_wigner_moments_by_quadrature(grid4):
    g = grid4.elements
    w = grid4.weights / grid4.weights.sum()
    D = wigner_matrix(1, g)
    top, bottom = D[:, 1, 1], D[:, 0, 0]
    assert abs(w @ np.abs(top) ** 2 - 0.5) < 1e-9
    assert abs(w @ (top * bottom) - 0.5) < 1e-9


def test_d_invariantize_zero(rng):
    out = d_invariantize([np.zeros(2), np.zeros(3)], rng)
    assert all(np.all(v == 0) for v in out)


def test_d_invariantize_shares_one_element(rng):
    v = np.array([1.0, 2.0j, -1.0])
    a, b = d_invariantize([v, v], rng, 5)
    assert np.array_equal(a, b)


def test_d_invariantize_moments(rng):
    v = np.array([1.0, 0.5j, -0.3])
    w = np.array([0.2, 1.0, 1j])
    u = np.array([0.7, -1.1j])
    draw = lambda r, s: np.concatenate(d_invariantize([v, w, u], r, s), axis=1)  # noqa: E731
    cv, pv = schur_prediction(v, w)
    targets, preds = [], {}
    for i in range(3):
        for j in range(3):
            targets.append((i, 3 + j))
            preds[(i, 3 + j)] = (cv[i, j], pv[i, j])
        for j in range(2):
            targets.append((i, 6 + j))
            preds[(i, 6 + j)] = (0, 0)
    report = estimate_correlations(draw, N, targets, lambda a, b: preds[(a, b)], seed=10)
    assert_report(report)


def test_schur_prediction_uses_epsilon():
    v, w = np.array([1.0, 2.0]), np.array([3.0, 5.0])
    cross, pseudo = schur_prediction(v, w)
    assert np.allclose(cross, (3 + 10) / 2 * np.eye(2))
    assert np.allclose(pseudo, (v @ epsilon_matrix(1) @ w) * epsilon_matrix(1) / 2)


# -- sampling harness ---------------------------------------------------------------------


def test_draw_samples_independent_of_threads():
    spec = CovarianceSpec("bi_invariant", 2, power_spectrum=[1.0, 1.0, 1.0])
    draw = lambda r, s: gen_gaussian_bi_invariant(spec, r, s)  # noqa: E731
    a = draw_samples(draw, 20_000, seed=11, threads=1, chunk=3000)
    b = draw_samples(draw, 20_000, seed=11, threads=4, chunk=3000)
    assert np.array_equal(a.flat(), b.flat())


def test_report_serialization():
    report = estimate_correlations(wigner_sampler(1), 200, all_pairs(1), HaarWignerModel(), seed=0)
    csv_text = report.to_csv()
    assert csv_text.splitlines()[0] == "first,second,kind,est_re,est_im,pred_re,pred_im,stderr,pass"
    assert len(csv_text.splitlines()) == 1 + len(report.rows)
    assert '"samples": 200' in report.to_json()


def test_minimum_sample_count():
    with pytest.raises(ValueError):
        estimate_correlations(wigner_sampler(1), 99, [], HaarWignerModel())


# -- orbits -----------------------------------------------------------------------------------


@pytest.mark.parametrize("two_ell", range(0, 5))
def test_orbit_checks(two_ell, rng):
    for two_s in index_range(two_ell):
        report = orbit_checks(two_ell, two_s, rng, span_trials=20)
        assert report.passed, report


def test_stabilizer_angles_exclude_half_steps(rng):
    # halfway between the enumerated angles the phase is -1, so e_s moves
    for two_ell, two_s in ((1, 1), (3, -3), (4, 2)):
        psi = 2 * math.pi * 0.5 * 2 / two_s
        D = wigner_matrix(two_ell, g3(psi))
        j = matrix_index(two_ell, two_s)
        assert abs(D[j, j] + 1) < 1e-12
