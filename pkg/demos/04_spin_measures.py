"""
Spin spectra
============

The weak spin measure is a ratio of expected squared masses; the strong
one averages the per-sample ratio. Any probability on the right spins of
one degree is realized exactly by a random field.
"""

import su2fields as sf
from su2fields.random_fields import draw_samples, spin_measure_statistics

mu = sf.SpinMeasure(2, (0.2, 0.3, 0.5))
est = sf.estimate_spin_measures(lambda r, s: sf.realize_spin_measure(mu, r, s), 1000, "strong", seed=4)
print("strong right-spin measure:", {k: round(v, 12) for k, v in est.measures.right.items() if v})

# for a bi-invariant Gaussian field the strong measure of one degree is uniform over (m, s)
spec = sf.CovarianceSpec("bi_invariant", 2, power_spectrum=[1.0, 1.0, 3.0])
samples = draw_samples(lambda r, s: sf.gen_gaussian_bi_invariant(spec, r, s), 20_000, seed=5)
strong = spin_measure_statistics(samples, "strong", degree=2)
weak = spin_measure_statistics(samples, "weak", degree=2)
for key in strong.measures.bi:
    print(key, "strong", round(strong.measures.bi[key], 4), "weak", round(weak.measures.bi[key], 4), "target", round(1 / 9, 4))
