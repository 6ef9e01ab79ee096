"""Harmonic analysis and random fields on SU(2).

Half-integer indices are passed as doubled integers (``two_ell = 2l``).
"""

__version__ = "0.1.0"

from .errors import (
    BandLimitExceededError,
    ExactnessGateFailedError,
    InvalidIndexError,
    InvalidSpecError,
    NearZeroError,
    NotPSDError,
    SU2FieldsError,
    ZeroFieldError,
)
from .group import (
    IDENTITY,
    INFINITY,
    SU2_VOLUME,
    EulerAngles,
    SU2Element,
    euler_from_su2,
    g2,
    g3,
    haar_sample,
    hopf_project,
    index_range,
    moebius,
    so3_from_su2,
    stereographic,
    inverse_stereographic,
    su2_conj_entries,
    su2_from_euler,
    su2_inv,
    su2_mul,
    su2_new,
)
from .harmonic import (
    QuadratureGrid,
    SpectralCoefficients,
    SpinMeasureSet,
    analyze,
    apply_laplacian,
    build_grid,
    laplacian_multiplier,
    project_spin,
    spin_measures,
    synthesize,
)
from .random_fields import (
    CorrelationReport,
    CovarianceSpec,
    SpinMeasure,
    d_invariantize,
    estimate_correlations,
    estimate_spin_measures,
    gen_gaussian_bi_invariant,
    gen_gaussian_left_invariant,
    gen_rotated,
    orbit_checks,
    realize_spin_measure,
    rotate_coefficients,
)
from .wigner import (
    epsilon_matrix,
    little_d,
    monomial_eval,
    normalized_harmonic,
    spin_weighted_harmonic,
    symmetry_check,
    wigner_entry_at_g3,
    wigner_matrix,
)
