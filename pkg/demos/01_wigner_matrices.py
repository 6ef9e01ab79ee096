"""
Wigner matrices on SU(2)
========================

Group elements are unit quaternions h(alpha, beta). Degrees and indices
are passed doubled, so l = 3/2 is written two_ell = 3.
"""

import math

import numpy as np

import su2fields as sf

rng = np.random.default_rng(0)

# an element from Euler angles, and back
g = sf.su2_from_euler(sf.EulerAngles(0.4, 1.1, 2.0))
print("alpha, beta:", g.alpha, g.beta)
print("Euler angles back:", sf.euler_from_su2(g))

# the flip element g2(pi) gives an antidiagonal sign pattern
print("D^1(g2(pi)) =")
print(np.round(sf.wigner_matrix(2, sf.g2(math.pi)).real, 12))

# D^l is a unitary representation
g, h = sf.haar_sample(rng), sf.haar_sample(rng)
D = sf.wigner_matrix(5, g)
print("unitarity defect, 2l=5:", np.max(np.abs(D.conj().T @ D - np.eye(6))))
print("homomorphism defect:", np.max(np.abs(sf.wigner_matrix(5, g @ h) - D @ sf.wigner_matrix(5, h))))

# conjugating an entry flips both indices, with sign (-1)^(m-s)
print("conjugation identity defect:", sf.symmetry_check(5, g))

# the same element acts on the Riemann sphere and as a 3D rotation
R = sf.so3_from_su2(g)
p = np.array([0.0, 0.6, 0.8])
print("rotate then project:", sf.stereographic(R @ p))
print("project then Moebius:", sf.moebius(g, sf.stereographic(p)))
