"""
Orientation, sign of H and the |A|^2 bracket
============================================

Three facts that are easy to get wrong, each checked numerically here.
"""

import numpy as np

from spiral_minimal.functional import mean_curvature_of_jet
from spiral_minimal.geometry import displayed_A_norm_sq, geometry_at, immersion_jet
from spiral_minimal.verification import fd_jet_mp, second_form_from_jet

s, theta, delta = np.array([0.7]), np.array([1.3]), 0.1

# 1. the frame (e_r, e_r', e_z) is left-handed, so the trace of the second
# form against the chosen normal and the jet functional differ by a sign
rec = geometry_at(s, theta, delta)
_, jet = immersion_jet(s, theta, delta)
print("H from the geometry record:", rec.H, "  H of the jet:", mean_curvature_of_jet(jet))

# 2. |A|^2 from a full contraction of an extended-precision FD jet
fd = fd_jet_mp(0.7, 1.3, delta, 1e-6)
*_, norm_sq = second_form_from_jet(fd)
print("|A|^2 (FD oracle):", norm_sq, " closed form:", rec.A_norm_sq)

# the bracket with 2 delta^2 overshoots by exactly delta^2 tanh^2 in the bracket
print("bracket with coefficient 2:", displayed_A_norm_sq(s, theta, delta))

# 3. at the origin, |A|^2 = 2 e^{-2 delta theta}, the source of the constant 2
print("|A|^2 at s = 0:", geometry_at(0.0, 1.3, delta).A_norm_sq, " 2 e^{-2 delta theta}:", 2 * np.exp(-2 * delta * 1.3))
