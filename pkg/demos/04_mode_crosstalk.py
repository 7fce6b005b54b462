"""Radial-mode crosstalk under propagation mismatch.

Two modes with different radial indices are orthogonal only when compared
at the same plane with the same waist.  Projecting a propagated mode onto
the focal-plane basis spreads it over many radial indices: the overlap
matrix drifts away from the identity, more and more basis modes are needed
to capture the field, and individual crosstalk terms oscillate (the photon
"moves" to a neighboring index and partly back).
"""

import numpy as np

from lgradial import LGParams, overlap, overlap_matrix
from lgradial.constants import DEFAULT_WAIST as W0, DEFAULT_WAVENUMBER as K

ZR = K * W0**2 / 2

print("modes needed for 99% completeness of the propagated n'=0 mode")
for dz_fac in (0.5, 1.0, 2.0, 4.0):
    M = overlap_matrix(0, range(26), 0.0, dz_fac * ZR, W0, W0, K)
    count = M.min_modes(column=0, threshold=0.99)
    p00 = abs(M.entries[0, 0]) ** 2
    print(f"  dz = {dz_fac:3.1f} zR: |<0|0>|^2 = {p00:.3f}, "
          f"modes for 0.99 completeness = {count}")

print("\ncrosstalk oscillation: |<5(0) | 4(dz)>|^2")
for dz_fac in np.linspace(0.0, 4.0, 9):
    v = abs(overlap(LGParams(5, 0, K, W0), 0.0,
                    LGParams(4, 0, K, W0), dz_fac * ZR)) ** 2
    bar = "#" * int(60 * v)
    print(f"  dz = {dz_fac:4.1f} zR  {v:.4f} {bar}")

print("\nwaist mismatch has the same effect at a single plane:")
M = overlap_matrix(0, range(8), 0.0, 0.0, W0, 1.25 * W0, K)
power = np.abs(M.entries[:, 0]) ** 2
print("  |<n(w0) | 0(1.25 w0)>|^2 =", np.array2string(power, precision=4))
