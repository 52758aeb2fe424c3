"""
Dispersion of the discrete shell operator
=========================================

Plane waves on a flat plate, the breathing modes of a cylinder and a
sphere, and the axisymmetric waves of a cylinder, computed from the same
discrete operator that drives the time stepper.
"""

# %%
import numpy as np

import shellframes as sf

mat = sf.Material(E=1.0, nu=0.3, rho=1.0, h=0.01)

# %%
# Plate bending: second-order stencils, error drops by four per refinement
exact = sf.dispersion_analytic("plate_bending", mat, k=1.0)
for n in (32, 64, 128):
    om = sf.numeric_dispersion("plate_bending", mat, 1.0, n=n).omega
    print(f"n={n:4d} omega={om:.8f} rel err {abs(om / exact - 1):.2e}")

# %%
# Higher wavenumbers on 64 points are much worse
for k in (2, 4, 8):
    om = sf.numeric_dispersion("plate_bending", mat, float(k), n=64).omega
    print(f"k={k}: rel err {abs(om / sf.dispersion_analytic('plate_bending', mat, k=k) - 1):.3f}")

# %%
# Breathing modes involve no derivatives at all
cyl = sf.numeric_dispersion("cylinder_breathing", mat, R=1.0).omega
print("cylinder breathing", cyl, sf.dispersion_analytic("cylinder_breathing", mat, R=1.0))

# The sphere keeps the bending-membrane coupling of the resultants, which the
# pure membrane formula drops.  The two differ by h^2 / (24 R^2).
sph = sf.numeric_dispersion("sphere_breathing", mat, R=1.0, n=16).omega
membrane = sf.dispersion_analytic("sphere_breathing", mat, R=1.0)
coupled = sf.dispersion_analytic("sphere_breathing", mat, R=1.0, coupled=True)
print(f"sphere breathing: vs membrane {sph / membrane - 1:.3e}, vs coupled {sph / coupled - 1:.1e}, "
      f"h^2/24R^2 = {mat.h ** 2 / 24:.3e}")

# %%
# Axisymmetric cylinder waves: two branches
for k in (1.0, 2.0, 4.0):
    num = [m.omega for m in sf.numeric_dispersion("cylinder_axisymmetric", mat, k, n=64)]
    print(f"k={k}: numeric {np.round(num, 6)}, analytic "
          f"{np.round(sf.dispersion_analytic('cylinder_axisymmetric', mat, k=k), 6)}")
