"""
How good is eps0 + z eps1?
==========================

The thin-shell strain is linear in the thickness coordinate.  The exact
three-dimensional strain of the Kirchhoff-Love displacement is not, and the
gap should close like z^2.  The 3D oracle computes the full strain by
flowing the shell metric.
"""

# %%
import numpy as np

import shellframes as sf
from shellframes.grid import Grid
from shellframes.presets import random_smooth

R = 1.0
h = R / 100
sphere = sf.make_canonical("sphere", R=R)
grid = Grid((4, 4), ((0.9, 2.2), (0.5, 5.5)))
a1, a2 = grid.mesh()
disp = random_smooth(11, amp=1e-2)[0]
state = sf.strain_state(disp, sphere, grid)

zs = np.array([h / 2, h / 4, h / 8])
errs = []
for z in zs:
    full = sf.lie_strain_3d_oracle(disp, sphere, a1, a2, z, eps=1e-4)
    errs.append(np.max(np.abs(full[:2, :2] - sf.strain_at_z(state, z))))
    print(f"z = {z:.5f}: tangential gap {errs[-1]:.3e}, eps33 {np.max(np.abs(full[2, 2])):.1e}")

slope = np.polyfit(np.log(zs), np.log(errs), 1)[0]
print(f"log-log slope {slope:.4f}")

# %%
# Rigid motions strain nothing
for name, g in sf.isometry_generators(sphere):
    st = sf.strain_state(g, sphere, grid)
    print(f"{name:12s} max |eps0| {np.max(np.abs(st.eps0)):.1e}  max |eps1| {np.max(np.abs(st.eps1)):.1e}")
