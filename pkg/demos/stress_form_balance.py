"""
From stress forms to shell equations
====================================

Each row of the stress tensor defines a two-form; its covariant exterior
derivative is the force density on a volume element.  Integrated through
the thickness it must reproduce the resultant form of the equations of
motion, face tractions included.
"""

# %%
import jax.numpy as jnp
import numpy as np

import shellframes as sf
from shellframes.dynamics import integrated_stress_divergence, resultant_terms_from_stress


def sigma(a1, a2, z):
    zero = 0.0 * a1 + 0.0 * a2 + 0.0 * z
    s11 = 1 + 0.3 * jnp.sin(a1) + z * jnp.cos(a2)
    s12 = 0.2 * jnp.cos(a1 + a2) * (1 + z)
    s13 = 0.1 * jnp.sin(a2) * (1 - 4 * z * z)
    s22 = 0.5 + z * z * jnp.sin(a1)
    s23 = 0.3 * jnp.cos(a1) * z
    s33 = 0.2 * z * jnp.cos(a2)
    return jnp.array([[s11, s12, s13], [s12, s22, s23], [s13, s23, s33]]) + zero


cyl = sf.make_canonical("cylinder", R=1.0)
a1, a2 = np.meshgrid(np.linspace(0.5, 5.5, 3), np.linspace(0.3, 6.0, 3), indexing="ij")
h = 0.05
for nz in (4, 8, 16, 32):
    lhs = integrated_stress_divergence(sigma, cyl, a1, a2, h, nz=nz)
    rhs = resultant_terms_from_stress(sigma, cyl, a1, a2, h)
    print(f"{nz:2d} z-points: max difference {np.max(np.abs(lhs - rhs)):.2e}")

# %%
# A pure hoop stress at the mid-surface pushes inward with strength s / R
hoop = lambda a1, a2, z: jnp.array([[0.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]]) + 0.0 * a1
print(sf.dynamics.stress_form_divergence_oracle(hoop, cyl, np.array([1.0]), np.array([1.0]), 0.0)[:, 0])
