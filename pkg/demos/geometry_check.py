"""
Checking that a surface patch is a real surface
===============================================

A lines-of-curvature patch is four functions: the Lamé parameters A1, A2 and
the principal curvatures k1, k2.  Not every choice embeds in space.  The
Gauss and Codazzi equations, or equivalently the torsion and curvature
two-forms of the shell frame, tell us whether it does.
"""

# %%
# The five canonical surfaces
# ---------------------------
import numpy as np

import shellframes as sf
from shellframes.checks import geometry_report
from shellframes.surface import probe_points

h = 0.01
for kind in sf.CANONICAL_KINDS:
    rep = geometry_report(sf.make_canonical(kind), h)
    worst = max(rep[k] for k in ("max_codazzi", "max_gauss", "max_torsion", "max_curvature_2form"))
    print(f"{kind:9s} worst residual {worst:.2e}  pass={rep['pass']}")

# %%
# Scale the second curvature of a sphere by 10%
# ---------------------------------------------
# The Lamé data still describe a sphere, the curvature no longer does.
bad = sf.make_canonical("sphere").with_curvature_scale(1.0, 1.1)
rep = geometry_report(bad, h)
print(f"corrupted sphere: codazzi {rep['max_codazzi']:.3f}, curvature 2-form "
      f"{rep['max_curvature_2form']:.3f}, pass={rep['pass']}")

# %%
# Finite-difference partials
# --------------------------
# Without closed-form derivatives the residuals shrink with the square of the
# difference step.
for step in (1e-2, 5e-3, 2.5e-3):
    p = sf.make_canonical("torus", partials="fd", fd_step=step, validate=False)
    a1, a2 = probe_points(p)
    print(f"fd_step {step:.1e}: gauss residual {np.max(np.abs(sf.gauss_residual(p, a1, a2))):.3e}")
