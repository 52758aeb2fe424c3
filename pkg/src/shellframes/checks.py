"""Aggregated geometry validity report."""

import numpy as np

from .forms import curvature_residual, torsion_residual
from .surface import codazzi_residual, gauss_residual, probe_points


def geometry_report(patch, h, probe=8, tol=1e-8):
    """Maxima of the Codazzi, Gauss, torsion and curvature two-form residuals.

    Evaluated on an interior ``probe x probe`` grid at ``z in {-h/2, 0, h/2}``.
    """
    a1, a2 = probe_points(patch, probe)
    cod = max(float(np.max(np.abs(r))) for r in codazzi_residual(patch, a1, a2))
    gau = float(np.max(np.abs(gauss_residual(patch, a1, a2))))
    tor = curv = 0.0
    for z in (-h / 2, 0.0, h / 2):
        tor = max(tor, float(np.max(np.abs(torsion_residual(patch, a1, a2, z)))))
        curv = max(curv, float(np.max(np.abs(curvature_residual(patch, a1, a2, z)))))
    return {
        "surface": patch.name,
        "max_codazzi": cod,
        "max_gauss": gau,
        "max_torsion": tor,
        "max_curvature_2form": curv,
        "tol": tol,
        "pass": bool(max(cod, gau, tor, curv) <= tol),
    }
