"""Plane-stress law and thickness-integrated stress resultants."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .grid import geometry
from .midsurface import covariant_div_tensor


@dataclass(frozen=True)
class Material:
    E: float
    nu: float
    rho: float
    h: float

    def __post_init__(self):
        for name in ("E", "rho", "h"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not -1 < self.nu < 0.5:
            raise InvalidParameterError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu!r}")

    @property
    def C(self):
        """Stretching rigidity."""
        return self.E * self.h / (1 - self.nu ** 2)

    @property
    def B(self):
        """Bending rigidity."""
        return self.E * self.h ** 3 / (12 * (1 - self.nu ** 2))

    @property
    def rho_h(self):
        return self.rho * self.h


@dataclass(frozen=True)
class ResultantState:
    N: np.ndarray  # (2, 2, ...), first index is the edge normal
    M: np.ndarray
    Q: np.ndarray = None


def _eye_like(t):
    eye = np.zeros_like(t)
    eye[0, 0] = eye[1, 1] = 1.0
    return eye


def h_tensor_apply(eps, nu):
    """``H:eps = (1 - nu) eps + nu tr(eps) a``."""
    eps = np.asarray(eps, dtype=float)
    return (1 - nu) * eps + nu * (eps[0, 0] + eps[1, 1]) * _eye_like(eps)


def plane_stress(eps, mat):
    eps = np.asarray(eps, dtype=float)
    tr = eps[0, 0] + eps[1, 1]
    return mat.E * mat.nu / (1 - mat.nu ** 2) * tr * _eye_like(eps) + mat.E / (1 + mat.nu) * eps


def _dmod_dot(kappa, t):
    """``dmod . t`` for ``dmod = diag(k2, k1)`` acting on the first index."""
    out = np.empty_like(t)
    out[0] = kappa[1] * t[0]
    out[1] = kappa[0] * t[1]
    return out


def resultants_from_curvature(state, mat, kappa):
    """Closed-form resultants for given principal curvatures ``kappa = (k1, k2)``."""
    H0 = h_tensor_apply(state.eps0, mat.nu)
    H1 = h_tensor_apply(state.eps1, mat.nu)
    N = mat.C * H0 + mat.B * _dmod_dot(kappa, H1)
    M = mat.B * (H1 + _dmod_dot(kappa, H0))
    return N, M


def resultants(state, mat, patch, grid):
    """``N = C H eps0 + B dmod H eps1`` and ``M = B (H eps1 + dmod H eps0)``."""
    return resultants_from_curvature(state, mat, geometry(patch, grid).kappa)


def shear_resultant(M, patch, grid, m=None):
    """Transverse shear from moment balance, ``Q = div M + m``."""
    Q = covariant_div_tensor(M, patch, grid)
    return Q if m is None else Q + m


def resultant_constraint_residual(res, kappa):
    """``(N12 - N21) - (M21 k2 - M12 k1)`` pointwise, for curvatures ``kappa = (k1, k2)``."""
    k1, k2 = kappa
    N, M = res.N, res.M
    return (N[0, 1] - N[1, 0]) - (M[1, 0] * k2 - M[0, 1] * k1)


def thickness_quadrature_oracle(state, mat, kappa, n_gauss=2):
    """Resultants by Gauss-Legendre integration of ``sigma(z)`` through the thickness.

    ``N^{ab} = int sigma^{ab} (1 + z k_{other(a)}) dz`` and ``M^{ab}`` with an
    extra factor ``z``, where ``sigma(z) = sigma(eps0) + z sigma(eps1)``.
    Transverse shear has no constitutive law and is not integrated here.
    """
    if n_gauss < 2:
        raise InvalidParameterError("n_gauss must be at least 2")
    x, wts = np.polynomial.legendre.leggauss(n_gauss)
    z = 0.5 * mat.h * x
    wts = 0.5 * mat.h * wts
    s0, s1 = plane_stress(state.eps0, mat), plane_stress(state.eps1, mat)
    k1, k2 = kappa
    N = np.zeros_like(s0)
    M = np.zeros_like(s0)
    for zi, wi in zip(z, wts):
        sig = s0 + zi * s1
        weight = np.array([1 + zi * k2, 1 + zi * k1])  # row a uses the other curvature
        for a in range(2):
            N[a] += wi * weight[a] * sig[a]
            M[a] += wi * zi * weight[a] * sig[a]
    return N, M
