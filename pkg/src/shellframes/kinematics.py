"""Kirchhoff-Love strain state from a mid-section displacement field."""

from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np

from .errors import DomainError
from .grid import AnalyticField, field_values, geometry
from .midsurface import (
    _frame_grad,
    covariant_hessian_scalar,
    lie_derivative_curvature,
    lie_derivative_metric,
)
from .surface import check_frame


@dataclass(frozen=True)
class DisplacementField:
    """Tangential frame components ``u`` (shape ``(2, ...)``) and normal ``w``.

    Either member may be a grid array or an :class:`AnalyticField`;
    ``w`` is positive along the outward normal.
    """

    u: object
    w: object

    @classmethod
    def zero(cls, grid):
        return cls(np.zeros((2,) + grid.n), np.zeros(grid.n))

    def sample(self, grid):
        """Grid-array copy of the field."""
        return DisplacementField(field_values(self.u, grid), field_values(self.w, grid))

    def __add__(self, other):
        return DisplacementField(self.u + other.u, self.w + other.w)

    def __mul__(self, s):
        return DisplacementField(s * self.u, s * self.w)

    __rmul__ = __mul__


@dataclass(frozen=True)
class StrainState:
    eps0: np.ndarray  # membrane strain (2, 2, n1, n2)
    eps1: np.ndarray  # bending strain, 1/length


def rotation_field(disp, patch, grid):
    """``beta~ = -grad w`` in frame components."""
    return -_frame_grad(disp.w, patch, grid)


def membrane_strain(disp, patch, grid):
    geo = geometry(patch, grid)
    return lie_derivative_metric(disp.u, patch, grid) + field_values(disp.w, grid) * geo.d


def bending_strain(disp, patch, grid):
    geo = geometry(patch, grid)
    w = field_values(disp.w, grid)
    d2 = np.einsum("ac...,cb...->ab...", geo.d, geo.d)
    hess = covariant_hessian_scalar(disp.w, patch, grid)
    return -(hess - d2 * w - lie_derivative_curvature(disp.u, patch, grid))


def strain_state(disp, patch, grid):
    return StrainState(membrane_strain(disp, patch, grid), bending_strain(disp, patch, grid))


def strain_at_z(state, z):
    return state.eps0 + z * state.eps1


def _shell_velocity(disp, patch):
    """Coordinate components of the 3D displacement as a function of (a1, a2, z)."""
    if not (isinstance(disp.u, AnalyticField) and isinstance(disp.w, AnalyticField)):
        raise TypeError("the 3D oracle needs analytic displacement closures")
    A = [patch.function("A1"), patch.function("A2")]
    k = [patch.function("k1"), patch.function("k2")]
    dw = [patch.differ.partial(disp.w.fn, 0), patch.differ.partial(disp.w.fn, 1)]

    def vel(p):
        a1, a2, z = p[0], p[1], p[2]
        u = disp.u.fn(a1, a2)
        comps = []
        for i in range(2):
            Ai, ki = A[i](a1, a2), k[i](a1, a2)
            # beta~ = beta - d.u must equal -grad w
            beta = -dw[i](a1, a2) / Ai + ki * u[i]
            comps.append((u[i] + z * beta) / (Ai * (1 + z * ki)))
        comps.append(disp.w.fn(a1, a2) + 0.0 * z)
        return jnp.stack(comps)

    return vel


def lie_strain_3d_oracle(disp, patch, a1, a2, z, eps=1e-3, richardson=True, basis="mid"):
    """``1/2 L_U(g)`` in the 3D shell frame by flow differencing.

    Points are moved by ``+-eps`` along the displacement in coordinates
    ``(alpha1, alpha2, z)``; the shell metric ``diag(h1^2, h2^2, 1)`` is pulled
    back with the flow Jacobian and central-differenced.  With
    ``richardson`` the ``eps`` and ``eps/2`` results are combined so the flow
    error is ``O(eps^4)``.  Returns components of shape ``(3, 3, ...)``.

    ``basis="mid"`` reports components on ``(varpi^1, varpi^2, theta^3)``,
    the basis in which the thin-shell expansion ``eps0 + z eps1`` is written;
    ``basis="shell"`` uses the orthonormal shell frame ``theta^i``.  The two
    differ by the factors ``(1 + z k_a)``.
    """
    if basis not in ("mid", "shell"):
        raise ValueError("basis must be 'mid' or 'shell'")
    a1, a2, z = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, z)))
    patch.check_point(a1, a2)
    check_frame(patch, a1, a2, z)
    vel = _shell_velocity(disp, patch)
    pts = np.stack([a1.ravel(), a2.ravel(), z.ravel()], axis=-1)
    V = np.asarray(jax.vmap(vel)(pts))
    J = np.asarray(jax.vmap(jax.jacfwd(vel))(pts))

    def metric(y):
        A1, A2 = patch.lame_values(y[:, 0], y[:, 1])
        k1, k2 = patch.curvature_values(y[:, 0], y[:, 1])
        g = np.zeros((len(y), 3, 3))
        g[:, 0, 0] = (A1 * (1 + y[:, 2] * k1)) ** 2
        g[:, 1, 1] = (A2 * (1 + y[:, 2] * k2)) ** 2
        g[:, 2, 2] = 1.0
        return g

    def pulled(sign, e):
        y = pts + sign * e * V
        for kk, ((lo, hi), per) in enumerate(zip(patch.domain, patch.periodic)):
            if not per and (np.any(y[:, kk] < lo) or np.any(y[:, kk] > hi)):
                raise DomainError("flow left the patch domain")
        check_frame(patch, y[:, 0], y[:, 1], y[:, 2])
        Jf = np.eye(3) + sign * e * J
        return np.einsum("nki,nkl,nlj->nij", Jf, metric(y), Jf)

    def central(e):
        return (pulled(1.0, e) - pulled(-1.0, e)) / (2 * e)

    L = central(eps)
    if richardson:
        L = (4 * central(eps / 2) - L) / 3
    if basis == "shell":
        h = np.sqrt(np.diagonal(metric(pts), axis1=1, axis2=2))
    else:
        h = np.concatenate([patch.lame_values(pts[:, 0], pts[:, 1]).T, np.ones((len(pts), 1))], axis=1)
    eps3 = 0.5 * L / (h[:, :, None] * h[:, None, :])
    return np.moveaxis(eps3, 0, -1).reshape((3, 3) + a1.shape)


def isometry_generators(patch):
    """Infinitesimal rigid motions of a canonical surface as ``(name, DisplacementField)``.

    Rotations about an axis through the origin of the embedding are given in
    frame components; ``w`` is the normal component of the motion.
    """
    kind = patch.name
    p = patch.params
    zero = lambda a, b: 0.0 * a
    vec = lambda f1, f2: AnalyticField(lambda a, b: jnp.stack([f1(a, b), f2(a, b)]), (2,))
    scal = lambda f: AnalyticField(f)
    out = []
    if kind == "plate":
        out.append(("translate-1", DisplacementField(vec(lambda a, b: 1.0 + 0 * a, zero), scal(zero))))
        out.append(("translate-2", DisplacementField(vec(zero, lambda a, b: 1.0 + 0 * a), scal(zero))))
        out.append(("translate-3", DisplacementField(vec(zero, zero), scal(lambda a, b: 1.0 + 0 * a))))
        out.append(("rotate-3", DisplacementField(vec(lambda a, b: -b, lambda a, b: a), scal(zero))))
    elif kind == "cylinder":
        R = p["R"]
        out.append(("translate-axis", DisplacementField(vec(lambda a, b: 1.0 + 0 * a, zero), scal(zero))))
        out.append(("rotate-axis", DisplacementField(vec(zero, lambda a, b: R + 0 * a), scal(zero))))
        out.append(("translate-normal", DisplacementField(
            vec(zero, lambda a, f: -jnp.sin(f) + 0 * a), scal(lambda a, f: jnp.cos(f) + 0 * a))))
    elif kind == "sphere":
        R = p["R"]
        # theta = alpha1 polar, phi = alpha2 azimuthal
        out.append(("rotate-x", DisplacementField(
            vec(lambda t, f: -R * jnp.sin(f), lambda t, f: -R * jnp.cos(t) * jnp.cos(f)), scal(zero))))
        out.append(("rotate-y", DisplacementField(
            vec(lambda t, f: R * jnp.cos(f), lambda t, f: -R * jnp.cos(t) * jnp.sin(f)), scal(zero))))
        out.append(("rotate-z", DisplacementField(vec(zero, lambda t, f: R * jnp.sin(t)), scal(zero))))
        out.append(("translate-z", DisplacementField(
            vec(lambda t, f: -jnp.sin(t) + 0 * f, zero), scal(lambda t, f: jnp.cos(t) + 0 * f))))
    elif kind == "torus":
        R0, r = p["R0"], p["r"]
        out.append(("rotate-axis", DisplacementField(
            vec(zero, lambda t, f: R0 + r * jnp.cos(t)), scal(zero))))
    elif kind == "cone":
        psi = p["half_angle"]
        out.append(("rotate-axis", DisplacementField(
            vec(zero, lambda s, f: s * jnp.sin(psi)), scal(zero))))
    else:
        raise ValueError(f"no isometry catalogue for surface {kind!r}")
    return out
