"""Covariant and Lie derivatives on the mid-section in physical frame components.

All tensors are in the orthonormal lines-of-curvature frame, so raising and
lowering indices is the identity.  The connection coefficients are
``Gamma^a_{cb}``, the ``varpi^c`` component of ``varpi^a_b``; the first lower
index is the direction of differentiation.

Inputs may be grid arrays (differentiated by finite differences) or
:class:`~shellframes.grid.AnalyticField` closures (differentiated exactly).
"""

from typing import NamedTuple

import jax
import jax.numpy as jnp
import numpy as np

from .errors import DomainError
from .grid import field_gradient, field_hessian, field_values, geometry


class ConnectionCoefficients(NamedTuple):
    gamma: np.ndarray  # gamma[a, c, b] = Gamma^a_{cb}

    def check(self, atol=0.0):
        g = self.gamma
        assert np.all(np.abs(g + np.swapaxes(g, 0, 2)) <= atol)
        for i in range(2):
            for j in range(2):
                assert np.all(np.abs(g[i, j, i]) <= atol)


def connection_coefficients(patch, grid):
    return ConnectionCoefficients(geometry(patch, grid).gamma)


def _frame_grad(f, patch, grid):
    """``(1/A_j) d f / d alpha^j`` on a new axis before the grid axes."""
    A = geometry(patch, grid).A
    return field_gradient(f, grid) / A


def frame_partial(f, direction, patch, grid):
    """Frame derivative of a scalar field along ``direction`` (1 or 2)."""
    return _frame_grad(f, patch, grid)[direction - 1]


def covariant_grad_vector(u, patch, grid):
    """``G[a, b] = u^a_{;b} = e_b(u^a) + Gamma^a_{bc} u^c``."""
    geo = geometry(patch, grid)
    U = field_values(u, grid)
    return _frame_grad(u, patch, grid) + np.einsum("abc...,c...->ab...", geo.gamma, U)


def covariant_div_vector(Q, patch, grid):
    """``Q^a_{;a}``."""
    geo = geometry(patch, grid)
    Qv = field_values(Q, grid)
    dQ = _frame_grad(Q, patch, grid)
    return np.einsum("aa...->...", dQ) + np.einsum("aac...,c...->...", geo.gamma, Qv)


def covariant_div_tensor(T, patch, grid):
    """Divergence on the first index: ``T^{ba}_{;b}``.

    ``T`` need not be symmetric.  Both connection terms are kept:
    ``e_b T^{ba} + Gamma^b_{bd} T^{da} + Gamma^a_{bd} T^{bd}``.
    """
    geo = geometry(patch, grid)
    Tv = field_values(T, grid)
    dT = _frame_grad(T, patch, grid)  # dT[b, a, c] = e_c T^{ba}
    out = np.einsum("bab...->a...", dT)
    out = out + np.einsum("bbd...,da...->a...", geo.gamma, Tv)
    out = out + np.einsum("abd...,bd...->a...", geo.gamma, Tv)
    return out


def covariant_hessian_scalar(w, patch, grid, symmetrize=True):
    """``w_{;ab} = e_a(e_b w) - Gamma^c_{ab} e_c(w)``."""
    geo = geometry(patch, grid)
    A, dA = geo.A, geo.dA
    dw = field_gradient(w, grid)
    ddw = field_hessian(w, grid)
    ew = dw / A
    H = np.empty((2, 2) + A.shape[1:])
    for a in range(2):
        for b in range(2):
            H[a, b] = ddw[a, b] / (A[a] * A[b]) - dA[b, a] * dw[b] / (A[a] * A[b] ** 2)
    H -= np.einsum("cab...,c...->ab...", geo.gamma, ew)
    if symmetrize:
        H = 0.5 * (H + np.swapaxes(H, 0, 1))
    return H


def lie_derivative_metric(u, patch, grid):
    """Half the Lie derivative of the first fundamental tensor, ``sym(u_{a;b})``."""
    G = covariant_grad_vector(u, patch, grid)
    return 0.5 * (G + np.swapaxes(G, 0, 1))


def curvature_gradient(patch, grid):
    """``D[a, b, c] = d_{ab;c}`` for the diagonal second fundamental tensor."""
    geo = geometry(patch, grid)
    d = geo.d
    ek = geo.dkappa / geo.A  # ek[a, c] = e_c(kappa_a)
    D = np.zeros((2, 2, 2) + geo.A.shape[1:])
    for a in range(2):
        D[a, a] = ek[a]
    D -= np.einsum("eca...,eb...->abc...", geo.gamma, d)
    D -= np.einsum("ecb...,ae...->abc...", geo.gamma, d)
    return D


def lie_derivative_curvature(u, patch, grid):
    """``(L_u d)_{ab} = u^c d_{ab;c} + d_{cb} u^c_{;a} + d_{ac} u^c_{;b}``."""
    geo = geometry(patch, grid)
    U = field_values(u, grid)
    G = covariant_grad_vector(u, patch, grid)
    d = geo.d
    L = np.einsum("c...,abc...->ab...", U, curvature_gradient(patch, grid))
    L = L + np.einsum("cb...,ca...->ab...", d, G)
    L = L + np.einsum("ac...,cb...->ab...", d, G)
    return L


def metric_generator(patch):
    """Frame components of the first fundamental tensor as a function of position."""
    def t(a1, a2):
        one = np.ones(np.broadcast(a1, a2).shape)
        return np.array([[one, 0 * one], [0 * one, one]])
    return t


def curvature_generator(patch):
    """Frame components ``diag(k1, k2)`` of the second fundamental tensor."""
    def t(a1, a2):
        k1, k2 = patch.curvature_values(a1, a2)
        return np.array([[k1, 0 * k1], [0 * k1, k2]])
    return t


def flow_lie_oracle(u, tensor, patch, a1, a2, eps):
    """Lie derivative of a covariant 2-tensor by flowing the coordinates.

    The coordinates are moved by ``+-eps`` along ``u`` (converted to
    coordinate components ``u^a / A_a``), the tensor is pulled back with the
    Jacobian of that map and the two pull-backs are central-differenced.
    The result is ``L_u t`` in frame components (not halved) and carries an
    ``O(eps^2)`` error.

    ``u`` must be an :class:`AnalyticField` with shape ``(2,)``;
    ``tensor(a1, a2)`` returns frame components of shape ``(2, 2, ...)``.
    """
    A1f, A2f = patch.function("A1"), patch.function("A2")

    def vel(p):
        uu = u.fn(p[0], p[1])
        return jnp.stack([uu[0] / A1f(p[0], p[1]), uu[1] / A2f(p[0], p[1])])

    a1, a2 = np.broadcast_arrays(np.asarray(a1, float), np.asarray(a2, float))
    pts = np.stack([a1.ravel(), a2.ravel()], axis=-1)
    V = np.asarray(jax.vmap(vel)(pts))
    J = np.asarray(jax.vmap(jax.jacfwd(vel))(pts))  # J[n, k, i] = d V^k / d x^i
    eye = np.eye(2)

    def pulled(sign):
        y = pts + sign * eps * V
        for k, ((lo, hi), per) in enumerate(zip(patch.domain, patch.periodic)):
            if not per and (np.any(y[:, k] < lo) or np.any(y[:, k] > hi)):
                raise DomainError("flow left the patch domain; reduce eps or move points inward")
        A_y = patch.lame_values(y[:, 0], y[:, 1])
        T = np.moveaxis(tensor(y[:, 0], y[:, 1]), -1, 0) * (A_y.T[:, :, None] * A_y.T[:, None, :])
        Jf = eye + sign * eps * J
        return np.einsum("nki,nkl,nlj->nij", Jf, T, Jf)

    L = (pulled(1.0) - pulled(-1.0)) / (2 * eps)
    A_x = patch.lame_values(pts[:, 0], pts[:, 1])
    L = L / (A_x.T[:, :, None] * A_x.T[:, None, :])
    return np.moveaxis(L, 0, -1).reshape((2, 2) + a1.shape)
