"""Structured grids on the mid-section, finite differences and analytic fields.

Field arrays put component axes first and the two grid axes last, e.g. a
vector field has shape ``(2, n1, n2)`` and a 2-tensor ``(2, 2, n1, n2)``.
"""

from dataclasses import dataclass
from functools import lru_cache

import jax
import jax.numpy as jnp
import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class Grid:
    """Tensor-product grid.

    Periodic coordinates sample ``lo + i * L / n`` (seam excluded); open
    coordinates include both end points.
    """

    n: tuple
    domain: tuple
    periodic: tuple = (False, False)

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(k) for k in self.n))
        object.__setattr__(self, "domain", tuple((float(lo), float(hi)) for lo, hi in self.domain))
        object.__setattr__(self, "periodic", tuple(bool(p) for p in self.periodic))
        if len(self.n) != 2 or min(self.n) < 4:
            raise InvalidParameterError("grid needs at least 4 points per coordinate")
        if any(hi <= lo for lo, hi in self.domain):
            raise InvalidParameterError(f"bad grid domain {self.domain!r}")

    @classmethod
    def on(cls, patch, n1, n2=None, domain=None):
        """Grid covering ``domain`` (default: the whole patch) of ``patch``."""
        n2 = n1 if n2 is None else n2
        if domain is None:
            return cls((n1, n2), patch.domain, patch.periodic)
        # a sub-rectangle is only periodic where it spans the full period
        periodic = tuple(
            p and np.isclose(hi - lo, phi - plo)
            for p, (lo, hi), (plo, phi) in zip(patch.periodic, domain, patch.domain)
        )
        return cls((n1, n2), domain, periodic)

    @property
    def spacing(self):
        return tuple(
            (hi - lo) / (n if p else n - 1)
            for n, (lo, hi), p in zip(self.n, self.domain, self.periodic)
        )

    def axes(self):
        return tuple(
            lo + np.arange(n) * h
            for n, (lo, hi), h in zip(self.n, self.domain, self.spacing)
        )

    def mesh(self):
        return np.meshgrid(*self.axes(), indexing="ij")

    def weights(self):
        """Trapezoid quadrature weights in coordinate measure ``d alpha1 d alpha2``."""
        ws = []
        for n, h, p in zip(self.n, self.spacing, self.periodic):
            w = np.full(n, h)
            if not p:
                w[0] = w[-1] = h / 2
            ws.append(w)
        return np.outer(*ws)

    def d(self, f, k):
        """Second-order first derivative along grid axis ``k`` (0 or 1)."""
        f = np.asarray(f, dtype=float)
        ax = f.ndim - 2 + k
        h = self.spacing[k]
        if self.periodic[k]:
            return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) / (2 * h)
        out = np.empty_like(f)
        sl = lambda i: _take(f, ax, i)
        _put(out, ax, slice(1, -1), (sl(slice(2, None)) - sl(slice(None, -2))) / (2 * h))
        _put(out, ax, 0, (-3 * sl(0) + 4 * sl(1) - sl(2)) / (2 * h))
        _put(out, ax, -1, (3 * sl(-1) - 4 * sl(-2) + sl(-3)) / (2 * h))
        return out

    def d2(self, f, k):
        """Compact second-order second derivative along axis ``k``."""
        f = np.asarray(f, dtype=float)
        ax = f.ndim - 2 + k
        h2 = self.spacing[k] ** 2
        if self.periodic[k]:
            return (np.roll(f, -1, axis=ax) - 2 * f + np.roll(f, 1, axis=ax)) / h2
        out = np.empty_like(f)
        sl = lambda i: _take(f, ax, i)
        _put(out, ax, slice(1, -1), (sl(slice(2, None)) - 2 * sl(slice(1, -1)) + sl(slice(None, -2))) / h2)
        _put(out, ax, 0, (2 * sl(0) - 5 * sl(1) + 4 * sl(2) - sl(3)) / h2)
        _put(out, ax, -1, (2 * sl(-1) - 5 * sl(-2) + 4 * sl(-3) - sl(-4)) / h2)
        return out

    def gradient(self, f):
        """Coordinate partials stacked on a new axis just before the grid axes."""
        return np.stack([self.d(f, 0), self.d(f, 1)], axis=-3)

    def hessian(self, f):
        """Coordinate second partials, shape ``(..., 2, 2, n1, n2)``."""
        f11, f22 = self.d2(f, 0), self.d2(f, 1)
        f12 = self.d(self.d(f, 0), 1)
        return np.stack([np.stack([f11, f12], -3), np.stack([f12, f22], -3)], -4)


def _take(f, ax, i):
    idx = [slice(None)] * f.ndim
    idx[ax] = i
    return f[tuple(idx)]


def _put(out, ax, i, val):
    idx = [slice(None)] * out.ndim
    idx[ax] = i
    out[tuple(idx)] = val


class AnalyticField:
    """Field given by a jax-traceable closure ``fn(alpha1, alpha2)``.

    ``fn`` returns a scalar or an array of shape ``shape`` (e.g. ``(2,)``
    for frame components of a vector).  Partials are exact (autodiff).
    """

    def __init__(self, fn, shape=()):
        self.fn = fn
        self.shape = tuple(shape)
        flat = lambda p: jnp.asarray(fn(p[0], p[1]), dtype=jnp.float64)
        self._val = jax.jit(jax.vmap(flat))
        self._jac = jax.jit(jax.vmap(jax.jacfwd(flat)))
        self._hess = jax.jit(jax.vmap(jax.hessian(flat)))

    def _run(self, f, a1, a2, extra):
        a1, a2 = np.broadcast_arrays(np.asarray(a1, float), np.asarray(a2, float))
        pts = np.stack([a1.ravel(), a2.ravel()], axis=-1)
        out = np.asarray(f(pts))  # (N, *shape, *extra)
        out = out.reshape((out.shape[0],) + self.shape + extra)
        out = np.moveaxis(out, 0, -1)
        return out.reshape(self.shape + extra + a1.shape)

    def values(self, a1, a2):
        return self._run(self._val, a1, a2, ())

    def gradient(self, a1, a2):
        return self._run(self._jac, a1, a2, (2,))

    def hessian(self, a1, a2):
        return self._run(self._hess, a1, a2, (2, 2))


def field_values(f, grid):
    if isinstance(f, AnalyticField):
        return f.values(*grid.mesh())
    return np.asarray(f, dtype=float)


def field_gradient(f, grid):
    if isinstance(f, AnalyticField):
        return f.gradient(*grid.mesh())
    return grid.gradient(f)


def field_hessian(f, grid):
    if isinstance(f, AnalyticField):
        return f.hessian(*grid.mesh())
    return grid.hessian(f)


@dataclass(frozen=True, eq=False)
class GridGeometry:
    """Patch data sampled on a grid, with exact or FD patch partials."""

    A: np.ndarray        # (2, n1, n2)
    dA: np.ndarray       # (2, 2, n1, n2): dA[a, j] = d A_a / d alpha^j
    ddA: np.ndarray      # (2, 2, 2, n1, n2)
    kappa: np.ndarray    # (2, n1, n2)
    dkappa: np.ndarray   # (2, 2, n1, n2)
    gamma: np.ndarray    # (2, 2, 2, n1, n2): gamma[a, c, b] = Gamma^a_{cb}

    @property
    def d(self):
        z = np.zeros_like(self.kappa[0])
        return np.array([[self.kappa[0], z], [z, self.kappa[1]]])

    @property
    def dmod(self):
        z = np.zeros_like(self.kappa[0])
        return np.array([[self.kappa[1], z], [z, self.kappa[0]]])

    @property
    def area(self):
        return self.A[0] * self.A[1]


@lru_cache(maxsize=64)
def geometry(patch, grid):
    a1, a2 = grid.mesh()
    patch.check_point(a1, a2)
    names = ("A1", "A2")
    ev = lambda name, *dirs: patch.eval(name, a1, a2, *dirs)
    A = np.stack([ev(n) for n in names])
    dA = np.array([[ev(n, j) for j in (1, 2)] for n in names])
    ddA = np.array([[[ev(n, i, j) for j in (1, 2)] for i in (1, 2)] for n in names])
    kappa = np.stack([ev("k1"), ev("k2")])
    dkappa = np.array([[ev(n, j) for j in (1, 2)] for n in ("k1", "k2")])

    A1, A2 = A
    g112 = dA[0, 1] / (A1 * A2)          # Gamma^1_{12}
    g122 = -dA[1, 0] / (A1 * A2)         # Gamma^1_{22}
    zero = np.zeros_like(A1)
    gamma = np.array([
        [[zero, g112], [zero, g122]],
        [[-g112, zero], [-g122, zero]],
    ])

    return GridGeometry(A, dA, ddA, kappa, dkappa, gamma)
