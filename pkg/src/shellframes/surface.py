"""Mid-section surfaces in lines-of-curvature coordinates.

A patch is described by its Lamé parameters ``A1, A2`` and principal
curvatures ``k1 = 1/R1, k2 = 1/R2`` as closures of ``(alpha1, alpha2)``.
Curvatures are stored instead of radii so the flat limit is regular, and
they are positive when the +z direction points away from the centre of
curvature.
"""

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import jax.numpy as jnp
import numpy as np

from ._diff import AutoDiff, FiniteDiff, constant
from .errors import (
    DegenerateFrameError,
    DomainError,
    InvalidParameterError,
    InvalidSurfaceError,
)

_NAMES = ("A1", "A2", "k1", "k2")
_DOMAIN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SurfacePatch:
    """Immutable lines-of-curvature description of a mid-section.

    Parameters
    ----------
    lame, curvature : pair of callables ``f(alpha1, alpha2)``
        Must broadcast over array arguments.  With ``partials="analytic"``
        they must also be traceable by jax (write them with ``jax.numpy``).
    domain : ((lo1, hi1), (lo2, hi2))
    periodic : (bool, bool)
    partials : {"analytic", "fd"}
        Exact autodiff partials or central differences.
    fd_step : float
        Relative finite-difference step, multiplied by the extent of each
        coordinate.  Also used (times unit length) for the thickness
        coordinate in the form engine.
    validate : bool
        Evaluate the Gauss and Codazzi residuals on a ``probe x probe`` grid
        and reject the patch if either exceeds ``tol``.
    """

    lame: tuple
    curvature: tuple
    domain: tuple
    periodic: tuple = (False, False)
    partials: str = "analytic"
    fd_step: float = 1e-5
    name: str = "custom"
    params: dict = field(default_factory=dict)
    validate: bool = True
    tol: float = 1e-8
    probe: int = 8

    def __post_init__(self):
        domain = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(domain) != 2 or any(hi <= lo for lo, hi in domain):
            raise InvalidParameterError(f"bad domain {self.domain!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "periodic", tuple(bool(p) for p in self.periodic))
        if self.partials == "analytic":
            differ = AutoDiff()
        elif self.partials == "fd":
            ext = [hi - lo for lo, hi in domain]
            bounds = [None if p else d for p, d in zip(self.periodic, domain)]
            differ = FiniteDiff(
                [self.fd_step * ext[0], self.fd_step * ext[1], self.fd_step],
                bounds + [None],
            )
        else:
            raise InvalidParameterError(f"unknown partials mode {self.partials!r}")
        object.__setattr__(self, "differ", differ)
        fns = dict(zip(_NAMES, tuple(self.lame) + tuple(self.curvature)))
        object.__setattr__(self, "_fns", fns)
        object.__setattr__(self, "_cache", {})
        if self.validate:
            self._validate()

    def _validate(self):
        a1, a2 = probe_points(self, self.probe)
        lame = self.lame_values(a1, a2)
        if np.any(np.asarray(lame) <= 0):
            raise InvalidSurfaceError(f"{self.name}: Lamé parameters must be positive")
        cod = np.max(np.abs(codazzi_residual(self, a1, a2)))
        gau = np.max(np.abs(gauss_residual(self, a1, a2)))
        tol = self.effective_tol
        if not (cod <= tol and gau <= tol):
            raise InvalidSurfaceError(
                f"{self.name}: Gauss-Codazzi residuals too large "
                f"(codazzi={cod:.3e}, gauss={gau:.3e}, tol={tol:.1e})"
            )

    @property
    def effective_tol(self):
        """Validation tolerance; FD partials add truncation and roundoff terms."""
        if self.partials == "analytic":
            return self.tol
        # nested central differences: O(h^2) truncation plus O(eps / h^2) roundoff
        h = self.fd_step
        return max(self.tol, 1e2 * h * h + 1e-14 / (h * h))

    @property
    def extent(self):
        return tuple(hi - lo for lo, hi in self.domain)

    def function(self, name, *dirs):
        """Closure for ``name`` differentiated along coordinates ``dirs`` (1-based)."""
        key = (name, dirs)
        fn = self._cache.get(key)
        if fn is None:
            if dirs:
                fn = self.differ.partial(self.function(name, *dirs[:-1]), dirs[-1] - 1)
            else:
                fn = self._fns[name]
            self._cache[key] = fn
        return fn

    def eval(self, name, a1, a2, *dirs):
        a1, a2 = np.broadcast_arrays(np.asarray(a1, float), np.asarray(a2, float))
        return np.asarray(self.function(name, *dirs)(a1, a2), dtype=float) + np.zeros(a1.shape)

    def lame_values(self, a1, a2):
        return np.stack([self.eval("A1", a1, a2), self.eval("A2", a1, a2)])

    def curvature_values(self, a1, a2):
        return np.stack([self.eval("k1", a1, a2), self.eval("k2", a1, a2)])

    def check_point(self, a1, a2):
        for x, (lo, hi), per, label in zip((a1, a2), self.domain, self.periodic, ("alpha1", "alpha2")):
            if per:
                continue
            x = np.asarray(x)
            if np.any(x < lo - _DOMAIN_TOL) or np.any(x > hi + _DOMAIN_TOL):
                raise DomainError(f"{label} outside [{lo}, {hi}] on {self.name}")

    def closure3(self, name, *dirs):
        """``name`` (and partials) as a closure of ``(alpha1, alpha2, z)``."""
        fn = self.function(name, *dirs)
        return lambda a1, a2, z: fn(a1, a2) + 0.0 * z

    def scale_closures(self):
        """Closures h1, h2, h3 of ``(alpha1, alpha2, z)``."""
        A1, A2, k1, k2 = (self._fns[n] for n in _NAMES)
        return (
            lambda a1, a2, z: A1(a1, a2) * (1 + z * k1(a1, a2)),
            lambda a1, a2, z: A2(a1, a2) * (1 + z * k2(a1, a2)),
            constant(1.0),
        )

    def with_curvature_scale(self, s1=1.0, s2=1.0):
        """Copy with curvatures multiplied by constants, skipping validation.

        Used to build deliberately inconsistent fixtures.
        """
        k1, k2 = self.curvature
        return SurfacePatch(
            lame=self.lame,
            curvature=(lambda a, b: s1 * k1(a, b), lambda a, b: s2 * k2(a, b)),
            domain=self.domain,
            periodic=self.periodic,
            partials=self.partials,
            fd_step=self.fd_step,
            name=f"{self.name}*corrupted",
            params=dict(self.params, k1_scale=s1, k2_scale=s2),
            validate=False,
        )


class FundamentalTensors(NamedTuple):
    a: np.ndarray
    d: np.ndarray
    dmod: np.ndarray
    total_curvature: np.ndarray


def probe_points(patch, n=8):
    """``n x n`` interior probe grid (cell centres) of the patch domain."""
    axes = [lo + (np.arange(n) + 0.5) * (hi - lo) / n for lo, hi in patch.domain]
    return np.meshgrid(*axes, indexing="ij")


def fundamental_tensors(patch, a1, a2):
    """First, second and modified second fundamental tensors in frame components.

    Arrays have shape ``(2, 2, *point_shape)``.
    """
    patch.check_point(a1, a2)
    k1, k2 = patch.curvature_values(a1, a2)
    zero = np.zeros_like(k1)
    one = np.ones_like(k1)
    a = np.array([[one, zero], [zero, one]])
    d = np.array([[k1, zero], [zero, k2]])
    dmod = np.array([[k2, zero], [zero, k1]])
    return FundamentalTensors(a, d, dmod, k1 * k2)


def codazzi_residual(patch, a1, a2):
    """``A1,2 k2 - (A1 k1),2`` and ``A2,1 k1 - (A2 k2),1``."""
    patch.check_point(a1, a2)
    ev = patch.eval
    A1, A2 = ev("A1", a1, a2), ev("A2", a1, a2)
    k1, k2 = ev("k1", a1, a2), ev("k2", a1, a2)
    A1_2, A2_1 = ev("A1", a1, a2, 2), ev("A2", a1, a2, 1)
    r1 = A1_2 * k2 - (A1_2 * k1 + A1 * ev("k1", a1, a2, 2))
    r2 = A2_1 * k1 - (A2_1 * k2 + A2 * ev("k2", a1, a2, 1))
    return r1, r2


def gauss_residual(patch, a1, a2):
    """``(A1,2/A2),2 + (A2,1/A1),1 + A1 A2 k1 k2``."""
    patch.check_point(a1, a2)
    ev = patch.eval
    A1, A2 = ev("A1", a1, a2), ev("A2", a1, a2)
    A1_2, A2_1 = ev("A1", a1, a2, 2), ev("A2", a1, a2, 1)
    t1 = ev("A1", a1, a2, 2, 2) / A2 - A1_2 * ev("A2", a1, a2, 2) / A2**2
    t2 = ev("A2", a1, a2, 1, 1) / A1 - A2_1 * ev("A1", a1, a2, 1) / A1**2
    return t1 + t2 + A1 * A2 * ev("k1", a1, a2) * ev("k2", a1, a2)


def intrinsic_total_curvature(patch, a1, a2):
    """Gaussian curvature from the Lamé parameters alone."""
    ev = patch.eval
    A1, A2 = ev("A1", a1, a2), ev("A2", a1, a2)
    A1_2, A2_1 = ev("A1", a1, a2, 2), ev("A2", a1, a2, 1)
    t1 = ev("A1", a1, a2, 2, 2) / A2 - A1_2 * ev("A2", a1, a2, 2) / A2**2
    t2 = ev("A2", a1, a2, 1, 1) / A1 - A2_1 * ev("A1", a1, a2, 1) / A1**2
    return -(t1 + t2) / (A1 * A2)


def check_frame(patch, a1, a2, z):
    k = patch.curvature_values(a1, a2)
    if np.any(np.abs(np.asarray(z) * k) >= 1):
        raise DegenerateFrameError(
            f"|z*kappa| >= 1 on {patch.name}: shell thicker than a radius of curvature"
        )


def shell_scale_factors(patch, a1, a2, z):
    """Scale factors ``(A1 (1 + z k1), A2 (1 + z k2), 1)`` of the shell frame."""
    patch.check_point(a1, a2)
    check_frame(patch, a1, a2, z)
    A1, A2 = patch.lame_values(a1, a2)
    k1, k2 = patch.curvature_values(a1, a2)
    return A1 * (1 + z * k1), A2 * (1 + z * k2), np.ones_like(A1)


def _positive(**kw):
    for key, val in kw.items():
        if not val > 0:
            raise InvalidParameterError(f"{key} must be positive, got {val!r}")


def make_canonical(kind, partials="analytic", fd_step=1e-5, validate=True, **params):
    """Plate, cylinder, sphere, cone or torus with jax-traceable data.

    Coordinates
    -----------
    plate     cartesian (x, y); params ``Lx, Ly`` (default 2 pi), periodic.
    cylinder  (axial x, angle); params ``R``, ``L`` (default 2 pi), periodic.
    sphere    (polar, azimuth); params ``R``, ``margin`` (default 0.1 rad)
              cut from both poles.
    cone      (slant distance s from apex, azimuth); params ``half_angle``
              in (0, pi/2), ``s_min``, ``s_max``.
    torus     (poloidal, toroidal); params ``R0 > r > 0``.
    """
    one, zero = constant(1.0), constant(0.0)
    two_pi = 2 * np.pi
    if kind == "plate":
        Lx, Ly = float(params.get("Lx", two_pi)), float(params.get("Ly", two_pi))
        _positive(Lx=Lx, Ly=Ly)
        lame, curv = (one, one), (zero, zero)
        domain, periodic = ((0.0, Lx), (0.0, Ly)), (True, True)
        params = dict(Lx=Lx, Ly=Ly)
    elif kind == "cylinder":
        R, L = float(params.get("R", 1.0)), float(params.get("L", two_pi))
        _positive(R=R, L=L)
        lame = (one, constant(R))
        curv = (zero, constant(1.0 / R))
        domain, periodic = ((0.0, L), (0.0, two_pi)), (True, True)
        params = dict(R=R, L=L)
    elif kind == "sphere":
        R, margin = float(params.get("R", 1.0)), float(params.get("margin", 0.1))
        _positive(R=R, margin=margin)
        if margin >= np.pi / 2:
            raise InvalidParameterError("margin must be below pi/2")
        lame = (constant(R), lambda t, p: R * jnp.sin(t) + 0.0 * p)
        curv = (constant(1.0 / R), constant(1.0 / R))
        domain, periodic = ((margin, np.pi - margin), (0.0, two_pi)), (False, True)
        params = dict(R=R, margin=margin)
    elif kind == "cone":
        psi = float(params.get("half_angle", np.pi / 6))
        s0, s1 = float(params.get("s_min", 1.0)), float(params.get("s_max", 2.0))
        if not 0 < psi < np.pi / 2:
            raise InvalidParameterError("cone half_angle must lie in (0, pi/2)")
        _positive(s_min=s0)
        if s1 <= s0:
            raise InvalidParameterError("s_max must exceed s_min")
        sp, cp = np.sin(psi), np.cos(psi)
        lame = (one, lambda s, p: s * sp + 0.0 * p)
        curv = (zero, lambda s, p: cp / (s * sp) + 0.0 * p)
        domain, periodic = ((s0, s1), (0.0, two_pi)), (False, True)
        params = dict(half_angle=psi, s_min=s0, s_max=s1)
    elif kind == "torus":
        R0, r = float(params.get("R0", 2.0)), float(params.get("r", 1.0))
        _positive(R0=R0, r=r)
        if r >= R0:
            raise InvalidParameterError("torus requires R0 > r")
        lame = (constant(r), lambda t, p: R0 + r * jnp.cos(t) + 0.0 * p)
        curv = (constant(1.0 / r), lambda t, p: jnp.cos(t) / (R0 + r * jnp.cos(t)) + 0.0 * p)
        domain, periodic = ((0.0, two_pi), (0.0, two_pi)), (True, True)
        params = dict(R0=R0, r=r)
    else:
        raise InvalidParameterError(f"unknown canonical surface {kind!r}")
    return SurfacePatch(
        lame=lame,
        curvature=curv,
        domain=domain,
        periodic=periodic,
        partials=partials,
        fd_step=fd_step,
        name=kind,
        params=params,
        validate=validate,
    )


CANONICAL_KINDS = ("plate", "cylinder", "sphere", "cone", "torus")


def tabulated_patch(a1_axis, a2_axis, A1, A2, k1, k2, periodic=(False, False), fd_step=1e-5,
                    validate=True, tol=1e-4):
    """Patch from sampled Lamé/curvature grids (bicubic splines, FD partials)."""
    from scipy.interpolate import RectBivariateSpline

    def spline(values):
        sp = RectBivariateSpline(a1_axis, a2_axis, np.asarray(values, float), kx=3, ky=3)

        def fn(a, b):
            a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
            return sp.ev(a.ravel(), b.ravel()).reshape(a.shape)

        return fn

    return SurfacePatch(
        lame=(spline(A1), spline(A2)),
        curvature=(spline(k1), spline(k2)),
        domain=((a1_axis[0], a1_axis[-1]), (a2_axis[0], a2_axis[-1])),
        periodic=periodic,
        partials="fd",
        fd_step=fd_step,
        name="tabulated",
        validate=validate,
        tol=tol,
    )
