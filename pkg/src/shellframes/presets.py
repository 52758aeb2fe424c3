"""Named analytic fields and the builders that turn a config into library objects."""

import jax.numpy as jnp
import numpy as np

from . import fieldio
from .constitutive import Material
from .errors import FieldFileError, InvalidParameterError
from .grid import AnalyticField, Grid
from .kinematics import DisplacementField, isometry_generators
from .surface import make_canonical, tabulated_patch


def build_patch(cfg):
    if cfg.kind is not None:
        patch = make_canonical(cfg.kind, partials=cfg.partials, fd_step=cfg.fd_step, **cfg.params)
        if tuple(cfg.curvature_scale) != (1.0, 1.0):
            patch = patch.with_curvature_scale(*cfg.curvature_scale)
        return patch
    lame, curv = fieldio.read(cfg.lame_file), fieldio.read(cfg.curvature_file)
    if lame.rank != "vector2" or curv.rank != "vector2" or lame.dims != curv.dims:
        raise FieldFileError("tabulated surface needs two vector2 files on the same grid")
    if lame.domain != curv.domain:
        raise FieldFileError("tabulated surface files disagree on the domain")
    (lo1, hi1), (lo2, hi2) = lame.domain
    n1, n2 = lame.dims
    a1 = np.linspace(lo1, hi1, n1)
    a2 = np.linspace(lo2, hi2, n2)
    return tabulated_patch(a1, a2, *lame.values, *curv.values, periodic=(False, False), fd_step=cfg.fd_step)


def build_material(cfg):
    return Material(E=cfg.E, nu=cfg.nu, rho=cfg.rho, h=cfg.h)


def build_grid(cfg, patch):
    n1, n2 = cfg.n
    return Grid.on(patch, n1, n2, domain=cfg.domain)


def _vec(f1, f2):
    return AnalyticField(lambda a, b: jnp.stack([f1(a, b) + 0.0 * b, f2(a, b) + 0.0 * a]), (2,))


def _scal(f):
    return AnalyticField(lambda a, b: f(a, b) + 0.0 * a + 0.0 * b)


def random_smooth(seed=0, amp=1e-3, modes=2, normal=True):
    """Seeded sum of low trigonometric modes in both coordinates (periodic-compatible)."""
    rng = np.random.default_rng(int(seed))
    ks = np.arange(1, int(modes) + 1)
    coef = rng.normal(size=(3, len(ks), len(ks), 2)) * amp

    def comp(c):
        def f(a, b):
            out = 0.0 * a
            for i, ki in enumerate(ks):
                for j, kj in enumerate(ks):
                    out = out + c[i, j, 0] * jnp.cos(ki * a + kj * b) + c[i, j, 1] * jnp.sin(ki * a - kj * b)
            return out
        return f

    w = _scal(comp(coef[2])) if normal else _scal(lambda a, b: 0.0 * a)
    return DisplacementField(_vec(comp(coef[0]), comp(coef[1])), w), float(2 * ks[-1])


def displacement_preset(name, params, patch):
    """Return ``(DisplacementField, max_wavenumber)`` for a named preset.

    ``max_wavenumber`` is in radians per coordinate unit, used for Nyquist
    checks (0 for fields without spatial variation).
    """
    p = dict(params)
    zero = lambda a, b: 0.0 * a
    if name == "zero":
        return DisplacementField(_vec(zero, zero), _scal(zero)), 0.0
    if name in ("inflation", "breathing"):
        c = p.get("c", 1e-3)
        return DisplacementField(_vec(zero, zero), _scal(lambda a, b: c + 0.0 * a)), 0.0
    if name == "plate-bend":
        k, amp = p.get("k", 1.0), p.get("amp", 1.0)
        return DisplacementField(_vec(zero, zero), _scal(lambda a, b: amp * jnp.sin(k * a))), abs(k)
    if name == "random-smooth":
        return random_smooth(p.get("seed", 0), p.get("amp", 1e-3), p.get("modes", 2))
    if name == "rigid":
        gens = isometry_generators(patch)
        idx = int(p.get("index", 0))
        if not 0 <= idx < len(gens):
            raise InvalidParameterError(f"rigid index {idx} outside 0..{len(gens) - 1}")
        return gens[idx][1], 1.0
    raise InvalidParameterError(f"unknown displacement preset {name!r}")


def displacement_from_config(cfg, patch, grid):
    if cfg.u_file or cfg.w_file:
        if not (cfg.u_file and cfg.w_file):
            raise InvalidParameterError("u_file and w_file must be given together")
        u, w = fieldio.read(cfg.u_file), fieldio.read(cfg.w_file)
        if u.rank != "vector2" or w.rank != "scalar":
            raise FieldFileError("u_file must be vector2 and w_file scalar")
        if tuple(u.dims) != grid.n or tuple(w.dims) != grid.n:
            raise FieldFileError(f"field files do not match grid {grid.n}")
        return DisplacementField(u.values, w.values), None
    return displacement_preset(cfg.preset, cfg.params, patch)


def load_preset(cfg, mat, grid):
    """``(q, m)`` arrays for a named load preset."""
    q = np.zeros((3,) + grid.n)
    m = np.zeros((2,) + grid.n)
    p = dict(cfg.params)
    if cfg.preset == "zero":
        pass
    elif cfg.preset == "plate-static":
        # manufactured load balancing w = amp sin(k a1) on a plate
        k, amp = p.get("k", 1.0), p.get("amp", 1.0)
        a1, _ = grid.mesh()
        q[2] = amp * mat.B * k ** 4 * np.sin(k * a1)
    elif cfg.preset == "uniform-pressure":
        q[2] = p.get("p", 0.0)
    else:
        raise InvalidParameterError(f"unknown load preset {cfg.preset!r}")
    return q, m
