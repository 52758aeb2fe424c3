"""Differential forms on the shell in orthonormal-frame components.

A :class:`FrameForm` of degree p stores one coefficient closure of
``(alpha1, alpha2, z)`` per strictly increasing multi-index ``I`` of
``{1, 2, 3}``, standing for ``f_I theta^I``.  Frame components are kept
throughout; coordinate components only appear inside
:func:`exterior_derivative`.
"""

from functools import reduce
from itertools import combinations
from operator import mul

import jax
import jax.numpy as jnp
import numpy as np

from ._diff import constant
from .errors import DegreeError
from .surface import check_frame

BASIS = {p: list(combinations((1, 2, 3), p)) for p in range(4)}


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _scaled(fn, s):
    return lambda *x: s * fn(*x)


def _sum(fns):
    fns = list(fns)
    if len(fns) == 1:
        return fns[0]
    return lambda *x: sum(f(*x) for f in fns)


def _prod(f, g):
    return lambda *x: f(*x) * g(*x)


class FrameForm:
    """Degree-graded form with closure coefficients; missing components are zero."""

    def __init__(self, degree, components=None):
        if degree not in BASIS:
            raise DegreeError(f"degree {degree} outside 0..3")
        self.degree = degree
        self.components = {}
        for key, coeff in (components or {}).items():
            key = tuple(key)
            if key not in BASIS[degree]:
                raise DegreeError(f"multi-index {key} invalid for degree {degree}")
            if coeff is None:
                continue
            self.components[key] = coeff if callable(coeff) else constant(coeff)

    @classmethod
    def zero(cls, degree):
        return cls(degree)

    def __repr__(self):
        return f"FrameForm(degree={self.degree}, components={sorted(self.components)})"

    def _combine(self, other, sign):
        if self.degree != other.degree:
            raise DegreeError("cannot add forms of different degree")
        comps = dict(self.components)
        for key, g in other.components.items():
            g = g if sign > 0 else _scaled(g, -1.0)
            comps[key] = _sum([comps[key], g]) if key in comps else g
        return FrameForm(self.degree, comps)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return FrameForm(self.degree, {k: _scaled(f, -1.0) for k, f in self.components.items()})

    def __mul__(self, scalar):
        """Multiply by a number or by a scalar-field closure."""
        if callable(scalar):
            return FrameForm(self.degree, {k: _prod(scalar, f) for k, f in self.components.items()})
        return FrameForm(self.degree, {k: _scaled(f, float(scalar)) for k, f in self.components.items()})

    __rmul__ = __mul__

    def evaluate(self, a1, a2, z):
        """Component values, stacked in ``BASIS[degree]`` order."""
        a1, a2, z = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, z)))
        out = np.zeros((len(BASIS[self.degree]),) + a1.shape)
        for i, key in enumerate(BASIS[self.degree]):
            fn = self.components.get(key)
            if fn is not None:
                out[i] = np.asarray(fn(a1, a2, z), dtype=float)
        return out


    def evaluate_traced(self, a1, a2, z):
        """Like :meth:`evaluate` but built from jax operations (usable under ``jax.jit``)."""
        shape = jnp.broadcast_shapes(jnp.shape(a1), jnp.shape(a2), jnp.shape(z))
        zero = jnp.zeros(shape)
        comps = []
        for key in BASIS[self.degree]:
            fn = self.components.get(key)
            comps.append(zero if fn is None else jnp.broadcast_to(jnp.asarray(fn(a1, a2, z), dtype=float), shape))
        return jnp.stack(comps)


def basis_form(*index):
    """``theta^i1 ^ theta^i2 ...`` for a strictly increasing index."""
    return FrameForm(len(index), {tuple(index): 1.0})


def scalar_form(fn):
    return FrameForm(0, {(): fn})


def volume_form():
    return basis_form(1, 2, 3)


def wedge(f, g):
    p, q = f.degree, g.degree
    if p + q > 3:
        raise DegreeError(f"wedge of degrees {p} and {q} exceeds 3")
    terms = {}
    for I, fi in f.components.items():
        for J, gj in g.components.items():
            if set(I) & set(J):
                continue
            K = tuple(sorted(I + J))
            s = _perm_sign(I + J)
            terms.setdefault(K, []).append(_scaled(_prod(fi, gj), float(s)))
    return FrameForm(p + q, {K: _sum(fns) for K, fns in terms.items()})


def hodge_dual(f):
    """Area two-form dual to a one-form: ``theta^a ^ *theta^b = delta_ab dV``."""
    if f.degree != 1:
        raise DegreeError("hodge_dual is defined for one-forms only")
    comps = {}
    for (i,), fn in f.components.items():
        J = tuple(k for k in (1, 2, 3) if k != i)
        comps[J] = _scaled(fn, float(_perm_sign((i,) + J)))
    return FrameForm(2, comps)


def _scale_product(h, index):
    fns = [h[i - 1] for i in index]
    if not fns:
        return constant(1.0)
    return lambda *x: reduce(mul, [fn(*x) for fn in fns])


def exterior_derivative(f, patch):
    """``d f`` via coordinate components ``f_I h_I`` and the patch differentiator."""
    if f.degree >= 3:
        raise DegreeError("exterior derivative of a 3-form leaves the 3D exterior algebra")
    h = patch.scale_closures()
    terms = {}
    for I, fi in f.components.items():
        coord = _prod(fi, _scale_product(h, I)) if I else fi
        for k in (1, 2, 3):
            if k in I:
                continue
            K = tuple(sorted((k,) + I))
            s = float(_perm_sign((k,) + I))
            dk = patch.differ.partial(coord, k - 1)
            terms.setdefault(K, []).append(_scaled(dk, s))
    comps = {}
    for K, fns in terms.items():
        num = _sum(fns)
        den = _scale_product(h, K)
        comps[K] = (lambda num, den: lambda *x: num(*x) / den(*x))(num, den)
    return FrameForm(f.degree + 1, comps)


class ConnectionMatrix:
    """Antisymmetric 3x3 matrix of connection one-forms.

    Only the strict upper triangle is stored; ``m[i, j]`` (1-based) returns
    the negated transpose entry below the diagonal and zero on it.
    """

    def __init__(self, upper):
        self.upper = {tuple(k): v for k, v in upper.items()}

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return FrameForm.zero(1)
        if i < j:
            return self.upper.get((i, j), FrameForm.zero(1))
        return -self.upper.get((j, i), FrameForm.zero(1))

    def evaluate(self, a1, a2, z):
        """Array ``[i, j, k]``: coefficient of ``theta^k`` in ``omega^i_j``."""
        shape = np.broadcast(np.asarray(a1), np.asarray(a2), np.asarray(z)).shape
        out = np.zeros((3, 3, 3) + shape)
        for (i, j), form in self.upper.items():
            vals = form.evaluate(a1, a2, z)
            out[i - 1, j - 1] = vals
            out[j - 1, i - 1] = -vals
        return out


def shell_connection(patch):
    """Closed-form Levi-Civita connection of the shell frame."""
    A1, A2 = patch.closure3("A1"), patch.closure3("A2")
    k1, k2 = patch.closure3("k1"), patch.closure3("k2")
    A1_2, A2_1 = patch.closure3("A1", 2), patch.closure3("A2", 1)

    def w12_1(a1, a2, z):
        return A1_2(a1, a2, z) / (A1(a1, a2, z) * A2(a1, a2, z) * (1 + z * k1(a1, a2, z)))

    def w12_2(a1, a2, z):
        return -A2_1(a1, a2, z) / (A1(a1, a2, z) * A2(a1, a2, z) * (1 + z * k2(a1, a2, z)))

    def w13(a1, a2, z):
        return k1(a1, a2, z) / (1 + z * k1(a1, a2, z))

    def w23(a1, a2, z):
        return k2(a1, a2, z) / (1 + z * k2(a1, a2, z))

    return ConnectionMatrix({
        (1, 2): FrameForm(1, {(1,): w12_1, (2,): w12_2}),
        (1, 3): FrameForm(1, {(1,): w13}),
        (2, 3): FrameForm(1, {(2,): w23}),
    })


def midsurface_connection(patch, a1, a2):
    """Coefficients of the mid-section one-form on ``(varpi^1, varpi^2)``."""
    patch.check_point(a1, a2)
    A1, A2 = patch.lame_values(a1, a2)
    return np.stack([patch.eval("A1", a1, a2, 2), -patch.eval("A2", a1, a2, 1)]) / (A1 * A2)


def _residual_kernel(patch, name, build):
    """Evaluator for a residual; compiled once per patch when partials are exact.

    Finite-difference partials branch on concrete coordinates, so they are
    evaluated eagerly instead.
    """
    if patch.partials != "analytic":
        return build(False)
    key = ("residual", name)
    fn = patch._cache.get(key)
    if fn is None:
        fn = patch._cache[key] = jax.jit(build(True))
    return fn


def _torsion_builder(patch):
    def build(traced):
        def run(a1, a2, z):
            omega = shell_connection(patch)
            out = []
            for i in (1, 2, 3):
                form = exterior_derivative(basis_form(i), patch)
                for j in (1, 2, 3):
                    form = form + wedge(omega[i, j], basis_form(j))
                out.append(form.evaluate_traced(a1, a2, z) if traced else form.evaluate(a1, a2, z))
            return (jnp if traced else np).stack(out)
        return run
    return build


def _curvature_builder(patch):
    def build(traced):
        xp = jnp if traced else np

        def run(a1, a2, z):
            omega = shell_connection(patch)
            rows = {}
            for i, j in ((1, 2), (1, 3), (2, 3)):
                form = exterior_derivative(omega[i, j], patch)
                for k in (1, 2, 3):
                    form = form + wedge(omega[i, k], omega[k, j])
                rows[i - 1, j - 1] = form.evaluate_traced(a1, a2, z) if traced else form.evaluate(a1, a2, z)
            zero = xp.zeros_like(rows[0, 1])
            get = lambda i, j: rows[i, j] if (i, j) in rows else (-rows[j, i] if (j, i) in rows else zero)
            return xp.stack([xp.stack([get(i, j) for j in range(3)]) for i in range(3)])
        return run
    return build


def _coords(a1, a2, z):
    return np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, z)))


def torsion_residual(patch, a1, a2, z):
    """``d theta^i + omega^i_j ^ theta^j`` as an array ``[i, comp]``."""
    patch.check_point(a1, a2)
    check_frame(patch, a1, a2, z)
    run = _residual_kernel(patch, "torsion", _torsion_builder(patch))
    return np.asarray(run(*_coords(a1, a2, z)))


def curvature_residual(patch, a1, a2, z):
    """``d omega^i_j + omega^i_k ^ omega^k_j`` as an array ``[i, j, comp]``."""
    patch.check_point(a1, a2)
    check_frame(patch, a1, a2, z)
    run = _residual_kernel(patch, "curvature", _curvature_builder(patch))
    return np.asarray(run(*_coords(a1, a2, z)))
