"""Partial-derivative providers for coefficient closures.

A closure takes coordinate arguments (broadcastable arrays) and returns
an array of the broadcast shape.  ``AutoDiff`` differentiates exactly with
jax, ``FiniteDiff`` uses second-order central differences and falls back
to one-sided stencils near non-periodic boundaries.
"""

import jax
import jax.numpy as jnp
import numpy as np


def constant(value):
    """Closure returning ``value`` everywhere, traceable by jax."""
    value = float(value)

    def fn(*x):
        return value + 0.0 * sum(x)

    return fn


class AutoDiff:
    """Exact elementwise partials by forward-mode jax (closures must be elementwise)."""

    exact = True

    def partial(self, fn, k):
        def dfn(*x):
            x = jnp.broadcast_arrays(*[jnp.asarray(xi, dtype=jnp.float64) for xi in x])
            head, tail = x[:k], x[k + 1:]
            _, tangent = jax.jvp(lambda xk: fn(*head, xk, *tail), (x[k],), (jnp.ones_like(x[k]),))
            return tangent

        return dfn


class FiniteDiff:
    """Central differences with per-argument steps.

    ``bounds[k]`` is ``(lo, hi)`` for a non-periodic argument and ``None``
    otherwise; points closer than one step to a bound use second-order
    one-sided stencils so the closure is never sampled outside.
    """

    exact = False

    def __init__(self, steps, bounds=None):
        self.steps = tuple(float(s) for s in steps)
        self.bounds = tuple(bounds) if bounds is not None else (None,) * len(self.steps)

    def partial(self, fn, k):
        h = self.steps[k]
        bound = self.bounds[k] if k < len(self.bounds) else None

        def shifted(x, s):
            x = list(np.broadcast_arrays(*[np.asarray(xi, dtype=float) for xi in x]))
            x[k] = x[k] + s
            return np.asarray(fn(*x), dtype=float)

        def dfn(*x):
            central = (shifted(x, h) - shifted(x, -h)) / (2 * h)
            if bound is None:
                return central
            xk = np.broadcast_arrays(*[np.asarray(xi, dtype=float) for xi in x])[k]
            lo, hi = bound
            near_lo = xk - h < lo
            near_hi = xk + h > hi
            if not (near_lo.any() or near_hi.any()):
                return central
            f0 = shifted(x, 0.0)
            fwd = (-3 * f0 + 4 * shifted(x, h) - shifted(x, 2 * h)) / (2 * h)
            bwd = (3 * f0 - 4 * shifted(x, -h) + shifted(x, -2 * h)) / (2 * h)
            return np.where(near_lo, fwd, np.where(near_hi, bwd, central))

        return dfn
