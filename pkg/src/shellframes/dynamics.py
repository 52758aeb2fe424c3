"""Shell equations of motion, explicit time stepping and dispersion."""

from dataclasses import dataclass, field

import jax.numpy as jnp
import numpy as np

from .constitutive import resultants, shear_resultant
from .errors import AliasingError, DivergenceError, InvalidParameterError
from .forms import FrameForm, basis_form, exterior_derivative, hodge_dual, shell_connection, wedge
from .grid import Grid, field_values, geometry
from .kinematics import DisplacementField, strain_state
from .midsurface import covariant_div_tensor, covariant_div_vector
from .surface import check_frame, make_canonical


@dataclass(frozen=True)
class LoadState:
    """Surface load ``q = (q1, q2, q3)`` (force/area) and body moment ``m`` (force/length)."""

    q: np.ndarray
    m: np.ndarray

    @classmethod
    def zero(cls, grid):
        return cls(np.zeros((3,) + grid.n), np.zeros((2,) + grid.n))


@dataclass(frozen=True)
class ResidualState:
    tangential: np.ndarray  # (2, n1, n2)
    normal: np.ndarray      # (n1, n2)

    def max_abs(self):
        return max(np.max(np.abs(self.tangential)), np.max(np.abs(self.normal)))


@dataclass(frozen=True)
class ModeResult:
    k: float
    omega: float
    label: str


def _loads(loads, grid):
    return LoadState.zero(grid) if loads is None else loads


def _pipeline(disp, mat, patch, grid, loads):
    st = strain_state(disp, patch, grid)
    N, M = resultants(st, mat, patch, grid)
    return st, N, M


def covariant_eom_residual(disp, accel, mat, patch, grid, loads=None):
    """Residual of the covariant shell equations per unit mid-section area.

    ``r^a = div N^a + d^a_b Q^b + q^a - rho h u''^a`` and
    ``r^3 = div Q - N : d + q^3 - rho h w''`` with ``Q = div M + m``.
    """
    loads = _loads(loads, grid)
    geo = geometry(patch, grid)
    _, N, M = _pipeline(disp, mat, patch, grid, loads)
    Q = shear_resultant(M, patch, grid, loads.m)
    ua, wa = field_values(accel.u, grid), field_values(accel.w, grid)
    rt = covariant_div_tensor(N, patch, grid) + geo.kappa * Q + loads.q[:2] - mat.rho_h * ua
    rn = (covariant_div_vector(Q, patch, grid) - np.einsum("ab...,ba...->...", N, geo.d)
          + loads.q[2] - mat.rho_h * wa)
    return ResidualState(rt, rn)


def _lame_div(T, geo, grid):
    """Rows ``d1(A2 T^1a) + d2(A1 T^2a) + ...`` of the classical equations over ``A1 A2``.

    Products are differentiated with the product rule so the patch partials
    stay analytic and only the field itself is finite-differenced.
    """
    (A1, A2), dA = geo.A, geo.dA
    A1_2, A2_1 = dA[0, 1], dA[1, 0]
    d1 = lambda f: grid.d(f, 0)
    d2 = lambda f: grid.d(f, 1)
    row1 = (A2_1 * T[0, 0] + A2 * d1(T[0, 0]) + A1_2 * T[1, 0] + A1 * d2(T[1, 0])
            + A1_2 * T[0, 1] - A2_1 * T[1, 1])
    row2 = (A2_1 * T[0, 1] + A2 * d1(T[0, 1]) + A1_2 * T[1, 1] + A1 * d2(T[1, 1])
            + A2_1 * T[1, 0] - A1_2 * T[0, 0])
    return np.stack([row1, row2]) / (A1 * A2)


def classical_eom_residual(disp, accel, mat, patch, grid, loads=None):
    """The five classical equations in Lamé form, with ``Q`` taken from the two moment rows.

    Rows are divided by ``A1 A2`` so the result is comparable with
    :func:`covariant_eom_residual`.
    """
    loads = _loads(loads, grid)
    geo = geometry(patch, grid)
    _, N, M = _pipeline(disp, mat, patch, grid, loads)
    (A1, A2), dA = geo.A, geo.dA
    k1, k2 = geo.kappa
    Q = _lame_div(M, geo, grid) + loads.m
    ua, wa = field_values(accel.u, grid), field_values(accel.w, grid)
    rt = _lame_div(N, geo, grid) + np.stack([Q[0] * k1, Q[1] * k2]) + loads.q[:2] - mat.rho_h * ua
    divQ = (dA[1, 0] * Q[0] + A2 * grid.d(Q[0], 0) + dA[0, 1] * Q[1] + A1 * grid.d(Q[1], 1)) / (A1 * A2)
    rn = divQ - (N[0, 0] * k1 + N[1, 1] * k2) + loads.q[2] - mat.rho_h * wa
    return ResidualState(rt, rn)


def reduced_acceleration(disp, mat, patch, grid, loads=None):
    """Accelerations of the reduced system after eliminating ``Q``."""
    loads = _loads(loads, grid)
    geo = geometry(patch, grid)
    _, N, M = _pipeline(disp, mat, patch, grid, loads)
    Q = shear_resultant(M, patch, grid, loads.m)
    ut = covariant_div_tensor(N, patch, grid) + geo.kappa * Q + loads.q[:2]
    wn = covariant_div_vector(Q, patch, grid) - np.einsum("ab...,ba...->...", N, geo.d) + loads.q[2]
    return ut / mat.rho_h, wn / mat.rho_h


@dataclass(frozen=True)
class ShellState:
    """Displacement and velocity on a grid; ``acc`` caches the current acceleration."""

    disp: DisplacementField
    vel: DisplacementField
    acc: tuple = field(default=None, compare=False)

    @classmethod
    def at_rest(cls, disp, grid):
        return cls(disp.sample(grid), DisplacementField.zero(grid))


def _check_finite(step, **arrays):
    for name, arr in arrays.items():
        bad = ~np.isfinite(arr)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise DivergenceError(f"non-finite {name} at step {step}, index {idx}", step=step, index=idx)


def time_step(state, mat, patch, grid, dt, loads=None, step=0, blowup=1e100):
    """One kick-drift-kick leapfrog step of the reduced system.

    Raises :class:`DivergenceError` when a value becomes non-finite or exceeds
    ``blowup`` in magnitude, naming the step and the first offending index.
    """
    if state.acc is None:
        acc = reduced_acceleration(state.disp, mat, patch, grid, loads)
    else:
        acc = state.acc
    vu = state.vel.u + 0.5 * dt * acc[0]
    vw = state.vel.w + 0.5 * dt * acc[1]
    u = state.disp.u + dt * vu
    w = state.disp.w + dt * vw
    with np.errstate(over="ignore", invalid="ignore"):
        u = np.where(np.abs(u) > blowup, np.inf, u)
        w = np.where(np.abs(w) > blowup, np.inf, w)
    _check_finite(step, u=u, w=w)
    disp = DisplacementField(u, w)
    acc = reduced_acceleration(disp, mat, patch, grid, loads)
    vu = vu + 0.5 * dt * acc[0]
    vw = vw + 0.5 * dt * acc[1]
    _check_finite(step, vu=vu, vw=vw)
    return ShellState(disp, DisplacementField(vu, vw), acc)


def energy(state, mat, patch, grid):
    """Kinetic plus strain energy ``1/2 int (N:eps0 + M:eps1) dA`` with ``dA = A1 A2 da1 da2``."""
    geo = geometry(patch, grid)
    st = strain_state(state.disp, patch, grid)
    N, M = resultants(st, mat, patch, grid)
    dens = 0.5 * (np.einsum("ab...,ab...->...", N, st.eps0) + np.einsum("ab...,ab...->...", M, st.eps1))
    vu, vw = field_values(state.vel.u, grid), field_values(state.vel.w, grid)
    dens = dens + 0.5 * mat.rho_h * (np.sum(vu ** 2, axis=0) + vw ** 2)
    return float(np.sum(dens * geo.area * grid.weights()))


def stable_dt(mat, patch, grid, safety=0.5):
    """``safety * 2 / omega_max`` with ``omega_max`` from the grid Nyquist wavenumber.

    The estimate combines plate bending, membrane waves and the curvature
    (breathing) stiffness at the largest resolvable frame wavenumber.
    """
    geo = geometry(patch, grid)
    kx = [np.pi / (np.min(geo.A[a]) * grid.spacing[a]) for a in range(2)]
    k2 = kx[0] ** 2 + kx[1] ** 2
    kap2 = np.max(geo.kappa[0] ** 2 + geo.kappa[1] ** 2)
    w2 = (mat.B * k2 ** 2 + mat.C * (k2 + 2 * kap2)) / mat.rho_h
    return safety * 2.0 / np.sqrt(w2)


def simulate(state, mat, patch, grid, dt, steps, loads=None, probe=None, track_energy=True):
    """Run ``steps`` leapfrog steps; returns ``(t, energy, probe_values, final_state)``.

    ``probe(state)`` defaults to the mean normal displacement.  Without
    ``track_energy`` the energy trace is NaN (saves one strain evaluation
    per step).
    """
    probe = probe or (lambda s: float(np.mean(s.disp.w)))
    en_fn = (lambda s: energy(s, mat, patch, grid)) if track_energy else (lambda s: np.nan)
    t = np.arange(steps + 1) * dt
    en = np.empty(steps + 1)
    pv = np.empty(steps + 1)
    en[0], pv[0] = en_fn(state), probe(state)
    for n in range(1, steps + 1):
        state = time_step(state, mat, patch, grid, dt, loads, step=n)
        en[n], pv[n] = en_fn(state), probe(state)
    return t, en, pv, state


def measured_period(t, signal, offset=None):
    """Period from linearly interpolated zero crossings of ``signal - offset``.

    Upward crossings are used when there are at least two.  Otherwise
    crossings in both directions, half a period apart, are used, which is
    only accurate when ``offset`` is the true centre of oscillation (pass
    ``offset=0`` for a signal known to oscillate about zero).
    """
    s = np.asarray(signal, dtype=float)
    s = s - (np.mean(s) if offset is None else offset)
    up = np.nonzero((s[:-1] < 0) & (s[1:] >= 0))[0]
    idx, factor = (up, 1.0) if len(up) >= 2 else (np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0], 2.0)
    if len(idx) < 2:
        raise ValueError("need at least two zero crossings")
    tc = t[idx] - s[idx] * (t[idx + 1] - t[idx]) / (s[idx + 1] - s[idx])
    return float(factor * (tc[-1] - tc[0]) / (len(tc) - 1))


DISPERSION_KINDS = ("plate_bending", "cylinder_breathing", "sphere_breathing", "cylinder_axisymmetric")


def _axisymmetric_matrix(mat, R, k):
    """Stiffness of the ``(u1 = U sin kx, w = W cos kx)`` plane wave on a cylinder over ``rho h``."""
    C, B, nu = mat.C, mat.B, mat.nu
    K = np.array([
        [C * k ** 2, C * nu * k / R + B * k ** 3 / R + B * nu * k / R ** 3],
        [C * nu * k / R + B * k ** 3 / R, B * k ** 4 + 2 * nu * B * k ** 2 / R ** 2 + C / R ** 2],
    ])
    return K / mat.rho_h


def dispersion_analytic(kind, mat, k=0.0, R=1.0, coupled=False):
    """Closed-form angular frequencies.

    ``sphere_breathing`` uses the membrane formula unless ``coupled`` is set,
    in which case the thickness coupling of the resultants is kept:
    ``omega^2 = 2 (1 + nu)(C / R^2 + B / R^4) / (rho h)``.
    ``cylinder_axisymmetric`` returns both branches, ascending.
    """
    if kind == "plate_bending":
        return np.sqrt(mat.B / mat.rho_h) * k ** 2
    if kind == "cylinder_breathing":
        return np.sqrt(mat.E / (mat.rho * (1 - mat.nu ** 2))) / R
    if kind == "sphere_breathing":
        if coupled:
            return np.sqrt(2 * (1 + mat.nu) * (mat.C / R ** 2 + mat.B / R ** 4) / mat.rho_h)
        return np.sqrt(2 * mat.E / (mat.rho * (1 - mat.nu))) / R
    if kind == "cylinder_axisymmetric":
        ev = np.linalg.eigvals(_axisymmetric_matrix(mat, R, k))
        return np.sort(np.sqrt(np.abs(ev.real)))
    raise InvalidParameterError(f"unknown dispersion kind {kind!r}")


def _check_commensurate(k, length, n):
    m = k * length / (2 * np.pi)
    if abs(m - round(m)) > 1e-9:
        raise AliasingError(f"k={k} does not fit the periodic length {length}")
    if abs(round(m)) >= n / 2:
        raise AliasingError(f"k={k} is at or beyond the grid Nyquist limit for n={n}")


def _weighted(f, g, geo, grid):
    return np.sum(f * g * geo.area * grid.weights())


def numeric_dispersion(kind, mat, k=0.0, n=64, R=1.0, length=2 * np.pi):
    """Frequencies from the discrete reduced operator applied to a plane wave.

    Plate bending and the breathing modes use the Rayleigh quotient of
    :func:`reduced_acceleration`; the axisymmetric cylinder mode projects the
    operator on ``(u1 sin kx, w cos kx)`` and returns both roots.
    """
    if kind == "plate_bending":
        patch = make_canonical("plate", Lx=length, Ly=length)
        _check_commensurate(k, length, n)
        grid = Grid.on(patch, n, 4)
        x, _ = grid.mesh()
        phi = np.sin(k * x)
        disp = DisplacementField(np.zeros((2,) + grid.n), phi)
        acc = reduced_acceleration(disp, mat, patch, grid)[1]
        geo = geometry(patch, grid)
        return ModeResult(k, float(np.sqrt(-_weighted(phi, acc, geo, grid) / _weighted(phi, phi, geo, grid))), kind)
    if kind in ("cylinder_breathing", "sphere_breathing"):
        patch = make_canonical(kind.split("_")[0], R=R)
        grid = Grid.on(patch, n, n)
        phi = np.ones(grid.n)
        disp = DisplacementField(np.zeros((2,) + grid.n), phi)
        acc = reduced_acceleration(disp, mat, patch, grid)[1]
        geo = geometry(patch, grid)
        return ModeResult(0.0, float(np.sqrt(-_weighted(phi, acc, geo, grid) / _weighted(phi, phi, geo, grid))), kind)
    if kind == "cylinder_axisymmetric":
        patch = make_canonical("cylinder", R=R, L=length)
        _check_commensurate(k, length, n)
        grid = Grid.on(patch, n, 4)
        x, _ = grid.mesh()
        geo = geometry(patch, grid)
        s, c = np.sin(k * x), np.cos(k * x)
        zero = np.zeros(grid.n)
        basis = [DisplacementField(np.stack([s, zero]), zero), DisplacementField(np.stack([zero, zero]), c)]
        shapes = [s, c]
        K = np.empty((2, 2))
        for j, b in enumerate(basis):
            au, aw = reduced_acceleration(b, mat, patch, grid)
            comp = [au[0], aw]
            for i in range(2):
                K[i, j] = -_weighted(shapes[i], comp[i], geo, grid) / _weighted(shapes[i], shapes[i], geo, grid)
        ev = np.sort(np.sqrt(np.abs(np.linalg.eigvals(K).real)))
        return [ModeResult(k, float(w), f"{kind}[{i}]") for i, w in enumerate(ev)]
    raise InvalidParameterError(f"unknown dispersion kind {kind!r}")


class StressForm3:
    """Stress two-forms ``tau^i = sigma^{ai} hat-theta_a`` from a symmetric 3x3 closure.

    ``sigma(a1, a2, z)`` must return a (3, 3) jax-traceable array.
    """

    def __init__(self, sigma):
        self.sigma = sigma
        duals = [hodge_dual(basis_form(a)) for a in (1, 2, 3)]
        self.tau = []
        for i in range(3):
            form = FrameForm.zero(2)
            for a in range(3):
                comp = (lambda a, i: lambda *x: jnp.asarray(sigma(*x))[a, i])(a, i)
                form = form + duals[a] * comp
            self.tau.append(form)


def stress_form_divergence_oracle(sigma, patch, a1, a2, z):
    """``nabla tau^i = d tau^i + omega^i_j ^ tau^j`` as ``dV`` coefficients, shape ``(3, ...)``."""
    patch.check_point(a1, a2)
    check_frame(patch, a1, a2, z)
    sf = StressForm3(sigma)
    omega = shell_connection(patch)
    out = []
    for i in range(3):
        form = exterior_derivative(sf.tau[i], patch)
        for j in range(3):
            form = form + wedge(omega[i + 1, j + 1], sf.tau[j])
        out.append(form.evaluate(a1, a2, z)[0])
    return np.stack(out)


def integrated_stress_divergence(sigma, patch, a1, a2, h, nz=16):
    """Trapezoid ``int nabla tau^i (1 + z k1)(1 + z k2) dz`` over ``[-h/2, h/2]``.

    This is the thickness integral per unit mid-section area, the quantity
    the shell equations of motion balance.
    """
    z = np.linspace(-h / 2, h / 2, nz)
    k1, k2 = patch.curvature_values(a1, a2)
    vals = np.stack([
        stress_form_divergence_oracle(sigma, patch, a1, a2, zi) * (1 + zi * k1) * (1 + zi * k2)
        for zi in z
    ])
    return np.trapezoid(vals, z, axis=0)


def resultant_terms_from_stress(sigma, patch, a1, a2, h, n_gauss=6):
    """Left-hand sides of the classical equations built from ``sigma`` through its resultants.

    ``N``, ``Q`` are Gauss-Legendre thickness integrals of ``sigma`` with the
    resultant weights; their partials are exact (jax).  Face terms
    ``[sigma^{3i}(1 + z k1)(1 + z k2)]`` at ``z = +-h/2`` are added so the
    result equals the integrated stress divergence.  Returns ``(3, ...)``.
    """
    x, wts = np.polynomial.legendre.leggauss(n_gauss)
    zs, ws = 0.5 * h * x, 0.5 * h * wts
    fk1, fk2 = patch.function("k1"), patch.function("k2")
    fA1, fA2 = patch.function("A1"), patch.function("A2")

    def resultant(a, b):
        # row a carries the curvature of the other direction
        fk = fk2 if a == 0 else fk1
        return lambda p, q: sum(w * jnp.asarray(sigma(p, q, zz))[a, b] * (1 + zz * fk(p, q))
                                for zz, w in zip(zs, ws))

    # flux F^{ja} = A_other * N^{ja}; d1 F^{1a} + d2 F^{2a}
    def flux_div(col):
        f1 = lambda p, q: fA2(p, q) * resultant(0, col)(p, q)
        f2 = lambda p, q: fA1(p, q) * resultant(1, col)(p, q)
        return patch.differ.partial(f1, 0)(a1, a2) + patch.differ.partial(f2, 1)(a1, a2)

    A1, A2 = patch.lame_values(a1, a2)
    k1, k2 = patch.curvature_values(a1, a2)
    A1_2, A2_1 = patch.eval("A1", a1, a2, 2), patch.eval("A2", a1, a2, 1)
    N = [[np.asarray(resultant(a, b)(a1, a2)) for b in range(3)] for a in range(2)]
    face = []
    for i in range(3):
        top = np.asarray(sigma(a1, a2, h / 2))[2, i] * (1 + h / 2 * k1) * (1 + h / 2 * k2)
        bot = np.asarray(sigma(a1, a2, -h / 2))[2, i] * (1 - h / 2 * k1) * (1 - h / 2 * k2)
        face.append(top - bot)
    r1 = (flux_div(0) + A1_2 * N[0][1] - A2_1 * N[1][1]) / (A1 * A2) + k1 * N[0][2] + face[0]
    r2 = (flux_div(1) + A2_1 * N[1][0] - A1_2 * N[0][0]) / (A1 * A2) + k2 * N[1][2] + face[1]
    r3 = flux_div(2) / (A1 * A2) - (k1 * N[0][0] + k2 * N[1][1]) + face[2]
    return np.stack([np.asarray(r1), np.asarray(r2), np.asarray(r3)])
