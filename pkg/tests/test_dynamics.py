import jax.numpy as jnp
import numpy as np
import pytest

import shellframes as sf
from shellframes.dynamics import (
    LoadState,
    ShellState,
    energy,
    integrated_stress_divergence,
    measured_period,
    resultant_terms_from_stress,
    simulate,
    stable_dt,
    stress_form_divergence_oracle,
    time_step,
)
from shellframes.grid import AnalyticField, Grid
from shellframes.presets import random_smooth

MAT = sf.Material(E=1.0, nu=0.3, rho=1.0, h=0.01)


def interior(patch, n):
    (l1, h1), (l2, h2) = patch.domain
    if patch.periodic[0]:
        return Grid.on(patch, n)
    return Grid.on(patch, n, n, domain=((l1 + 0.2, h1 - 0.2), (l2, h2)))


def test_zero_state_has_zero_residual():
    cyl = sf.make_canonical("cylinder")
    g = Grid.on(cyl, 8)
    z = sf.DisplacementField.zero(g)
    assert sf.covariant_eom_residual(z, z, MAT, cyl, g).max_abs() == 0
    ut, wt = sf.reduced_acceleration(z, MAT, cyl, g)
    assert np.all(ut == 0) and np.all(wt == 0)


@pytest.mark.parametrize("residual", [sf.covariant_eom_residual, sf.classical_eom_residual])
def test_cylinder_breathing_balances(residual):
    R, w0 = 1.7, 1e-3
    cyl = sf.make_canonical("cylinder", R=R)
    g = Grid.on(cyl, 8)
    om2 = MAT.E / (MAT.rho * (1 - MAT.nu ** 2) * R ** 2)
    disp = sf.DisplacementField(np.zeros((2,) + g.n), np.full(g.n, w0))
    acc = sf.DisplacementField(np.zeros((2,) + g.n), np.full(g.n, -om2 * w0))
    assert residual(disp, acc, MAT, cyl, g).max_abs() <= 1e-10


def test_static_plate_manufactured_solution_converges():
    errs = []
    for n in (32, 64):
        plate = sf.make_canonical("plate")
        g = Grid.on(plate, n, 4)
        x, _ = g.mesh()
        k = 1.0
        disp = sf.DisplacementField(np.zeros((2,) + g.n), np.sin(k * x))
        q = np.zeros((3,) + g.n)
        q[2] = MAT.B * k ** 4 * np.sin(k * x)
        r = sf.covariant_eom_residual(disp, sf.DisplacementField.zero(g), MAT, plate, g,
                                      LoadState(q, np.zeros((2,) + g.n)))
        errs.append(np.max(np.abs(r.normal)) / MAT.B)
    assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.5)


def test_classical_equals_covariant_on_plate():
    plate = sf.make_canonical("plate")
    g = Grid.on(plate, 16)
    disp = random_smooth(1, 1e-2)[0].sample(g)
    acc = random_smooth(2, 1e-2)[0].sample(g)
    a = sf.covariant_eom_residual(disp, acc, MAT, plate, g)
    b = sf.classical_eom_residual(disp, acc, MAT, plate, g)
    assert max(np.max(np.abs(a.tangential - b.tangential)), np.max(np.abs(a.normal - b.normal))) <= 1e-12


@pytest.mark.parametrize("kind", ["sphere", "cylinder", "torus", "cone"])
def test_classical_equals_covariant_curved(canonical, kind):
    p = canonical[kind]
    g = interior(p, 32)
    disp = random_smooth(5, 1e-2)[0].sample(g)
    acc = random_smooth(6, 1e-2)[0].sample(g)
    a = sf.covariant_eom_residual(disp, acc, MAT, p, g)
    b = sf.classical_eom_residual(disp, acc, MAT, p, g)
    assert max(np.max(np.abs(a.tangential - b.tangential)), np.max(np.abs(a.normal - b.normal))) <= 1e-8


def test_reduced_acceleration_zeroes_the_residual():
    sph = sf.make_canonical("sphere")
    g = interior(sph, 16)
    disp = random_smooth(9, 1e-2)[0].sample(g)
    ut, wt = sf.reduced_acceleration(disp, MAT, sph, g)
    r = sf.covariant_eom_residual(disp, sf.DisplacementField(ut, wt), MAT, sph, g)
    assert r.max_abs() <= 1e-12 * max(1.0, np.max(np.abs(wt)))


def test_dispersion_analytic_examples():
    plate_mat = sf.Material(E=12 * (1 - 0.3 ** 2), nu=0.3, rho=1.0, h=1.0)  # B = rho h = 1
    assert sf.dispersion_analytic("plate_bending", plate_mat, k=2.0) == pytest.approx(4.0, rel=1e-14)
    m0 = sf.Material(E=1.0, nu=0.0, rho=1.0, h=0.01)
    assert sf.dispersion_analytic("cylinder_breathing", m0, R=1.0) == pytest.approx(1.0, rel=1e-15)
    assert sf.dispersion_analytic("sphere_breathing", m0, R=1.0) == pytest.approx(np.sqrt(2), rel=1e-15)
    with pytest.raises(sf.InvalidParameterError):
        sf.dispersion_analytic("drum", m0)


def test_numeric_dispersion_plate_and_convergence():
    w = sf.dispersion_analytic("plate_bending", MAT, k=1.0)
    assert sf.numeric_dispersion("plate_bending", MAT, 1.0, n=64).omega == pytest.approx(w, rel=1e-2)
    errs = [abs(sf.numeric_dispersion("plate_bending", MAT, 2.0, n=n).omega / sf.dispersion_analytic(
        "plate_bending", MAT, k=2.0) - 1) for n in (32, 64, 128)]
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    np.testing.assert_allclose(ratios, 4.0, atol=0.5)


def test_numeric_breathing_modes():
    om = sf.numeric_dispersion("cylinder_breathing", MAT, R=1.3, n=16).omega
    assert abs(om / sf.dispersion_analytic("cylinder_breathing", MAT, R=1.3) - 1) <= 1e-12
    om = sf.numeric_dispersion("sphere_breathing", MAT, R=2.0, n=16).omega
    assert abs(om / sf.dispersion_analytic("sphere_breathing", MAT, R=2.0, coupled=True) - 1) <= 1e-12
    # the membrane formula drops the h^2 / (24 R^2) thickness coupling
    dev = om / sf.dispersion_analytic("sphere_breathing", MAT, R=2.0) - 1
    assert dev == pytest.approx(MAT.h ** 2 / (24 * 2.0 ** 2), rel=1e-3)


def test_axisymmetric_cylinder_converges():
    ana = sf.dispersion_analytic("cylinder_axisymmetric", MAT, k=2.0, R=1.0)
    errs = []
    for n in (32, 64):
        num = [m.omega for m in sf.numeric_dispersion("cylinder_axisymmetric", MAT, 2.0, n=n)]
        errs.append(np.max(np.abs(np.array(num) / ana - 1)))
    assert errs[1] <= 1e-2 and errs[0] / errs[1] == pytest.approx(4.0, abs=0.6)


def test_aliasing_errors():
    with pytest.raises(sf.AliasingError):
        sf.numeric_dispersion("plate_bending", MAT, 1.5, n=64)
    with pytest.raises(sf.AliasingError):
        sf.numeric_dispersion("plate_bending", MAT, 32.0, n=64)


def test_time_step_zero_state_stays_zero():
    cyl = sf.make_canonical("cylinder")
    g = Grid.on(cyl, 8)
    st = ShellState.at_rest(sf.DisplacementField.zero(g), g)
    st2 = time_step(st, MAT, cyl, g, 0.01)
    assert np.all(st2.disp.u == 0) and np.all(st2.disp.w == 0) and np.all(st2.vel.w == 0)


def test_breathing_simulation_period_and_energy():
    R = 1.0
    cyl = sf.make_canonical("cylinder", R=R)
    g = Grid.on(cyl, 8)
    w0 = 1e-3
    om = sf.dispersion_analytic("cylinder_breathing", MAT, R=R)
    T = 2 * np.pi / om
    st = ShellState.at_rest(sf.DisplacementField(np.zeros((2,) + g.n), np.full(g.n, w0)), g)
    t, en, probe, _ = simulate(st, MAT, cyl, g, T / 200, 2000)
    assert abs(measured_period(t, probe) / T - 1) <= 5e-3
    assert np.max(np.abs(en / en[0] - 1)) <= 1e-2


def test_plate_standing_wave_period():
    plate = sf.make_canonical("plate")
    g = Grid.on(plate, 64, 4)
    x, _ = g.mesh()
    T = 2 * np.pi / sf.dispersion_analytic("plate_bending", MAT, k=1.0)
    st = ShellState.at_rest(sf.DisplacementField(np.zeros((2,) + g.n), np.sin(x)), g)
    dt = 0.4 * 2 / (np.sqrt(MAT.B / MAT.rho_h) * (np.pi / g.spacing[0]) ** 2)
    steps = int(np.ceil(0.8 * T / dt))
    t, _, probe, _ = simulate(st, MAT, plate, g, dt, steps, probe=lambda s: float(s.disp.w[16, 0]),
                              track_energy=False)
    # crossings at T/4 and 3T/4
    assert abs(measured_period(t, probe, offset=0.0) / T - 1) <= 5e-3


def test_divergence_is_reported_with_step():
    cyl = sf.make_canonical("cylinder")
    g = Grid.on(cyl, 16)
    disp, _ = random_smooth(0, 1e-3)
    st = ShellState.at_rest(disp, g)
    dt = 200 * stable_dt(MAT, cyl, g)
    with pytest.raises(sf.DivergenceError) as info:
        for n in range(1, 400):
            st = time_step(st, MAT, cyl, g, dt, step=n)
    assert info.value.step is not None and info.value.index is not None


def test_energy_of_zero_state():
    plate = sf.make_canonical("plate")
    g = Grid.on(plate, 8)
    assert energy(ShellState.at_rest(sf.DisplacementField.zero(g), g), MAT, plate, g) == 0.0


def test_measured_period_of_cosine():
    t = np.linspace(0, 10, 5001)
    assert measured_period(t, np.cos(2 * np.pi * t / 1.7)) == pytest.approx(1.7, rel=1e-5)
    assert measured_period(t, 3 + np.sin(2 * np.pi * t / 0.9)) == pytest.approx(0.9, rel=1e-5)
    with pytest.raises(ValueError):
        measured_period(t[:10], np.cos(t[:10]))


def _sigma(entries):
    """3x3 closure; every entry broadcasts against the coordinates."""
    def s(a1, a2, z):
        zero = 0.0 * a1 + 0.0 * a2 + 0.0 * z
        return jnp.array([[e(a1, a2, z) + zero for e in row] for row in entries])
    return s


ZERO = lambda a, b, z: 0.0


def test_stress_oracle_trivial_cases():
    plate = sf.make_canonical("plate")
    a1, a2 = np.array([0.3, 1.0]), np.array([0.5, 2.0])
    zero = _sigma([[ZERO] * 3] * 3)
    assert np.all(stress_form_divergence_oracle(zero, plate, a1, a2, 0.0) == 0)
    p = lambda a, b, z: 2.5
    hyd = _sigma([[p, ZERO, ZERO], [ZERO, p, ZERO], [ZERO, ZERO, p]])
    assert np.max(np.abs(stress_form_divergence_oracle(hyd, plate, a1, a2, 0.1))) <= 1e-14


def test_stress_oracle_cylinder_hoop_coupling():
    R, s = 1.5, 2.0
    cyl = sf.make_canonical("cylinder", R=R)
    hoop = _sigma([[ZERO] * 3, [ZERO, lambda a, b, z: s, ZERO], [ZERO] * 3])
    out = stress_form_divergence_oracle(hoop, cyl, np.array([0.4]), np.array([1.0]), 0.0)
    np.testing.assert_allclose(out[:, 0], [0.0, 0.0, -s / R], atol=1e-14)


POLY = _sigma([
    [lambda a, b, z: 1 + 0.3 * jnp.sin(a) + z * jnp.cos(b), lambda a, b, z: 0.2 * jnp.cos(a + b) * (1 + z),
     lambda a, b, z: 0.1 * jnp.sin(b) * (1 - 4 * z * z)],
    [lambda a, b, z: 0.2 * jnp.cos(a + b) * (1 + z), lambda a, b, z: 0.5 + z * z * jnp.sin(a),
     lambda a, b, z: 0.3 * jnp.cos(a) * z],
    [lambda a, b, z: 0.1 * jnp.sin(b) * (1 - 4 * z * z), lambda a, b, z: 0.3 * jnp.cos(a) * z,
     lambda a, b, z: 0.2 * z * jnp.cos(b)],
])


@pytest.mark.parametrize("kind", ["cylinder", "sphere"])
def test_integrated_stress_divergence_matches_resultant_form(kind):
    p = sf.make_canonical(kind, R=1.0)
    (l1, h1), _ = p.domain
    a1, a2 = np.meshgrid(np.linspace(l1 + 0.3, h1 - 0.3, 3), np.linspace(0.2, 5.0, 3), indexing="ij")
    h = 0.05
    lhs = integrated_stress_divergence(POLY, p, a1, a2, h, nz=16)
    rhs = resultant_terms_from_stress(POLY, p, a1, a2, h)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6
