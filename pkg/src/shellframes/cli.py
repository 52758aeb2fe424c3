"""Command-line front end.

Exit codes: 0 success/pass, 1 validation failure, 2 numerical divergence,
3 bad input file.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from . import fieldio
from .checks import geometry_report
from .config import load_config
from .constitutive import ResultantState, resultant_constraint_residual, resultants, shear_resultant
from .dynamics import (
    LoadState,
    ShellState,
    classical_eom_residual,
    covariant_eom_residual,
    dispersion_analytic,
    measured_period,
    numeric_dispersion,
    simulate,
)
from .errors import DivergenceError, FieldFileError, ShellError
from .grid import AnalyticField, Grid, geometry
from .kinematics import lie_strain_3d_oracle, strain_at_z, strain_state
from .presets import (
    build_grid,
    build_material,
    build_patch,
    displacement_from_config,
    load_preset,
)
from .surface import CANONICAL_KINDS

EXIT_OK, EXIT_FAIL, EXIT_DIVERGED, EXIT_BAD_INPUT = 0, 1, 2, 3

log = logging.getLogger("shellframes")


def _emit(report, out, name):
    text = json.dumps(report, indent=2)
    print(text)
    if out is not None:
        (out / name).write_text(text + "\n")


def _field(out, name, rank, values, grid):
    if out is not None:
        fieldio.FieldFile.from_grid(name, rank, values, grid).write(out / f"{name}.field")


def _setup(cfg):
    patch = build_patch(cfg.surface)
    grid = build_grid(cfg.grid, patch)
    mat = build_material(cfg.material)
    return patch, grid, mat


def cmd_check_geometry(cfg, out, args):
    patch = build_patch(cfg.surface)
    report = geometry_report(patch, cfg.material.h, cfg.check.probe, cfg.check.tol)
    _emit(report, out, "geometry.json")
    return EXIT_OK if report["pass"] else EXIT_FAIL


def check_geometry_suite(out, h=0.01, tol=1e-8):
    """The five canonical surfaces with default parameters."""
    from .surface import make_canonical

    reports = [geometry_report(make_canonical(kind), h, 8, tol) for kind in CANONICAL_KINDS]
    ok = all(r["pass"] for r in reports)
    _emit({"surfaces": reports, "pass": ok}, out, "geometry_suite.json")
    return EXIT_OK if ok else EXIT_FAIL


def _nyquist_warning(kmax, grid, patch):
    if kmax is None:
        return
    for a in range(2):
        if kmax * grid.spacing[a] > np.pi / 2:
            log.warning("grid under-resolves the displacement preset along alpha%d "
                        "(k*dalpha = %.3g > pi/2)", a + 1, kmax * grid.spacing[a])


def cmd_strain(cfg, out, args):
    patch, grid, mat = _setup(cfg)
    disp, kmax = displacement_from_config(cfg.displacement, patch, grid)
    _nyquist_warning(kmax, grid, patch)
    st = strain_state(disp, patch, grid)
    _field(out, "eps0", "tensor2sym", st.eps0, grid)
    _field(out, "eps1", "tensor2sym", st.eps1, grid)
    report = {"max_eps0": float(np.max(np.abs(st.eps0))), "max_eps1": float(np.max(np.abs(st.eps1)))}
    zs = args.oracle if args.oracle is not None else cfg.strain.oracle_z
    if zs:
        if not isinstance(disp.u, AnalyticField):
            raise ShellError("the strain oracle needs an analytic displacement preset")
        # interior cell centres; analytic inputs make the strain exact pointwise
        n = max(cfg.strain.oracle_probe, 4)
        pa = [lo + (np.arange(n) + 0.5) * (hi - lo) / n for lo, hi in grid.domain]
        sub = Grid((n, n), ((pa[0][0], pa[0][-1]), (pa[1][0], pa[1][-1])))
        st_p = strain_state(disp, patch, sub)
        a1, a2 = sub.mesh()
        errs, e33, ea3 = [], [], []
        for z in zs:
            o = lie_strain_3d_oracle(disp, patch, a1, a2, z, eps=cfg.strain.oracle_eps)
            errs.append(float(np.max(np.abs(o[:2, :2] - strain_at_z(st_p, z)))))
            e33.append(float(np.max(np.abs(o[2, 2]))))
            ea3.append(float(np.max(np.abs(o[:2, 2]))))
        slope = None
        good = [(z, e) for z, e in zip(zs, errs) if z > 0 and e > 0]
        if len(good) >= 2:
            slope = float(np.polyfit(np.log([g[0] for g in good]), np.log([g[1] for g in good]), 1)[0])
        report["oracle"] = {"z": list(zs), "tangential_error": errs, "slope": slope,
                            "max_eps33": e33, "max_eps_a3": ea3}
    _emit(report, out, "strain.json")
    return EXIT_OK


def cmd_resultants(cfg, out, args):
    patch, grid, mat = _setup(cfg)
    disp, kmax = displacement_from_config(cfg.displacement, patch, grid)
    _nyquist_warning(kmax, grid, patch)
    st = strain_state(disp, patch, grid)
    N, M = resultants(st, mat, patch, grid)
    q, m = load_preset(cfg.loads, mat, grid)
    Q = shear_resultant(M, patch, grid, m)
    _field(out, "N", "tensor2", N, grid)
    _field(out, "M", "tensor2", M, grid)
    _field(out, "Q", "vector2", Q, grid)
    res = resultant_constraint_residual(ResultantState(N, M, Q), geometry(patch, grid).kappa)
    scale = max(float(np.max(np.abs(N))), float(np.max(np.abs(M))), 1.0)
    worst = float(np.max(np.abs(res)))
    report = {"max_constraint_residual": worst, "scale": scale, "tol": cfg.resultants.tol,
              "pass": worst <= cfg.resultants.tol * scale}
    _emit(report, out, "resultants.json")
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_residual(cfg, out, args):
    patch, grid, mat = _setup(cfg)
    disp, kmax = displacement_from_config(cfg.displacement, patch, grid)
    _nyquist_warning(kmax, grid, patch)
    acc, _ = displacement_from_config(cfg.acceleration, patch, grid)
    q, m = load_preset(cfg.loads, mat, grid)
    loads = LoadState(q, m)
    rc = covariant_eom_residual(disp, acc, mat, patch, grid, loads)
    rl = classical_eom_residual(disp, acc, mat, patch, grid, loads)
    _field(out, "residual_tangential", "vector2", rc.tangential, grid)
    _field(out, "residual_normal", "scalar", rc.normal, grid)
    diff = max(float(np.max(np.abs(rc.tangential - rl.tangential))),
               float(np.max(np.abs(rc.normal - rl.normal))))
    report = {"max_covariant": float(rc.max_abs()), "max_classical": float(rl.max_abs()),
              "max_difference": diff}
    _emit(report, out, "residual.json")
    return EXIT_OK


def _radius(cfg):
    p = cfg.surface.params
    return float(p.get("R", 1.0))


def cmd_dispersion(cfg, out, args):
    opt = cfg.dispersion
    mat = build_material(cfg.material)
    R = _radius(cfg)
    rows = []
    ks = opt.k if opt.kind in ("plate_bending", "cylinder_axisymmetric") else ([0.0] if opt.k else [])
    for k in ks:
        num = numeric_dispersion(opt.kind, mat, k=k, n=opt.n, R=R)
        ana = dispersion_analytic(opt.kind, mat, k=k, R=R, coupled=opt.coupled)
        nums = num if isinstance(num, list) else [num]
        anas = np.atleast_1d(ana)
        for mode, a in zip(nums, anas):
            a = float(a)
            rows.append((float(k), mode.omega, a, abs(mode.omega - a) / a if a else abs(mode.omega)))
    header = ("k", "omega_numeric", "omega_analytic", "rel_err")
    target = sys.stdout if out is None else open(out / "dispersion.csv", "w", newline="")
    try:
        wr = csv.writer(target)
        wr.writerow(header)
        for r in rows:
            wr.writerow([repr(x) for x in r])
    finally:
        if out is not None:
            target.close()
    if out is not None:
        print((out / "dispersion.csv").read_text(), end="")
    if opt.tol is not None and any(r[3] > opt.tol for r in rows):
        return EXIT_FAIL
    return EXIT_OK


def cmd_simulate(cfg, out, args):
    patch, grid, mat = _setup(cfg)
    opt = cfg.simulate
    disp, _ = displacement_from_config(cfg.displacement, patch, grid)
    R = _radius(cfg)
    omega = float(np.max(dispersion_analytic(opt.mode, mat, k=opt.k, R=R, coupled=True)))
    period = 2 * np.pi / omega
    dt = opt.dt if opt.dt is not None else period / opt.dt_per_period
    steps = opt.steps if opt.steps is not None else int(round(opt.periods * period / dt))
    q, m = load_preset(cfg.loads, mat, grid)
    state = ShellState.at_rest(disp, grid)
    t, en, pv, final = simulate(state, mat, patch, grid, dt, steps, LoadState(q, m))
    if out is not None:
        with open(out / "energy.csv", "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(("step", "t", "energy", "w_mean"))
            for i in range(len(t)):
                wr.writerow((i, repr(float(t[i])), repr(float(en[i])), repr(float(pv[i]))))
        _field(out, "u_final", "vector2", final.disp.u, grid)
        _field(out, "w_final", "scalar", final.disp.w, grid)
    drift = float(np.max(np.abs(en - en[0])) / en[0]) if en[0] > 0 else float(np.max(np.abs(en)))
    report = {"dt": dt, "steps": steps, "period_reference": period, "energy_drift": drift}
    try:
        report["period_measured"] = measured_period(t, pv)
        report["period_error"] = abs(report["period_measured"] / period - 1)
    except ValueError:
        report["period_measured"] = None
    report["pass"] = drift <= opt.energy_tol
    _emit(report, out, "simulate.json")
    return EXIT_OK if report["pass"] else EXIT_FAIL


COMMANDS = {
    "check-geometry": cmd_check_geometry,
    "strain": cmd_strain,
    "resultants": cmd_resultants,
    "residual": cmd_residual,
    "dispersion": cmd_dispersion,
    "simulate": cmd_simulate,
}


def _zlist(text):
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser():
    ap = argparse.ArgumentParser(prog="shellframes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", nargs="?", help="scenario config (JSON or YAML)")
        sp.add_argument("--out", type=Path, default=None, help="output directory")
        if name == "strain":
            sp.add_argument("--oracle", type=_zlist, default=None, help="comma-separated z probes")
        if name == "check-geometry":
            sp.add_argument("--suite", action="store_true", help="check all five canonical surfaces")
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    out = args.out
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "check-geometry" and args.suite:
            return check_geometry_suite(out)
        if args.config is None:
            print("error: a config file is required", file=sys.stderr)
            return EXIT_BAD_INPUT
        try:
            cfg = load_config(args.config)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        except ValidationError as exc:
            print(f"error: invalid config:\n{exc}", file=sys.stderr)
            return EXIT_FAIL
        except Exception as exc:  # JSON/YAML syntax
            print(f"error: cannot parse config: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        return COMMANDS[args.command](cfg, out, args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except FieldFileError as exc:
        print(f"error: bad input file: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ShellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
