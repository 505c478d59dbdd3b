"""Command line driver: wires JSON configs to the experiment runners
and emits deterministic JSON (and CSV) artifacts.

Exit codes: 0 all assertions passed, 1 a physics assertion failed,
2 usage or config error.

TBDKIT_THREADS caps BLAS/OpenMP parallelism; it must take effect before
numpy loads, which is why this module touches the environment first and
the package root imports nothing heavy.
"""

import os


def _configure_threads():
    cap = os.environ.get("TBDKIT_THREADS")
    if cap:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, cap)


_configure_threads()

import argparse  # noqa: E402
import copy  # noqa: E402
import json  # noqa: E402
import math  # noqa: E402
import sys  # noqa: E402
from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from .currents import (  # noqa: E402
    coincidence_limit_term,
    conservation_sweep,
    divergence1,
    divergence2,
    extrapolate_to_zero,
    gauge_check,
    j_free_current,
    surviving_divergence_term,
)
from .kinematics import MassPair, projector, x_perp  # noqa: E402
from .operators import (  # noqa: E402
    Grid,
    TwoBodyDiracSystem,
    compatibility_residual,
    plane_wave_solutions,
    plane_wave_state,
    random_band_limited_field,
)
from .positivity import (  # noqa: E402
    empirical_boundary_consistent,
    flavor_boundary_radius,
    min_eigenvalue_map,
    scan,
    violation_radius,
)
from .potentials import (  # noqa: E402
    Constant,
    ConstantG,
    GaussianG,
    PolynomialG,
    TanhOfG,
    YukawaTanh,
    Zero,
    eval_dV_dP2,
)
from .serialize import write_csv, write_json  # noqa: E402
from .spinor_algebra import build_gammas, lift1, lift2  # noqa: E402
from .toy_model import a_product, evolve, norm_along_evolution, positivity_breakdown_search  # noqa: E402

SCHEMA = "tbdkit-config/1"
REPORT_SCHEMA = "tbdkit-report/1"


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Config parsing

_SQRT_4PI = math.sqrt(4.0 * math.pi)

DEFAULTS = {
    "compat": {
        "potential": {"kind": "tanh_of_g", "g": {"kind": "gaussian", "amplitude": 0.03, "width": 1.2}},
        "masses": {"m1": 1.0, "m2": 1.3},
        "P0": 3.0,
        "grid": {"n": 32, "L": 10.5},
        "n_fields": 10,
        "seed": 20240817,
        "p0_modes": [0.17, -0.4, 0.33],
        "waves_per_mode": 6,
        "max_index": 2,
        "realization": "analytic",
        "tolerance": 1e-8,
    },
    "claim1": {
        "masses": {"m1": 1.0, "m2": 1.3},
        "P0": 3.0,
        "v": 0.3,
        "p0_window": [-1.2, 0.5],
        "scan_points": 341,
        "free_tolerance": 1e-12,
        "match_tolerance": 1e-10,
        "magnitude_floor": 1e-3,
    },
    "conserve": {
        "masses": {"m1": 1.0, "m2": 1.3},
        "P0": 3.0,
        "v": 0.3,
        "p_spatial_a": [0.0, 0.0, 0.0],
        "p_spatial_b": [0.6, 0.0, 0.0],
        "p0_window": [-1.2, 0.5],
        "scan_points": 341,
        "epsilons": [1e-2, 1e-3, 1e-4],
        "green_choice": "advanced",
        "tolerance": 1e-8,
    },
    "kernel": {
        "flavor": "sazdjian",
        "potential": {"kind": "tanh_of_g", "g": {"kind": "gaussian", "amplitude": 0.9, "width": 1.0}},
        "P2_values": [4.0, 6.25, 9.0],
        "grid": {"n": 32, "L": 10.5},
        "expect_positive": True,
        "tolerance": 1e-12,
    },
    "radius": {
        "g1": _SQRT_4PI,
        "g2": _SQRT_4PI,
        "mu": 1.0,
        "P0": 1.0,
        "flavor": "sazdjian",
        "grid": {"n": 32, "L": 4.0},
        "agreement_tolerance": 1e-9,
    },
    "toy": {
        "sweep_rho_points": 100,
        "sweep_phi_points": 100,
    },
    "gauge": {
        "potential": {"kind": "yukawa_tanh", "g1": _SQRT_4PI, "g2": _SQRT_4PI, "mu": 1.0},
        "masses": {"m1": 1.0, "m2": 1.3},
        "P0": 2.0,
        "grid": {"n": 16, "L": 8.0},
        "seed": 7,
        "c": [0.37, 0.21, -0.4, 0.11],
        "a": [0.5, 0.0, 0.0, 0.0],
        "flavor": "sazdjian",
        "tolerance": 1e-10,
    },
    "selfcheck": {
        "seed": 12345,
    },
}


def _require_keys(obj, allowed, ctx):
    if not isinstance(obj, dict):
        raise ConfigError(f"{ctx} must be an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {ctx}: {sorted(unknown)}")


def parse_g(obj):
    _require_keys(obj, {"kind", "c", "coeffs", "amplitude", "width"}, "g spec")
    kind = obj.get("kind")
    if kind == "constant":
        return ConstantG(c=float(obj["c"]))
    if kind == "polynomial":
        return PolynomialG(coeffs=tuple(float(c) for c in obj["coeffs"]))
    if kind == "gaussian":
        return GaussianG(amplitude=float(obj["amplitude"]), width=float(obj["width"]))
    raise ConfigError(f"unknown g kind: {kind!r}")


def parse_potential(obj):
    _require_keys(obj, {"kind", "v", "g", "g1", "g2", "mu"}, "potential spec")
    kind = obj.get("kind")
    try:
        if kind == "zero":
            return Zero()
        if kind == "constant":
            return Constant(v=float(obj["v"]))
        if kind == "tanh_of_g":
            return TanhOfG(g=parse_g(obj["g"]))
        if kind == "yukawa_tanh":
            return YukawaTanh(g1=float(obj["g1"]), g2=float(obj["g2"]), mu=float(obj["mu"]))
    except KeyError as e:
        raise ConfigError(f"potential spec missing key {e}") from None
    raise ConfigError(f"unknown potential kind: {kind!r}")


def load_config(command: str, path):
    cfg = copy.deepcopy(DEFAULTS[command])
    if path is None:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    if data.get("schema") != SCHEMA:
        raise ConfigError(f"config schema must be {SCHEMA!r}")
    declared = data.get("command")
    if declared is not None and declared != command:
        raise ConfigError(f"config is for command {declared!r}, not {command!r}")
    _require_keys(data, set(cfg) | {"schema", "command"}, f"{command} config")
    for key, value in data.items():
        if key in ("schema", "command"):
            continue
        cfg[key] = value
    return cfg


def _grid(cfg):
    _require_keys(cfg["grid"], {"n", "L"}, "grid spec")
    return Grid(n=int(cfg["grid"]["n"]), L=float(cfg["grid"]["L"]))


def _masses(cfg):
    _require_keys(cfg["masses"], {"m1", "m2"}, "masses")
    return MassPair(m1=float(cfg["masses"]["m1"]), m2=float(cfg["masses"]["m2"]))


# ---------------------------------------------------------------------------
# Runners. Each returns (report_dict, extra_artifacts) with
# extra_artifacts a dict filename -> (header, rows).


def run_compat(cfg):
    grid = _grid(cfg)
    system = TwoBodyDiracSystem(_masses(cfg), parse_potential(cfg["potential"]), build_gammas("dirac"))
    rng = np.random.default_rng(int(cfg["seed"]))
    P = np.array([float(cfg["P0"]), 0.0, 0.0, 0.0])
    residuals = []
    for _ in range(int(cfg["n_fields"])):
        fld = random_band_limited_field(
            P,
            grid,
            rng,
            p0_values=tuple(cfg["p0_modes"]),
            waves_per_mode=int(cfg["waves_per_mode"]),
            max_index=int(cfg["max_index"]),
        )
        residuals.append(compatibility_residual(system, fld, cfg["realization"]))
    worst = max(residuals)
    report = {
        "residuals": residuals,
        "max_residual": worst,
        "tolerance": cfg["tolerance"],
        "realization": cfg["realization"],
        "passed": bool(worst <= cfg["tolerance"]),
    }
    return report, {}


def _first_equation_states(system, P, p_spatial, window, num):
    roots = plane_wave_solutions(
        system, P, p_spatial, p0_window=tuple(window), num=num, equations="first"
    )
    if not roots:
        raise RuntimeError(f"no dispersion roots found in window {window} at p = {p_spatial}")
    return [
        plane_wave_state(system, P, p_spatial, p0, basis[:, 0], solves="first")
        for p0, basis in roots
    ]


def run_claim1(cfg):
    masses = _masses(cfg)
    gam = build_gammas("dirac")
    m1, m2 = masses.m1, masses.m2

    # Free dichotomy arm: on-shell product solutions at two different
    # momenta; both divergences must vanish.
    free = TwoBodyDiracSystem(masses, Zero(), gam)
    Pa = np.array([m1 + m2, 0.0, 0.0, 0.0])
    root_a = 0.5 * (m1 - m2)
    qa = plane_wave_solutions(free, Pa, (0, 0, 0), (root_a - 0.1, root_a + 0.1), num=41)
    pb = (0.3, 0.0, 0.0)
    e1b = math.sqrt(m1**2 + 0.09)
    e2b = math.sqrt(m2**2 + 0.09)
    Pb = np.array([e1b + e2b, 0.0, 0.0, 0.0])
    root_b = 0.5 * (e1b - e2b)
    qb = plane_wave_solutions(free, Pb, pb, (root_b - 0.1, root_b + 0.1), num=41)
    if not qa or not qb:
        raise RuntimeError("free dispersion roots not found")
    sa = plane_wave_state(free, Pa, (0, 0, 0), qa[0][0], qa[0][1][:, 0])
    sb = plane_wave_state(free, Pb, pb, qb[0][0], qb[0][1][:, 0])
    jf = j_free_current(gam, sa, sb)
    free_max = float(
        max(np.max(np.abs(divergence1(jf))), np.max(np.abs(divergence2(jf))))
    )

    # Interacting arm: first-equation solutions at constant v; the
    # divergence is nonzero and matches the closed-form surviving term.
    v = float(cfg["v"])
    sysv = TwoBodyDiracSystem(masses, Constant(v=v), gam)
    P = np.array([float(cfg["P0"]), 0.0, 0.0, 0.0])
    states = _first_equation_states(sysv, P, (0, 0, 0), cfg["p0_window"], int(cfg["scan_points"]))
    if len(states) < 2:
        raise RuntimeError("need at least two dispersion roots for a state pair")
    sA, sB = states[0], states[1]
    d_direct = divergence1(j_free_current(gam, sA, sB))
    d_closed = surviving_divergence_term(sysv, sA, sB)
    match = float(np.max(np.abs(d_direct - d_closed)))
    magnitude = float(np.max(np.abs(d_direct)))
    report = {
        "free_max_divergence": free_max,
        "interacting_roots": [s.p1[0] - P[0] / 2 for s in states],
        "interacting_divergence": d_direct,
        "closed_form_divergence": d_closed,
        "route_mismatch": match,
        "magnitude": magnitude,
        "free_tolerance": cfg["free_tolerance"],
        "match_tolerance": cfg["match_tolerance"],
        "magnitude_floor": cfg["magnitude_floor"],
        "passed": bool(
            free_max <= cfg["free_tolerance"]
            and match <= cfg["match_tolerance"]
            and magnitude >= cfg["magnitude_floor"]
        ),
    }
    return report, {}


def run_conserve(cfg):
    masses = _masses(cfg)
    gam = build_gammas("dirac")
    sysv = TwoBodyDiracSystem(masses, Constant(v=float(cfg["v"])), gam)
    P = np.array([float(cfg["P0"]), 0.0, 0.0, 0.0])
    num = int(cfg["scan_points"])
    sA = _first_equation_states(sysv, P, tuple(cfg["p_spatial_a"]), cfg["p0_window"], num)[0]
    sB = _first_equation_states(sysv, P, tuple(cfg["p_spatial_b"]), cfg["p0_window"], num)[0]
    sweep = conservation_sweep(
        sysv, sA, sB, epsilons=tuple(cfg["epsilons"]), green_choice=cfg["green_choice"]
    )
    report = {
        "epsilons": sweep.epsilons,
        "green_choice": sweep.green_choice,
        "residuals1": sweep.residuals1,
        "residuals2": sweep.residuals2,
        "extrapolated_residual": sweep.max_extrapolated_residual,
        "tolerance": cfg["tolerance"],
        "passed": bool(sweep.max_extrapolated_residual <= cfg["tolerance"]),
    }
    return report, {}


def run_kernel(cfg):
    grid = _grid(cfg)
    gam = build_gammas("dirac")
    pot = parse_potential(cfg["potential"])
    rep = scan(cfg["flavor"], pot, cfg["P2_values"], grid, gam, tol=float(cfg["tolerance"]))
    expect = bool(cfg["expect_positive"])
    report = {
        "scan": rep,
        "expect_positive": expect,
        "passed": bool(rep.passed == expect),
    }
    eigmap = min_eigenvalue_map(cfg["flavor"], pot, rep.argmin_P2, grid, gam)
    radius = np.sqrt(grid.radius_sq)
    rows = []
    for i in range(grid.n):
        for j in range(grid.n):
            for k in range(grid.n):
                rows.append((i, j, k, float(radius[i, j, k]), float(eigmap[i, j, k])))
    extras = {"kernel_min_eigenvalues.csv": (("i", "j", "k", "r", "min_eigenvalue"), rows)}
    return report, extras


def run_radius(cfg):
    g1, g2, mu, P0 = (float(cfg[k]) for k in ("g1", "g2", "mu", "P0"))
    r_star = violation_radius(g1, g2, mu, P0)
    r_saz = flavor_boundary_radius("sazdjian", g1, g2, mu, P0)
    r_cra = flavor_boundary_radius("crater", g1, g2, mu, P0)
    grid = _grid(cfg)
    gam = build_gammas("dirac")
    pot = YukawaTanh(g1=g1, g2=g2, mu=mu)
    rep = scan(cfg["flavor"], pot, [P0**2], grid, gam)
    consistent = empirical_boundary_consistent(rep, grid)
    atol = float(cfg["agreement_tolerance"])
    report = {
        "analytic_radius": r_star,
        "sazdjian_boundary_radius": r_saz,
        "crater_boundary_radius": r_cra,
        "empirical_boundary_radius": rep.violation_radius_max,
        "grid_cell_diagonal": math.sqrt(3.0) * grid.h,
        "scan": rep,
        "passed": bool(
            abs(r_saz - r_cra) <= atol
            and abs(r_saz - r_star) <= atol
            and consistent
        ),
    }
    return report, {}


def run_toy(cfg):
    checks = {
        "plus_basis_norm": (a_product((1, 0), (1, 0)), 1.0),
        "minus_basis_norm": (a_product((0, 1), (0, 1)), -1.0),
        "null_vector_norm": (a_product((1, 1), (1, 1)), 0.0),
        "vn_norm_n3": (a_product((1, 1 - 1 / 3), (1, 1 - 1 / 3)), 1 - (1 - 1 / 3) ** 2),
    }
    t = 0.7
    ut = evolve((1, 0), t)
    rotation_exact = bool(ut[0] == math.cos(t) and ut[1] == -math.sin(t))
    closed_vs_direct = abs(
        norm_along_evolution(1.0, 0.25j, t) - a_product(evolve((1, 0.25j), t), evolve((1, 0.25j), t)).real
    )
    rhos = np.linspace(0.0, 0.99, int(cfg["sweep_rho_points"]))
    phis = np.linspace(0.0, 2.0 * np.pi, int(cfg["sweep_phi_points"]), endpoint=False)
    samples = [(1.0, rho * np.exp(1j * phi)) for rho in rhos for phi in phis]
    sweep = positivity_breakdown_search(samples)
    values_exact = all(val == expect for val, expect in checks.values())
    report = {
        "values": {k: v[0] for k, v in checks.items()},
        "values_exact": bool(values_exact),
        "rotation_solution_exact": rotation_exact,
        "closed_form_vs_direct": closed_vs_direct,
        "sweep": sweep,
        "passed": bool(
            values_exact
            and rotation_exact
            and closed_vs_direct <= 1e-12
            and sweep.n_survivors == 0
        ),
    }
    return report, {}


def run_gauge(cfg):
    grid = _grid(cfg)
    gam = build_gammas("dirac")
    system = TwoBodyDiracSystem(_masses(cfg), parse_potential(cfg["potential"]), gam)
    rng = np.random.default_rng(int(cfg["seed"]))
    P = np.array([float(cfg["P0"]), 0.0, 0.0, 0.0])
    fld = random_band_limited_field(P, grid, rng)
    tol = float(cfg["tolerance"])
    rel = gauge_check(system, fld, "relative_only", c=np.array(cfg["c"], dtype=float), flavor=cfg["flavor"], tol=tol)
    tot = gauge_check(system, fld, "total_dependent", a=np.array(cfg["a"], dtype=float), flavor=cfg["flavor"], tol=tol)
    report = {
        "relative_only": rel,
        "total_dependent": tot,
        "kernel_shift_magnitude": abs(tot.difference),
        "passed": bool(rel.passed and tot.passed),
    }
    return report, {}


def _algebra_battery():
    out = {}
    worst = 0.0
    for tag in ("dirac", "weyl"):
        gam = build_gammas(tag)
        for mu in range(4):
            for nu in range(4):
                anti = gam.gamma[mu] @ gam.gamma[nu] + gam.gamma[nu] @ gam.gamma[mu]
                target = 2.0 * gam.metric[mu, nu] * np.eye(4)
                worst = max(worst, float(np.max(np.abs(anti - target))))
            herm = gam.gamma[mu].conj().T - gam.gamma[0] @ gam.gamma[mu] @ gam.gamma[0]
            worst = max(worst, float(np.max(np.abs(herm))))
        worst = max(worst, float(np.max(np.abs(lift1(gam, 0) @ lift2(gam, 1) - lift2(gam, 1) @ lift1(gam, 0)))))
    rng = np.random.default_rng(3)
    proj_worst = 0.0
    for _ in range(50):
        P = np.zeros(4)
        P[0] = rng.uniform(1.5, 4.0)
        P[1:] = rng.uniform(-0.4, 0.4, 3) * P[0]
        pi = projector(P)
        proj_worst = max(proj_worst, float(np.max(np.abs(pi @ pi - pi))))
        x = rng.standard_normal(4)
        xp = x_perp(x, P)
        proj_worst = max(proj_worst, abs(xp[0] * P[0] - xp[1] * P[1] - xp[2] * P[2] - xp[3] * P[3]))
    out["clifford_hermiticity_max"] = worst
    out["projector_max"] = proj_worst
    out["passed"] = bool(worst <= 1e-12 and proj_worst <= 1e-12)
    return out


def run_selfcheck(cfg):
    seed = int(cfg["seed"])
    results = {}
    results["algebra"] = _algebra_battery()

    toy_rep, _ = run_toy({"sweep_rho_points": 50, "sweep_phi_points": 50})
    results["toy"] = {"passed": toy_rep["passed"], "n_survivors": toy_rep["sweep"].n_survivors}

    g = _SQRT_4PI
    r_star = violation_radius(g, g, 1.0, 1.0)
    r_saz = flavor_boundary_radius("sazdjian", g, g, 1.0, 1.0)
    r_cra = flavor_boundary_radius("crater", g, g, 1.0, 1.0)
    results["radius"] = {
        "analytic": r_star,
        "sazdjian": r_saz,
        "crater": r_cra,
        "passed": bool(abs(r_saz - r_cra) <= 1e-9 and abs(r_star - r_saz) <= 1e-9),
    }

    pot = YukawaTanh(g1=g, g2=g, mu=1.0)
    worst_rel = 0.0
    for r in (0.4, 0.8, 1.6):
        term = extrapolate_to_zero(
            [e**2 for e in (1e-2, 1e-3, 1e-4)],
            [coincidence_limit_term(pot, -(r**2), 2.0, e) for e in (1e-2, 1e-3, 1e-4)],
        ).real
        exact = 4.0 * 4.0 * eval_dV_dP2(pot, -(r**2), 4.0)
        worst_rel = max(worst_rel, abs(term - exact) / abs(exact))
    results["coincidence_term"] = {"max_relative_error": worst_rel, "passed": bool(worst_rel <= 1e-6)}

    claim1_rep, _ = run_claim1(DEFAULTS["claim1"])
    results["claim1"] = {
        "route_mismatch": claim1_rep["route_mismatch"],
        "magnitude": claim1_rep["magnitude"],
        "free_max_divergence": claim1_rep["free_max_divergence"],
        "passed": claim1_rep["passed"],
    }

    conserve_rep, _ = run_conserve(DEFAULTS["conserve"])
    results["conserve"] = {
        "extrapolated_residual": conserve_rep["extrapolated_residual"],
        "passed": conserve_rep["passed"],
    }

    gam = build_gammas("dirac")
    tanh_pot = TanhOfG(g=GaussianG(amplitude=0.9, width=1.0))
    rep_pos = scan("sazdjian", tanh_pot, [4.0, 9.0], Grid(n=8, L=6.0), gam)
    rep_neg = scan("sazdjian", pot, [1.0], Grid(n=16, L=4.0), gam)
    results["kernel"] = {
        "tanh_min_eigenvalue": rep_pos.min_eigenvalue,
        "yukawa_min_eigenvalue": rep_neg.min_eigenvalue,
        "yukawa_boundary_consistent": empirical_boundary_consistent(rep_neg, Grid(n=16, L=4.0)),
        "passed": bool(
            rep_pos.passed
            and not rep_neg.passed
            and empirical_boundary_consistent(rep_neg, Grid(n=16, L=4.0))
        ),
    }

    system = TwoBodyDiracSystem(
        MassPair(1.0, 1.3),
        TanhOfG(g=GaussianG(amplitude=0.03, width=1.2)),
        gam,
    )
    rng = np.random.default_rng(seed)
    fld = random_band_limited_field(np.array([3.0, 0.0, 0.0, 0.0]), Grid(n=16, L=10.5), rng)
    res_analytic = compatibility_residual(system, fld, "analytic")
    res_composed = compatibility_residual(system, fld, "composed")
    results["compat"] = {
        "analytic_residual_n16": res_analytic,
        "composed_residual_n16": res_composed,
        "passed": bool(res_analytic <= 1e-3 and res_composed <= 1e-10),
    }

    passed = all(section["passed"] for section in results.values())
    report = {"seed": seed, "results": results, "passed": bool(passed)}
    return report, {}


_RUNNERS = {
    "compat": run_compat,
    "claim1": run_claim1,
    "conserve": run_conserve,
    "kernel": run_kernel,
    "radius": run_radius,
    "toy": run_toy,
    "gauge": run_gauge,
    "selfcheck": run_selfcheck,
}

_HELP = {
    "compat": "compatibility identity residuals on random band-limited fields",
    "claim1": "free-current divergence dichotomy (free vs constant-v states)",
    "conserve": "completed-current conservation with regulator extrapolation",
    "kernel": "norm kernel construction and positivity scan",
    "radius": "analytic vs empirical violation radius for the Yukawa-tanh core",
    "toy": "indefinite-metric counterexample suite",
    "gauge": "restricted gauge transformations against the norm kernel",
    "selfcheck": "deterministic battery across all modules",
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tbdkit",
        description="two-body Dirac equation verification toolkit",
    )
    parser.add_argument("--version", action="version", version=f"tbdkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _HELP.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.command, args.config)
    except (ConfigError, OSError) as e:
        print(f"tbdkit {args.command}: config error: {e}", file=sys.stderr)
        return 2
    try:
        report, extras = _RUNNERS[args.command](cfg)
    except (ConfigError, ValueError, TypeError) as e:
        print(f"tbdkit {args.command}: invalid configuration: {e}", file=sys.stderr)
        return 2
    full = {
        "schema": REPORT_SCHEMA,
        "command": args.command,
        "config": cfg,
        "report": report,
        "passed": report["passed"],
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / f"{args.command}.json", full)
    for fname, (header, rows) in extras.items():
        write_csv(out / fname, header, rows)
    if not args.quiet:
        status = "PASS" if report["passed"] else "FAIL"
        print(f"tbdkit {args.command}: {status} (report: {out / (args.command + '.json')})")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
