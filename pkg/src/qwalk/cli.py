"""Command-line front end: parse a run configuration, dispatch to the
experiment drivers, and serialize results to CSV plus a JSON summary.

Configs can come from an INI file (section ``[qwalk]``, keys named like the
long flags) with command-line flags taking precedence.  All floating-point
output uses 17 significant digits so files round-trip losslessly.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .core import CoinField, WalkerState
from .experiments import (
    run_cycle_spectrum,
    run_defect_scan,
    run_disorder_rabi,
    run_gap_scaling,
    run_interface_evolution,
    run_rabi_transport,
    run_wire_dynamics,
)
from .analytic import eigenstate_residual, rabi_gap_prediction, wire_spectrum
from .spectral import diagonalize

__all__ = ["main"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

#: option names whose values are angles (eligible for --pi-units scaling)
ANGLE_KEYS = {
    "theta",
    "theta_minus",
    "theta_plus",
    "theta_a",
    "theta_b",
    "theta_a_min",
    "theta_a_max",
    "theta_min",
    "theta_max",
    "delta",
    "zeta",
    "sigma",
}


def fmt(x: float) -> str:
    """Format a float with 17 significant digits (lossless round-trip)."""
    return f"{x:.17g}"


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _write_summary(out_dir: Path, command: str, config: dict, derived: dict) -> None:
    record = {
        "command": command,
        "config": config,
        "derived": derived,
        "qwalk_version": __version__,
        "schema_version": SCHEMA_VERSION,
    }
    with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def _trajectory_rows(traj: np.ndarray, coords: np.ndarray):
    for t in range(traj.shape[0]):
        for i, x in enumerate(coords):
            yield (t, int(x), float(traj[t, i]))


def _max_workers() -> int:
    env = os.environ.get("QWALK_THREADS", "")
    try:
        n = int(env)
    except ValueError:
        n = 0
    return max(1, n) if n else 1


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_simulate(args, out_dir: Path, config: dict) -> dict:
    scenario = args.scenario
    if scenario == "interface":
        run = run_interface_evolution(
            args.theta_minus, args.theta_plus, args.delta, args.zeta, args.sigma,
            steps=args.steps,
        )
        traj, coords = run.trajectory, run.coordinates
        derived = {
            "window_radius": run.window_radius,
            "central_window_final": float(run.central_window[-1]),
        }
    elif scenario == "homogeneous":
        run = run_interface_evolution(
            args.theta, args.theta, args.delta, args.zeta, args.sigma, steps=args.steps
        )
        traj, coords = run.trajectory, run.coordinates
        derived = {}
    elif scenario == "defect":
        from .core import Geometry, evolve

        geometry = Geometry.line(args.steps)
        fld = CoinField.single_defect(
            geometry, args.theta_a, args.theta_b, args.delta, args.zeta, args.sigma
        )
        state = WalkerState.basis_state(geometry, 0, (1 / np.sqrt(2), 1j / np.sqrt(2)))
        _, traj = evolve(state, fld, args.steps, record=True)
        coords = geometry.coordinates()
        derived = {}
    elif scenario == "wire":
        run = run_wire_dynamics(
            args.size, args.theta, args.end_sign_left, args.end_sign_right,
            steps=args.steps,
        )
        traj, coords = run.trajectory, run.coordinates
        derived = {"return_peak_step": int(np.argmax(run.return_probability[5:]) + 5)}
    else:
        raise ValueError(f"unknown scenario {scenario!r}")

    _write_csv(out_dir / "trajectory.csv", ["t", "x", "p"], _trajectory_rows(traj, coords))
    _write_csv(
        out_dir / "final_distribution.csv",
        ["x", "p"],
        ((int(x), float(p)) for x, p in zip(coords, traj[-1])),
    )
    derived["total_probability_final"] = float(traj[-1].sum())
    return derived


def _cmd_spectrum(args, out_dir: Path, config: dict) -> dict:
    grid = np.linspace(args.theta_a_min, args.theta_a_max, args.points)
    spec = run_cycle_spectrum(
        args.size, args.segment, args.theta_b, args.delta, args.zeta, args.sigma,
        theta_a_grid=grid,
    )
    rows = []
    for gi, ta in enumerate(spec.theta_a_grid):
        for idx in range(spec.omegas.shape[1]):
            rows.append((float(ta), idx, float(spec.omegas[gi, idx]), float(spec.iprs[gi, idx])))
    _write_csv(out_dir / "sweep.csv", ["theta_A", "index", "omega", "ipr"], rows)
    return {"grid_points": int(len(grid)), "matrix_dim": int(2 * args.size)}


def _cmd_rabi(args, out_dir: Path, config: dict) -> dict:
    analysis = run_rabi_transport(
        args.size, args.theta, steps=args.steps, keep_trajectory=args.save_trajectory
    )
    _write_csv(
        out_dir / "rabi.csv",
        ["t", "p_L", "p_R"],
        ((t, float(analysis.p_left[t]), float(analysis.p_right[t]))
         for t in range(len(analysis.p_left))),
    )
    if args.save_trajectory:
        coords = analysis.psi_left.geometry.coordinates()
        _write_csv(out_dir / "trajectory.csv", ["t", "x", "p"],
                   _trajectory_rows(analysis.trajectory, coords))
    pred = rabi_gap_prediction(args.theta, args.size)
    return {
        "omega_pair": list(analysis.omega_pair),
        "delta_omega": analysis.delta_omega,
        "period_estimate": analysis.period_estimate,
        "period_predicted": analysis.period_predicted,
        "confinement": analysis.confinement,
        "max_center_probability": float(analysis.center_probability.max()),
        "delta_omega_analytic": pred.delta_omega,
        "delta_omega_approx": pred.delta_omega_approx,
        "delta_omega_main_text_form": pred.delta_omega_main_text,
    }


def _cmd_gap_scaling(args, out_dir: Path, config: dict) -> dict:
    thetas = [float(t) for t in args.thetas]
    rows = run_gap_scaling(thetas, range(args.l_min, args.l_max + 1), args.zeta_size)
    _write_csv(
        out_dir / "gap_scaling.csv",
        ["theta", "L", "omega_exact", "omega_approx", "omega_diag"],
        (
            (r.theta, r.L, r.omega_exact, r.omega_approx,
             r.omega_diag if r.omega_diag is not None else float("nan"))
            for r in rows
        ),
    )
    return {"rows": len(rows)}


def _cmd_analytic_check(args, out_dir: Path, config: dict) -> dict:
    field = CoinField.wire(args.size, args.theta, -1, -1, 0.0, args.zeta, args.sigma)
    numeric = diagonalize(field)
    analytic = wire_spectrum(args.theta, args.size, args.zeta, args.sigma)
    wa = np.array([w for w, _, _ in analytic])
    wn = numeric.quasienergies
    order = np.argsort(wa, kind="stable")
    rows = []
    worst_residual = 0.0
    for rank, k in enumerate(order):
        w, v, label = analytic[k]
        res = eigenstate_residual(v, field, w)
        worst_residual = max(worst_residual, res)
        rows.append((float(w), float(wn[rank]), float(abs(w - wn[rank])), float(res), label))
    _write_csv(
        out_dir / "analytic_check.csv",
        ["omega_analytic", "omega_numeric", "abs_diff", "residual", "label"],
        rows,
    )
    max_dev = float(np.max(np.abs(np.sort(wa) - np.sort(wn))))
    return {
        "count_analytic": len(wa),
        "count_numeric": len(wn),
        "max_energy_deviation": max_dev,
        "max_eigenvector_residual": float(worst_residual),
    }


def _cmd_disorder(args, out_dir: Path, config: dict) -> dict:
    seeds = list(range(args.seed, args.seed + args.seeds))

    def one(seed: int):
        return run_disorder_rabi(
            args.size,
            (args.theta_min, args.theta_max),
            seed=seed,
            steps=args.steps,
            initial_mode=args.initial_mode,
            keep_trajectory=args.save_trajectory and seed == args.seed,
        )

    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(s) for s in seeds]

    rows = []
    for r in results:
        if r.found_pair:
            a = r.analysis
            rows.append((r.seed, 1, a.delta_omega, a.period_predicted, a.confinement))
        else:
            rows.append((r.seed, 0, float("nan"), float("nan"), float("nan")))
    _write_csv(
        out_dir / "disorder.csv",
        ["seed", "found_pair", "delta_omega", "period", "confinement"],
        rows,
    )
    first = results[0]
    if args.save_trajectory and first.found_pair and first.analysis.trajectory is not None:
        coords = first.analysis.psi_left.geometry.coordinates()
        _write_csv(out_dir / "trajectory.csv", ["t", "x", "p"],
                   _trajectory_rows(first.analysis.trajectory, coords))
        _write_csv(
            out_dir / "rabi.csv",
            ["t", "p_L", "p_R"],
            ((t, float(first.analysis.p_left[t]), float(first.analysis.p_right[t]))
             for t in range(len(first.analysis.p_left))),
        )
    n_found = sum(r.found_pair for r in results)
    periods = [r.analysis.period_predicted for r in results if r.found_pair]
    return {
        "realizations": len(results),
        "pairs_found": int(n_found),
        "period_min": float(np.min(periods)) if periods else None,
        "period_max": float(np.max(periods)) if periods else None,
        "period_std": float(np.std(periods)) if periods else None,
    }


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="1D discrete-time topological quantum walk toolkit",
    )
    parser.add_argument("--version", action="version", version=f"qwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--config", default=None, help="INI config file ([qwalk] section)")
        p.add_argument("--dump-config", action="store_true",
                       help="print the effective config and exit without running")
        p.add_argument("--pi-units", action="store_true",
                       help="interpret angle options as multiples of pi")

    p = sub.add_parser("simulate", help="time evolution of a walk scenario")
    common(p)
    p.add_argument("--scenario", default="interface",
                   choices=["interface", "homogeneous", "defect", "wire"])
    p.add_argument("--theta", type=float, default=np.pi / 4)
    p.add_argument("--theta-minus", type=float, default=-np.pi / 4)
    p.add_argument("--theta-plus", type=float, default=np.pi / 4)
    p.add_argument("--theta-a", type=float, default=-np.pi / 3)
    p.add_argument("--theta-b", type=float, default=np.pi / 4)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--steps", type=int, default=150)
    p.add_argument("--size", type=int, default=21, help="wire size (wire scenario)")
    p.add_argument("--end-sign-left", type=int, default=1, choices=[-1, 1])
    p.add_argument("--end-sign-right", type=int, default=1, choices=[-1, 1])

    p = sub.add_parser("spectrum", help="two-segment cycle quasienergies vs theta_A")
    common(p)
    p.add_argument("--size", type=int, default=42)
    p.add_argument("--segment", type=int, default=21, help="theta_A segment length d")
    p.add_argument("--theta-b", type=float, default=np.pi / 4)
    p.add_argument("--delta", type=float, default=-np.pi / 2)
    p.add_argument("--zeta", type=float, default=-np.pi / 2)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--theta-a-min", type=float, default=-np.pi / 2)
    p.add_argument("--theta-a-max", type=float, default=0.0)
    p.add_argument("--points", type=int, default=101)

    p = sub.add_parser("rabi", help="Rabi transport on a reflecting wire")
    common(p)
    p.add_argument("--size", type=int, default=21)
    p.add_argument("--theta", type=float, default=np.pi / 10)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--save-trajectory", action="store_true")

    p = sub.add_parser("gap-scaling", help="gap energy vs wire half-length")
    common(p)
    p.add_argument("--thetas", type=float, nargs="+",
                   default=[np.pi / 20, np.pi / 6, np.pi / 4, np.pi / 3, 2 * np.pi / 5])
    p.add_argument("--l-min", type=int, default=4)
    p.add_argument("--l-max", type=int, default=14)
    p.add_argument("--zeta-size", type=int, default=1, choices=[1, 2])

    p = sub.add_parser("analytic-check", help="analytic wire spectrum vs diagonalization")
    common(p)
    p.add_argument("--size", type=int, default=21)
    p.add_argument("--theta", type=float, default=np.pi / 10)
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)

    p = sub.add_parser("disorder", help="disordered-bulk Rabi robustness batch")
    common(p)
    p.add_argument("--size", type=int, default=21)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=np.pi / 5)
    p.add_argument("--seeds", type=int, default=50, help="number of realizations")
    p.add_argument("--seed", type=int, default=0, help="first RNG seed")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--initial-mode", default="pair", choices=["pair", "site"])
    p.add_argument("--save-trajectory", action="store_true")

    return parser


_COMMANDS = {
    "simulate": _cmd_simulate,
    "spectrum": _cmd_spectrum,
    "rabi": _cmd_rabi,
    "gap-scaling": _cmd_gap_scaling,
    "analytic-check": _cmd_analytic_check,
    "disorder": _cmd_disorder,
}

#: per-command option names that are angles, for --pi-units and config typing
_FLOAT_LIST_KEYS = {"thetas"}
_INT_KEYS = {"steps", "size", "points", "segment", "seeds", "seed", "l_min", "l_max",
             "zeta_size", "end_sign_left", "end_sign_right"}
_BOOL_KEYS = {"save_trajectory", "pi_units", "dump_config"}
_STR_KEYS = {"scenario", "initial_mode", "out_dir", "config"}


def _apply_config_file(args: argparse.Namespace, parser_defaults: dict, argv: list[str]) -> None:
    """Merge INI values under explicit command-line flags.

    A value from the file is used only when the flag was not given on the
    command line (flags win).  Unknown keys are rejected.
    """
    cp = configparser.ConfigParser()
    read = cp.read(args.config)
    if not read:
        raise ConfigError(f"config file {args.config!r} not found")
    if not cp.has_section("qwalk"):
        raise ConfigError("config file must contain a [qwalk] section")
    given = {tok.split("=")[0].lstrip("-").replace("-", "_")
             for tok in argv if tok.startswith("--")}
    for key, raw in cp.items("qwalk"):
        name = key.replace("-", "_")
        if name == "command":
            continue
        if not hasattr(args, name):
            raise ConfigError(f"unknown config key {key!r} for command {args.command!r}")
        if name in given:
            continue  # explicit flag wins
        if name in _INT_KEYS:
            value = int(raw)
        elif name in _BOOL_KEYS:
            value = cp.getboolean("qwalk", key)
        elif name in _FLOAT_LIST_KEYS:
            value = [float(tok) for tok in raw.split()]
        elif name in _STR_KEYS:
            value = raw
        else:
            value = float(raw)
        setattr(args, name, value)


class ConfigError(ValueError):
    pass


def _scale_angles(args: argparse.Namespace) -> None:
    if not getattr(args, "pi_units", False):
        return
    for name in ANGLE_KEYS:
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(args, name, getattr(args, name) * np.pi)
    if hasattr(args, "thetas"):
        args.thetas = [t * np.pi for t in args.thetas]


def _effective_config(args: argparse.Namespace) -> dict:
    skip = {"command", "config", "dump_config", "out_dir"}
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, list):
            cfg[key] = [float(v) for v in value]
        elif isinstance(value, (bool, int, str)) or value is None:
            cfg[key] = value
        else:
            cfg[key] = float(value)
    return cfg


def _dump_config(args: argparse.Namespace) -> str:
    lines = ["[qwalk]", f"command = {args.command}"]
    cfg = _effective_config(args)
    # pi-units were already folded into the angle values
    cfg["pi_units"] = False
    for key, value in cfg.items():
        if value is None:
            continue
        if isinstance(value, bool):
            text = str(value).lower()
        elif isinstance(value, float):
            text = fmt(value)
        elif isinstance(value, list):
            text = " ".join(fmt(float(v)) for v in value)
        else:
            text = str(value)
        lines.append(f"{key.replace('_', '-')} = {text}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit code 2 for bad args
        return int(exc.code or 0)

    try:
        if args.config:
            _apply_config_file(args, {}, argv)
        _scale_angles(args)
    except (ConfigError, ValueError) as err:
        json.dump({"error": str(err), "kind": "config"}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_CONFIG

    if args.dump_config:
        sys.stdout.write(_dump_config(args))
        return EXIT_OK

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = _effective_config(args)
    try:
        derived = _COMMANDS[args.command](args, out_dir, config)
    except Exception as err:  # numerical failure: machine-readable record
        record = {"error": str(err), "kind": type(err).__name__, "command": args.command}
        json.dump(record, sys.stderr)
        sys.stderr.write("\n")
        try:
            with open(out_dir / "error.json", "w", encoding="utf-8") as fh:
                json.dump(record, fh, indent=2)
        except OSError:
            pass
        return EXIT_NUMERIC
    _write_summary(out_dir, args.command, config, derived)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
