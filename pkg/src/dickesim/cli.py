"""Command-line front end.

Subcommands: energy, evolve, ground-state, sweep, phase-diagram,
critical-alpha, lyapunov, poincare, shell-ic, reproduce.  Every run prints
one machine-readable JSON summary line to stdout; tabular artifacts go to
the --out file.  Exit codes: 0 success, 2 usage error, 3 domain error,
4 numerical non-convergence.

A flat key-value config file (INI-style, dotted sections) can preload any
flag; explicit flags override the file:

    model.gamma = 1.5
    model.alpha = 0.5
    integration.t_end = 300
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import reproduce as repro
from .chaos import LAMBDA_THRESHOLD, SectionPlane, lyapunov_max, poincare
from .equilibria import ground_state
from .errors import ConvergenceError, DomainError
from .integrate import IntegrationConfig, evolve
from .model import ModelParams, PhaseState, hamiltonian, observables
from .phase_diagram import (
    SweepSpec,
    classify_grid,
    critical_alpha,
    ground_state_sweep,
)
from .shell import ShellRequest, in_well_ic, solve_q_on_shell

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NONCONVERGENCE = 4


def _parse_state(text: str) -> PhaseState:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"--state expects q,p,Q,P; got {text!r}")
    return PhaseState(*(float(v) for v in parts))


def _parse_range(text: str) -> tuple[float, float]:
    lo, hi = (float(v) for v in text.split(","))
    return lo, hi


def load_config(path: str) -> dict[str, str]:
    """Flat `section.key = value` lines; '#' starts a comment.  The section
    prefix is dropped, so keys map one-to-one onto flag names."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.rsplit(".", 1)[-1].replace("-", "_")
            values[key] = value
    return values


def _apply_config(args: argparse.Namespace, config: dict[str, str]) -> None:
    converters = {
        "gamma": float, "alpha": float, "omega": float, "omega0": float,
        "state": _parse_state, "energy": float, "t_end": float,
        "sample_dt": float, "tol": float, "noise_sigma": float, "seed": int,
        "out": str, "format": str, "naming": str, "Q": float, "branch": str,
        "well": str, "vary": str, "lo": float, "hi": float, "count": int,
        "resolution": int, "gamma_range": _parse_range,
        "alpha_range": _parse_range, "plane": str, "plane_value": float,
        "direction": int, "t_total": float, "workers": int, "outdir": str,
    }
    for key, raw in config.items():
        if key not in converters:
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, converters[key](raw))


def _model(args, require_gamma: bool = True) -> ModelParams:
    if require_gamma and args.gamma is None:
        raise ValueError("--gamma is required")
    return ModelParams(
        gamma=args.gamma if args.gamma is not None else 0.0,
        alpha=args.alpha if args.alpha is not None else 0.0,
        omega=args.omega if args.omega is not None else 1.0,
        omega0=args.omega0 if args.omega0 is not None else 1.0,
    )


def _integration_config(args) -> IntegrationConfig:
    cfg = IntegrationConfig()
    if args.t_end is not None:
        cfg.t_end = args.t_end
    if args.sample_dt is not None:
        cfg.sample_dt = args.sample_dt
    if args.tol is not None:
        cfg.rel_tol = cfg.abs_tol = args.tol
    if getattr(args, "noise_sigma", None) is not None:
        cfg.noise_sigma = args.noise_sigma
    if getattr(args, "seed", None) is not None:
        cfg.rng_seed = args.seed
    return cfg


def _emit(summary: dict) -> None:
    print(json.dumps(summary))


def _out_path(args, default: str) -> str:
    return args.out if args.out is not None else default


def _cmd_energy(args) -> int:
    params = _model(args)
    if args.state is None:
        raise ValueError("energy requires --state q,p,Q,P")
    e = hamiltonian(params, args.state)
    _emit({"command": "energy", "gamma": params.gamma, "alpha": params.alpha,
           "energy": e})
    return EXIT_OK


def _cmd_evolve(args) -> int:
    params = _model(args)
    if args.state is None:
        raise ValueError("evolve requires --state q,p,Q,P")
    cfg = _integration_config(args)
    traj = evolve(params, args.state, cfg)
    out = _out_path(args, "evolve.csv")
    naming = args.naming or "canonical"
    if (args.format or "csv") == "json":
        cols = (["t", "q", "p", "Q", "P", "E"] if naming == "canonical"
                else ["t", "I_L1", "V_C1", "I_L2", "V_C2", "E"])
        payload = {
            "columns": cols,
            "rows": np.column_stack(
                [traj.times, traj.states, traj.energies]).tolist(),
        }
        with open(out, "w", newline="") as fh:
            json.dump(payload, fh)
            fh.write("\n")
    else:
        traj.write_csv(out, naming=naming)
    _emit({"command": "evolve", "samples": len(traj.times),
           "drift": traj.drift, "terminated_early": traj.terminated_early,
           "out": out})
    return EXIT_OK


def _cmd_ground_state(args) -> int:
    params = _model(args)
    eq = ground_state(params)
    obs = observables(params, eq.state)
    summary = {
        "q": eq.state.q, "p": eq.state.p, "Q": eq.state.Q, "P": eq.state.P,
        "energy": eq.energy, "atomic_inversion": obs.atomic_inversion,
        "mean_photon": obs.mean_photon, "kind": eq.kind,
        "degenerate": eq.degenerate,
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    _emit(summary)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.vary is None:
        raise ValueError("sweep requires --vary {gamma,alpha}")
    fixed = "alpha" if args.vary == "gamma" else "gamma"
    fixed_value = args.alpha if fixed == "alpha" else args.gamma
    if fixed_value is None:
        raise ValueError(f"sweep requires --{fixed} for the held parameter")
    spec = SweepSpec(
        fixed=fixed, fixed_value=fixed_value,
        lo=args.lo if args.lo is not None else -0.5,
        hi=args.hi if args.hi is not None else 0.5,
        count=args.count if args.count is not None else 201,
        omega=args.omega if args.omega is not None else 1.0,
        omega0=args.omega0 if args.omega0 is not None else 1.0,
    )
    rows = ground_state_sweep(spec)
    out = _out_path(args, "sweep.csv")
    with open(out, "w", newline="") as fh:
        fh.write("varied,q,Q,jz_over_j,n,energy\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    _emit({"command": "sweep", "fixed": fixed, "fixed_value": fixed_value,
           "vary": args.vary, "rows": len(rows), "out": out})
    return EXIT_OK


def _cmd_phase_diagram(args) -> int:
    gr = args.gamma_range if args.gamma_range is not None else (0.0, 2.0)
    ar = args.alpha_range if args.alpha_range is not None else (-2.0, 2.0)
    res = args.resolution if args.resolution is not None else 101
    diagram = classify_grid(gr, ar, res, workers=args.workers)
    out = _out_path(args, "phase_diagram.csv")
    with open(out, "w", newline="") as fh:
        fh.write("gamma,alpha,wells,E0,E_esqpt\n")
        for c in diagram.cells:
            esqpt = f"{c.esqpt_energy:.17g}" if c.esqpt_energy is not None else ""
            fh.write(f"{c.gamma:.17g},{c.alpha:.17g},{c.well_count},"
                     f"{c.ground_energy:.17g},{esqpt}\n")
    _emit({"command": "phase-diagram", "cells": len(diagram.cells),
           "critical_line_points": len(diagram.critical_line), "out": out})
    return EXIT_OK


def _cmd_critical_alpha(args) -> int:
    if args.gamma is None:
        raise ValueError("--gamma is required")
    a_c = critical_alpha(args.gamma,
                         omega=args.omega if args.omega is not None else 1.0,
                         omega0=args.omega0 if args.omega0 is not None else 1.0)
    _emit({"gamma": args.gamma, "alpha_c": a_c})
    return EXIT_OK


def _cmd_lyapunov(args) -> int:
    params = _model(args)
    if args.state is not None:
        s0 = args.state
    elif args.energy is not None and args.well is not None:
        s0 = in_well_ic(params, args.energy, args.well)
    else:
        raise ValueError("lyapunov requires --state or (--energy and --well)")
    t_total = args.t_total if args.t_total is not None else 5000.0
    kwargs = {}
    if args.tol is not None:
        kwargs = {"rel_tol": args.tol, "abs_tol": args.tol}
    res = lyapunov_max(params, s0, t_total=t_total, **kwargs)
    _emit({"lambda_max": res.lambda_max, "label": res.label,
           "t_total": res.t_total, "converged": res.converged})
    return EXIT_OK


def _cmd_poincare(args) -> int:
    params = _model(args)
    if args.state is None:
        raise ValueError("poincare requires --state q,p,Q,P")
    plane = SectionPlane(
        coordinate=args.plane if args.plane is not None else "p",
        value=args.plane_value if args.plane_value is not None else 0.0,
        direction=args.direction if args.direction is not None else 1,
    )
    t_total = args.t_end if args.t_end is not None else 1000.0
    section = poincare(params, args.state, plane, t_total=t_total)
    out = _out_path(args, "poincare.csv")
    with open(out, "w", newline="") as fh:
        fh.write(",".join(section.labels) + "\n")
        for x, y in section.points:
            fh.write(f"{x:.17g},{y:.17g}\n")
    _emit({"command": "poincare", "crossings": len(section.points),
           "out": out})
    return EXIT_OK


def _cmd_shell_ic(args) -> int:
    params = _model(args)
    if args.energy is None:
        raise ValueError("shell-ic requires --energy")
    if args.well is not None:
        state = in_well_ic(params, args.energy, args.well)
    elif args.Q is not None:
        state = solve_q_on_shell(ShellRequest(
            params=params, energy=args.energy, Q=args.Q,
            branch=args.branch if args.branch is not None else "plus"))
    else:
        raise ValueError("shell-ic requires --Q (with optional --branch) "
                         "or --well")
    _emit({"q": state.q, "p": state.p, "Q": state.Q, "P": state.P,
           "energy_check": hamiltonian(params, state)})
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    outdir = args.outdir if args.outdir is not None else "."
    verdict = repro.run_reproduce(args.figure, outdir)
    _emit(verdict)
    return EXIT_OK


_COMMANDS = {
    "energy": _cmd_energy,
    "evolve": _cmd_evolve,
    "ground-state": _cmd_ground_state,
    "sweep": _cmd_sweep,
    "phase-diagram": _cmd_phase_diagram,
    "critical-alpha": _cmd_critical_alpha,
    "lyapunov": _cmd_lyapunov,
    "poincare": _cmd_poincare,
    "shell-ic": _cmd_shell_ic,
    "reproduce": _cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickesim",
        description="Classical deformed Dicke model toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--gamma", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--omega", type=float)
        p.add_argument("--omega0", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--naming", choices=("canonical", "electrical"))
        p.add_argument("--seed", type=int)

    for name in _COMMANDS:
        p = sub.add_parser(name)
        add_common(p)
        if name in ("energy", "evolve", "lyapunov", "poincare"):
            p.add_argument("--state", type=_parse_state,
                           metavar="q,p,Q,P")
        if name in ("evolve", "poincare"):
            p.add_argument("--t-end", dest="t_end", type=float)
            p.add_argument("--sample-dt", dest="sample_dt", type=float)
            p.add_argument("--tol", type=float)
            p.add_argument("--noise-sigma", dest="noise_sigma", type=float)
        if name == "lyapunov":
            p.add_argument("--t-total", dest="t_total", type=float)
            p.add_argument("--tol", type=float)
            p.add_argument("--energy", type=float)
            p.add_argument("--well", choices=("left", "right"))
        if name == "poincare":
            p.add_argument("--plane", choices=("q", "p", "Q", "P"))
            p.add_argument("--plane-value", dest="plane_value", type=float)
            p.add_argument("--direction", type=int, choices=(-1, 0, 1))
        if name == "sweep":
            p.add_argument("--vary", choices=("gamma", "alpha"))
            p.add_argument("--lo", type=float)
            p.add_argument("--hi", type=float)
            p.add_argument("--count", type=int)
        if name == "phase-diagram":
            p.add_argument("--gamma-range", dest="gamma_range",
                           type=_parse_range, metavar="LO,HI")
            p.add_argument("--alpha-range", dest="alpha_range",
                           type=_parse_range, metavar="LO,HI")
            p.add_argument("--resolution", type=int)
            p.add_argument("--workers", type=int)
        if name == "shell-ic":
            p.add_argument("--energy", type=float)
            p.add_argument("--Q", type=float)
            p.add_argument("--branch", choices=("plus", "minus"))
            p.add_argument("--well", choices=("left", "right"))
        if name == "reproduce":
            p.add_argument("figure", choices=repro.FIGURE_IDS)
            p.add_argument("--outdir")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, load_config(args.config))
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
