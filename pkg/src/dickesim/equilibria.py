"""Fixed points of the flow, their stability, and the energy-well structure.

Every equilibrium has p = P = 0.  The field coordinate is eliminated through
q*(Q) = -(gamma Q sqrt(4-Q^2) + sqrt(2 omega0) alpha)/omega, which leaves one
scalar equation in Q on (-2, 2).  That equation is solved by sign-change
bracketing on a dense grid followed by Brent/Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .model import (
    ModelParams,
    PhaseState,
    effective_potential_hessian,
    effective_potential_minimizer,
    flow_jacobian,
    hamiltonian,
)

# Root scan: 1e5 uniform Q samples; oversampling guards against close root
# pairs near the critical deformation.
SCAN_POINTS = 100_000
SCAN_MARGIN = 1e-9
ROOT_RESIDUAL_TOL = 1e-13
ROOT_DEDUP_TOL = 1e-8
# Eigenvalues with |real part| below this count as purely imaginary.
STABILITY_RE_TOL = 1e-8
# Minima whose energies agree to this are reported as degenerate.
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class Equilibrium:
    """A fixed point of the flow with its classification.

    kind is one of {"minimum", "saddle", "maximum"} from the Hessian of the
    effective potential; stable comes from the eigenvalues of the linearized
    flow; well is "left" (Q < 0), "right" (Q > 0) or "center" (Q = 0).
    """

    state: PhaseState
    energy: float
    kind: str
    stable: bool
    well: str
    degenerate: bool = False


@dataclass(frozen=True)
class WellStructure:
    minima: tuple[Equilibrium, ...]
    saddle: Equilibrium | None
    ground: Equilibrium
    esqpt_energy: float | None
    second_well_energy: float | None


def _q_at_fixed_point(params: ModelParams, Q):
    """Field coordinate of a fixed point as a function of Q (from dp/dt = 0)."""
    rad = np.sqrt(np.maximum(4.0 - Q * Q, 0.0))
    return -(params.gamma * Q * rad
             + math.sqrt(2.0 * params.omega0) * params.alpha) / params.omega


def _reduced_equation(params: ModelParams, Q):
    """Residual of dP/dt = 0 on the p = P = 0 slice with q eliminated.

    Vanishes exactly at the fixed points; equals minus the Q-derivative of
    the effective potential on the P = 0 line.
    """
    rad = np.sqrt(np.maximum(4.0 - Q * Q, 0.0))
    q = _q_at_fixed_point(params, Q)
    return params.gamma * q * (2.0 * Q * Q - 4.0) / (params.omega0 * rad) - Q


def _reduced_derivative(params: ModelParams, Q: float) -> float:
    """d/dQ of the reduced equation (for the Newton polish)."""
    w, w0, g = params.omega, params.omega0, params.gamma
    rad2 = 4.0 - Q * Q
    rad = math.sqrt(rad2)
    A = g * Q * rad / w0 + math.sqrt(2.0 / w0) * params.alpha
    A_Q = g * (rad - Q * Q / rad) / w0
    A_QQ = g * (-3.0 * Q / rad - Q ** 3 / (rad2 * rad)) / w0
    v_qq = 1.0 - (w0 / w) * (A_Q * A_Q + A * A_QQ)
    return -v_qq


def _polish_root(params: ModelParams, lo: float, hi: float) -> float:
    Q = brentq(lambda x: float(_reduced_equation(params, x)), lo, hi,
               xtol=1e-14, rtol=8.9e-16)
    for _ in range(8):
        g = float(_reduced_equation(params, Q))
        if abs(g) < ROOT_RESIDUAL_TOL:
            break
        dg = _reduced_derivative(params, Q)
        if abs(dg) < 1e-12:
            break
        step = g / dg
        if not (-2.0 < Q - step < 2.0):
            break
        Q -= step
    return Q


def _classify(params: ModelParams, Q: float) -> Equilibrium:
    q = float(_q_at_fixed_point(params, Q))
    state = PhaseState(q, 0.0, Q, 0.0)
    evals2 = np.linalg.eigvalsh(effective_potential_hessian(params, Q, 0.0))
    if np.all(evals2 > 0.0):
        kind = "minimum"
    elif np.all(evals2 < 0.0):
        kind = "maximum"
    else:
        kind = "saddle"
    evals4 = np.linalg.eigvals(flow_jacobian(params, state))
    stable = bool(np.max(np.abs(evals4.real)) < STABILITY_RE_TOL)
    if abs(Q) < 1e-12:
        well = "center"
    else:
        well = "right" if Q > 0 else "left"
    return Equilibrium(state=state, energy=hamiltonian(params, state),
                       kind=kind, stable=stable, well=well)


def find_equilibria(params: ModelParams) -> list[Equilibrium]:
    """All fixed points of the flow, ordered by increasing Q.

    At least one equilibrium always exists inside the disk.
    """
    grid = np.linspace(-2.0 + SCAN_MARGIN, 2.0 - SCAN_MARGIN, SCAN_POINTS)
    g = _reduced_equation(params, grid)
    roots: list[float] = []
    exact = np.flatnonzero(g == 0.0)
    roots.extend(float(grid[i]) for i in exact)
    sign_change = np.flatnonzero(g[:-1] * g[1:] < 0.0)
    for i in sign_change:
        roots.append(_polish_root(params, float(grid[i]), float(grid[i + 1])))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > ROOT_DEDUP_TOL:
            deduped.append(r)
    return [_classify(params, Q) for Q in deduped]


def _mark_degenerate_pair(minima: list[Equilibrium]) -> list[Equilibrium]:
    """Flag exactly degenerate minima, putting the Q > 0 representative first."""
    if (len(minima) == 2
            and abs(minima[0].energy - minima[1].energy) < DEGENERACY_TOL):
        pair = sorted(minima, key=lambda e: -e.state.Q)
        return [replace(e, degenerate=True) for e in pair]
    return sorted(minima, key=lambda e: e.energy)


def ground_state(params: ModelParams) -> Equilibrium:
    """The least-energy minimum.

    For the exactly degenerate case (alpha = 0, gamma > gamma_c) the two
    candidates tie; the Q > 0 representative is returned with its degenerate
    flag set, and both appear in `find_equilibria` / `well_structure`.
    """
    minima = [e for e in find_equilibria(params) if e.kind == "minimum"]
    return _mark_degenerate_pair(minima)[0]


def well_structure(params: ModelParams) -> WellStructure:
    """Minima, separating saddle, and the critical energies of the landscape.

    The saddle energy is the barrier top whose crossing merges the two wells
    (the excited-state critical energy); the higher minimum's energy marks
    where the second well appears.
    """
    eqs = find_equilibria(params)
    minima = _mark_degenerate_pair([e for e in eqs if e.kind == "minimum"])
    saddle = None
    if len(minima) == 2:
        q_lo = min(e.state.Q for e in minima)
        q_hi = max(e.state.Q for e in minima)
        between = [e for e in eqs
                   if e.kind == "saddle" and q_lo < e.state.Q < q_hi]
        if between:
            saddle = min(between, key=lambda e: e.energy)
    ground = minima[0]
    second = minima[1].energy if len(minima) == 2 else None
    return WellStructure(
        minima=tuple(minima),
        saddle=saddle,
        ground=ground,
        esqpt_energy=saddle.energy if saddle is not None else None,
        second_well_energy=second,
    )
