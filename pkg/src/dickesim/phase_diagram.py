"""Parameter-space analysis: critical deformation line, ground-state sweeps,
well-count classification of the (gamma, alpha) plane, and accessible-region
bitmaps on the atomic disk."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConvergenceError, DomainError
from .equilibria import ground_state, well_structure
from .model import ModelParams, effective_potential

# Initial bisection bracket for the critical deformation, matching the
# representable hardware range; expanded if the double-well region extends
# past it.
ALPHA_BRACKET_HI = 2.5
ALPHA_BRACKET_MAX = 40.0
CRITICAL_ALPHA_TOL = 1e-6

SWEEP_COLUMNS = ("varied", "q", "Q", "jz_over_j", "n", "energy")


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter ground-state sweep: hold `fixed`, vary the other over
    [lo, hi] with `count` points."""

    fixed: str  # "gamma" or "alpha"
    fixed_value: float
    lo: float
    hi: float
    count: int = 201
    omega: float = 1.0
    omega0: float = 1.0

    def validate(self) -> None:
        if self.fixed not in ("gamma", "alpha"):
            raise ValueError(f"fixed must be 'gamma' or 'alpha', got {self.fixed!r}")
        if not self.lo < self.hi:
            raise ValueError("sweep range must have lo < hi")
        if self.count < 2:
            raise ValueError("sweep needs at least 2 points")


@dataclass(frozen=True)
class PhaseDiagramCell:
    gamma: float
    alpha: float
    well_count: int
    ground_energy: float
    esqpt_energy: float | None
    alpha_c_here: float | None


@dataclass
class PhaseDiagram:
    cells: list[PhaseDiagramCell]
    # (gamma, alpha_c) vertices with alpha_c > 0; the negative-deformation
    # boundary is the mirror image by parity.
    critical_line: list[tuple[float, float]]


@dataclass
class AccessibleRegion:
    """Boolean bitmap of the atomic plane where the effective potential does
    not exceed the probe energy.  mask[i, j] refers to (Q[j], P[i])."""

    energy: float
    Q: np.ndarray
    P: np.ndarray
    mask: np.ndarray

    def component_count(self) -> int:
        """Number of disjoint lobes (4-connected flood fill)."""
        return int(ndimage.label(self.mask)[1])

    def component_labels(self) -> np.ndarray:
        return ndimage.label(self.mask)[0]


def _well_count(params: ModelParams) -> int:
    return len(well_structure(params).minima)


def critical_alpha(gamma: float, omega: float = 1.0, omega0: float = 1.0,
                   tol: float = CRITICAL_ALPHA_TOL) -> float | None:
    """Deformation strength where the double well collapses to a single one.

    Returns None for gamma <= gamma_c (no double-well region exists).  For
    gamma > gamma_c the boundary at negative deformation is -alpha_c by
    parity.  Bisection on the well count to |d alpha| < tol.
    """
    probe = ModelParams(gamma=gamma, alpha=0.0, omega=omega, omega0=omega0)
    if gamma <= probe.gamma_c():
        return None
    lo, hi = 0.0, ALPHA_BRACKET_HI
    while _well_count(ModelParams(gamma, hi, omega, omega0)) == 2:
        hi *= 2.0
        if hi > ALPHA_BRACKET_MAX:
            raise ConvergenceError(
                f"no single-well deformation found below {ALPHA_BRACKET_MAX}"
            )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _well_count(ModelParams(gamma, mid, omega, omega0)) == 2:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ground_state_sweep(spec: SweepSpec) -> np.ndarray:
    """Ground-state observables along the sweep.

    Returns an array of shape (count, 6) with columns
    (varied, q, Q, jz_over_j, n, energy), rows in varied-value order.
    """
    spec.validate()
    values = np.linspace(spec.lo, spec.hi, spec.count)
    rows = np.empty((spec.count, 6))
    for i, v in enumerate(values):
        if spec.fixed == "gamma":
            params = ModelParams(gamma=spec.fixed_value, alpha=float(v),
                                 omega=spec.omega, omega0=spec.omega0)
        else:
            params = ModelParams(gamma=float(v), alpha=spec.fixed_value,
                                 omega=spec.omega, omega0=spec.omega0)
        eq = ground_state(params)
        s = eq.state
        jz = 0.5 * (s.P * s.P + s.Q * s.Q) - 1.0
        n = 0.5 * (s.p * s.p + s.q * s.q)
        rows[i] = (v, s.q, s.Q, jz, n, eq.energy)
    return rows


def _default_workers() -> int:
    env = os.environ.get("DICKE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def classify_grid(gamma_range: tuple[float, float],
                  alpha_range: tuple[float, float],
                  resolution: int = 101,
                  workers: int | None = None) -> PhaseDiagram:
    """Well-count verdict on a (gamma, alpha) grid plus the traced critical
    line.

    Cells are evaluated row by row (optionally in parallel); assembly order
    is deterministic regardless of the worker count.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    g_lo, g_hi = gamma_range
    a_lo, a_hi = alpha_range
    if not (g_lo < g_hi and a_lo < a_hi):
        raise ValueError("ranges must be increasing")
    gammas = np.linspace(g_lo, g_hi, resolution)
    alphas = np.linspace(a_lo, a_hi, resolution)

    def row(gamma: float) -> list[PhaseDiagramCell]:
        try:
            a_c = critical_alpha(gamma)
        except ConvergenceError:
            a_c = None
        cells = []
        for a in alphas:
            ws = well_structure(ModelParams(gamma=gamma, alpha=float(a)))
            cells.append(PhaseDiagramCell(
                gamma=gamma, alpha=float(a),
                well_count=len(ws.minima),
                ground_energy=ws.ground.energy,
                esqpt_energy=ws.esqpt_energy,
                alpha_c_here=a_c,
            ))
        return cells

    n_workers = workers if workers is not None else _default_workers()
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_row = list(pool.map(row, (float(g) for g in gammas)))
    else:
        per_row = [row(float(g)) for g in gammas]

    cells = [c for row_cells in per_row for c in row_cells]
    line = [(float(g), row_cells[0].alpha_c_here)
            for g, row_cells in zip(gammas, per_row)
            if row_cells[0].alpha_c_here is not None]
    return PhaseDiagram(cells=cells, critical_line=line)


def accessible_region(params: ModelParams, energy: float,
                      resolution: int = 401) -> AccessibleRegion:
    """Bitmap of the (Q, P) disk where the effective potential is <= energy.

    Between the second-well bottom and the saddle the bitmap has two
    disjoint lobes; outside that energy window it is empty or connected.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    axis = np.linspace(-2.0, 2.0, resolution)
    Q, P = np.meshgrid(axis, axis)
    inside = Q * Q + P * P <= 4.0
    mask = np.zeros_like(inside)
    v = effective_potential(params, Q[inside], P[inside])
    mask[inside] = v <= energy
    return AccessibleRegion(energy=energy, Q=axis, P=axis, mask=mask)


def _raise_if_outside_disk(Q: float, P: float) -> None:
    if Q * Q + P * P > 4.0:
        raise DomainError("point outside the atomic disk")


def locate_component(region: AccessibleRegion, Q: float, P: float) -> int:
    """Label (1-based) of the lobe containing (Q, P); 0 if not accessible."""
    _raise_if_outside_disk(Q, P)
    labels = region.component_labels()
    i = int(np.argmin(np.abs(region.P - P)))
    j = int(np.argmin(np.abs(region.Q - Q)))
    return int(labels[i, j])
