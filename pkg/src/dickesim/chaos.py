"""Chaos diagnostics: largest Lyapunov exponent and Poincare sections.

The exponent comes from the two-trajectory Benettin method: a fiducial
trajectory and a nearby companion are co-integrated as one 8-dimensional
system, the separation is renormalized to its initial size on a fixed
cadence, and the accumulated log stretching factors give the running
estimate.  A verdict is only emitted when the running estimate has settled
(last-quartile scatter gate); otherwise the result is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853
from scipy.optimize import brentq

from .errors import SingularityError
from .model import SINGULARITY_EPS, ModelParams, PhaseState, _flow_scalar, flow

# Verdict threshold on lambda_max (1/time units) and Benettin defaults.
LAMBDA_THRESHOLD = 0.005
DEFAULT_T_TOTAL = 5000.0
DEFAULT_RENORM_DT = 1.0
DEFAULT_DELTA0 = 1e-8
# Running-estimate scatter over the last quartile must stay below this
# fraction of its mean (floored at the threshold) for a label to be emitted.
CONVERGENCE_FRACTION = 0.25

_COORD_INDEX = {"q": 0, "p": 1, "Q": 2, "P": 3}


@dataclass(frozen=True)
class SectionPlane:
    """Section definition: coordinate = value, crossed in `direction`
    (+1 rising, -1 falling, 0 both)."""

    coordinate: str = "p"
    value: float = 0.0
    direction: int = 1


@dataclass
class PoincareSection:
    plane: SectionPlane
    points: np.ndarray  # (n, 2)
    labels: tuple[str, str]


@dataclass
class LyapunovResult:
    lambda_max: float
    label: str  # "regular", "chaotic" or "inconclusive"
    t_total: float
    converged: bool
    times: np.ndarray
    running: np.ndarray  # running estimate at each renormalization


def _estimate_settled(tail: np.ndarray, threshold: float) -> bool:
    """Convergence gate: the scatter of the running estimate's last quartile
    must stay below a quarter of its mean.  The mean is floored at the
    chaos threshold so a near-zero (regular) estimate is not rejected for
    its vanishing denominator."""
    if len(tail) == 0:
        return False
    scatter = float(np.std(tail))
    return scatter < CONVERGENCE_FRACTION * max(abs(float(np.mean(tail))),
                                                threshold)


def _make_pair_rhs(params: ModelParams):
    w, w0, g, a = params.omega, params.omega0, params.gamma, params.alpha

    def rhs(t, y):
        q1, p1, Q1, P1, q2, p2, Q2, P2 = y.tolist()
        return (_flow_scalar(q1, p1, Q1, P1, w, w0, g, a, SINGULARITY_EPS)
                + _flow_scalar(q2, p2, Q2, P2, w, w0, g, a, SINGULARITY_EPS))

    return rhs


def lyapunov_max(params: ModelParams, s0: PhaseState,
                 t_total: float = DEFAULT_T_TOTAL,
                 renorm_dt: float = DEFAULT_RENORM_DT,
                 delta0: float = DEFAULT_DELTA0,
                 rel_tol: float = 1e-10, abs_tol: float = 1e-10,
                 threshold: float = LAMBDA_THRESHOLD) -> LyapunovResult:
    """Largest Lyapunov exponent of the orbit through s0.

    Co-integrates a companion displaced by delta0, renormalizes every
    renorm_dt, and averages the log stretching factors.  The orbit is
    labeled chaotic when the converged estimate exceeds `threshold`.
    Singularity termination before t_total/2 invalidates the estimate
    (label "inconclusive").
    """
    if not t_total > renorm_dt:
        raise ValueError("t_total must exceed renorm_dt")
    flow(params, s0)  # validate the starting state
    rhs = _make_pair_rhs(params)
    y_fid = s0.as_array()
    y = np.concatenate([y_fid, y_fid + 0.5 * delta0])

    n_intervals = int(round(t_total / renorm_dt))
    log_sum = 0.0
    times = np.empty(n_intervals)
    running = np.empty(n_intervals)
    t = 0.0
    h_prev = None
    k = 0
    terminated = False
    for k in range(n_intervals):
        t_next = (k + 1) * renorm_dt
        try:
            solver = DOP853(rhs, t, y, t_bound=t_next, rtol=rel_tol,
                            atol=abs_tol, first_step=h_prev)
            while solver.status == "running":
                solver.step()
        except SingularityError:
            terminated = True
            break
        if solver.status == "failed":
            terminated = True
            break
        h_prev = min(solver.step_size or renorm_dt, renorm_dt)
        y = solver.y.copy()
        t = t_next
        diff = y[4:] - y[:4]
        dist = float(np.linalg.norm(diff))
        if dist <= 0.0:
            dist = np.finfo(float).tiny
        log_sum += math.log(dist / delta0)
        y[4:] = y[:4] + (delta0 / dist) * diff
        times[k] = t
        running[k] = log_sum / t

    n_done = k if terminated else n_intervals
    times, running = times[:n_done], running[:n_done]
    if terminated and t < 0.5 * t_total:
        return LyapunovResult(
            lambda_max=float(running[-1]) if n_done else math.nan,
            label="inconclusive", t_total=t, converged=False,
            times=times, running=running)

    lam = float(running[-1])
    converged = _estimate_settled(running[3 * n_done // 4:], threshold)
    if not converged:
        label = "inconclusive"
    else:
        label = "chaotic" if lam > threshold else "regular"
    return LyapunovResult(lambda_max=lam, label=label, t_total=t,
                          converged=converged, times=times, running=running)


def poincare(params: ModelParams, s0: PhaseState, plane: SectionPlane,
             t_total: float = 1000.0, rel_tol: float = 1e-10,
             abs_tol: float = 1e-10) -> PoincareSection:
    """Intersections of the orbit through s0 with the section plane.

    Crossings are bracketed by sign changes of the plane function between
    accepted steps and refined on the dense output.  Zero crossings in
    t_total is an empty (not erroneous) result.  Records (Q, P) for planes
    on a field coordinate and (q, p) for planes on an atomic one.
    """
    idx = _COORD_INDEX[plane.coordinate]
    rec = (2, 3) if idx in (0, 1) else (0, 1)
    labels = ("Q", "P") if idx in (0, 1) else ("q", "p")
    names = ("q", "p", "Q", "P")

    from .integrate import _make_rhs

    rhs = _make_rhs(params)
    solver = DOP853(rhs, 0.0, s0.as_array(), t_bound=t_total,
                    rtol=rel_tol, atol=abs_tol)
    points = []
    g_prev = s0.as_array()[idx] - plane.value
    while solver.status == "running":
        try:
            solver.step()
        except SingularityError:
            break
        if solver.status == "failed":
            break
        g_new = solver.y[idx] - plane.value
        crossed = (
            (plane.direction >= 0 and g_prev < 0.0 <= g_new)
            or (plane.direction <= 0 and g_prev > 0.0 >= g_new)
        )
        if crossed and g_prev != g_new:
            sol = solver.dense_output()
            if g_new == 0.0:
                t_hit = solver.t
            else:
                t_hit = brentq(lambda tt: sol(tt)[idx] - plane.value,
                               solver.t_old, solver.t, xtol=1e-13)
            y_hit = sol(t_hit)
            points.append((y_hit[rec[0]], y_hit[rec[1]]))
        g_prev = g_new
    pts = np.array(points) if points else np.empty((0, 2))
    return PoincareSection(plane=plane, points=pts, labels=labels)


def box_occupancy(points: np.ndarray, nbins: int = 32) -> float:
    """Fraction of an nbins x nbins cover of the points' bounding box that
    is occupied.  Curve-like sections occupy O(1/nbins); area-filling ones
    occupy O(1)."""
    if len(points) == 0:
        return 0.0
    lo = points.min(axis=0)
    span = points.max(axis=0) - lo
    span[span == 0.0] = 1.0
    ij = np.minimum((nbins * (points - lo) / span).astype(int), nbins - 1)
    return len(np.unique(ij[:, 0] * nbins + ij[:, 1])) / float(nbins * nbins)


def classify_well_chaos(params: ModelParams, energy: float, well: str,
                        t_total: float = DEFAULT_T_TOTAL,
                        rel_tol: float = 1e-10,
                        abs_tol: float = 1e-10) -> str:
    """Chaos verdict for in-well dynamics on the given energy shell.

    Builds an in-well initial condition on the shell and runs the Benettin
    estimate.  Raises WellNotPresentError / NoRealRootError when the well or
    the shell slice does not exist.
    """
    from .shell import in_well_ic

    ic = in_well_ic(params, energy, well)
    res = lyapunov_max(params, ic, t_total=t_total, rel_tol=rel_tol,
                       abs_tol=abs_tol)
    return res.label
