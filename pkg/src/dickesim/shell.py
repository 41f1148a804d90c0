"""Initial conditions on a prescribed energy shell, in the (q, 0, Q, 0) form.

At p = P = 0 the energy condition H = E is a quadratic in q,

    (omega/2 omega0) q^2 + A(Q) q + (Q^2/2 - 1 - E) = 0,
    A(Q) = gamma Q sqrt(4-Q^2)/omega0 + sqrt(2/omega0) alpha,

so a shell state is fixed by the target energy, the atomic coordinate Q and
a root branch.  The plus branch is the larger root.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, NoRealRootError, WellNotPresentError
from .model import ModelParams, PhaseState, hamiltonian


class AmbiguousWellWarning(UserWarning):
    """The requested energy lies above the saddle, so the wells are merged
    and the returned state is not confined to one of them."""


@dataclass(frozen=True)
class ShellRequest:
    params: ModelParams
    energy: float
    Q: float
    branch: str = "plus"  # "plus" (larger root) or "minus"


def _shell_roots(params: ModelParams, energy: float, Q: float):
    """Both q roots of the shell quadratic at (Q, P=0), as (minus, plus)."""
    if Q * Q > 4.0:
        raise DomainError(f"Q={Q!r} outside the atomic disk")
    w, w0 = params.omega, params.omega0
    a = w / (2.0 * w0)
    b = (params.gamma * Q * math.sqrt(4.0 - Q * Q) / w0
         + math.sqrt(2.0 / w0) * params.alpha)
    c = 0.5 * Q * Q - 1.0 - energy
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        # Tolerate roundoff when E sits exactly on the effective potential.
        if disc > -1e-12 * max(1.0, b * b):
            disc = 0.0
        else:
            raise NoRealRootError(
                f"energy {energy!r} lies below the effective potential at "
                f"Q={Q!r} (discriminant {disc!r})"
            )
    sq = math.sqrt(disc)
    if b >= 0.0:
        r1 = (-b - sq) / (2.0 * a)
    else:
        r1 = (-b + sq) / (2.0 * a)
    r2 = c / (a * r1) if r1 != 0.0 else (-b + sq) / (2.0 * a)
    return min(r1, r2), max(r1, r2)


def solve_q_on_shell(req: ShellRequest) -> PhaseState:
    """State (q_branch, 0, Q, 0) with energy equal to req.energy.

    Raises NoRealRootError when the shell does not reach this Q slice and
    DomainError when Q is outside the disk.
    """
    if req.branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {req.branch!r}")
    q_minus, q_plus = _shell_roots(req.params, req.energy, req.Q)
    q = q_plus if req.branch == "plus" else q_minus
    state = PhaseState(q, 0.0, req.Q, 0.0)
    # One Newton step in q absorbs any residual roundoff at large |q|.
    resid = hamiltonian(req.params, state) - req.energy
    if abs(resid) > 1e-13:
        w, w0 = req.params.omega, req.params.omega0
        dHdq = (w / w0) * q + (req.params.gamma * req.Q
                               * math.sqrt(4.0 - req.Q * req.Q) / w0
                               + math.sqrt(2.0 / w0) * req.params.alpha)
        if dHdq != 0.0:
            state = PhaseState(q - resid / dHdq, 0.0, req.Q, 0.0)
    return state


def in_well_ic(params: ModelParams, energy: float, well: str) -> PhaseState:
    """A shell state inside the chosen well ("left" or "right").

    Q is taken at the well minimum, which guarantees the shell intersects the
    well; the q root is chosen on the well's side of the saddle.  If the
    energy exceeds the saddle the wells are merged: the state is still
    returned, with an AmbiguousWellWarning.
    """
    from .equilibria import well_structure

    ws = well_structure(params)
    matches = [m for m in ws.minima if m.well == well]
    if not matches:
        raise WellNotPresentError(
            f"no {well!r} well at gamma={params.gamma}, alpha={params.alpha}"
        )
    minimum = matches[0]
    if energy < minimum.energy:
        raise NoRealRootError(
            f"energy {energy!r} below the {well} well bottom "
            f"({minimum.energy!r})"
        )
    q_w = minimum.state.q
    if ws.saddle is not None:
        if energy >= ws.saddle.energy:
            warnings.warn(
                f"energy {energy!r} is above the saddle "
                f"({ws.saddle.energy!r}); the wells are connected",
                AmbiguousWellWarning,
                stacklevel=2,
            )
        branch = "plus" if q_w > ws.saddle.state.q else "minus"
    else:
        # Single well: keep the branch mirror-consistent under the sign
        # flip of the deformation (the root farther from q = 0).
        branch = "plus" if q_w > 0 else "minus"
    return solve_q_on_shell(ShellRequest(params=params, energy=energy,
                                         Q=minimum.state.Q, branch=branch))
