"""Core model: Hamiltonian, flow field, observables, and effective potential.

The system is the classical (infinite-size) limit of the Dicke model with a
parity-breaking linear drive on the field coordinate.  Phase space is
(q, p, Q, P): an unbounded field oscillator (q, p) and an atomic pair (Q, P)
confined to the disk Q^2 + P^2 <= 4.  All energies are dimensionless
(normalized per particle by the atomic frequency).

Everything here is a pure function of its arguments; the other modules build
on these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

# States with Q^2 + P^2 in (4, 4 + BOUNDARY_TOL] are treated as lying on the
# boundary so integrator roundoff near the disk edge does not kill long runs.
BOUNDARY_TOL = 1e-12

# Below this value of 4 - P^2 - Q^2 the flow denominators are considered
# singular and `flow` refuses to evaluate.
SINGULARITY_EPS = 1e-10

# Column names used when exporting trajectories in electrical naming mode.
ELECTRICAL_COLUMNS = ("I_L1", "V_C1", "I_L2", "V_C2")


@dataclass(frozen=True)
class ModelParams:
    """The four constants defining one system instance.

    gamma   -- atom-field coupling strength (any sign)
    alpha   -- deformation (parity-breaking drive) strength (any sign)
    omega   -- field frequency, > 0
    omega0  -- atomic frequency, > 0
    """

    gamma: float
    alpha: float
    omega: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        if not (self.omega > 0 and self.omega0 > 0):
            raise DomainError(
                f"frequencies must be positive, got omega={self.omega}, "
                f"omega0={self.omega0}"
            )

    def gamma_c(self) -> float:
        """Critical coupling sqrt(omega*omega0)/2 (derived, never stored)."""
        return math.sqrt(self.omega * self.omega0) / 2.0


@dataclass(frozen=True)
class PhaseState:
    """A point (q, p, Q, P) of the four-dimensional phase space."""

    q: float
    p: float
    Q: float
    P: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p, self.Q, self.P], dtype=float)

    @classmethod
    def from_array(cls, y) -> "PhaseState":
        q, p, Q, P = (float(v) for v in y)
        return cls(q, p, Q, P)


@dataclass(frozen=True)
class Observables:
    energy: float
    atomic_inversion: float
    mean_photon: float


@dataclass(frozen=True)
class ElectricalState:
    """The same state in the normalized LC-oscillator variables."""

    i_l1: float
    v_c1: float
    i_l2: float
    v_c2: float


def _radical_sq(Q: float, P: float, boundary_tol: float = BOUNDARY_TOL) -> float:
    """4 - P^2 - Q^2 with the boundary clamp; raises outside the disk."""
    rad2 = 4.0 - P * P - Q * Q
    if rad2 < -boundary_tol:
        raise DomainError(
            f"atomic coordinates outside the disk: Q^2+P^2 = {Q*Q + P*P!r} > 4"
        )
    return max(rad2, 0.0)


def hamiltonian(params: ModelParams, s: PhaseState,
                boundary_tol: float = BOUNDARY_TOL) -> float:
    """Normalized classical energy of a state.

    H = (w/2w0)(q^2+p^2) + (Q^2+P^2)/2 + (g q Q / w0) sqrt(4-P^2-Q^2) - 1
        + sqrt(2/w0) a q

    with w=omega, w0=omega0, g=gamma, a=alpha.  Raises DomainError if the
    atomic coordinates leave the disk by more than `boundary_tol`.
    """
    w, w0 = params.omega, params.omega0
    q, p, Q, P = s.q, s.p, s.Q, s.P
    rad = math.sqrt(_radical_sq(Q, P, boundary_tol))
    return (
        w / (2.0 * w0) * (q * q + p * p)
        + 0.5 * (Q * Q + P * P)
        + params.gamma * q * Q * rad / w0
        - 1.0
        + math.sqrt(2.0 / w0) * params.alpha * q
    )


def _flow_scalar(q, p, Q, P, w, w0, g, a, eps):
    """Time derivatives (dq, dp, dQ, dP) as plain floats.

    Shared by `flow` and the integrator's right-hand side.  Raises
    SingularityError when 4 - P^2 - Q^2 < eps.
    """
    rad2 = 4.0 - P * P - Q * Q
    if rad2 < eps:
        raise SingularityError(
            f"flow singular: 4 - P^2 - Q^2 = {rad2!r} < {eps!r}"
        )
    rad = math.sqrt(rad2)
    gq = g * q / w0
    dq = w / w0 * p
    dp = -g * Q * rad / w0 - w / w0 * q - math.sqrt(2.0 / w0) * a
    dQ = P - gq * Q * P / rad
    dP = gq * Q * Q / rad - gq * rad - Q
    return dq, dp, dQ, dP


def flow(params: ModelParams, s: PhaseState,
         eps: float = SINGULARITY_EPS) -> np.ndarray:
    """Hamiltonian flow field d/dt (q, p, Q, P) at a state.

    Equals the symplectic gradient of `hamiltonian`.  Requires the state to
    be strictly inside the disk: raises SingularityError when
    4 - P^2 - Q^2 < eps.
    """
    return np.array(_flow_scalar(s.q, s.p, s.Q, s.P, params.omega,
                                 params.omega0, params.gamma, params.alpha,
                                 eps))


def observables(params: ModelParams, s: PhaseState) -> Observables:
    """Energy, atomic inversion (P^2+Q^2)/2 - 1, and mean photon (p^2+q^2)/2."""
    return Observables(
        energy=hamiltonian(params, s),
        atomic_inversion=0.5 * (s.P * s.P + s.Q * s.Q) - 1.0,
        mean_photon=0.5 * (s.p * s.p + s.q * s.q),
    )


def _coupling_amplitude(params: ModelParams, Q, P):
    """A(Q, P) = gamma Q sqrt(4-P^2-Q^2)/omega0 + sqrt(2/omega0) alpha.

    The coefficient of the q-linear part of the Hamiltonian at fixed (Q, P).
    Accepts scalars or arrays; the caller is responsible for the disk check.
    """
    rad = np.sqrt(np.maximum(4.0 - P * P - Q * Q, 0.0))
    return (params.gamma * Q * rad / params.omega0
            + math.sqrt(2.0 / params.omega0) * params.alpha)


def effective_potential(params: ModelParams, Q, P):
    """Minimum of the Hamiltonian over the field coordinates at fixed (Q, P).

    V(Q, P) = (Q^2+P^2)/2 - 1 - (omega0/2 omega) A(Q, P)^2, attained at
    p = 0, q = -A omega0/omega.  Level sets of V give the accessible atomic
    region at a given energy.  Vectorized over Q and P.
    """
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    if np.any(Q * Q + P * P > 4.0 + BOUNDARY_TOL):
        raise DomainError("effective_potential evaluated outside the disk")
    A = _coupling_amplitude(params, Q, P)
    V = 0.5 * (Q * Q + P * P) - 1.0 - params.omega0 / (2.0 * params.omega) * A * A
    return V if V.ndim else float(V)


def effective_potential_minimizer(params: ModelParams, Q, P):
    """Field coordinate q minimizing the Hamiltonian at fixed (Q, P); p = 0."""
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    if np.any(Q * Q + P * P > 4.0 + BOUNDARY_TOL):
        raise DomainError("effective_potential evaluated outside the disk")
    q = -_coupling_amplitude(params, Q, P) * params.omega0 / params.omega
    return q if q.ndim else float(q)


def hamiltonian_hessian(params: ModelParams, s: PhaseState,
                        eps: float = SINGULARITY_EPS) -> np.ndarray:
    """4x4 matrix of second derivatives of H in the order (q, p, Q, P)."""
    w, w0, g = params.omega, params.omega0, params.gamma
    q, Q, P = s.q, s.Q, s.P
    rad2 = 4.0 - P * P - Q * Q
    if rad2 < eps:
        raise SingularityError("hessian singular at the disk boundary")
    rad = math.sqrt(rad2)
    rad3 = rad2 * rad
    H = np.zeros((4, 4))
    H[0, 0] = H[1, 1] = w / w0
    # Mixed field-atom terms come from the q-linear coupling q*A(Q, P).
    A_Q = g * (rad - Q * Q / rad) / w0
    A_P = -g * Q * P / (rad * w0)
    A_QQ = g * (-3.0 * Q / rad - Q ** 3 / rad3) / w0
    A_QP = -g * P * (rad2 + Q * Q) / (rad3 * w0)
    A_PP = -g * Q * (rad2 + P * P) / (rad3 * w0)
    H[0, 2] = H[2, 0] = A_Q
    H[0, 3] = H[3, 0] = A_P
    H[2, 2] = 1.0 + q * A_QQ
    H[2, 3] = H[3, 2] = q * A_QP
    H[3, 3] = 1.0 + q * A_PP
    return H


# Symplectic structure for the coordinate order (q, p, Q, P).
_SYMPLECTIC = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])


def flow_jacobian(params: ModelParams, s: PhaseState) -> np.ndarray:
    """Jacobian of the flow field: the symplectic matrix times the Hessian."""
    return _SYMPLECTIC @ hamiltonian_hessian(params, s)


def effective_potential_hessian(params: ModelParams, Q: float,
                                P: float) -> np.ndarray:
    """2x2 Hessian of the effective potential in (Q, P).

    Exact because the Hamiltonian is quadratic in the field coordinates:
    V_xy = H_xy - H_xq H_qy / H_qq evaluated at the minimizing q.
    """
    q = effective_potential_minimizer(params, Q, P)
    H = hamiltonian_hessian(params, PhaseState(float(q), 0.0, float(Q),
                                               float(P)))
    atom = H[2:, 2:]
    mixed = H[2:, 0]
    return atom - np.outer(mixed, mixed) / H[0, 0]


def to_electrical(s: PhaseState) -> ElectricalState:
    """Relabel (q, p, Q, P) as the normalized LC variables."""
    return ElectricalState(i_l1=s.q, v_c1=s.p, i_l2=s.Q, v_c2=s.P)


def from_electrical(e: ElectricalState) -> PhaseState:
    """Inverse relabeling; round trip with `to_electrical` is the identity."""
    return PhaseState(q=e.i_l1, p=e.v_c1, Q=e.i_l2, P=e.v_c2)
