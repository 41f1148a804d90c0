import math

import numpy as np
import pytest

from dickesim.errors import DomainError, SingularityError
from dickesim.model import (
    ModelParams,
    PhaseState,
    effective_potential,
    effective_potential_hessian,
    effective_potential_minimizer,
    flow,
    flow_jacobian,
    from_electrical,
    hamiltonian,
    hamiltonian_hessian,
    observables,
    to_electrical,
)
from dickesim.reproduce import FIG3_CASES, FIG3_GAMMA

SYMPLECTIC = np.array([
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, -1, 0],
], dtype=float)


def fd_gradient(params, y, h=1e-6):
    g = np.zeros(4)
    for i in range(4):
        yp, ym = y.copy(), y.copy()
        yp[i] += h
        ym[i] -= h
        g[i] = (hamiltonian(params, PhaseState.from_array(yp))
                - hamiltonian(params, PhaseState.from_array(ym))) / (2 * h)
    return g


def random_interior_state(rng, r_max=1.6):
    r = rng.uniform(0.0, r_max)
    th = rng.uniform(0.0, 2 * math.pi)
    return PhaseState(rng.normal(scale=2.0), rng.normal(scale=2.0),
                      r * math.cos(th), r * math.sin(th))


def test_hamiltonian_uncoupled_origin():
    assert hamiltonian(ModelParams(0.0, 0.0), PhaseState(0, 0, 0, 0)) == -1.0


@pytest.mark.parametrize("case", sorted(FIG3_CASES))
def test_hamiltonian_reproduces_caption_energies(case):
    spec = FIG3_CASES[case]
    params = ModelParams(gamma=FIG3_GAMMA, alpha=spec["alpha"])
    e = hamiltonian(params, PhaseState(*spec["ic"]))
    assert e == pytest.approx(spec["energy"], abs=2e-3)


def test_hamiltonian_domain_error_outside_disk():
    with pytest.raises(DomainError):
        hamiltonian(ModelParams(1.0, 0.0), PhaseState(0, 0, 2.1, 0))


def test_hamiltonian_boundary_clamp():
    # Q^2 + P^2 in (4, 4 + 1e-12] is treated as exactly on the boundary.
    Q = math.sqrt(4.0 + 5e-13)
    params = ModelParams(1.0, 0.3)
    e = hamiltonian(params, PhaseState(1.0, 0.0, Q, 0.0))
    expected = (0.5 + 0.5 * Q * Q - 1.0 + math.sqrt(2.0) * 0.3)
    assert e == pytest.approx(expected, abs=1e-12)
    with pytest.raises(DomainError):
        hamiltonian(params, PhaseState(1.0, 0.0, math.sqrt(4.0 + 1e-10), 0.0))


def test_flow_decoupled_unit_oscillators():
    f = flow(ModelParams(0.0, 0.0), PhaseState(1, 0, 0, 1))
    assert np.allclose(f, [0, -1, 1, 0], atol=1e-15)


def test_flow_singularity_near_boundary():
    Q = 1.99999999999  # 4 - Q^2 ~ 4e-11 < 1e-10
    with pytest.raises(SingularityError):
        flow(ModelParams(1.0, 0.0), PhaseState(0, 0, Q, 0))


def test_flow_is_symplectic_gradient_of_hamiltonian():
    rng = np.random.default_rng(7)
    for _ in range(25):
        params = ModelParams(gamma=rng.uniform(0, 2), alpha=rng.uniform(-2, 2))
        s = random_interior_state(rng)
        f = flow(params, s)
        expected = SYMPLECTIC @ fd_gradient(params, s.as_array())
        scale = max(np.max(np.abs(f)), 1.0)
        assert np.max(np.abs(f - expected)) / scale < 1e-6


def test_parity_covariance():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = random_interior_state(rng)
        mirrored = PhaseState(-s.q, s.p, -s.Q, s.P)
        gamma = rng.uniform(0, 2)
        sym = ModelParams(gamma=gamma, alpha=0.0)
        assert hamiltonian(sym, s) == hamiltonian(sym, mirrored)
        alpha = rng.uniform(-2, 2)
        plus = ModelParams(gamma=gamma, alpha=alpha)
        minus = ModelParams(gamma=gamma, alpha=-alpha)
        assert hamiltonian(plus, s) == hamiltonian(minus, mirrored)


def test_flow_negates_under_momentum_reflection():
    # (p, P) -> (-p, -P) conjugates the flow with time reversal.
    rng = np.random.default_rng(13)
    for _ in range(20):
        params = ModelParams(gamma=rng.uniform(0, 2), alpha=rng.uniform(-2, 2))
        s = random_interior_state(rng)
        refl = PhaseState(s.q, -s.p, s.Q, -s.P)
        f = flow(params, s)
        g = flow(params, refl)
        reflect = np.array([1, -1, 1, -1.0])
        assert np.allclose(g, -reflect * f, rtol=0, atol=0)


def test_observables_south_pole_vacuum():
    obs = observables(ModelParams(1.0, 0.0), PhaseState(0, 0, 0, 0))
    assert obs.atomic_inversion == -1.0
    assert obs.mean_photon == 0.0


def test_observables_disk_boundary_inversion():
    obs = observables(ModelParams(0.5, 0.1), PhaseState(0.3, -0.2, 2.0, 0.0))
    assert obs.atomic_inversion == 1.0


def test_observables_bounds_random():
    rng = np.random.default_rng(17)
    for _ in range(50):
        s = random_interior_state(rng, r_max=1.999)
        obs = observables(ModelParams(rng.uniform(0, 2), rng.uniform(-2, 2)), s)
        assert -1.0 <= obs.atomic_inversion <= 1.0
        assert obs.mean_photon >= 0.0


def test_observables_superradiant_ground_state():
    # alpha = 0, gamma = 1: minima at Q^2 = 2 (1 - gamma_c^2/gamma^2) = 3/2,
    # q = -gamma Q sqrt(4 - Q^2) / omega.
    Q = math.sqrt(1.5)
    q = -Q * math.sqrt(2.5)
    params = ModelParams(1.0, 0.0)
    obs = observables(params, PhaseState(q, 0.0, Q, 0.0))
    assert obs.atomic_inversion == pytest.approx(-0.25, abs=1e-12)
    assert obs.mean_photon == pytest.approx(1.875, abs=1e-12)
    # Grid-minimization oracle over the disk agrees on the location.
    axis = np.linspace(-2, 2, 801)
    QQ, PP = np.meshgrid(axis, axis)
    inside = QQ**2 + PP**2 <= 4.0
    v = np.full(QQ.shape, np.inf)
    v[inside] = effective_potential(params, QQ[inside], PP[inside])
    i, j = np.unravel_index(np.argmin(v), v.shape)
    assert abs(abs(QQ[i, j]) - Q) < 5e-3
    assert abs(PP[i, j]) < 5e-3
    assert v[i, j] == pytest.approx(-2.125, abs=1e-4)


def test_effective_potential_uncoupled_center():
    assert effective_potential(ModelParams(0.0, 0.0), 0.0, 0.0) == -1.0


def test_effective_potential_superradiant_minimum():
    v = effective_potential(ModelParams(1.0, 0.0), math.sqrt(1.5), 0.0)
    assert v == pytest.approx(-2.125, abs=1e-14)
    v = effective_potential(ModelParams(1.0, 0.0), -math.sqrt(1.5), 0.0)
    assert v == pytest.approx(-2.125, abs=1e-14)


def test_effective_potential_is_lower_envelope():
    rng = np.random.default_rng(19)
    for _ in range(40):
        params = ModelParams(gamma=rng.uniform(0, 2), alpha=rng.uniform(-2, 2))
        s = random_interior_state(rng, r_max=1.95)
        v = effective_potential(params, s.Q, s.P)
        assert v <= hamiltonian(params, s) + 1e-12
        q_min = effective_potential_minimizer(params, s.Q, s.P)
        at_min = hamiltonian(params, PhaseState(q_min, 0.0, s.Q, s.P))
        assert at_min == pytest.approx(v, abs=1e-12)


def test_effective_potential_domain_error():
    with pytest.raises(DomainError):
        effective_potential(ModelParams(1.0, 0.0), 2.5, 0.0)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(23)
    h = 1e-5
    for _ in range(5):
        params = ModelParams(gamma=rng.uniform(0.2, 2), alpha=rng.uniform(-2, 2))
        s = random_interior_state(rng, r_max=1.5)
        H = hamiltonian_hessian(params, s)
        assert np.allclose(H, H.T)
        y = s.as_array()
        fd = np.zeros((4, 4))
        for i in range(4):
            for j in range(4):
                ypp, ypm, ymp, ymm = (y.copy() for _ in range(4))
                ypp[[i, j]] += h
                ypm[i] += h
                ypm[j] -= h
                ymp[i] -= h
                ymp[j] += h
                ymm[[i, j]] -= h
                if i == j:
                    ypp, ymm = y.copy(), y.copy()
                    ypp[i] += 2 * h
                    ymm[i] -= 2 * h
                fd[i, j] = (
                    hamiltonian(params, PhaseState.from_array(ypp))
                    - hamiltonian(params, PhaseState.from_array(ypm))
                    - hamiltonian(params, PhaseState.from_array(ymp))
                    + hamiltonian(params, PhaseState.from_array(ymm))
                ) / (4 * h * h)
        assert np.max(np.abs(H - fd)) < 1e-4


def test_flow_jacobian_is_symplectic_hessian():
    params = ModelParams(1.3, 0.7)
    s = PhaseState(0.5, -0.3, 0.8, -0.6)
    assert np.array_equal(flow_jacobian(params, s),
                          SYMPLECTIC @ hamiltonian_hessian(params, s))


def test_effective_potential_hessian_matches_finite_differences():
    params = ModelParams(1.4, -0.6)
    Q0, P0 = 0.9, 0.4
    H = effective_potential_hessian(params, Q0, P0)
    h = 1e-5

    def v(dq, dp):
        return effective_potential(params, Q0 + dq, P0 + dp)

    fd = np.empty((2, 2))
    fd[0, 0] = (v(2 * h, 0) - 2 * v(0, 0) + v(-2 * h, 0)) / (4 * h * h)
    fd[1, 1] = (v(0, 2 * h) - 2 * v(0, 0) + v(0, -2 * h)) / (4 * h * h)
    fd[0, 1] = fd[1, 0] = (v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h * h)
    assert np.max(np.abs(H - fd)) < 1e-4


def test_electrical_round_trip_and_names():
    s = PhaseState(1.32, 0.0, -1.5, 0.0)
    e = to_electrical(s)
    assert (e.i_l1, e.v_c1, e.i_l2, e.v_c2) == (1.32, 0.0, -1.5, 0.0)
    assert from_electrical(e) == s


def test_electrical_relabeling_preserves_energy():
    rng = np.random.default_rng(29)
    params = ModelParams(1.5, 0.5)
    for _ in range(10):
        s = random_interior_state(rng)
        assert hamiltonian(params, from_electrical(to_electrical(s))) == \
            hamiltonian(params, s)


def test_model_params_validation():
    with pytest.raises(DomainError):
        ModelParams(gamma=1.0, alpha=0.0, omega=-1.0)
    with pytest.raises(DomainError):
        ModelParams(gamma=1.0, alpha=0.0, omega0=0.0)


def test_gamma_c_derived():
    assert ModelParams(1.0, 0.0).gamma_c() == 0.5
    assert ModelParams(1.0, 0.0, omega=2.0, omega0=2.0).gamma_c() == 1.0
