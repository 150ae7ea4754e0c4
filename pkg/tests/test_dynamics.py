"""Core dynamics against independent kinematic/energetic oracles."""
import numpy as np
import pytest

from bsa import dynamics as dyn
from bsa.params import PendulumParams


def kinetic_energy_oracle(q, qdot, par):
    """Kinetic energy from explicit point kinematics (independent of M(q))."""
    q1, q2 = q
    w1, w12 = qdot[0], qdot[0] + qdot[1]
    # COM velocities of both links, hanging-down convention
    v1 = par.lc1 * w1 * np.array([np.cos(q1), np.sin(q1)])
    v2 = (par.l1 * w1 * np.array([np.cos(q1), np.sin(q1)])
          + par.lc2 * w12 * np.array([np.cos(q1 + q2), np.sin(q1 + q2)]))
    return (0.5 * par.m1 * v1 @ v1 + 0.5 * par.Jl1 * w1**2
            + 0.5 * par.m2 * v2 @ v2 + 0.5 * par.Jl2 * w12**2)


def potential_energy_oracle(q, par):
    """Gravity potential from COM heights, zero at the hanging equilibrium."""
    q1, q2 = q
    h1 = -par.lc1 * np.cos(q1)
    h2 = -par.l1 * np.cos(q1) - par.lc2 * np.cos(q1 + q2)
    return par.g * (par.m1 * (h1 + par.lc1) + par.m2 * (h2 + par.l1 + par.lc2))


def hessian_fd(f, v, h=1e-4):
    n = len(v)
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            vpp = v.copy(); vpp[i] += h; vpp[j] += h
            vpm = v.copy(); vpm[i] += h; vpm[j] -= h
            vmp = v.copy(); vmp[i] -= h; vmp[j] += h
            vmm = v.copy(); vmm[i] -= h; vmm[j] -= h
            H[i, j] = (f(vpp) - f(vpm) - f(vmp) + f(vmm)) / (4 * h * h)
    return H


class TestMassMatrix:
    def test_reference_configuration_value(self, par):
        # frozen from the finite-difference Hessian of the kinetic-energy
        # oracle at q = 0 (Table values, lc_i = l_i / 2)
        expected = np.array([[1.435464, 0.44802], [0.44802, 0.18214]])
        np.testing.assert_allclose(dyn.mass_matrix(np.zeros(2), par), expected,
                                   atol=1e-6)

    def test_matches_kinetic_energy_hessian(self, par, rng):
        for _ in range(20):
            q = rng.uniform(-np.pi, np.pi, 2)
            H = hessian_fd(lambda qd: kinetic_energy_oracle(q, qd, par),
                           rng.uniform(-2, 2, 2))
            np.testing.assert_allclose(dyn.mass_matrix(q, par), H,
                                       rtol=1e-6, atol=1e-6)

    def test_symmetry_and_spd(self, par, rng):
        for _ in range(200):
            q = rng.uniform(-2 * np.pi, 2 * np.pi, 2)
            M = dyn.mass_matrix(q, par)
            np.testing.assert_array_equal(M, M.T)
            assert np.linalg.eigvalsh(M).min() > 0.0

    def test_depends_on_q2_only(self, par, rng):
        b = rng.uniform(-np.pi, np.pi)
        Ms = [dyn.mass_matrix(np.array([a, b]), par) for a in (-2.0, 0.3, 5.0)]
        np.testing.assert_array_equal(Ms[0], Ms[1])
        np.testing.assert_array_equal(Ms[1], Ms[2])


class TestBias:
    def test_zero_at_hanging_equilibrium(self, par):
        np.testing.assert_array_equal(dyn.bias(np.zeros(2), np.zeros(2), par),
                                      np.zeros(2))

    def test_gravity_is_potential_gradient(self, par, rng):
        for _ in range(20):
            q = rng.uniform(-np.pi, np.pi, 2)
            grad = np.zeros(2)
            h = 1e-6
            for i in range(2):
                qp = q.copy(); qp[i] += h
                qm = q.copy(); qm[i] -= h
                grad[i] = (potential_energy_oracle(qp, par)
                           - potential_energy_oracle(qm, par)) / (2 * h)
            np.testing.assert_allclose(dyn.bias(q, np.zeros(2), par), grad,
                                       atol=1e-8)

    def test_coriolis_power_identity(self, par, rng):
        # factored skew symmetry: qd^T c(q, qd) = 1/2 qd^T dM/dt qd
        h = 1e-6
        for _ in range(20):
            q = rng.uniform(-np.pi, np.pi, 2)
            qd = rng.uniform(-3, 3, 2)
            Mdot = (dyn.mass_matrix(q + h * qd, par)
                    - dyn.mass_matrix(q - h * qd, par)) / (2 * h)
            lhs = qd @ dyn.coriolis(q, qd, par)
            np.testing.assert_allclose(lhs, 0.5 * qd @ Mdot @ qd,
                                       rtol=1e-6, atol=1e-8)

    def test_zero_gravity_energy_conservation(self, rng):
        # with g = 0 the Coriolis terms must not change kinetic energy
        par0 = PendulumParams(g=0.0)
        q = rng.uniform(-1, 1, 2)
        qd = rng.uniform(-2, 2, 2)
        dt, steps = 1e-4, 2000

        def step(q, qd):
            def acc(q, qd):
                M = dyn.mass_matrix(q, par0)
                return np.linalg.solve(M, -dyn.bias(q, qd, par0))
            k1 = (qd, acc(q, qd))
            k2 = (qd + 0.5 * dt * k1[1], acc(q + 0.5 * dt * k1[0], qd + 0.5 * dt * k1[1]))
            k3 = (qd + 0.5 * dt * k2[1], acc(q + 0.5 * dt * k2[0], qd + 0.5 * dt * k2[1]))
            k4 = (qd + dt * k3[1], acc(q + dt * k3[0], qd + dt * k3[1]))
            qn = q + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            qdn = qd + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            return qn, qdn

        T0 = kinetic_energy_oracle(q, qd, par0)
        for _ in range(steps):
            q, qd = step(q, qd)
        assert abs(kinetic_energy_oracle(q, qd, par0) - T0) < 1e-7


class TestTcp:
    def test_zero_velocity(self, par, rng):
        _, s = dyn.tcp_velocity(rng.uniform(-3, 3, 2), np.zeros(2), par)
        assert s == 0.0

    def test_extended_chain_speed(self, par):
        v, s = dyn.tcp_velocity(np.zeros(2), np.array([1.0, 0.0]), par)
        np.testing.assert_allclose(s, par.l1 + par.l2)
        np.testing.assert_allclose(s, 0.68)

    def test_jacobian_matches_position_difference(self, par, rng):
        h = 1e-6
        for _ in range(20):
            q = rng.uniform(-np.pi, np.pi, 2)
            qd = rng.uniform(-2, 2, 2)
            v_fd = (dyn.tcp_position(q + h * qd, par)
                    - dyn.tcp_position(q - h * qd, par)) / (2 * h)
            v, _ = dyn.tcp_velocity(q, qd, par)
            np.testing.assert_allclose(v, v_fd, rtol=1e-6, atol=1e-8)


class TestSpringTorque:
    def test_relaxed(self):
        theta = np.array([0.4, -0.2])
        np.testing.assert_array_equal(
            dyn.spring_torque(theta, theta, [100.0, 100.0]), np.zeros(4))

    def test_linear_law(self):
        tau = dyn.spring_torque([0.1, -0.2], [0.0, 0.0], [100.0, 100.0])
        np.testing.assert_allclose(tau, [10.0, -20.0, 0.0, 0.0])
        np.testing.assert_allclose(
            dyn.spring_torque([0.1, -0.2], [0.0, 0.0], [200.0, 200.0]), 2 * tau)


class TestBigInertia:
    def test_spring_block(self, par):
        Pi = dyn.big_inertia(np.zeros(2), par)
        assert Pi[0, 0] == 0.001 and Pi[1, 1] == 0.001
        np.testing.assert_array_equal(Pi[0:2, 2:4], np.zeros((2, 2)))
        np.testing.assert_array_equal(Pi[2:4, 0:2], np.zeros((2, 2)))

    def test_spd_random_q(self, par, rng):
        for _ in range(1000):
            Pi = dyn.big_inertia(rng.uniform(-2 * np.pi, 2 * np.pi, 2), par)
            assert np.linalg.eigvalsh(Pi).min() > 0.0


class TestEnergy:
    def test_reference_configuration_all_zero(self, par):
        e = dyn.energy(np.zeros(2), np.zeros(4), np.zeros(4), par.stiffness, par)
        assert e.total == 0.0

    def test_spring_potential_value(self, par):
        e = dyn.energy([0.3, 0.0], np.zeros(4), np.zeros(4), [100.0, 100.0], par)
        np.testing.assert_allclose(e.potential_spring, [4.5, 0.0])

    def test_matches_oracles(self, par, rng):
        for _ in range(10):
            q = rng.uniform(-2, 2, 2)
            qd = rng.uniform(-2, 2, 2)
            xi = np.concatenate([rng.uniform(-1, 1, 2), q])
            xidot = np.concatenate([np.zeros(2), qd])
            e = dyn.energy(np.zeros(2), xi, xidot, par.stiffness, par)
            np.testing.assert_allclose(e.kinetic_link,
                                       kinetic_energy_oracle(q, qd, par),
                                       rtol=1e-9)
            np.testing.assert_allclose(e.potential_gravity,
                                       potential_energy_oracle(q, par),
                                       rtol=1e-9, atol=1e-12)


class TestParams:
    @pytest.mark.parametrize("field,value", [
        ("m1", -1.0), ("l2", 0.0), ("Js1", -0.001), ("k1", -5.0)])
    def test_invalid_values_rejected(self, field, value):
        with pytest.raises(ValueError, match=field):
            PendulumParams(**{field: value})

    def test_com_beyond_link_rejected(self):
        with pytest.raises(ValueError, match="lc1"):
            PendulumParams(lc1=0.5)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError, match="bogus"):
            PendulumParams.from_mapping({"bogus": 1.0})
