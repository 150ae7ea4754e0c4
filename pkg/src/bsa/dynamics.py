"""Planar two-link dynamics, spring kinetics, end-link kinematics and energy.

All functions are pure and accept an array namespace ``xp`` (numpy by
default, ``jax.numpy`` for transcription) so the same formulas serve both
the simulators and the automatic-differentiation path.

Conventions:
  - q = (q1, q2) are the link angles, q = 0 is the hanging equilibrium.
  - xi = (psi1, psi2, q1, q2) stacks spring output angles and link angles.
  - The spring torque k (theta - psi) accelerates the spring output toward
    the motor angle (passive spring; total energy is conserved when the
    motors hold still and no switching occurs).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import PendulumParams


def mass_matrix(q, par: PendulumParams, xp=np):
    """Link-side inertia matrix M(q), symmetric positive definite."""
    a1 = par.Jl1 + par.Jl2 + par.m1 * par.lc1**2 + par.m2 * (par.l1**2 + par.lc2**2)
    a2 = par.m2 * par.l1 * par.lc2
    a3 = par.Jl2 + par.m2 * par.lc2**2
    c2 = xp.cos(q[1])
    m12 = a3 + a2 * c2
    return xp.stack([xp.stack([a1 + 2.0 * a2 * c2, m12]),
                     xp.stack([m12, a3 * xp.ones_like(c2)])])


def coriolis(q, qdot, par: PendulumParams, xp=np):
    """Centrifugal/Coriolis torque vector."""
    a2 = par.m2 * par.l1 * par.lc2
    s2 = xp.sin(q[1])
    return xp.stack([-a2 * s2 * (2.0 * qdot[0] * qdot[1] + qdot[1] ** 2),
                     a2 * s2 * qdot[0] ** 2])


def gravity_torque(q, par: PendulumParams, xp=np):
    """Gradient of the gravity potential with respect to q."""
    g1 = (par.m1 * par.lc1 + par.m2 * par.l1) * par.g
    g2 = par.m2 * par.lc2 * par.g
    s12 = xp.sin(q[0] + q[1])
    return xp.stack([g1 * xp.sin(q[0]) + g2 * s12, g2 * s12])


def bias(q, qdot, par: PendulumParams, xp=np):
    """Nonlinear bias h(q, qdot) = Coriolis + gravity."""
    return coriolis(q, qdot, par, xp=xp) + gravity_torque(q, par, xp=xp)


def gravity_potential(q, par: PendulumParams, xp=np):
    """Gravity potential energy, zero at the hanging equilibrium q = 0."""
    g1 = (par.m1 * par.lc1 + par.m2 * par.l1) * par.g
    g2 = par.m2 * par.lc2 * par.g
    return g1 * (1.0 - xp.cos(q[0])) + g2 * (1.0 - xp.cos(q[0] + q[1]))


def tcp_position(q, par: PendulumParams, xp=np):
    """Planar position of the end of link 2 (tool center point)."""
    s1, c1 = xp.sin(q[0]), xp.cos(q[0])
    s12, c12 = xp.sin(q[0] + q[1]), xp.cos(q[0] + q[1])
    return xp.stack([par.l1 * s1 + par.l2 * s12,
                     -par.l1 * c1 - par.l2 * c12])


def tcp_jacobian(q, par: PendulumParams, xp=np):
    """2x2 Jacobian J(q) of the TCP position."""
    c1, s1 = xp.cos(q[0]), xp.sin(q[0])
    c12, s12 = xp.cos(q[0] + q[1]), xp.sin(q[0] + q[1])
    return xp.stack([xp.stack([par.l1 * c1 + par.l2 * c12, par.l2 * c12]),
                     xp.stack([par.l1 * s1 + par.l2 * s12, par.l2 * s12])])


def tcp_velocity(q, qdot, par: PendulumParams, xp=np):
    """Planar TCP velocity v = J(q) qdot and its Euclidean norm."""
    v = tcp_jacobian(q, par, xp=xp) @ xp.asarray(qdot)
    return v, xp.sqrt(v[0] ** 2 + v[1] ** 2)


def spring_torque(theta, psi, k, xp=np):
    """Stacked generalized spring torque (k*(theta-psi) on spring rows, 0 on links)."""
    tau = xp.asarray(k) * (xp.asarray(theta) - xp.asarray(psi))
    return xp.concatenate([tau, xp.zeros_like(tau)])


def big_inertia(q, par: PendulumParams, xp=np):
    """4x4 extended inertia Pi(xi) = blkdiag(B, M(q))."""
    M = mass_matrix(q, par, xp=xp)
    zero = xp.zeros((2, 2))
    B = xp.asarray(np.diag([par.Js1, par.Js2]))
    return xp.concatenate([xp.concatenate([B, zero], axis=1),
                           xp.concatenate([zero, M], axis=1)], axis=0)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Mechanical energy split into kinetic and potential parts [J]."""

    kinetic_link: float
    kinetic_spring: float
    potential_gravity: float
    potential_spring: np.ndarray  # per joint (E_p1, E_p2)

    @property
    def kinetic(self) -> float:
        return self.kinetic_link + self.kinetic_spring

    @property
    def potential(self) -> float:
        return self.potential_gravity + float(np.sum(self.potential_spring))

    @property
    def total(self) -> float:
        return self.kinetic + self.potential


def energy(theta, xi, xidot, k, par: PendulumParams) -> EnergyBreakdown:
    """Energy bookkeeping for an extended state (theta, xi, xidot)."""
    theta = np.asarray(theta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    xidot = np.asarray(xidot, dtype=float)
    k = np.asarray(k, dtype=float)
    psi, q = xi[:2], xi[2:]
    psidot, qdot = xidot[:2], xidot[2:]
    M = mass_matrix(q, par)
    ek_link = 0.5 * qdot @ M @ qdot
    ek_spring = 0.5 * (par.Js1 * psidot[0] ** 2 + par.Js2 * psidot[1] ** 2)
    ep_spring = 0.5 * k * (theta - psi) ** 2
    return EnergyBreakdown(
        kinetic_link=float(ek_link),
        kinetic_spring=float(ek_spring),
        potential_gravity=float(gravity_potential(q, par)),
        potential_spring=ep_spring,
    )
