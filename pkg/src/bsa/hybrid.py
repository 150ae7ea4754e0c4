"""Ideal clutch-switchable double pendulum as a switched-impulsive system.

Continuous state x = (theta, xi, xidot) in R^10. Within a mode the spring
and link accelerations satisfy the mode's velocity constraint C_p xidot = 0
exactly; the constraint torque is eliminated by a dense 2x2 Schur solve.
Mode changes reset the velocities by a momentum-conserving impulse.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import bias, big_inertia, spring_torque
from .modes import BSA_MODES, BsaMode
from .params import PendulumParams


class ConstraintViolation(RuntimeError):
    """Raised when a state handed to a mode flow violates that mode's constraint."""


def split_state(x, xp=np):
    """Split x = (theta, xi, xidot) into its components."""
    x = xp.asarray(x)
    return x[0:2], x[2:6], x[6:10]


def constraint_torque(Pi, C, tau_k, eta, xp=np):
    """Constraint torque that keeps C xidd = 0 under Pi xidd = tau_k - eta + C^T lam.

    The Schur complement C Pi^-1 C^T is nonsingular for all mode tables
    (full-row-rank C, SPD Pi); a singular system indicates an internal error.
    """
    PiInvCt = xp.linalg.solve(Pi, xp.transpose(C))
    S = C @ PiInvCt
    rhs = C @ xp.linalg.solve(Pi, xp.asarray(eta) - xp.asarray(tau_k))
    return xp.linalg.solve(S, rhs)


def constrained_acceleration(Pi, C, tau_k, eta, xp=np):
    """xidd = Pi^-1 (tau_k - eta + C^T lam) with lam from constraint_torque."""
    lam = constraint_torque(Pi, C, tau_k, eta, xp=xp)
    force = xp.asarray(tau_k) - xp.asarray(eta) + xp.transpose(C) @ lam
    return xp.linalg.solve(Pi, force), lam


def flow(x, u_theta, mode: BsaMode | int, par: PendulumParams, k=None, xp=np,
         constraint_tol=None):
    """State derivative in mode p: (u_theta, xidot, constrained acceleration).

    If constraint_tol is given (numpy path only), the input state is checked
    against the mode's velocity constraint and a ConstraintViolation is
    raised when it drifts beyond the tolerance.
    """
    if isinstance(mode, int):
        mode = BSA_MODES[mode]
    if k is None:
        k = par.stiffness
    theta, xi, xidot = split_state(x, xp=xp)
    if constraint_tol is not None:
        drift = float(np.linalg.norm(np.asarray(mode.C @ xidot)))
        if drift > constraint_tol:
            raise ConstraintViolation(
                f"mode {mode.name}: |C xidot| = {drift:.3e} exceeds tolerance "
                f"{constraint_tol:.1e}")
    psi, q = xi[0:2], xi[2:4]
    qdot = xidot[2:4]
    Pi = big_inertia(q, par, xp=xp)
    eta = xp.concatenate([xp.zeros(2), bias(q, qdot, par, xp=xp)])
    tau_k = spring_torque(theta, psi, k, xp=xp)
    acc, _ = constrained_acceleration(Pi, xp.asarray(mode.C), tau_k, eta, xp=xp)
    return xp.concatenate([xp.asarray(u_theta), xidot, acc])


def impact_map(Pi, C, xidot_minus, xp=np):
    """Momentum-conserving velocity reset onto C xidot = 0.

    Returns (xidot_plus, Lambda) with Lambda the contact impulse. This is the
    Pi-orthogonal projection of xidot_minus onto the constraint's null space,
    so kinetic energy (in the Pi metric) never increases and the map is
    idempotent.
    """
    xidot_minus = xp.asarray(xidot_minus)
    PiInvCt = xp.linalg.solve(Pi, xp.transpose(C))
    S = C @ PiInvCt
    Lam = -xp.linalg.solve(S, C @ xidot_minus)
    return xidot_minus + PiInvCt @ Lam, Lam


def jump(x_minus, target: BsaMode | int, par: PendulumParams, xp=np):
    """Discrete transition into `target`: positions kept, velocities reset.

    Returns (x_plus, Lambda).
    """
    if isinstance(target, int):
        target = BSA_MODES[target]
    theta, xi, xidot = split_state(x_minus, xp=xp)
    Pi = big_inertia(xi[2:4], par, xp=xp)
    xidot_plus, Lam = impact_map(Pi, xp.asarray(target.C), xidot, xp=xp)
    return xp.concatenate([theta, xi, xidot_plus]), Lam


@dataclass(frozen=True)
class SwitchingSignal:
    """Scheduled mode sequence: ordered (mode index, duration) pairs."""

    stages: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.stages:
            raise ValueError("switching signal needs at least one stage")
        for p, T in self.stages:
            if p not in BSA_MODES:
                raise ValueError(f"unknown mode index {p}")
            if T < 0.0:
                raise ValueError(f"stage duration must be nonnegative, got {T}")

    @property
    def horizon(self) -> float:
        return sum(T for _, T in self.stages)

    @classmethod
    def from_pairs(cls, pairs) -> "SwitchingSignal":
        return cls(tuple((int(p), float(T)) for p, T in pairs))
