"""Variable-stiffness baseline: smooth dynamics with stiffness-rate input.

State x = (theta, k, q, qdot) in R^8, input u = (u_theta, u_k) in R^4.
The stiffness integrates the rate input directly; there is no spring
inertia on this model.
"""
from __future__ import annotations

import numpy as np

from .dynamics import bias, mass_matrix
from .params import PendulumParams

#: actuation limits shared by all experiments
U_THETA_MAX = 2.0       # rad/s
U_K_MAX = 650.0         # N m/(rad s)
K_MIN, K_MAX = 0.0, 100.0


def split_state(x, xp=np):
    x = xp.asarray(x)
    return x[0:2], x[2:4], x[4:6], x[6:8]


def vsa_flow(x, u, par: PendulumParams, xp=np):
    """State derivative (u_theta, u_k, qdot, M^-1 (k(theta-q) - h))."""
    theta, k, q, qdot = split_state(x, xp=xp)
    u = xp.asarray(u)
    M = mass_matrix(q, par, xp=xp)
    acc = xp.linalg.solve(M, k * (theta - q) - bias(q, qdot, par, xp=xp))
    return xp.concatenate([u[0:2], u[2:4], qdot, acc])
