"""Power-flow and work accounting for both actuator types.

Per joint and sample: P_out is the power delivered through the spring
output, Es_dot the rate of stored spring energy, and P_in = P_out + Es_dot
the total power flowing into the spring. For the clutch actuator P_out is
evaluated with the spring-output velocity psi_dot (identical to the link
velocity whenever the joint is coupled, zero while the output is braked),
so P_in reduces to the motor power k (theta - psi) theta_dot in every mode.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COLUMNS = ("P_out_1", "P_out_2", "Es_dot_1", "Es_dot_2", "P_in_1", "P_in_2")


def power_out(tau_k, w):
    """Power transmitted through a spring: torque times output velocity."""
    return np.asarray(tau_k) * np.asarray(w)


def spring_energy_rate_bsa(theta, psi, theta_dot, psi_dot, k):
    """d/dt of 1/2 k (theta - psi)^2 per joint."""
    return np.asarray(k) * (np.asarray(theta) - np.asarray(psi)) * (
        np.asarray(theta_dot) - np.asarray(psi_dot))


def spring_energy_rate_vsa(theta, q, theta_dot, q_dot, k, k_dot):
    """Spring energy rate including the stiffness-adjustment term."""
    defl = np.asarray(theta) - np.asarray(q)
    return 0.5 * np.asarray(k_dot) * defl**2 + np.asarray(k) * defl * (
        np.asarray(theta_dot) - np.asarray(q_dot))


def bsa_power_sample(theta, psi, theta_dot, psi_dot, k):
    """(P_out, Es_dot, P_in) per joint for the clutch actuator."""
    tau = np.asarray(k) * (np.asarray(theta) - np.asarray(psi))
    p_out = power_out(tau, psi_dot)
    es_dot = spring_energy_rate_bsa(theta, psi, theta_dot, psi_dot, k)
    return p_out, es_dot, p_out + es_dot


def vsa_power_sample(theta, q, theta_dot, q_dot, k, k_dot):
    """(P_out, Es_dot, P_in) per joint for the variable-stiffness actuator."""
    tau = np.asarray(k) * (np.asarray(theta) - np.asarray(q))
    p_out = power_out(tau, q_dot)
    es_dot = spring_energy_rate_vsa(theta, q, theta_dot, q_dot, k, k_dot)
    return p_out, es_dot, p_out + es_dot


@dataclass(frozen=True)
class WorkSummary:
    """Time-integrated actuator work, split by sign and joint [J]."""

    positive: np.ndarray  # per joint, >= 0
    negative: np.ndarray  # per joint, <= 0
    net: np.ndarray       # per joint

    @property
    def net_total(self) -> float:
        return float(np.sum(self.net))

    @property
    def positive_total(self) -> float:
        return float(np.sum(self.positive))

    @property
    def negative_total(self) -> float:
        return float(np.sum(self.negative))

    def as_dict(self) -> dict:
        return {
            "positive_per_joint": self.positive.tolist(),
            "negative_per_joint": self.negative.tolist(),
            "net_per_joint": self.net.tolist(),
            "positive_total": self.positive_total,
            "negative_total": self.negative_total,
            "net_total": self.net_total,
        }


def work_summary(t, p_in) -> WorkSummary:
    """Trapezoidal work integrals of per-joint input power.

    `t` is the (n,) sample-time vector, `p_in` the (n, 2) input power trace.
    Event times are assumed to be sample points, so impulsive boundaries do
    not smear the integrals.
    """
    t = np.asarray(t, dtype=float)
    p_in = np.asarray(p_in, dtype=float)
    if t.size == 0 or p_in.size == 0:
        raise ValueError("work_summary: empty trajectory")
    if p_in.ndim == 1:
        p_in = p_in[:, None]
    pos = np.trapezoid(np.maximum(p_in, 0.0), t, axis=0)
    neg = np.trapezoid(np.minimum(p_in, 0.0), t, axis=0)
    return WorkSummary(positive=pos, negative=neg, net=pos + neg)
