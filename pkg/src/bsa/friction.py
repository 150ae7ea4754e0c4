"""Frictional switch-and-hold mechanism: ramped clutch torques, stick-slip
contact torques and the guard logic of the nine-mode hybrid automaton.

Each joint carries a brake clutch (A resp. C) and a connector clutch
(B resp. D). Sticking contacts are held by a simultaneously solved static
torque; slipping contacts apply a Coulomb torque opposing the relative
velocity, bounded by the commanded capacity M_i(t). Transitions keep the
state continuous (no impulses in this model).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .dynamics import bias, big_inertia, spring_torque
from .modes import (CLUTCHES, CLUTCH_JACOBIANS, JOINT_OF_CLUTCH, FrictionMode,
                    friction_mode_for)
from .params import PendulumParams

#: stacked clutch Jacobian, rows in CLUTCHES order
GAMMA = np.array([CLUTCH_JACOBIANS[i] for i in CLUTCHES])

#: below this relative speed a slipping contact uses its break-away torque
#: direction instead of sign(g) (regularizes the instant of slip onset)
G_EPS = 1e-9


@dataclass(frozen=True)
class FrictionConfig:
    """Stick-slip tuning; the break-away threshold is static_ratio * M_i."""

    static_ratio: float = 1.0   # mu_s / mu_d
    min_dwell: float = 1e-4     # re-stick lockout after a break-away [s]

    def __post_init__(self):
        if self.static_ratio < 1.0:
            raise ValueError("static_ratio (mu_s/mu_d) must be >= 1")
        if self.min_dwell < 0.0:
            raise ValueError("min_dwell must be nonnegative")


@dataclass(frozen=True)
class ClutchCommands:
    """Piecewise-linear torque-capacity commands for the four clutches.

    Engage actions ramp the capacity 0 -> m_max over t_connect, disengage
    actions ramp it back over t_separate. Schedules that would hold both
    clutches of one joint fully engaged at the same time are rejected.
    """

    m_max: float
    t_connect: float = 0.02
    t_separate: float = 0.02
    initially_engaged: frozenset = frozenset()
    actions: tuple = ()  # ordered (t_start, clutch, "engage"|"disengage")

    # per clutch: (times, levels) breakpoint tables, derived in __post_init__
    _tables: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.m_max < 0.0:
            raise ValueError("m_max must be nonnegative")
        if self.t_connect <= 0.0 or self.t_separate <= 0.0:
            raise ValueError("ramp times must be positive")
        for t, i, action in self.actions:
            if i not in CLUTCHES:
                raise ValueError(f"unknown clutch {i!r}")
            if action not in ("engage", "disengage"):
                raise ValueError(f"unknown clutch action {action!r}")
            if t < 0.0:
                raise ValueError("command times must be nonnegative")
        object.__setattr__(self, "_tables", self._build_tables())
        self._check_joint_exclusivity()

    def _build_tables(self):
        tables = {}
        for i in CLUTCHES:
            level = self.m_max if i in self.initially_engaged else 0.0
            times, levels = [0.0], [level]
            for t, j, action in sorted(a for a in self.actions if a[1] == i):
                if t < times[-1]:
                    raise ValueError(
                        f"clutch {i}: command at t={t} overlaps the previous ramp")
                target = self.m_max if action == "engage" else 0.0
                ramp = self.t_connect if action == "engage" else self.t_separate
                # partial ramps keep the full-swing rate m_max / ramp
                dur = ramp * abs(target - levels[-1]) / self.m_max if self.m_max else 0.0
                times.extend([t, t + dur])
                levels.extend([levels[-1], target])
            tables[i] = (np.array(times), np.array(levels))
        return tables

    def _full_intervals(self, i):
        """Closed intervals where clutch i sits at full capacity."""
        times, levels = self._tables[i]
        out = []
        for j, lev in enumerate(levels):
            if lev >= self.m_max and self.m_max > 0.0:
                hi = times[j + 1] if j + 1 < len(times) else np.inf
                if out and out[-1][1] >= times[j]:
                    out[-1] = (out[-1][0], hi)
                else:
                    out.append((times[j], hi))
        return out

    def _check_joint_exclusivity(self):
        for a, b in (("A", "B"), ("C", "D")):
            for lo1, hi1 in self._full_intervals(a):
                for lo2, hi2 in self._full_intervals(b):
                    if max(lo1, lo2) < min(hi1, hi2):
                        raise ValueError(
                            f"clutches {a} and {b} of joint {JOINT_OF_CLUTCH[a]} are "
                            f"both commanded fully engaged around t="
                            f"{max(lo1, lo2):.4f} s")

    def capacity_single(self, i: str, t: float) -> float:
        times, levels = self._tables[i]
        j = bisect.bisect_right(times, t) - 1
        if j >= len(times) - 1:
            return float(levels[-1])
        t0, t1 = times[j], times[j + 1]
        if t1 == t0:
            return float(levels[j + 1])
        frac = (t - t0) / (t1 - t0)
        return float(levels[j] + frac * (levels[j + 1] - levels[j]))

    def capacity(self, t: float) -> np.ndarray:
        """Torque capacities (M_A, M_B, M_C, M_D) at time t."""
        return np.array([self.capacity_single(i, t) for i in CLUTCHES])

    def breakpoints(self) -> np.ndarray:
        """All ramp start/end times (integration grids snap to these)."""
        pts = sorted({float(t) for times, _ in self._tables.values() for t in times})
        return np.array(pts)


def dynamic_torque(g, capacity):
    """Coulomb torque of a slipping contact: -sign(g) * M."""
    return -np.sign(g) * capacity


def static_torques(sticking_rows, Pi, tau_k, eta, extra=None, xp=np):
    """Contact torques holding all sticking contacts simultaneously.

    `sticking_rows` is the (ns, 4) stacked Jacobian of the sticking set.
    Solves Gs Pi^-1 Gs^T zeta = -Gs Pi^-1 b with b = tau_k - eta + extra so
    that every held relative acceleration vanishes.
    """
    b = xp.asarray(tau_k) - xp.asarray(eta)
    if extra is not None:
        b = b + xp.asarray(extra)
    Gs = xp.asarray(sticking_rows)
    PiInvGt = xp.linalg.solve(Pi, xp.transpose(Gs))
    S = Gs @ PiInvGt
    return -xp.linalg.solve(S, Gs @ xp.linalg.solve(Pi, b))


@dataclass(frozen=True)
class ContactState:
    """Contact torques and relative velocities at one instant."""

    g: np.ndarray           # relative velocities, CLUTCHES order
    zeta: np.ndarray        # applied contact torque per clutch
    required: np.ndarray    # holding torque required by sticking clutches (nan if slipping)
    acc: np.ndarray         # resulting xi acceleration


def contact_state(x, mode: FrictionMode, capacities, par: PendulumParams,
                  k=None, slip_hint=None) -> ContactState:
    """Evaluate all contact torques and the constrained acceleration.

    `slip_hint` carries the break-away torque direction per clutch; it is
    only consulted while a slipping contact still has |g| <= G_EPS.
    """
    if k is None:
        k = par.stiffness
    x = np.asarray(x, dtype=float)
    theta, xi, xidot = x[0:2], x[2:6], x[6:10]
    psi, q = xi[0:2], xi[2:4]
    qdot = xidot[2:4]
    Pi = big_inertia(q, par)
    eta = np.concatenate([np.zeros(2), bias(q, qdot, par)])
    tau_k = spring_torque(theta, psi, k)
    g = GAMMA @ xidot
    capacities = np.asarray(capacities, dtype=float)

    zeta = np.zeros(4)
    for idx, i in enumerate(CLUTCHES):
        if i in mode.sticking:
            continue
        if abs(g[idx]) > G_EPS:
            zeta[idx] = dynamic_torque(g[idx], capacities[idx])
        elif slip_hint is not None:
            zeta[idx] = slip_hint[idx] * capacities[idx]

    required = np.full(4, np.nan)
    if mode.sticking:
        order = [idx for idx, i in enumerate(CLUTCHES) if i in mode.sticking]
        Gs = GAMMA[order]
        slip_force = GAMMA.T @ zeta
        zs = static_torques(Gs, Pi, tau_k, eta, extra=slip_force)
        for row, idx in enumerate(order):
            zeta[idx] = zs[row]
            required[idx] = zs[row]

    force = tau_k - eta + GAMMA.T @ zeta
    acc = np.linalg.solve(Pi, force)
    return ContactState(g=g, zeta=zeta, required=required, acc=acc)


def friction_flow(x, u_theta, mode: FrictionMode, capacities,
                  par: PendulumParams, k=None, slip_hint=None,
                  sticking_tol=None):
    """State derivative of the frictional model in the given mode."""
    cs = contact_state(x, mode, capacities, par, k=k, slip_hint=slip_hint)
    if sticking_tol is not None and mode.sticking:
        idxs = [idx for idx, i in enumerate(CLUTCHES) if i in mode.sticking]
        worst = float(np.max(np.abs(cs.g[idxs])))
        if worst > sticking_tol:
            raise ValueError(
                f"sticking set {sorted(mode.sticking)} inconsistent: "
                f"max |g| = {worst:.3e} exceeds {sticking_tol:.1e}")
    x = np.asarray(x, dtype=float)
    return np.concatenate([np.asarray(u_theta, dtype=float), x[6:10], cs.acc])


def dissipation_rate(x, mode: FrictionMode, capacities) -> float:
    """Total frictional power loss sum_i |g_i| M_i over slipping contacts."""
    xidot = np.asarray(x, dtype=float)[6:10]
    g = GAMMA @ xidot
    capacities = np.asarray(capacities, dtype=float)
    rate = 0.0
    for idx, i in enumerate(CLUTCHES):
        if i not in mode.sticking:
            rate += abs(g[idx]) * capacities[idx]
    return rate


def break_away_margin(cs: ContactState, mode: FrictionMode, capacities,
                      cfg: FrictionConfig) -> np.ndarray:
    """Per clutch: static capacity minus required holding torque (nan if slipping).

    A sticking contact breaks away when its margin turns negative.
    """
    capacities = np.asarray(capacities, dtype=float)
    margin = np.full(4, np.nan)
    for idx, i in enumerate(CLUTCHES):
        if i in mode.sticking:
            margin[idx] = cfg.static_ratio * capacities[idx] - abs(cs.required[idx])
    return margin


def can_stick(x, mode: FrictionMode, clutch: str, capacities,
              par: PendulumParams, cfg: FrictionConfig, k=None,
              slip_hint=None):
    """Whether `clutch` (currently slipping, g at zero) can start sticking.

    Returns (target_mode, required_torque) or (None, required_torque). The
    candidate mode must be one of the nine admissible sets and the holding
    torque must stay within the static capacity.
    """
    target = friction_mode_for(mode.sticking | {clutch})
    if target is None:
        return None, np.nan
    cs = contact_state(x, target, capacities, par, k=k, slip_hint=slip_hint)
    idx = CLUTCHES.index(clutch)
    req = float(cs.required[idx])
    cap = float(np.asarray(capacities)[idx])
    if abs(req) <= cfg.static_ratio * cap:
        return target, req
    return None, req
