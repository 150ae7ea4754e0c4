"""Deterministic integration of the three dynamics families.

Fixed-step classical Runge-Kutta is the reference integrator; scheduled
switch times, input breakpoints and command ramp corners are snapped onto
the grid so events always coincide with samples. The frictional simulator
additionally localizes state-dependent stick/slip transitions by bisection.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import power as power_mod
from .dynamics import energy
from .friction import (G_EPS, ClutchCommands, FrictionConfig,
                       break_away_margin, can_stick, contact_state,
                       friction_flow)
from .hybrid import ConstraintViolation, SwitchingSignal, flow, jump
from .modes import BSA_MODES, CLUTCHES, FRICTION_MODES, FrictionMode
from .params import PendulumParams
from .vsa import vsa_flow
from .dynamics import tcp_velocity

ENERGY_COLUMNS = ("E_kin_link", "E_kin_spring", "E_pot_gravity",
                  "E_pot_spring_1", "E_pot_spring_2")


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-4              # base step size [s]
    method: str = "rk4"           # "rk4" or "rk45-adaptive"
    event_tol: float = 1e-9       # bisection window for state events [s]
    constraint_tol: float = 1e-6  # allowed drift of active constraints [rad/s]
    rtol: float = 1e-9            # adaptive method only
    atol: float = 1e-12

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.event_tol <= 0.0 or self.constraint_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.method not in ("rk4", "rk45-adaptive"):
            raise ValueError(f"unknown integrator method {self.method!r}")


@dataclass(frozen=True)
class Event:
    t: float
    kind: str                 # scheduled-switch | impulse | stick | slip
    mode_before: int
    mode_after: int
    impulse: np.ndarray | None = None
    clutch: str | None = None
    xidot_minus: np.ndarray | None = None
    xidot_plus: np.ndarray | None = None

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "kind": self.kind,
            "mode_before": self.mode_before,
            "mode_after": self.mode_after,
            "impulse": None if self.impulse is None else list(self.impulse),
            "clutch": self.clutch,
        }


class InputSignal:
    """Time-dependent input with optional breakpoints for grid snapping."""

    def __init__(self, fn, breakpoints=(), nu=2):
        self._fn = fn
        self.breakpoints = np.asarray(sorted(set(float(b) for b in breakpoints)))
        self.nu = nu

    def __call__(self, t):
        return np.asarray(self._fn(t), dtype=float)

    @classmethod
    def constant(cls, u):
        u = np.asarray(u, dtype=float)
        return cls(lambda t: u, nu=u.size)

    @classmethod
    def zoh(cls, times, values):
        """Piecewise-constant signal: values[i] holds on [times[i], times[i+1])."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if len(times) != len(values):
            raise ValueError("zoh: times and values must have equal length")

        def fn(t):
            i = int(np.clip(np.searchsorted(times, t, side="right") - 1,
                            0, len(values) - 1))
            return values[i]

        return cls(fn, breakpoints=times, nu=values.shape[1] if values.ndim > 1 else 1)


def as_input(u, nu=2) -> InputSignal:
    if isinstance(u, InputSignal):
        return u
    if callable(u):
        return InputSignal(u, nu=nu)
    return InputSignal.constant(np.broadcast_to(np.asarray(u, float), (nu,)))


@dataclass
class Trajectory:
    """Sampled run of one model plus its event log.

    Sample i carries the state at t[i]; the mode column holds the mode
    active on [t[i], t[i+1]). Event times are always sample points; the
    state stored at an event sample is the post-transition state (the event
    record keeps the pre-impact velocities).
    """

    model: str                      # "bsa" | "vsa" | "friction"
    t: np.ndarray                   # (n,)
    x: np.ndarray                   # (n, nx)
    u: np.ndarray                   # (n, nu)
    mode: np.ndarray                # (n,) int
    energy: np.ndarray              # (n, 5), ENERGY_COLUMNS
    power: np.ndarray               # (n, 6), power_mod.COLUMNS
    events: list[Event] = field(default_factory=list)
    stiffness: np.ndarray | None = None  # fixed spring stiffness (bsa/friction)

    def __post_init__(self):
        if np.any(np.diff(self.t) <= 0.0):
            raise ValueError("sample times must be strictly increasing")

    @property
    def q(self) -> np.ndarray:
        return self.x[:, 4:6]

    @property
    def qdot(self) -> np.ndarray:
        return self.x[:, 6:8] if self.model == "vsa" else self.x[:, 8:10]

    def tcp_speed(self, par: PendulumParams) -> np.ndarray:
        out = np.empty(len(self.t))
        for i in range(len(self.t)):
            _, out[i] = tcp_velocity(self.q[i], self.qdot[i], par)
        return out

    def final_tcp_speed(self, par: PendulumParams) -> float:
        _, s = tcp_velocity(self.q[-1], self.qdot[-1], par)
        return float(s)

    def total_energy(self) -> np.ndarray:
        return self.energy.sum(axis=1)

    def potential_energy(self) -> np.ndarray:
        return self.energy[:, 2:5].sum(axis=1)

    def kinetic_energy(self) -> np.ndarray:
        return self.energy[:, 0:2].sum(axis=1)

    def work_summary(self) -> power_mod.WorkSummary:
        return power_mod.work_summary(self.t, self.power[:, 4:6])

    def csv_header(self) -> list[str]:
        nx, nu = self.x.shape[1], self.u.shape[1]
        state_names = {
            "bsa": ["theta_1", "theta_2", "psi_1", "psi_2", "q_1", "q_2",
                    "psidot_1", "psidot_2", "qdot_1", "qdot_2"],
            "friction": ["theta_1", "theta_2", "psi_1", "psi_2", "q_1", "q_2",
                         "psidot_1", "psidot_2", "qdot_1", "qdot_2"],
            "vsa": ["theta_1", "theta_2", "k_1", "k_2", "q_1", "q_2",
                    "qdot_1", "qdot_2"],
        }[self.model]
        assert len(state_names) == nx
        input_names = [f"u_{j+1}" for j in range(nu)] if nu != 4 else \
            ["u_theta_1", "u_theta_2", "u_k_1", "u_k_2"]
        return (["t"] + state_names + input_names + ["mode"]
                + list(ENERGY_COLUMNS) + list(power_mod.COLUMNS))

    def to_csv(self, path):
        header = self.csv_header()
        rows = np.column_stack([self.t, self.x, self.u,
                                self.mode.astype(float), self.energy, self.power])
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            np.savetxt(fh, rows, delimiter=",", fmt="%.12g")

    def summary(self, par: PendulumParams) -> dict:
        ws = self.work_summary()
        return {
            "model": self.model,
            "t_final": float(self.t[-1]),
            "final_tcp_speed": self.final_tcp_speed(par),
            "work": ws.as_dict(),
            "final_energy": dict(zip(ENERGY_COLUMNS, self.energy[-1].tolist())),
            "events": [e.as_dict() for e in self.events],
        }


def rk4_step(f, t, x, h):
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _segment_grid(t0, t1, dt, extra=()):
    """Uniform grid on [t0, t1] with dt steps, landing exactly on t1 and on
    any extra breakpoints inside the segment (last step may be shorter)."""
    if t1 <= t0:
        return np.array([t0])
    n = int(np.floor((t1 - t0) / dt + 1e-9))
    ts = t0 + dt * np.arange(n + 1)
    if ts[-1] < t1 - 1e-12:
        ts = np.append(ts, t1)
    else:
        ts[-1] = t1
    inside = [b for b in extra if t0 + 1e-12 < b < t1 - 1e-12]
    if inside:
        ts = np.unique(np.concatenate([ts, np.asarray(inside)]))
        keep = np.concatenate([[True], np.diff(ts) > 1e-12])
        ts = ts[keep]
        ts[-1] = t1
    return ts


def _integrate_segment(f, t_grid, x0, method, cfg):
    """States at every grid point of one smooth segment."""
    out = np.empty((len(t_grid), x0.size))
    out[0] = x0
    if method == "rk4":
        for i in range(len(t_grid) - 1):
            out[i + 1] = rk4_step(f, t_grid[i], out[i], t_grid[i + 1] - t_grid[i])
    else:
        from scipy.integrate import solve_ivp
        sol = solve_ivp(f, (t_grid[0], t_grid[-1]), x0, method="RK45",
                        t_eval=t_grid, rtol=cfg.rtol, atol=cfg.atol,
                        max_step=cfg.dt * 10)
        if not sol.success:
            raise RuntimeError(f"adaptive integration failed: {sol.message}")
        out[:] = sol.y.T
    return out


def _bsa_energy_power(x, u, k, par):
    e = energy(x[0:2], x[2:6], x[6:10], k, par)
    erow = [e.kinetic_link, e.kinetic_spring, e.potential_gravity,
            e.potential_spring[0], e.potential_spring[1]]
    p_out, es_dot, p_in = power_mod.bsa_power_sample(
        x[0:2], x[2:4], u[0:2], x[6:8], k)
    return erow, [p_out[0], p_out[1], es_dot[0], es_dot[1], p_in[0], p_in[1]]


def simulate_bsa(x0, u, signal: SwitchingSignal, par: PendulumParams,
                 cfg: IntegratorConfig | None = None, k=None) -> Trajectory:
    """Integrate the ideal switched model under a scheduled mode sequence.

    Applies the momentum-conserving jump at every stage boundary and logs
    the impulse. The initial state must satisfy the first stage's velocity
    constraint.
    """
    cfg = cfg or IntegratorConfig()
    if k is None:
        k = par.stiffness
    k = np.asarray(k, dtype=float)
    u = as_input(u, nu=2)
    x0 = np.asarray(x0, dtype=float)
    first = BSA_MODES[signal.stages[0][0]]
    drift0 = np.linalg.norm(first.C @ x0[6:10])
    if drift0 > cfg.constraint_tol:
        raise ConstraintViolation(
            f"initial state violates mode {first.name} constraint "
            f"(|C xidot| = {drift0:.3e})")

    ts, xs, us, ms = [], [], [], []
    events: list[Event] = []
    t0, x = 0.0, x0.copy()
    for s_idx, (p, T) in enumerate(signal.stages):
        mode = BSA_MODES[p]

        def f(t, y, mode=mode):
            return flow(y, u(t), mode, par, k=k)

        grid = _segment_grid(t0, t0 + T, cfg.dt, extra=u.breakpoints)
        seg = _integrate_segment(f, grid, x, cfg.method, cfg)
        drift = np.abs(seg[:, 6:10] @ mode.C.T).max()
        if drift > cfg.constraint_tol:
            raise ConstraintViolation(
                f"constraint drift {drift:.3e} in mode {mode.name} exceeds "
                f"{cfg.constraint_tol:.1e}")
        start = 1 if ts else 0  # segment start repeats previous boundary sample
        for i in range(start, len(grid)):
            ts.append(grid[i]); xs.append(seg[i]); us.append(u(grid[i]))
            ms.append(p)
        x, t0 = seg[-1], grid[-1]
        if s_idx + 1 < len(signal.stages):
            p_next = signal.stages[s_idx + 1][0]
            x_plus, Lam = jump(x, p_next, par)
            events.append(Event(t=t0, kind="scheduled-switch", mode_before=p,
                                mode_after=p_next, impulse=np.asarray(Lam),
                                xidot_minus=x[6:10].copy(),
                                xidot_plus=np.asarray(x_plus)[6:10].copy()))
            x = np.asarray(x_plus)
            xs[-1] = x
            ms[-1] = p_next

    t_arr = np.asarray(ts)
    x_arr = np.asarray(xs)
    u_arr = np.asarray(us)
    e_arr = np.empty((len(ts), 5))
    p_arr = np.empty((len(ts), 6))
    for i in range(len(ts)):
        e_arr[i], p_arr[i] = _bsa_energy_power(x_arr[i], u_arr[i], k, par)
    return Trajectory(model="bsa", t=t_arr, x=x_arr, u=u_arr,
                      mode=np.asarray(ms, dtype=int), energy=e_arr,
                      power=p_arr, events=events, stiffness=k)


def simulate_vsa(x0, u, t_f, par: PendulumParams,
                 cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate the variable-stiffness model (no events).

    The stiffness states are clamped at zero from below; a clamp triggers a
    single warning (discretization can push k marginally negative).
    """
    cfg = cfg or IntegratorConfig()
    u = as_input(u, nu=4)
    x0 = np.asarray(x0, dtype=float)
    grid = _segment_grid(0.0, t_f, cfg.dt, extra=u.breakpoints)

    def f(t, y):
        return vsa_flow(y, u(t), par)

    xs = np.empty((len(grid), 8))
    xs[0] = x0
    clamped = False
    for i in range(len(grid) - 1):
        nxt = rk4_step(f, grid[i], xs[i], grid[i + 1] - grid[i])
        if nxt[2] < 0.0 or nxt[3] < 0.0:
            clamped = True
            nxt[2:4] = np.maximum(nxt[2:4], 0.0)
        xs[i + 1] = nxt
    if clamped:
        warnings.warn("vsa: stiffness clamped at 0 from below during integration",
                      stacklevel=2)

    u_arr = np.asarray([u(t) for t in grid])
    e_arr = np.empty((len(grid), 5))
    p_arr = np.empty((len(grid), 6))
    for i, t in enumerate(grid):
        x = xs[i]
        theta, kk, q, qdot = x[0:2], x[2:4], x[4:6], x[6:8]
        e = energy(theta, np.concatenate([q, q]), np.concatenate([[0, 0], qdot]),
                   kk, par)
        e_arr[i] = [e.kinetic_link, 0.0, e.potential_gravity,
                    0.5 * kk[0] * (theta[0] - q[0]) ** 2,
                    0.5 * kk[1] * (theta[1] - q[1]) ** 2]
        p_out, es_dot, p_in = power_mod.vsa_power_sample(
            theta, q, u_arr[i][0:2], qdot, kk, u_arr[i][2:4])
        p_arr[i] = [p_out[0], p_out[1], es_dot[0], es_dot[1], p_in[0], p_in[1]]
    return Trajectory(model="vsa", t=grid, x=xs, u=u_arr,
                      mode=np.zeros(len(grid), dtype=int),
                      energy=e_arr, power=p_arr, events=[])


def initial_friction_mode(x0, commands: ClutchCommands, t=0.0,
                          g_tol=1e-9) -> FrictionMode:
    """Infer the starting mode: contacts at rest with available capacity stick."""
    xidot = np.asarray(x0, dtype=float)[6:10]
    caps = commands.capacity(t)
    from .friction import GAMMA
    g = GAMMA @ xidot
    sticking = {i for idx, i in enumerate(CLUTCHES)
                if abs(g[idx]) <= g_tol and caps[idx] > 0.0}
    from .modes import friction_mode_for
    mode = friction_mode_for(sticking)
    if mode is None:
        raise ValueError(
            f"initial sticking set {sorted(sticking)} is not admissible; "
            "pass initial_mode explicitly")
    return mode


def _bisect_event(step_fn, phi, t_lo, x_lo, t_hi, tol):
    """Earliest time in (t_lo, t_hi] where the scalar phi(t, x(t)) changes sign.

    `step_fn(t0, x0, t1)` integrates the current flow branch; phi(t_lo, x_lo)
    is assumed nonnegative (or of known sign) and phi(t_hi) of opposite sign.
    Returns (t_event, x_event) with the bracketing window shrunk below tol.
    """
    phi_lo = phi(t_lo, x_lo)
    lo, hi = t_lo, t_hi
    x_at_lo = x_lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        x_mid = step_fn(lo, x_at_lo, mid)
        if np.sign(phi(mid, x_mid)) == np.sign(phi_lo) or phi(mid, x_mid) == 0.0:
            lo, x_at_lo = mid, x_mid
        else:
            hi = mid
    return hi, step_fn(lo, x_at_lo, hi)


def simulate_friction(x0, u, commands: ClutchCommands, t_f,
                      par: PendulumParams,
                      cfg: IntegratorConfig | None = None,
                      fric: FrictionConfig | None = None,
                      k=None, initial_mode: FrictionMode | int | None = None,
                      max_events_per_step: int = 20) -> Trajectory:
    """Integrate the frictional contact model with stick/slip transitions.

    State-dependent events (break-away of a sticking contact, zero crossing
    of a slipping contact's relative velocity) are localized by bisection to
    within cfg.event_tol and applied with the state kept continuous.
    """
    cfg = cfg or IntegratorConfig()
    if cfg.method != "rk4":
        raise ValueError("the frictional simulator requires the rk4 method")
    fric = fric or FrictionConfig()
    if k is None:
        k = par.stiffness
    k = np.asarray(k, dtype=float)
    u = as_input(u, nu=2)
    x0 = np.asarray(x0, dtype=float)
    if initial_mode is None:
        mode = initial_friction_mode(x0, commands)
    elif isinstance(initial_mode, int):
        mode = FRICTION_MODES[initial_mode]
    else:
        mode = initial_mode

    slip_hint = np.zeros(4)
    dwell_until = {i: -np.inf for i in CLUTCHES}

    def make_flow(mode, hint):
        def f(t, y):
            return friction_flow(y, u(t), mode, commands.capacity(t), par,
                                 k=k, slip_hint=hint)
        return f

    def stepper(mode, hint):
        f = make_flow(mode, hint)
        return lambda t0, y0, t1: rk4_step(f, t0, y0, t1 - t0)

    def sticking_margins(t, x, mode):
        cs = contact_state(x, mode, commands.capacity(t), par, k=k,
                           slip_hint=slip_hint)
        return cs, break_away_margin(cs, mode, commands.capacity(t), fric)

    base_grid = _segment_grid(0.0, t_f, cfg.dt,
                              extra=np.concatenate([u.breakpoints,
                                                    commands.breakpoints()]))
    ts, xs, us, ms = [0.0], [x0.copy()], [u(0.0)], [mode.p]
    events: list[Event] = []
    t, x = 0.0, x0.copy()
    gi = 1  # next grid index
    while t < t_f - 1e-12:
        t_next = base_grid[gi] if gi < len(base_grid) else t_f
        if t_next <= t + 1e-15:
            gi += 1
            continue
        n_events = 0
        while True:
            # immediate break-away at the current point (cascading events)
            cs_now, margin_now = sticking_margins(t, x, mode)
            broke = [i for idx, i in enumerate(CLUTCHES)
                     if i in mode.sticking and margin_now[idx] < -1e-12]
            if broke:
                i = broke[0]
                idx = CLUTCHES.index(i)
                new_mode = friction_mode_for(mode.sticking - {i})
                events.append(Event(t=t, kind="slip", mode_before=mode.p,
                                    mode_after=new_mode.p, clutch=i))
                slip_hint[idx] = np.sign(cs_now.required[idx])
                dwell_until[i] = t + fric.min_dwell
                mode = new_mode
                ms[-1] = mode.p
                n_events += 1
                if n_events > max_events_per_step:
                    raise RuntimeError(
                        f"event localization failed near t={t:.6f}: more than "
                        f"{max_events_per_step} transitions; reduce dt")
                continue

            step = stepper(mode, slip_hint.copy())
            x_trial = step(t, x, t_next)

            # candidate events inside (t, t_next]
            cand = []
            cs_trial, margin_trial = sticking_margins(t_next, x_trial, mode)
            for idx, i in enumerate(CLUTCHES):
                if i in mode.sticking:
                    if margin_trial[idx] < 0.0 <= margin_now[idx]:
                        phi = (lambda idx: lambda tt, yy:
                               sticking_margins(tt, yy, mode)[1][idx])(idx)
                        cand.append(("slip", i, phi))
                else:
                    g0, g1 = cs_now.g[idx], cs_trial.g[idx]
                    if abs(g0) > G_EPS and np.sign(g1) != np.sign(g0):
                        phi = (lambda idx: lambda tt, yy:
                               contact_state(yy, mode, commands.capacity(tt),
                                             par, k=k).g[idx])(idx)
                        cand.append(("stick", i, phi))
            if not cand:
                t, x = t_next, x_trial
                break

            # localize each candidate, act on the earliest
            localized = []
            for kind, i, phi in cand:
                te, xe = _bisect_event(step, phi, t, x, t_next, cfg.event_tol)
                localized.append((te, kind, i, xe))
            localized.sort(key=lambda item: item[0])
            te, kind, i, xe = localized[0]
            idx = CLUTCHES.index(i)
            if kind == "slip":
                cs_e, _ = sticking_margins(te, xe, mode)
                new_mode = friction_mode_for(mode.sticking - {i})
                events.append(Event(t=te, kind="slip", mode_before=mode.p,
                                    mode_after=new_mode.p, clutch=i))
                slip_hint[idx] = np.sign(cs_e.required[idx])
                dwell_until[i] = te + fric.min_dwell
                mode = new_mode
            else:
                target = None
                if te >= dwell_until[i]:
                    target, _req = can_stick(xe, mode, i, commands.capacity(te),
                                             par, fric, k=k,
                                             slip_hint=slip_hint)
                if target is not None:
                    events.append(Event(t=te, kind="stick", mode_before=mode.p,
                                        mode_after=target.p, clutch=i))
                    mode = target
                slip_hint[idx] = 0.0
            # state is continuous across the transition; record the sample
            if te > ts[-1] + 1e-15:
                ts.append(te); xs.append(xe); us.append(u(te)); ms.append(mode.p)
            else:
                ms[-1] = mode.p
            t, x = te, xe
            n_events += 1
            if n_events > max_events_per_step:
                raise RuntimeError(
                    f"event localization failed near t={t:.6f}: more than "
                    f"{max_events_per_step} transitions; reduce dt")
            if t >= t_next - 1e-15:
                break

        if t >= t_next - 1e-15 and gi < len(base_grid):
            gi += 1
        if t > ts[-1] + 1e-15:
            ts.append(t); xs.append(x.copy()); us.append(u(t)); ms.append(mode.p)

        # sticking consistency monitor
        cs_chk = contact_state(x, mode, commands.capacity(t), par, k=k)
        for idx, i in enumerate(CLUTCHES):
            if i in mode.sticking and abs(cs_chk.g[idx]) > cfg.constraint_tol:
                raise ConstraintViolation(
                    f"sticking clutch {i} drifted to |g| = "
                    f"{abs(cs_chk.g[idx]):.3e} at t={t:.6f}")

    t_arr = np.asarray(ts)
    x_arr = np.asarray(xs)
    u_arr = np.asarray(us)
    e_arr = np.empty((len(ts), 5))
    p_arr = np.empty((len(ts), 6))
    for i in range(len(ts)):
        e_arr[i], p_arr[i] = _bsa_energy_power(x_arr[i], u_arr[i], k, par)
    return Trajectory(model="friction", t=t_arr, x=x_arr, u=u_arr,
                      mode=np.asarray(ms, dtype=int), energy=e_arr,
                      power=p_arr, events=events, stiffness=k)


def resimulate_check(solution, par: PendulumParams,
                     cfg: IntegratorConfig | None = None) -> dict:
    """Re-integrate an OCP solution's inputs and compare against its states.

    Works for any object exposing model, stage structure, node times/states
    and an input signal (see trajopt.OcpSolution). Returns deviation metrics
    between the collocation trajectory and the independent integration.
    """
    cfg = cfg or IntegratorConfig()
    u = solution.input_signal()
    node_t = solution.node_times()
    node_x = solution.node_states()
    if solution.model == "bsa":
        signal = SwitchingSignal.from_pairs(
            zip(solution.stage_modes, solution.T))
        traj = simulate_bsa(solution.x0, u, signal, par, cfg=cfg,
                            k=solution.stiffness)
    elif solution.model == "vsa":
        traj = simulate_vsa(solution.x0, u, float(np.sum(solution.T)), par,
                            cfg=cfg)
    else:
        raise ValueError(f"cannot re-simulate model {solution.model!r}")

    sim_at_nodes = np.empty_like(node_x)
    for j, tn in enumerate(node_t):
        i = int(np.argmin(np.abs(traj.t - tn)))
        sim_at_nodes[j] = traj.x[i]
    dev = np.abs(sim_at_nodes - node_x)
    v_sol = solution.final_tcp_speed(par)
    v_sim = traj.final_tcp_speed(par)
    rel = abs(v_sim - v_sol) / max(abs(v_sol), 1e-12)
    return {
        "max_state_deviation": float(dev.max()),
        "final_tcp_speed_solution": float(v_sol),
        "final_tcp_speed_resim": float(v_sim),
        "final_tcp_speed_rel_deviation": float(rel),
        "trajectory": traj,
    }
