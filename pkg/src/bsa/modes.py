"""Discrete mode tables for the clutch-switchable actuator.

Ideal model: four modes indexed p in {1..4}; each joint is either braked
(DEC, row e_i pins the spring output) or coupled to its link (SEA, row
e_i - e_{i+2} ties spring and link velocities).

Friction model: four clutches A..D (brake/connector per joint) and nine
admissible sticking/slipping index-set combinations; sets with both
clutches of one joint sticking, or more than two sticking, are excluded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BsaMode:
    p: int
    name: str
    c1: int
    c2: int
    C: np.ndarray = field(repr=False)  # 2x4 velocity constraint matrix


def _mode(p, name, c1, c2, rows):
    C = np.array(rows, dtype=float)
    C.setflags(write=False)
    return BsaMode(p=p, name=name, c1=c1, c2=c2, C=C)


BSA_MODES: dict[int, BsaMode] = {
    1: _mode(1, "DEC-DEC", 0, 0, [[1, 0, 0, 0], [0, 1, 0, 0]]),
    2: _mode(2, "SEA-SEA", 1, 1, [[1, 0, -1, 0], [0, 1, 0, -1]]),
    3: _mode(3, "DEC-SEA", 0, 1, [[1, 0, 0, 0], [0, 1, 0, -1]]),
    4: _mode(4, "SEA-DEC", 1, 0, [[1, 0, -1, 0], [0, 1, 0, 0]]),
}

MODE_BY_NAME = {m.name.lower(): m for m in BSA_MODES.values()}


def constraint_matrix(p: int) -> np.ndarray:
    """Velocity constraint matrix C_p of mode p."""
    try:
        return BSA_MODES[p].C
    except KeyError:
        raise ValueError(f"unknown mode index {p}; valid modes are 1..4") from None


def mode_by_name(name: str) -> BsaMode:
    try:
        return MODE_BY_NAME[name.lower()]
    except KeyError:
        raise ValueError(f"unknown mode name {name!r}; valid: "
                         + ", ".join(sorted(MODE_BY_NAME))) from None


# --- friction clutches -------------------------------------------------

CLUTCHES = ("A", "B", "C", "D")

#: rows of d g_i / d xi; brake rows pin psi_i, connector rows tie psi_i to q_i
CLUTCH_JACOBIANS: dict[str, np.ndarray] = {
    "A": np.array([1.0, 0.0, 0.0, 0.0]),
    "B": np.array([1.0, 0.0, -1.0, 0.0]),
    "C": np.array([0.0, 1.0, 0.0, 0.0]),
    "D": np.array([0.0, 1.0, 0.0, -1.0]),
}
for _row in CLUTCH_JACOBIANS.values():
    _row.setflags(write=False)

#: clutches belonging to the same joint may never stick simultaneously
JOINT_OF_CLUTCH = {"A": 1, "B": 1, "C": 2, "D": 2}


def clutch_jacobian(i: str) -> np.ndarray:
    return CLUTCH_JACOBIANS[i]


def relative_velocity(i: str, xidot) -> float:
    """Relative velocity g_i monitored by clutch i."""
    return float(CLUTCH_JACOBIANS[i] @ np.asarray(xidot, dtype=float))


@dataclass(frozen=True)
class FrictionMode:
    p: int
    sticking: frozenset[str]

    @property
    def slipping(self) -> frozenset[str]:
        return frozenset(CLUTCHES) - self.sticking


FRICTION_MODES: dict[int, FrictionMode] = {
    1: FrictionMode(1, frozenset()),
    2: FrictionMode(2, frozenset("A")),
    3: FrictionMode(3, frozenset("B")),
    4: FrictionMode(4, frozenset("C")),
    5: FrictionMode(5, frozenset("D")),
    6: FrictionMode(6, frozenset("AC")),
    7: FrictionMode(7, frozenset("AD")),
    8: FrictionMode(8, frozenset("BC")),
    9: FrictionMode(9, frozenset("BD")),
}

_MODE_BY_STICKING = {m.sticking: m for m in FRICTION_MODES.values()}


def friction_mode_for(sticking) -> FrictionMode | None:
    """Mode with the given sticking set, or None if the set is inadmissible."""
    return _MODE_BY_STICKING.get(frozenset(sticking))


def sticking_set_admissible(sticking) -> bool:
    return frozenset(sticking) in _MODE_BY_STICKING
