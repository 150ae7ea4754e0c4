"""Physical parameters of the elastic double pendulum.

Defaults reproduce the reference mechanical parameter set used in all
experiments; center-of-mass offsets default to the link midpoints and the
fixed spring stiffness defaults to the upper end of the variable-stiffness
range (100 N m/rad).
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np


@dataclass(frozen=True)
class PendulumParams:
    """Masses, geometry, inertias and stiffnesses (SI units)."""

    m1: float = 5.0      # link 1 mass [kg]
    m2: float = 4.6      # link 2 mass [kg]
    l1: float = 0.34     # link 1 length [m]
    l2: float = 0.34     # link 2 length [m]
    lc1: float = 0.17    # COM distance from joint 1 [m]
    lc2: float = 0.17    # COM distance from joint 2 [m]
    Jl1: float = 0.0453  # link 1 inertia about COM [kg m^2]
    Jl2: float = 0.0492  # link 2 inertia about COM [kg m^2]
    Js1: float = 0.001   # spring inertia joint 1 [kg m^2]
    Js2: float = 0.001   # spring inertia joint 2 [kg m^2]
    k1: float = 100.0    # fixed spring stiffness joint 1 [N m/rad]
    k2: float = 100.0    # fixed spring stiffness joint 2 [N m/rad]
    g: float = 9.81      # gravitational acceleration [m/s^2]

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("m1", "m2", "l1", "l2", "lc1", "lc2", "Jl1", "Jl2", "Js1", "Js2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        for name in ("k1", "k2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.lc1 > self.l1:
            raise ValueError(f"lc1 must not exceed l1 ({self.lc1} > {self.l1})")
        if self.lc2 > self.l2:
            raise ValueError(f"lc2 must not exceed l2 ({self.lc2} > {self.l2})")

    @property
    def spring_inertia(self) -> np.ndarray:
        """Diagonal of the spring inertia block B."""
        return np.array([self.Js1, self.Js2])

    @property
    def stiffness(self) -> np.ndarray:
        """Fixed spring stiffness vector (k1, k2)."""
        return np.array([self.k1, self.k2])

    def with_overrides(self, **kwargs) -> "PendulumParams":
        return replace(self, **kwargs)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_mapping(cls, mapping: dict) -> "PendulumParams":
        """Build from a {field: value} mapping; unknown fields are rejected."""
        known = set(cls.field_names())
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown parameter field(s): {', '.join(sorted(unknown))}")
        return cls(**{k: float(v) for k, v in mapping.items()})
