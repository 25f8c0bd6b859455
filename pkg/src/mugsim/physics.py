"""Hydrostatics, buoyancy-engine force mapping and vertical dynamics for the MUG.

All functions are pure: they take value records and return new ones. Sign
conventions: depth and vertical velocity are positive DOWN, buoyant force is
positive UP. Horizontal axes are local east/north meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

# (x_east, y_north, depth) -> (u_east, v_north) water velocity in m/s
CurrentField = Callable[[float, float, float], "tuple[float, float]"]

CRUSH_DEPTH_DEFAULT = 200.0  # m, hard operational limit of the pressure design
ADDED_MASS_FACTOR_DEFAULT = 0.1  # slender-body entrained-water allowance


def no_current(x: float, y: float, depth: float) -> tuple[float, float]:
    return (0.0, 0.0)


def uniform_current(east: float, north: float) -> CurrentField:
    """Build a depth- and position-independent current field."""

    def current(x: float, y: float, depth: float) -> tuple[float, float]:
        return (east, north)

    return current


@dataclass(frozen=True)
class Environment:
    """Ambient ocean and sky conditions shared by every vehicle."""

    water_density: float = 1025.0       # kg/m^3
    gravity: float = 9.81               # m/s^2
    surface_pressure: float = 101325.0  # Pa absolute at depth 0
    current: CurrentField = field(default=no_current)
    max_current: float = 0.5            # m/s, validation bound for config
    solar_peak: float = 50.0            # W at local noon
    day_length: float = 86400.0         # s

    def __post_init__(self) -> None:
        if self.water_density <= 0:
            raise ValueError("water_density must be > 0")
        if self.gravity <= 0:
            raise ValueError("gravity must be > 0")
        if self.surface_pressure <= 0:
            raise ValueError("surface_pressure must be > 0")


@dataclass(frozen=True)
class MugBody:
    """Rigid-hull parameters of one glider.

    hull_volume is the displacement at piston-neutral and is normally
    back-computed from mass so the vehicle trims neutral (see trimmed()); the
    as-built geometry is denser than seawater, so displacement is calibrated
    rather than derived from length/diameter.
    """

    mass: float = 2.6            # kg, total in air
    diameter: float = 0.07       # m
    length: float = 0.56         # m
    frontal_area: float = math.pi * 0.035 * 0.035  # m^2, pi*(d/2)^2
    drag_coefficient: float = 1.0
    hull_volume: float = 2.6 / 1025.0  # m^3, neutral-trim displacement

    def __post_init__(self) -> None:
        if self.mass <= 0:
            raise ValueError("mass must be > 0")
        if self.hull_volume <= 0:
            raise ValueError("hull_volume must be > 0")
        if not 0 < self.drag_coefficient < 5:
            raise ValueError("drag_coefficient must be in (0, 5)")
        disc = math.pi * (self.diameter / 2.0) ** 2
        if abs(self.frontal_area - disc) > 0.01 * disc:
            raise ValueError(
                f"frontal_area {self.frontal_area:.6g} inconsistent with "
                f"diameter {self.diameter:.6g} (expected ~{disc:.6g})"
            )

    @classmethod
    def trimmed(cls, env: Environment, **kwargs) -> "MugBody":
        """Build a body whose hull_volume is calibrated for neutral trim.

        With hull_volume = mass / water_density the net buoyant force is zero
        when the piston sits at the neutral fraction.
        """
        body = cls(**{k: v for k, v in kwargs.items() if k != "hull_volume"})
        return replace(body, hull_volume=body.mass / env.water_density)


@dataclass(frozen=True)
class VbsState:
    """Piston position and geometry of the variable-buoyancy engine.

    piston_fraction 0 is fully retracted (minimum displaced volume, heavy);
    1 is fully extended (maximum displaced volume, light).
    """

    piston_fraction: float = 0.5
    piston_rate: float = 0.0             # fraction/s, last commanded slew
    max_displaced_volume: float = 100e-6  # m^3 (100 cc)
    stroke_length: float = 0.20           # m
    piston_area: float = 5.0e-4           # m^2
    max_rate: float = 0.01                # fraction/s mechanical limit (2 mm/s)

    def __post_init__(self) -> None:
        if not 0.0 <= self.piston_fraction <= 1.0:
            raise ValueError("piston_fraction must be in [0, 1]")
        swept = self.piston_area * self.stroke_length
        if abs(swept - self.max_displaced_volume) > 0.01 * self.max_displaced_volume:
            raise ValueError(
                f"piston_area*stroke_length {swept:.6g} inconsistent with "
                f"max_displaced_volume {self.max_displaced_volume:.6g}"
            )
        if abs(self.piston_rate) > self.max_rate * (1 + 1e-9):
            raise ValueError("piston_rate exceeds mechanical limit")


@dataclass(frozen=True)
class MugKinematics:
    """Vehicle kinematic state; depth/vertical velocity positive down."""

    depth: float = 0.0
    vertical_velocity: float = 0.0
    x: float = 0.0   # m east
    y: float = 0.0   # m north
    vx: float = 0.0  # m/s east
    vy: float = 0.0  # m/s north
    pitch: float = 0.0  # rad, glide option only

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be >= 0")


def hydrostatic_pressure(depth: float, env: Environment) -> float:
    """Absolute pressure (Pa) at a depth. Monotone increasing in depth."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    return env.surface_pressure + env.water_density * env.gravity * depth


def gauge_pressure(depth: float, env: Environment) -> float:
    """Pressure above surface pressure (Pa) at a depth."""
    return hydrostatic_pressure(depth, env) - env.surface_pressure


def net_buoyant_force(
    vbs: VbsState,
    body: MugBody,
    env: Environment,
    neutral_fraction: float,
) -> float:
    """Net buoyant force in N, positive up.

    Zero at piston_fraction == neutral_fraction when the body was trim
    calibrated (hull_volume = mass / water_density).
    """
    if not 0.0 <= neutral_fraction <= 1.0:
        raise ValueError("neutral_fraction must be in [0, 1]")
    displaced = (
        body.hull_volume
        + (vbs.piston_fraction - neutral_fraction) * vbs.max_displaced_volume
    )
    return env.water_density * env.gravity * displaced - body.mass * env.gravity


def buoyancy_force_swing(vbs: VbsState, env: Environment) -> float:
    """Available control authority: force span over the full piston range."""
    return env.water_density * env.gravity * vbs.max_displaced_volume


def vertical_step(
    kin: MugKinematics,
    force_up: float,
    body: MugBody,
    env: Environment,
    dt: float,
    added_mass_factor: float = ADDED_MASS_FACTOR_DEFAULT,
) -> MugKinematics:
    """Semi-implicit vertical update under buoyancy and quadratic drag.

    The surface clamp absorbs momentum: a vehicle arriving at depth 0 with
    upward velocity stays at 0 with zero vertical velocity (no bounce).
    """
    if not 0 < dt <= 10:
        raise ValueError("dt must be in (0, 10] s")
    m_eff = body.mass * (1.0 + added_mass_factor)
    v = kin.vertical_velocity
    drag = 0.5 * env.water_density * body.drag_coefficient * body.frontal_area * v * abs(v)
    accel = (-force_up - drag) / m_eff  # depth positive down
    v_new = v + dt * accel
    depth_new = kin.depth + dt * v_new
    if depth_new <= 0.0:
        depth_new = 0.0
        if v_new < 0.0:
            v_new = 0.0
    return replace(kin, depth=depth_new, vertical_velocity=v_new)


def glide_step(
    kin: MugKinematics,
    pitch: float,
    glide_ratio: float,
    env: Environment,
    dt: float,
    heading: float = 0.0,
) -> MugKinematics:
    """Horizontal kinematics: steady glide plus current advection.

    Horizontal speed through the water is glide_ratio * |vertical velocity|
    along the heading (radians from east, counterclockwise); at glide_ratio 0
    the vehicle is a pure profiler and only drifts with the current.
    """
    if abs(pitch) > math.radians(45.0) + 1e-12:
        raise ValueError("pitch limited to +/-45 degrees")
    if glide_ratio < 0:
        raise ValueError("glide_ratio must be >= 0")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    speed = glide_ratio * abs(kin.vertical_velocity)
    cur_e, cur_n = env.current(kin.x, kin.y, kin.depth)
    vx = speed * math.cos(heading) + cur_e
    vy = speed * math.sin(heading) + cur_n
    return replace(
        kin,
        x=kin.x + dt * vx,
        y=kin.y + dt * vy,
        vx=vx,
        vy=vy,
        pitch=pitch,
    )


def terminal_speed(force: float, body: MugBody, env: Environment) -> float:
    """Closed-form steady speed magnitude for a constant net force."""
    return math.sqrt(
        2.0 * abs(force)
        / (env.water_density * body.drag_coefficient * body.frontal_area)
    )
