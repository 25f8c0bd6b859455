"""Electrical models: oil-immersed brushless drive, battery ledgers, solar and flight energy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .physics import Environment, VbsState, gauge_pressure

Medium = Literal["air", "oil"]

# 6S pack: 25.2 V * 3.5 Ah
MUG_BATTERY_WH = 25.2 * 3.5


@dataclass(frozen=True)
class MotorModel:
    """Brushless drive of the buoyancy piston.

    Oil immersion multiplies the demanded current; the drive clamps at the
    continuous rating and slows the piston instead of faulting.
    """

    current_limit: float = 0.5          # A continuous
    oil_current_multiplier: float = 5.0
    bus_voltage_nominal: float = 25.2   # V
    drivetrain_efficiency: float = 0.3  # leadscrew + gearing
    no_load_current: float = 0.02       # A
    max_piston_speed: float = 2.0e-3    # m/s

    def __post_init__(self) -> None:
        if self.current_limit <= self.no_load_current:
            raise ValueError("current_limit must exceed no_load_current")
        if not 0 < self.drivetrain_efficiency <= 1:
            raise ValueError("drivetrain_efficiency must be in (0, 1]")


@dataclass(frozen=True)
class MotorOperatingPoint:
    current: float        # A actually drawn
    achieved_speed: float  # m/s piston speed actually reached
    saturated: bool


def motor_current(
    load_force: float,
    piston_speed: float,
    medium: Medium,
    model: MotorModel,
) -> MotorOperatingPoint:
    """Demanded current for a piston load, with the continuous-rating clamp.

    Demanded current is (no-load + mechanical power / (eta * V_bus)) scaled by
    the oil multiplier when immersed. Above the limit the drive backs the
    speed off so the demand sits exactly at the limit.
    """
    if load_force < 0:
        raise ValueError("load_force must be >= 0")
    if not 0 <= piston_speed <= model.max_piston_speed * (1 + 1e-9):
        raise ValueError("piston_speed outside [0, max_piston_speed]")
    k = model.oil_current_multiplier if medium == "oil" else 1.0
    eta_v = model.drivetrain_efficiency * model.bus_voltage_nominal
    demanded = (model.no_load_current + load_force * piston_speed / eta_v) * k
    if demanded <= model.current_limit:
        return MotorOperatingPoint(demanded, piston_speed, False)
    if load_force <= 0.0:
        # No-load demand alone exceeds the rating: nothing to back off.
        return MotorOperatingPoint(model.current_limit, 0.0, True)
    achieved = (model.current_limit / k - model.no_load_current) * eta_v / load_force
    return MotorOperatingPoint(model.current_limit, max(achieved, 0.0), True)


def vbs_stroke_energy(
    depth: float,
    delta_fraction: float,
    model: MotorModel,
    env: Environment,
    vbs: VbsState | None = None,
) -> float:
    """Battery energy (Wh) to move the piston by a signed fraction at a depth.

    Pumping out (increasing displaced volume) works against gauge pressure at
    the drivetrain efficiency; retracting costs only the no-load overhead for
    the stroke duration, since ambient pressure does the work.
    """
    if abs(delta_fraction) > 1.0:
        raise ValueError("|delta_fraction| must be <= 1")
    if vbs is None:
        vbs = VbsState()
    duration = abs(delta_fraction) * vbs.stroke_length / model.max_piston_speed
    overhead_j = model.no_load_current * model.bus_voltage_nominal * duration
    work_j = 0.0
    if delta_fraction > 0.0:
        work_j = (
            gauge_pressure(depth, env)
            * delta_fraction
            * vbs.max_displaced_volume
            / model.drivetrain_efficiency
        )
    return (work_j + overhead_j) / 3600.0


@dataclass
class EnergyStore:
    """Battery charge ledger in Wh with conservation counters."""

    capacity: float
    charge: float
    voltage_nominal: float = 25.2
    reserve_floor: float = 0.0   # Wh; owner faults below this
    initial_charge: float | None = None
    cumulative_in: float = 0.0
    cumulative_out: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.charge <= self.capacity:
            raise ValueError("charge must be in [0, capacity]")
        if self.initial_charge is None:
            self.initial_charge = self.charge

    def ledger_residual(self) -> float:
        """charge - (initial + in - out); should be ~0 always."""
        return self.charge - (self.initial_charge + self.cumulative_in - self.cumulative_out)


@dataclass(frozen=True)
class BatteryStatus:
    low_battery: bool
    depleted: bool      # a draw was demanded while the store could not supply it all
    applied_wh: float   # signed: positive = drawn from the store
    curtailed_wh: float  # demand (or inflow) that the clamp refused


def battery_step(store: EnergyStore, net_power: float, dt: float) -> tuple[EnergyStore, BatteryStatus]:
    """Apply a signed power (positive = discharge) for dt seconds.

    The store never leaves [0, capacity]; counters record only the transfer
    actually applied, the remainder is reported as curtailed.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    transfer = net_power * dt / 3600.0  # Wh demanded out of the store
    new = EnergyStore(
        capacity=store.capacity,
        charge=store.charge,
        voltage_nominal=store.voltage_nominal,
        reserve_floor=store.reserve_floor,
        initial_charge=store.initial_charge,
        cumulative_in=store.cumulative_in,
        cumulative_out=store.cumulative_out,
    )
    depleted = False
    if transfer >= 0.0:
        applied = min(transfer, store.charge)
        curtailed = transfer - applied
        depleted = curtailed > 0.0
        new.charge = store.charge - applied
        new.cumulative_out += applied
        signed = applied
    else:
        inflow = -transfer
        applied = min(inflow, store.capacity - store.charge)
        curtailed = inflow - applied
        new.charge = store.charge + applied
        new.cumulative_in += applied
        signed = -applied
    low = new.charge < new.reserve_floor
    return new, BatteryStatus(low, depleted, signed, curtailed)


def solar_harvest(time_of_day: float, env: Environment) -> float:
    """Instantaneous panel power (W): positive half-sinusoid daylight model."""
    if not 0 <= time_of_day < env.day_length:
        raise ValueError("time_of_day must be in [0, day_length)")
    return max(0.0, env.solar_peak * math.sin(2.0 * math.pi * time_of_day / env.day_length))


@dataclass
class UavPowerModel:
    """Multirotor energy model sized for a small payload-class airframe."""

    hover_power: float = 350.0   # W
    cruise_power: float = 250.0  # W
    cruise_speed: float = 10.0   # m/s
    payload_power_multiplier: float = 1.3
    recharge_power: float = 60.0  # W from the dock
    battery: EnergyStore = field(
        default_factory=lambda: EnergyStore(capacity=100.0, charge=100.0, reserve_floor=5.0)
    )

    def __post_init__(self) -> None:
        if min(self.hover_power, self.cruise_power, self.cruise_speed, self.recharge_power) <= 0:
            raise ValueError("powers and cruise_speed must be > 0")
        if self.payload_power_multiplier < 1:
            raise ValueError("payload_power_multiplier must be >= 1")


def uav_leg_energy(
    distance: float,
    hover_time: float,
    carrying_payload: bool,
    model: UavPowerModel,
) -> float:
    """Energy (Wh) for one flight leg: cruise over a distance plus a hover."""
    if distance < 0 or hover_time < 0:
        raise ValueError("distance and hover_time must be >= 0")
    mult = model.payload_power_multiplier if carrying_payload else 1.0
    joules_like = model.cruise_power * (distance / model.cruise_speed) + model.hover_power * hover_time
    return joules_like * mult / 3600.0
