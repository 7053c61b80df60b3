"""World model: operating area, device placement, UAV kinematics and movement energy.

All quantities are SI internally (meters, seconds, watts, hertz, joules).
Configuration files may use mW/GHz; the config loader converts at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BoundaryViolation, ConstraintViolation


@dataclass(frozen=True)
class Position:
    """Planar location in meters; devices sit at altitude 0, the UAV at a fixed altitude."""

    x: float
    y: float


@dataclass(frozen=True)
class Velocity:
    """Planar velocity in m/s."""

    vx: float
    vy: float

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)


def _check_range(name: str, rng: tuple) -> None:
    lo, hi = rng
    if lo <= 0 or hi <= 0:
        raise ConstraintViolation(f"{name} bounds must be positive, got {rng}")
    if lo > hi:
        raise ConstraintViolation(f"{name} has min > max: {rng}")


@dataclass(frozen=True)
class RadioParams:
    """Wireless link constants shared by all device/UAV channels.

    Link rate is Shannon capacity per channel with a power-law gain
    gain(d) = reference_gain * d**-path_loss_exponent.
    """

    channel_bandwidth: float = 1e6   # Hz per channel
    noise_power: float = 1e-13       # W (-100 dBm)
    reference_gain: float = 1e-4     # gain at 1 m (-40 dB)
    path_loss_exponent: float = 2.0

    def __post_init__(self) -> None:
        if min(self.channel_bandwidth, self.noise_power, self.reference_gain) <= 0:
            raise ConstraintViolation("radio constants must be positive")
        if self.path_loss_exponent < 2.0:
            raise ConstraintViolation("path_loss_exponent must be >= 2")


@dataclass(frozen=True)
class DataCenterParams:
    """Remote data center reached through the UAV over a wired backhaul."""

    backhaul_rate: float = 1e8       # bit/s
    backhaul_latency: float = 0.02   # s, one way
    frequency: float = 1e10          # Hz
    energy_per_cycle: float = 1e-9   # J

    def __post_init__(self) -> None:
        if min(self.backhaul_rate, self.backhaul_latency, self.frequency,
               self.energy_per_cycle) <= 0:
            raise ConstraintViolation("data center constants must be positive")


@dataclass(frozen=True)
class UavConfig:
    """Airframe and on-board VM parameters."""

    mass: float = 2.0                                     # kg
    altitude: float = 50.0                                # m
    v_max: float = 10.0                                   # m/s
    power_range: tuple[float, float] = (0.040, 0.080)     # W, VM transmit power box
    freq_range: tuple[float, float] = (1.0e9, 2.0e9)      # Hz, VM frequency box
    kappa: float = 1e-28                                  # J*s^2, compute energy coefficient

    def __post_init__(self) -> None:
        if min(self.mass, self.altitude, self.v_max, self.kappa) <= 0:
            raise ConstraintViolation("UAV constants must be positive")
        _check_range("uav.power_range", self.power_range)
        _check_range("uav.freq_range", self.freq_range)


@dataclass(frozen=True)
class Scenario:
    """One concrete world: geometry, device fleet and all physical constants."""

    area_side: float
    md_positions: tuple[Position, ...]
    num_channels: int = 40
    slot_length: float = 0.1
    epsilon: float = 0.5
    epsilon_range: tuple[float, float] = (0.05, 1.00)
    md_power_range: tuple[float, float] = (0.030, 0.070)  # W
    md_freq_range: tuple[float, float] = (0.5e9, 2.0e9)   # Hz
    kappa_md: float = 1e-28
    gamma_shape: float = 2.0
    gamma_rate: float = 2.0
    uav: UavConfig = field(default_factory=UavConfig)
    radio: RadioParams = field(default_factory=RadioParams)
    dc: DataCenterParams = field(default_factory=DataCenterParams)

    def __post_init__(self) -> None:
        if self.area_side <= 0:
            raise ConstraintViolation("area_side must be positive")
        if len(self.md_positions) < 1:
            raise ConstraintViolation("need at least one mobile device")
        if self.num_channels < 1:
            raise ConstraintViolation("need at least one channel")
        if self.slot_length <= 0:
            raise ConstraintViolation("slot_length must be positive")
        lo, hi = self.epsilon_range
        if not lo <= self.epsilon <= hi:
            raise ConstraintViolation(
                f"epsilon {self.epsilon} outside its domain [{lo}, {hi}]")
        _check_range("md_power_range", self.md_power_range)
        _check_range("md_freq_range", self.md_freq_range)
        if min(self.kappa_md, self.gamma_shape, self.gamma_rate) <= 0:
            raise ConstraintViolation("kappa_md, gamma_shape, gamma_rate must be positive")
        for p in self.md_positions:
            if not (0 <= p.x <= self.area_side and 0 <= p.y <= self.area_side):
                raise BoundaryViolation(f"device at {p} outside the {self.area_side} m area")

    @property
    def num_mds(self) -> int:
        return len(self.md_positions)


def step_position(pos: Position, v: Velocity, slot_length: float,
                  area_side: float) -> Position:
    """Advance a position by one timeslot of constant velocity."""
    nx = pos.x + v.vx * slot_length
    ny = pos.y + v.vy * slot_length
    if not (0 <= nx <= area_side and 0 <= ny <= area_side):
        raise BoundaryViolation(
            f"step from ({pos.x}, {pos.y}) leaves the area: ({nx}, {ny})")
    return Position(nx, ny)


def travel_distance(prev: Position, cur: Position) -> float:
    """Planar Euclidean distance between consecutive positions."""
    return math.hypot(cur.x - prev.x, cur.y - prev.y)


def movement_energy(v: Velocity, cfg: UavConfig, slot_length: float) -> float:
    """Kinetic movement energy for one slot: 0.5 * mass * slot_length * speed^2."""
    speed = v.speed
    if speed > cfg.v_max * (1.0 + 1e-12):
        raise ConstraintViolation(f"speed {speed} exceeds v_max {cfg.v_max}")
    return 0.5 * cfg.mass * slot_length * (v.vx * v.vx + v.vy * v.vy)
