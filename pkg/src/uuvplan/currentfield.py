"""Ocean current velocity as a function of position and time.

Static currents are uniform and constant. In 3D the direction is given by
an elevation ``theta_xy`` above the X-Y plane and an azimuth ``theta_xz``
measured from +X inside the X-Y plane, giving

    v = s * (cos(el) cos(az), cos(el) sin(az), sin(el))

The dynamic 2D model oscillates heading and speed sinusoidally:

    theta(t) = theta0 + A_theta * sin(2 pi t / T_theta)
    s(t)     = max(0, s0 + A_s * sin(2 pi t / T_s))
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from uuvplan import _kernels

KINDS = ("static2d", "static3d", "dynamic2d")


@dataclass(frozen=True)
class CurrentSpec:
    """Current model parameters. Angles in degrees, speeds in m/s, periods in s."""

    kind: str = "static2d"
    speed: float = 0.0
    theta_xy: float = 0.0
    theta_xz: float = 0.0
    base_angle: float = 0.0
    angle_amplitude: float = 90.0
    angle_period: float = 20.0
    speed_amplitude: float = 0.2
    speed_period: float = 15.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown current kind {self.kind!r}; expected one of {KINDS}")
        if self.speed < 0:
            raise ValueError(f"current speed must be >= 0, got {self.speed}")
        if self.kind == "dynamic2d" and (self.angle_period < 0 or self.speed_period < 0):
            raise ValueError("dynamic current periods must be >= 0")

    @property
    def dims(self) -> int:
        return 3 if self.kind == "static3d" else 2

    @property
    def is_static(self) -> bool:
        return self.kind != "dynamic2d"

    @classmethod
    def static2d(cls, speed: float, theta: float = 0.0) -> "CurrentSpec":
        return cls("static2d", speed, theta_xy=theta)

    @classmethod
    def static3d(cls, speed: float, elevation: float, azimuth: float) -> "CurrentSpec":
        return cls("static3d", speed, theta_xy=elevation, theta_xz=azimuth)

    @classmethod
    def dynamic2d(cls, speed: float = 0.3, **params) -> "CurrentSpec":
        return cls("dynamic2d", speed, **params)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CurrentSpec":
        return cls(**data)

    def params(self) -> np.ndarray:
        """Flat float vector consumed by the integration kernels."""
        p = np.zeros(10)
        if self.kind == "dynamic2d":
            p[_kernels.CUR_KIND] = _kernels.CUR_DYNAMIC
            p[_kernels.CUR_THETA0] = math.radians(self.base_angle)
            p[_kernels.CUR_THETA_AMP] = math.radians(self.angle_amplitude)
            p[_kernels.CUR_THETA_PERIOD] = self.angle_period
            p[_kernels.CUR_SPEED0] = self.speed
            p[_kernels.CUR_SPEED_AMP] = self.speed_amplitude
            p[_kernels.CUR_SPEED_PERIOD] = self.speed_period
            return p
        if self.kind == "static2d":
            th = math.radians(self.theta_xy)
            v = (self.speed * math.cos(th), self.speed * math.sin(th), 0.0)
        else:
            el, az = math.radians(self.theta_xy), math.radians(self.theta_xz)
            v = (
                self.speed * math.cos(el) * math.cos(az),
                self.speed * math.cos(el) * math.sin(az),
                self.speed * math.sin(el),
            )
        p[_kernels.CUR_VX : _kernels.CUR_VZ + 1] = v
        return p


def sample(spec: CurrentSpec, position=None, time: float = 0.0, dims: int | None = None) -> np.ndarray:
    """Current velocity at ``position`` and ``time``.

    All built-in models are spatially uniform, so ``position`` only fixes the
    arity of the result when ``dims`` is not given.
    """
    if time < 0:
        raise ValueError(f"time must be >= 0, got {time}")
    if dims is None:
        dims = len(position) if position is not None else spec.dims
    out = np.empty(3)
    _kernels.current_velocity(spec.params(), float(time), out)
    return out[:dims]
