"""Pulse-area scaling for cross-resonance two-qubit rotations.

A ZX rotation by pi/2 (the entangling core of a CNOT) is driven by a
flat-top Gaussian pulse with amplitude a, flat-top width w, Gaussian
sigma, and n_sigma standard deviations of tail on each side.  Its area is

    A = |a| w + |a| sigma sqrt(2 pi) erf(n_sigma).

A smaller rotation angle theta in (0, pi/2] needs area scaled by
theta / (pi / 2).  While the target area exceeds the pure-Gaussian area at
full amplitude, only the flat-top width shrinks; below that point the
width is zero and the amplitude itself is scaled down.  The pulse duration
w + 2 n_sigma sigma therefore never grows with theta, which is what makes
scaled gates less noisy than composing full CNOTs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PulseCalibration",
    "PulseParams",
    "scale_pulse",
    "pulse_duration_ratio",
    "reduce_rzz_angle",
]

_HALF_PI = math.pi / 2


@dataclass(frozen=True)
class PulseCalibration:
    """Flat-top Gaussian pulse parameters of the full pi/2 rotation.

    Defaults are representative device-scale magnitudes in units of the
    hardware sample time; everything downstream consumes duration ratios,
    not absolute values.
    """

    amplitude: float = 0.25
    width: float = 400.0
    sigma: float = 64.0
    n_sigma: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 < self.amplitude <= 1.0:
            raise ValueError("amplitude must be in (0, 1]")
        if self.width < 0.0:
            raise ValueError("width must be nonnegative")
        if self.sigma <= 0.0 or self.n_sigma <= 0.0:
            raise ValueError("sigma and n_sigma must be positive")

    @property
    def gaussian_area(self) -> float:
        """Area of the rise and fall tails at the calibrated amplitude."""
        return abs(self.amplitude) * self.sigma * math.sqrt(2.0 * math.pi) * math.erf(self.n_sigma)

    @property
    def area(self) -> float:
        """Total pulse area of the pi/2 rotation."""
        return abs(self.amplitude) * self.width + self.gaussian_area

    @property
    def duration(self) -> float:
        return self.width + 2.0 * self.n_sigma * self.sigma


@dataclass(frozen=True)
class PulseParams:
    """Scaled pulse: amplitude, flat-top width, total area, and duration."""

    amplitude: float
    width: float
    area: float
    duration: float


def scale_pulse(cal: PulseCalibration, theta: float) -> PulseParams:
    """Pulse parameters realizing a ZX rotation by ``theta`` in (0, pi/2].

    The target area is theta / (pi/2) times the calibrated area.  Above
    the pure-Gaussian area the amplitude stays fixed and the width is
    solved from the area formula; below it the width is zero and the
    amplitude scales linearly with the remaining area.
    """
    if not 0.0 < theta <= _HALF_PI + 1e-12:
        raise ValueError("theta must lie in (0, pi/2]")
    target = (theta / _HALF_PI) * cal.area
    tail_factor = cal.sigma * math.sqrt(2.0 * math.pi) * math.erf(cal.n_sigma)
    if target > cal.gaussian_area:
        amplitude = abs(cal.amplitude)
        width = target / amplitude - tail_factor
    else:
        width = 0.0
        amplitude = target / tail_factor
    return PulseParams(
        amplitude=amplitude,
        width=width,
        area=target,
        duration=width + 2.0 * cal.n_sigma * cal.sigma,
    )


def pulse_duration_ratio(cal: PulseCalibration, theta: float) -> float:
    """duration(theta) / duration(pi/2); nondecreasing in theta, 1 at pi/2."""
    return scale_pulse(cal, theta).duration / cal.duration


def reduce_rzz_angle(theta: float) -> float:
    """Magnitude of the cross-resonance pulse angle equivalent to a ZZ
    rotation by ``theta``, folded into [0, pi/2].

    A ZZ rotation is pi-periodic up to single-qubit Z corrections and a
    global phase, and a sign flip is a frame change, so any angle reduces
    to [0, pi/2]; 0 means no pulse is needed at all.
    """
    folded = math.fmod(abs(theta), math.pi)
    if folded > _HALF_PI:
        folded = math.pi - folded
    return folded
