"""Pulse-area scaling and the fidelity gap between RZZ implementations.

Shows how the cross-resonance pulse shrinks with the rotation angle (first
the flat-top width, then the amplitude), and how the shorter pulse
translates into a better average gate fidelity than composing two full
CNOTs, at every angle.

Run: python demos/04_pulse_scaling_and_fidelity.py
"""

import math

from rksim.engine import NoiseModel
from rksim.fidelity import (average_gate_fidelity, rzz_native_channel,
                            rzz_scaled_channel, rzz_unitary)
from rksim.pulse import PulseCalibration, pulse_duration_ratio, scale_pulse

cal = PulseCalibration()
print("calibrated pi/2 pulse: amplitude", cal.amplitude, "width", cal.width,
      "sigma", cal.sigma, "n_sigma", cal.n_sigma)
print(f"area {cal.area:.2f}, duration {cal.duration:.0f} samples\n")

print(f"{'theta/pi':>9} {'amplitude':>10} {'width':>8} {'area':>8} {'duration':>9} {'ratio':>7}")
for k in (1, 2, 4, 8, 12, 16, 24, 32):
    theta = k * math.pi / 64
    params = scale_pulse(cal, theta)
    print(f"{theta / math.pi:>9.4f} {params.amplitude:>10.4f} {params.width:>8.1f} "
          f"{params.area:>8.2f} {params.duration:>9.1f} "
          f"{pulse_duration_ratio(cal, theta):>7.3f}")

print("\nwidth hits zero once the target area fits under the Gaussian tails;")
print("below that point only the amplitude shrinks and the duration is flat\n")

noise = NoiseModel()
print(f"depolarizing noise: p1={noise.p1}, p2={noise.p2}")
print(f"{'theta/pi':>9} {'F_avg native':>13} {'F_avg scaled':>13} {'gap':>10}")
for k in range(1, 9):
    theta = k * math.pi / 16
    ideal = rzz_unitary(theta)
    native = average_gate_fidelity(ideal, rzz_native_channel(theta, noise))
    scaled = average_gate_fidelity(ideal, rzz_scaled_channel(theta, noise))
    print(f"{theta / math.pi:>9.4f} {native:>13.6f} {scaled:>13.6f} {scaled - native:>10.2e}")

print("\nthe scaled route wins at every angle: one duration-scaled "
      "cross-resonance pulse instead of two full ones")
