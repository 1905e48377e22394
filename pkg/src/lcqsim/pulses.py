"""Smooth tanh-edged pulse profiles for parameter modulation.

A pulse turns a circuit parameter (capacitance ratio or bridge inverse
inductance) on around t1 and off around t2 with edge width T:

    value(t) = (amplitude / 2) * (tanh((t - t1) / T) - tanh((t - t2) / T))

The plateau value is `amplitude`, reached when t2 - t1 >> T.  A useful
identity of this shape is that its integral over the whole real line is
exactly amplitude * (t2 - t1), independent of T, which makes pulse-area
based gate designs exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PulseProfile", "pulse_value", "pulse_area", "log_cosh"]


@dataclass(frozen=True)
class PulseProfile:
    """Four-parameter tanh window.

    amplitude : plateau value of the modulated quantity
    t1, t2    : switch-on and switch-off times, t1 <= t2
    T         : edge smoothing width, > 0
    """

    amplitude: float
    t1: float
    t2: float
    T: float

    def __post_init__(self) -> None:
        if not (self.t1 <= self.t2):
            raise ValueError(f"pulse needs t1 <= t2, got t1={self.t1}, t2={self.t2}")
        if not (self.T > 0):
            raise ValueError(f"pulse needs T > 0, got T={self.T}")
        if not np.isfinite(self.amplitude):
            raise ValueError("pulse amplitude must be finite")


def pulse_value(profile: PulseProfile, t):
    """Evaluate the pulse at time t (scalar or array)."""
    a = 0.5 * profile.amplitude
    return a * (np.tanh((t - profile.t1) / profile.T) - np.tanh((t - profile.t2) / profile.T))


def log_cosh(x):
    """log(cosh(x)), stable for large |x|."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - np.log(2.0)


def pulse_area(profile: PulseProfile, t: float) -> float:
    """Integral of the pulse from time 0 to t, in closed form.

    The antiderivative of tanh((s - a)/T) is T log cosh((s - a)/T); cosh is
    even, so the lower limit contributes log cosh(a/T) terms.  For
    T << t1 < t2 << t the area approaches amplitude * (t2 - t1).
    """
    a = 0.5 * profile.amplitude * profile.T
    return float(
        a
        * (
            log_cosh((t - profile.t1) / profile.T)
            - log_cosh(profile.t1 / profile.T)
            - log_cosh((t - profile.t2) / profile.T)
            + log_cosh(profile.t2 / profile.T)
        )
    )
