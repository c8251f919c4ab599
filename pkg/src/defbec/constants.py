"""Physical constants (SI) and unit helpers."""

import math

from scipy import constants as _c

HBAR = _c.hbar
EPS0 = _c.epsilon_0
C = _c.c
KB = _c.k
AMU = _c.atomic_mass

TWO_PI = 2.0 * math.pi


def angular(f_hz):
    """Convert an ordinary frequency (Hz, i.e. a "/2pi" value) to rad/s."""
    return TWO_PI * f_hz


def hertz(omega):
    """Convert rad/s back to Hz."""
    return omega / TWO_PI
