"""Number representations used across the package.

``ScaledComplex`` carries a complex value as ``exp(log_mod + i*phase)`` so that
Bessel magnitudes of size ``exp(+-1e5)`` can be multiplied, divided and added
without overflow.  ``LogPoint`` is a point of the logarithmic cover of
``C \\ {0}``, stored through its logarithm ``z``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def sinpi(x):
    """sin(pi*x), exact at integers and half-integers."""
    x = np.asarray(x, dtype=float)
    r = np.fmod(x, 2.0)
    out = np.sin(np.pi * r)
    out = np.where(r == np.round(r), 0.0, out)
    half = (2.0 * r == np.round(2.0 * r)) & (r != np.round(r))
    out = np.where(half, np.where(np.fmod(r - 0.5, 2.0) == 0.0, 1.0, -1.0), out)
    return out[()] if out.ndim == 0 else out


def cospi(x):
    """cos(pi*x), exact at integers and half-integers."""
    return sinpi(np.asarray(x, dtype=float) + 0.5)


def sin_ratio(m, nu):
    """sin(m*pi*nu)/sin(pi*nu) for integer ``m``, finite at integer ``nu``.

    Evaluated as a Chebyshev polynomial of the second kind in cos(pi*nu),
    so there is no 0/0 when nu is an integer.
    """
    m = int(m)
    if m == 0:
        return 0.0
    sign = 1.0 if m > 0 else -1.0
    n = abs(m) - 1
    c = float(cospi(nu))
    u_prev, u = 1.0, 2.0 * c
    if n == 0:
        return sign
    for _ in range(n - 1):
        u_prev, u = u, 2.0 * c * u - u_prev
    return sign * u


@dataclass(frozen=True)
class ScaledComplex:
    """The complex number exp(log_mod + i*phase); phase is not reduced."""

    log_mod: float
    phase: float

    @classmethod
    def from_complex(cls, value, log_scale=0.0):
        """Scaled form of ``value * exp(log_scale)`` (log_scale may be complex)."""
        value = complex(value)
        log_scale = complex(log_scale)
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)) + log_scale.real,
                   cmath.phase(value) + log_scale.imag)

    @classmethod
    def from_log(cls, log_value):
        log_value = complex(log_value)
        return cls(log_value.real, log_value.imag)

    @property
    def is_zero(self):
        return self.log_mod == -math.inf

    def to_complex(self):
        if self.is_zero:
            return 0j
        if self.log_mod > 709.0:
            raise OverflowError(f"magnitude exp({self.log_mod:.6g}) overflows float64")
        return cmath.exp(complex(self.log_mod, self.phase))

    def __complex__(self):
        return self.to_complex()

    def __abs__(self):
        return math.exp(self.log_mod) if self.log_mod < 709.0 else math.inf

    def log(self):
        return complex(self.log_mod, self.phase)

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(self.log_mod + other.log_mod, self.phase + other.phase)
        return self * ScaledComplex.from_complex(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a scaled zero")
        return ScaledComplex(self.log_mod - other.log_mod, self.phase - other.phase)

    def __rtruediv__(self, other):
        return ScaledComplex.from_complex(other) / self

    def __neg__(self):
        return ScaledComplex(self.log_mod, self.phase + math.pi)

    def conjugate(self):
        return ScaledComplex(self.log_mod, -self.phase)

    def __add__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        big, small = (self, other) if self.log_mod >= other.log_mod else (other, self)
        ratio = cmath.exp(complex(small.log_mod - big.log_mod, small.phase - big.phase))
        s = 1.0 + ratio
        if s == 0:
            return ScaledComplex(-math.inf, 0.0)
        return ScaledComplex(big.log_mod + math.log(abs(s)), big.phase + cmath.phase(s))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        return self + (-other)

    def __rsub__(self, other):
        return ScaledComplex.from_complex(other) - self

    def __pow__(self, p):
        p = float(p)
        return ScaledComplex(self.log_mod * p, self.phase * p)


def scaled_sum(terms):
    """Sum an iterable of ScaledComplex values."""
    total = ScaledComplex(-math.inf, 0.0)
    for t in terms:
        total = total + t
    return total


@dataclass(frozen=True)
class LogPoint:
    """Point exp(z) of the logarithmic cover, kept as its logarithm z.

    ``z0`` and ``k`` give the decomposition z = z0 + 2*pi*i*k with
    Im(z0) in [-pi, pi).
    """

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"LogPoint needs a finite logarithm, got {z}")
        object.__setattr__(self, "z", z)

    @classmethod
    def from_parts(cls, z0, k):
        z0 = complex(z0)
        if not (-math.pi <= z0.imag < math.pi):
            raise DomainError("Im(z0) must lie in [-pi, pi)")
        return cls(z0 + 1j * TWO_PI * int(k))

    @classmethod
    def from_value(cls, t):
        """Principal-sheet point for a nonzero complex number t."""
        t = complex(t)
        if t == 0:
            raise DomainError("the origin is not on the logarithmic cover")
        return cls(cmath.log(t))

    @property
    def k(self) -> int:
        return int(math.floor((self.z.imag + math.pi) / TWO_PI))

    @property
    def z0(self) -> complex:
        z0 = self.z - 1j * TWO_PI * self.k
        # guard the half-open interval against rounding at the upper end
        if z0.imag >= math.pi:
            z0 -= 1j * TWO_PI
        return z0

    @property
    def value(self) -> complex:
        return cmath.exp(self.z)

    def shift(self, dz) -> "LogPoint":
        return LogPoint(self.z + complex(dz))

    def scale(self, c) -> "LogPoint":
        """The point c*exp(z) for real c > 0 on the same sheet."""
        if c <= 0:
            raise DomainError("scale factor must be positive")
        return LogPoint(self.z + math.log(c))

    def half(self) -> "LogPoint":
        """The point exp(z/2)."""
        return LogPoint(self.z / 2.0)

    def conjugate(self) -> "LogPoint":
        return LogPoint(self.z.conjugate())
