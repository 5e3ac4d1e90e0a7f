"""Dirichlet-model scattering on the cusp.

The cusp is closed off by a Dirichlet condition at x = 1, so the zero-mode
generalized eigenfunction is

    E(z, x) = (a+x)^nu [H2(t) + C_a(z) H1(t)],   t = (a+x) e^{z/2},
    C_a(z)  = -H2((a+1) e^{z/2}) / H1((a+1) e^{z/2}),

and the tail in the nonzero modes vanishes.  The spectral-shift factors
eta, xi, omega and phi_n are transcriptions of their defining formulas with
this C_a.  Quantities whose modulus can leave the float64 range are returned
as ScaledComplex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError
from .numbers import LogPoint, ScaledComplex, cospi, sinpi
from .special_functions import hankel, hankel_log_derivative

RESONANCE_TOL = 1e-12

RHO_CHOICES = {
    "a": lambda a: max(a, 1.0),
    "sqrt": lambda a: max(math.sqrt(a), 1.0),
    "log": lambda a: 1.0 + math.log1p(a),
}


@dataclass(frozen=True)
class SpectralShift:
    """The shift l(a) = 2^a Gamma((a+1)/2) rho(a), kept as its logarithm."""

    a: float
    rho: str = "a"

    def __post_init__(self):
        if self.rho not in RHO_CHOICES:
            raise DomainError(f"rho must be one of {sorted(RHO_CHOICES)}")
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError("the shift needs a >= 0")

    @property
    def log_l(self):
        a = self.a
        return a * math.log(2.0) + math.lgamma(0.5 * (a + 1)) + math.log(RHO_CHOICES[self.rho](a))

    @property
    def l_of_a(self):
        """l(a) as a float (inf if it overflows)."""
        return math.exp(self.log_l) if self.log_l < 709 else math.inf


def _z(z):
    return z if isinstance(z, LogPoint) else LogPoint(z)


def check_odd_integer(a):
    if a == round(a) and int(round(a)) % 2 == 1:
        raise DomainError(f"a={a} is an odd integer; the shift factors are undefined there")


def _hankel_pair(nu, pt):
    return hankel(1, nu, pt), hankel(2, nu, pt)


def scattering_matrix_scaled(geo, z):
    """C_a(z) = -H2/H1 at (a+1) e^{z/2}, as a ScaledComplex."""
    z = _z(z)
    pt = LogPoint(z.z / 2 + math.log(geo.c))
    h1, h2 = _hankel_pair(geo.nu, pt)
    # Newton distance |H1/H1'| to the nearest zero of H1, relative to 1 + nu
    tld = hankel_log_derivative((1,), geo.nu, np.array([pt.z]))[0]
    log_dist = pt.z.real - math.log(abs(tld)) if tld != 0 else math.inf
    if h1.is_zero or log_dist < math.log(RESONANCE_TOL * (1.0 + geo.nu)):
        raise PoleError(f"z={z.z} is at a resonance of the model scattering matrix")
    return -(h2 / h1)


def model_scattering_matrix(geo, z):
    """C_a(z) as a complex number."""
    return scattering_matrix_scaled(geo, z).to_complex()


def generalized_eigenfunction_scaled(geo, z, x):
    z = _z(z)
    c = scattering_matrix_scaled(geo, z)
    out = []
    for xv in np.atleast_1d(np.asarray(x, dtype=float)):
        if xv < 1:
            raise DomainError("x must be >= 1")
        pt = LogPoint(z.z / 2 + math.log(geo.a + xv))
        h1, h2 = _hankel_pair(geo.nu, pt)
        lead = ScaledComplex(geo.nu * math.log(geo.a + xv), 0.0)
        out.append(lead * (h2 + c * h1))
    return out


def generalized_eigenfunction(geo, z, x):
    """E(z, x) = (a+x)^nu [H2 + C_a(z) H1]((a+x) e^{z/2})."""
    vals = [v.to_complex() for v in generalized_eigenfunction_scaled(geo, z, x)]
    return vals[0] if np.ndim(x) == 0 else np.array(vals)


def incoming_outgoing(geo, z, x):
    """The two pieces (a+x)^nu H2 and C (a+x)^nu H1 at x, as complex numbers."""
    z = _z(z)
    c = scattering_matrix_scaled(geo, z)
    pt = LogPoint(z.z / 2 + math.log(geo.a + float(x)))
    h1, h2 = _hankel_pair(geo.nu, pt)
    lead = ScaledComplex(geo.nu * math.log(geo.a + float(x)), 0.0)
    return (lead * h2).to_complex(), (lead * c * h1).to_complex()


def functional_equation_residual(geo, z):
    """|C(z) (C(z + 2 pi i) + e^{i pi a} - 1) - e^{i pi a}|."""
    z = _z(z)
    c0 = model_scattering_matrix(geo, z)
    c1 = model_scattering_matrix(geo, z.shift(2j * math.pi))
    e = complex(cospi(geo.a), sinpi(geo.a))
    return abs(c0 * (c1 + e - 1.0) - e)


# ---------------------------------------------------------------------------
# shift factors


def _sum_terms(terms):
    """Sum of ScaledComplex terms together with the log of the largest one."""
    total = ScaledComplex(-math.inf, 0.0)
    big = -math.inf
    for t in terms:
        total = total + t
        big = max(big, t.log_mod)
    return total, big


def _sin_nu(k, a):
    """sin(k pi (a+1)/2), exact at half-integer multiples."""
    return float(sinpi(k * 0.5 * (a + 1)))


def _shift_bracket(a, k, c_shift):
    """sin(k pi nu) e^{i pi a/4} + i C sin((k-1) pi nu) e^{-i pi a/4}, cos(pi a/2) removed."""
    e4 = complex(cospi(a / 4), sinpi(a / 4))
    t1 = ScaledComplex.from_complex(_sin_nu(k, a) * e4)
    t2 = c_shift * (1j * _sin_nu(k - 1, a) * e4.conjugate())
    return _sum_terms([t1, t2])


def _ratio_bracket(a, k, c):
    """Numerator and denominator of the xi / omega ratio."""
    e2 = complex(cospi(a / 2), sinpi(a / 2))
    num = _sum_terms([ScaledComplex.from_complex(1j * _sin_nu(k + 1, a) * e2),
                      -(c * _sin_nu(k, a))])
    den = _sum_terms([ScaledComplex.from_complex(_sin_nu(k, a) * e2),
                      c * (1j * _sin_nu(k - 1, a))])
    return num, den


def _shifted_point(shift, z):
    z = _z(z)
    z0 = z.z0
    if z0.imag == -math.pi:
        raise DomainError("Im(z0) = -pi lies on an excluded line Im(z + 2k pi i) = pi")
    return z, z0, z.shift(2.0 * shift.log_l)


def eta_factor(shift, geo, z):
    """eta_a(z) as a ScaledComplex.

    a^{-a/2} sqrt(pi l e^{z0/2} / 2) e^{-i a l e^{z0/2}} / B, with
    B = [sin(k pi nu) e^{i pi a/4} + i C sin((k-1) pi nu) e^{-i pi a/4}] / cos(pi a/2)
    and C evaluated at z + 2 ln l(a).
    """
    a = geo.a
    check_odd_integer(a)
    z, z0, zs = _shifted_point(shift, z)
    c = scattering_matrix_scaled(geo, zs)
    bracket, big = _shift_bracket(a, z.k, c)
    if bracket.is_zero or bracket.log_mod - big < math.log(RESONANCE_TOL):
        raise PoleError("vanishing bracket in eta_a")
    bracket = bracket / float(cospi(a / 2))
    log_l = shift.log_l
    # -i a l e^{z0/2} as a complex exponent
    phase_arg = cmath.exp(math.log(a) + log_l + z0 / 2)
    log_pref = (-0.5 * a * math.log(a) + 0.5 * (math.log(math.pi / 2) + log_l + z0 / 2)
                - 1j * phase_arg)
    return ScaledComplex.from_log(log_pref) / bracket


def xi_factor(shift, geo, z):
    """xi_a(z) as a ScaledComplex (ratio times e^{-2 i a l e^{z0/2}})."""
    a = geo.a
    check_odd_integer(a)
    z, z0, zs = _shifted_point(shift, z)
    c = scattering_matrix_scaled(geo, zs)
    num, den = _ratio_bracket(a, z.k, c)
    if den[0].is_zero or den[0].log_mod - den[1] < math.log(RESONANCE_TOL):
        raise PoleError("vanishing denominator in xi_a")
    expo = -2j * cmath.exp(math.log(a) + shift.log_l + z0 / 2)
    return num[0] / den[0] * ScaledComplex.from_log(expo)


def omega_factor(geo, lam):
    """omega_a(lambda) with C_a evaluated at lambda itself."""
    a = geo.a
    check_odd_integer(a)
    lam = _z(lam)
    k = lam.k
    c = scattering_matrix_scaled(geo, lam)
    num, den = _ratio_bracket(a, k, c)
    if den[0].is_zero or den[0].log_mod - den[1] < math.log(RESONANCE_TOL):
        raise PoleError("vanishing denominator in omega_a")
    sgn = 1.0 if (1 + k) % 2 == 0 else -1.0
    expo = sgn * 2j * a * cmath.exp(lam.z / 2)
    return (num[0] / den[0] * ScaledComplex.from_log(expo)).to_complex()


def phi_n(n, lam):
    """phi_n(lambda) for the geometry a = 4n."""
    from .cusp_spectral import CuspGeometry

    n = int(n)
    if n < 1:
        raise DomainError("phi_n needs n >= 1")
    geo = CuspGeometry(4.0 * n)
    lam = _z(lam)
    k = lam.k
    c = scattering_matrix_scaled(geo, lam)
    s = lambda m: float(sinpi(0.5 * m))
    num = _sum_terms([ScaledComplex.from_complex(s(k + 1)), c * (1j * s(k))])
    den = _sum_terms([ScaledComplex.from_complex(s(k)), c * (1j * s(k - 1))])
    if den[0].is_zero or den[0].log_mod - den[1] < math.log(RESONANCE_TOL):
        raise PoleError("vanishing denominator in phi_n")
    return (num[0] / den[0]).to_complex()


def scattering_winding(geo, center, radius, samples=256):
    """Winding number of C_a along a circle in the z-plane."""
    th = np.linspace(0.0, 2 * math.pi, samples + 1)
    ph = np.array([scattering_matrix_scaled(geo, center + radius * cmath.exp(1j * t)).phase
                   for t in th])
    d = np.diff(ph)
    d = (d + math.pi) % (2 * math.pi) - math.pi
    return int(round(d.sum() / (2 * math.pi)))
