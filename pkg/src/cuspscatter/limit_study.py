"""Large-a behaviour of the cusp: hyperbolic limit experiments.

* the hyperbolic model mode e^{xs} + S(s) e^{x(1-s)} with the Dirichlet
  value S(s) = -e^{2s-1};
* the factors p_a = 1 + Q^+, q_a = 1 + Q^- at (a+x) l(a) e^{z0/2} and their
  uniform convergence to 1;
* the exact regrouping eta E = e^{xs} P + xi e^{x(1-s)} Q, checked in high
  precision;
* convergence of the operator coefficients to e^{2x}, e^{-x} and 1;
* trajectories of the scaled zeros of H^(1)_nu(nu w) as nu grows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .cusp_spectral import CuspGeometry
from .errors import AccuracyError, DomainError, PoleError
from .numbers import LogPoint
from .scattering import SpectralShift, check_odd_integer
from .special_functions import (
    ZeroSet,
    _q_array,
    find_hankel_zeros,
    q_bound_log,
    winding_count_fine,
)

# largest working precision (decimal digits) for the high-precision check
MAX_DPS = 4000


@dataclass(frozen=True)
class HyperbolicMode:
    """Zero mode e^{xs} + S e^{x(1-s)} of the hyperbolic cusp with Dirichlet data at x = 1."""

    s: complex

    @property
    def S(self):
        return -cmath.exp(2 * self.s - 1)

    def __call__(self, x):
        return hyperbolic_zero_mode(self.s, x)


def hyperbolic_zero_mode(s, x):
    """e^{xs} + S(s) e^{x(1-s)} with S(s) = -e^{2s-1}."""
    s = complex(s)
    x = np.asarray(x, dtype=float)
    # S e^{x(1-s)} = -e^{2s - 1 + x(1-s)}
    out = np.exp(x * s) - np.exp(2 * s - 1 + x * (1 - s))
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# p and q factors


def _check_z0(z0):
    z0 = complex(z0)
    if not abs(z0.imag) < math.pi:
        raise DomainError("need |Im z0| < pi so that (a+x) l e^{z0/2} has positive real part")
    return z0


def _shift_for(geo, shift):
    if shift.a != geo.a:
        raise DomainError(f"shift built for a={shift.a} but geometry has a={geo.a}")


def p_q_factors(shift, geo, z0, x):
    """(p_a, q_a) = (1 + Q^+, 1 + Q^-) at (a+x) l(a) e^{z0/2}.

    ``x`` may be an array.  Arguments beyond the float64 range give Q = 0,
    which is exact to double precision since |Q| < nu^2 / |argument|.
    """
    _shift_for(geo, shift)
    z0 = _check_z0(z0)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 1):
        raise DomainError("x must be >= 1")
    log_tau = np.log(geo.a + xs) + shift.log_l + z0 / 2
    p = np.ones(xs.shape, dtype=complex)
    q = np.ones(xs.shape, dtype=complex)
    ok = log_tau.real < 700.0
    if np.any(ok):
        tau = np.exp(log_tau[ok])
        p[ok] += _q_array(1, geo.nu, tau)
        q[ok] += _q_array(-1, geo.nu, tau)
    if np.ndim(x) == 0:
        return complex(p[0]), complex(q[0])
    return p, q


def q_bound_envelope(shift, geo, z0, x):
    """Closed-form bound on |p_a - 1| and |q_a - 1| (requires a > 2)."""
    if not geo.a > 2:
        raise DomainError(f"the remainder bound is derived only for a > 2, got a={geo.a}")
    z0 = _check_z0(z0)
    m = abs(cmath.exp(z0 / 2))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([math.exp(q_bound_log(geo.a, float(xv), ("log", shift.log_l), m)) for xv in xs])
    return out[0] if np.ndim(x) == 0 else out


@dataclass
class ConvergenceReport:
    """Sup-norm distance of p_a, q_a from 1 over an (x, z0) grid, per a."""

    a_values: list
    sup_p_err: list
    sup_q_err: list
    q_bound_envelope: list
    x_grid: list
    z0_grid: list
    rho: str = "a"
    bound_violations: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.a_values)
        if not (len(self.sup_p_err) == len(self.sup_q_err) == len(self.q_bound_envelope) == n):
            raise DomainError("report columns must have equal length")

    def strictly_decreasing(self):
        def dec(v):
            return all(b < a for a, b in zip(v[:-1], v[1:]))

        return dec(self.sup_p_err) and dec(self.sup_q_err)

    def rows(self):
        return [dict(a=a, sup_p_err=p, sup_q_err=q, q_bound=b)
                for a, p, q, b in zip(self.a_values, self.sup_p_err, self.sup_q_err,
                                      self.q_bound_envelope)]


def convergence_study(a_values, x_grid, z0_grid, rho="a"):
    """Sweep p_a, q_a over the grid for each a and compare with the bound.

    ``bound_violations`` lists (a, x, z0) points with a > 2 where either
    |p-1| or |q-1| exceeds the pointwise bound.
    """
    x_grid = [float(v) for v in x_grid]
    z0_grid = [complex(v) for v in z0_grid]
    sp_, sq_, env, bad = [], [], [], []
    for a in a_values:
        geo = CuspGeometry(a)
        shift = SpectralShift(a, rho)
        bp, bq, be = 0.0, 0.0, 0.0
        for z0 in z0_grid:
            p, q = p_q_factors(shift, geo, z0, np.array(x_grid))
            ep, eq = np.abs(p - 1), np.abs(q - 1)
            bp, bq = max(bp, float(ep.max())), max(bq, float(eq.max()))
            if geo.a > 2:
                bound = q_bound_envelope(shift, geo, z0, np.array(x_grid))
                be = max(be, float(bound.max()))
                for xv, e1, e2, b in zip(x_grid, ep, eq, bound):
                    if e1 > b or e2 > b:
                        bad.append((a, xv, z0))
            else:
                be = math.nan
        sp_.append(bp)
        sq_.append(bq)
        env.append(be)
    return ConvergenceReport(list(a_values), sp_, sq_, env, x_grid, z0_grid, rho, bad)


# ---------------------------------------------------------------------------
# exact decomposition, high-precision path


def _mp_principal_hankel(nu, t):
    """(H1, H2)(t) on the principal sheet, Re t > 0, in the current mp context.

    Half-integer orders use the terminating asymptotic series, which is an
    exact closed form; other orders fall back on mpmath's Bessel functions.
    """
    mp = mpmath.mp
    pref = mpmath.sqrt(2 / (mp.pi * t))
    theta = t - mp.pi * nu / 2 - mp.pi / 4
    n = nu - 0.5
    if n == int(n):
        mu = 4 * mpmath.mpf(nu) ** 2
        s1, s2 = mpmath.mpc(0), mpmath.mpc(0)
        ak = mpmath.mpf(1)
        for k in range(int(n) + 1):
            if k > 0:
                ak = ak * (mu - (2 * k - 1) ** 2) / (k * 8)
            s1 += ak * (1j) ** k / t ** k
            s2 += ak * (-1j) ** k / t ** k
        return pref * mpmath.exp(1j * theta) * s1, pref * mpmath.exp(-1j * theta) * s2
    return mpmath.hankel1(nu, t), mpmath.hankel2(nu, t)


def _mp_hankel_sheet(nu, tau, m):
    """(H1, H2)(tau e^{i m pi}) from principal values, tau with Re > 0."""
    h1, h2 = _mp_principal_hankel(nu, tau)
    if m == 0:
        return h1, h2
    # sinpi is exact at integers, which matters when a coefficient vanishes
    s = mpmath.sinpi(nu)
    if s == 0:
        raise DomainError("sheet connection needs non-integer order")
    e = mpmath.expjpi(nu)
    g1 = (-mpmath.sinpi((m - 1) * nu) * h1 - mpmath.sinpi(m * nu) * h2 / e) / s
    g2 = (e * mpmath.sinpi(m * nu) * h1 + mpmath.sinpi((m + 1) * nu) * h2) / s
    return g1, g2


def _mp_sin_nu(k, a):
    return mpmath.sinpi(mpmath.mpf(k) * (a + 1) / 2)


def _mp_shift_factors(shift, geo, z):
    """(eta, xi, C, l e^{z0/2}) in the current mp context."""
    a = mpmath.mpf(geo.a)
    nu = mpmath.mpf(geo.nu)
    k = z.k
    z0 = mpmath.mpc(z.z0)
    l = mpmath.exp(mpmath.mpf(shift.log_l))
    w = l * mpmath.exp(z0 / 2)
    h1, h2 = _mp_hankel_sheet(nu, (a + 1) * w, k)
    if h1 == 0:
        raise PoleError("resonance of the model scattering matrix")
    c = -h2 / h1
    ipa = 1j * mpmath.mp.pi * a
    bracket = (_mp_sin_nu(k, a) * mpmath.exp(ipa / 4)
               + 1j * c * _mp_sin_nu(k - 1, a) * mpmath.exp(-ipa / 4)) / mpmath.cospi(a / 2)
    eta = (a ** (-a / 2) * mpmath.sqrt(mpmath.mp.pi * w / 2) * mpmath.exp(-1j * a * w)) / bracket
    num = 1j * _mp_sin_nu(k + 1, a) * mpmath.exp(ipa / 2) - c * _mp_sin_nu(k, a)
    den = _mp_sin_nu(k, a) * mpmath.exp(ipa / 2) + 1j * c * _mp_sin_nu(k - 1, a)
    xi = num / den * mpmath.exp(-2j * a * w)
    return eta, xi, c, w


def _working_dps(shift, geo, z, x_max):
    phase = (2 * geo.a + x_max) * math.exp(shift.log_l + z.z0.real / 2)
    dps = 30 + int(math.log10(1.0 + phase))
    if dps > MAX_DPS:
        raise AccuracyError(f"decomposition check needs {dps} digits (limit {MAX_DPS})",
                            estimate=float(dps))
    return dps


def decomposition_terms(shift, geo, z, x_grid):
    """Per-x tuples (lhs, first, second) of eta E = e^{xs} P + xi e^{x(1-s)} Q.

    ``lhs`` is built from high-precision Hankel values; the right-hand side
    uses p_a, q_a from the double-precision Q quadrature.  Values are mpmath
    complex numbers evaluated at the returned working precision.
    """
    _shift_for(geo, shift)
    check_odd_integer(geo.a)
    z = z if isinstance(z, LogPoint) else LogPoint(z)
    if z.z0.imag == -math.pi:
        raise DomainError("Im(z0) = -pi lies on an excluded line Im(z + 2k pi i) = pi")
    xs = np.asarray(x_grid, dtype=float)
    if np.any(xs < 1):
        raise DomainError("x must be >= 1")
    p, q = p_q_factors(shift, geo, z.z0, xs)
    dps = _working_dps(shift, geo, z, float(xs.max()))
    out = []
    with mpmath.workdps(dps):
        a = mpmath.mpf(geo.a)
        nu = mpmath.mpf(geo.nu)
        eta, xi, c, w = _mp_shift_factors(shift, geo, z)
        s = mpmath.mpf(0.5) + 1j * w
        for xv, pv, qv in zip(xs, p, q):
            x = mpmath.mpf(xv)
            h1, h2 = _mp_hankel_sheet(nu, (a + x) * w, z.k)
            lhs = eta * (a + x) ** nu * (h2 + c * h1)
            env = (1 + x / a) ** (a / 2) * mpmath.exp(-x / 2)
            first = mpmath.exp(x * s) * env * mpmath.mpc(pv)
            second = xi * mpmath.exp(x * (1 - s)) * env * mpmath.mpc(qv)
            out.append((lhs, first, second))
    return out, dps


def eigenfunction_decomposition_check(shift, geo, z, x_grid, normalization="scale"):
    """Sup over x of the relative residual of eta E - e^{xs} P - xi e^{x(1-s)} Q.

    With ``normalization="scale"`` the residual at each x is divided by the
    larger of the two right-hand terms; ``"first"`` divides by |e^{xs} P|
    alone, which is only meaningful when the two terms have comparable size.
    """
    if normalization not in ("scale", "first"):
        raise DomainError("normalization must be 'scale' or 'first'")
    terms, dps = decomposition_terms(shift, geo, z, x_grid)
    worst = 0.0
    with mpmath.workdps(dps):
        for lhs, first, second in terms:
            den = abs(first) if normalization == "first" else max(abs(first), abs(second))
            worst = max(worst, float(abs(lhs - first - second) / den))
    return worst


# ---------------------------------------------------------------------------
# coefficient convergence


def coefficient_convergence(geo_list, x_max, n_points=401):
    """Sup distances of the operator coefficients from their hyperbolic limits.

    Per geometry, over x in [1, x_max]:
      drift:  |1/(1+x/a) - 1|
      growth: |(1+x/a)^{2a} - e^{2x}| / e^{2x}
      warp:   |(1+x/a)^{-a} - e^{-x}| / e^{-x}
    """
    if not math.isfinite(x_max) or x_max < 1:
        raise DomainError("x_max must be finite and >= 1")
    xs = np.linspace(1.0, x_max, n_points) if x_max > 1 else np.array([1.0])
    rows = []
    for geo in geo_list:
        a = geo.a
        lg = np.log1p(xs / a)
        rows.append(dict(
            a=a,
            drift=float(np.max(np.abs(xs / (a + xs)))),
            growth=float(np.max(np.abs(np.expm1(2 * a * lg - 2 * xs)))),
            warp=float(np.max(np.abs(np.expm1(-a * lg + xs)))),
        ))
    return rows


# ---------------------------------------------------------------------------
# zero trajectories


def hausdorff(u, v):
    """Hausdorff distance between two finite point sets in the plane."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if len(u) == 0 and len(v) == 0:
        return 0.0
    if len(u) == 0 or len(v) == 0:
        return math.inf
    d = np.abs(u[:, None] - v[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass
class ZeroTrajectory:
    """Scaled zero sets w = t/nu of H^(1)_nu(nu w) along a ladder of orders."""

    nu_list: list
    region: tuple
    levels: list
    scaled_zeros: list
    matching: list
    hausdorff: list
    fine_counts: list

    def rows(self):
        out = []
        for nu, ws in zip(self.nu_list, self.scaled_zeros):
            for w in ws:
                out.append(dict(nu=nu, w_re=w.real, w_im=w.imag))
        return out


def _nearest(u, v):
    """For each point of u, the index of its nearest neighbour in v."""
    if len(u) == 0 or len(v) == 0:
        return [None] * len(u)
    d = np.abs(np.asarray(u)[:, None] - np.asarray(v)[None, :])
    return [int(i) for i in d.argmin(axis=1)]


def zero_trajectories(nu_list, region, kind=1, check_counts=True):
    """Zeros of H^(kind)_nu(nu w) for w in ``region`` at each order in nu_list.

    ``region`` is (re_min, re_max, im_min, im_max) in w.  Consecutive levels
    are linked by nearest-neighbour matching and compared by Hausdorff
    distance.  With ``check_counts`` the zero count of each level is also
    taken from the uniform-boundary winding oracle.
    """
    nu_list = [float(v) for v in nu_list]
    if any(b <= a for a, b in zip(nu_list[:-1], nu_list[1:])):
        raise DomainError("nu_list must be strictly increasing")
    x0, x1, y0, y1 = map(float, region)
    levels, scaled, fine = [], [], []
    for nu in nu_list:
        rect = (nu * x0, nu * x1, nu * y0, nu * y1)
        zs = find_hankel_zeros(kind, nu, rect)
        levels.append(zs)
        scaled.append([complex(t) / nu for t in zs.zeros])
        fine.append(winding_count_fine(kind, nu, rect) if check_counts else None)
    matching = [_nearest(u, v) for u, v in zip(scaled[:-1], scaled[1:])]
    dists = [hausdorff(u, v) for u, v in zip(scaled[:-1], scaled[1:])]
    return ZeroTrajectory(nu_list, (x0, x1, y0, y1), levels, scaled, matching, dists, fine)
