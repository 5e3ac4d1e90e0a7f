"""Bessel and Hankel functions on the logarithmic cover.

Principal-sheet values of J, Y and the exponentially scaled Hankel functions
come from the AMOS routines in ``scipy.special``.  Everything that leaves the
principal sheet (sheet rotation, the connection formulas), the integral
remainders Q^+- of the large-argument representation, the cylinder function
G_nu and the zero finder are implemented here.

Array routines return Hankel values in split form ``(log_mod, phase)`` so
that the magnitudes exp(+-Im t) of far-off-axis arguments never overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special as sp

from .errors import AccuracyError, DomainError
from .numbers import LogPoint, ScaledComplex, cospi, sin_ratio, sinpi

# |t| above which principal Hankel values are taken from the Q-integral form
LARGE_ARGUMENT = 1.0e6

_LAGUERRE_NODES = 80
_INNER_NODES = 24


def _check_order(nu):
    nu = float(nu)
    if not math.isfinite(nu) or nu < 0:
        raise DomainError(f"order must be finite and non-negative, got {nu}")
    return nu


def _as_logpoint(z):
    return z if isinstance(z, LogPoint) else LogPoint(z)


# ---------------------------------------------------------------------------
# Gamma


def gamma(x):
    """Gamma function for real x > 0 (x <= 171.6, beyond that use log_gamma)."""
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"gamma needs finite x > 0, got {x}")
    if x > 171.6:
        raise DomainError("gamma overflows float64 for x > 171.6; use log_gamma")
    return math.gamma(x)


def log_gamma(x):
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"log_gamma needs finite x > 0, got {x}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Q remainders of the Hankel integral representation


@lru_cache(maxsize=64)
def _laguerre_rule(alpha, n=_LAGUERRE_NODES):
    t, w = sp.roots_genlaguerre(n, alpha)
    return t, w / w.sum()


@lru_cache(maxsize=4)
def _unit_legendre(n=_INNER_NODES):
    y, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (y + 1.0), 0.5 * w


def _q_array(sign, nu, lam):
    lam = np.asarray(lam, dtype=complex)
    if nu == 0.5:
        return np.zeros_like(lam)
    t, wt = _laguerre_rule(nu + 0.5)
    y, wy = _unit_legendre()
    s = 1.0 if sign > 0 else -1.0
    # base = 1 -+ t*y/(2i*lam), kept as 1 + s*i*t*y/(2*lam)
    c = (1j * s * 0.5) / lam
    base = 1.0 + c[..., None, None] * t[:, None] * y[None, :]
    inner = (base ** (nu - 1.5)) @ wy
    outer = inner @ wt
    return s * (0.5 - nu) * (nu + 0.5) / (2j * lam) * outer


def q_remainder(sign, nu, lam):
    """Remainder Q_nu^{sign}(lam) of the Hankel integral representation.

    ``1 + Q^+(lam)`` is the factor multiplying
    sqrt(2/(pi*lam)) * exp(i(lam - pi*nu/2 - pi/4)) in H^(1)_nu(lam), and
    ``1 + Q^-`` the conjugate-side factor for H^(2).  The double integral is
    evaluated with a generalized Gauss-Laguerre rule in t and a fixed
    Gauss-Legendre rule in y.
    """
    if sign not in (1, -1, "+", "-"):
        raise DomainError("sign must be + or -")
    sign = 1 if sign in (1, "+") else -1
    nu = _check_order(nu)
    if nu < 0.5:
        raise DomainError("q_remainder needs nu >= 1/2")
    lam = complex(lam)
    if lam == 0 or abs(cmath.phase(lam)) >= math.pi / 2:
        raise DomainError("q_remainder needs arg(lam) in (-pi/2, pi/2)")
    return complex(_q_array(sign, nu, np.array([lam]))[0])


def q_bound_log(a, x, l, z0_mod):
    """Natural log of the closed-form bound on |Q^+-_{(a+1)/2}((a+x) l w)|.

    ``l`` may be passed as a float or, for huge values, as ``("log", log_l)``.
    No parameter validation: see :func:`q_bound`.
    """
    log_l = l[1] if isinstance(l, tuple) else math.log(l)
    log_c = math.log(a + x) + log_l + math.log(z0_mod)
    # 2^a Gamma((a+1)/2) / sqrt(pi), in logs
    log_big = a * math.log(2.0) + math.lgamma((a + 1) / 2) - 0.5 * math.log(math.pi)
    lead = np.logaddexp(math.log1p(a / 2), log_big)
    tail = (a / 2 - 1) * math.log1p(math.exp(-math.log(2.0) - log_c))
    return math.log(a) + lead - math.log(4.0) - log_c + tail


def q_bound(a, x, l, z0_mod):
    """Upper bound for |Q^+-_{(a+1)/2}((a+x) l |exp(z0/2)|)|, valid for a > 2.

    a(1 + a/2 + 2^a Gamma((a+1)/2)/sqrt(pi)) / (4 (a+x) l m)
        * (1 + 1/(2 (a+x) l m))^(a/2 - 1),   m = |exp(z0/2)|,
    evaluated in log space.
    """
    if not a > 2:
        raise DomainError(f"the remainder bound is derived only for a > 2, got a={a}")
    if x < 1:
        raise DomainError("x must be >= 1")
    log_l = l[1] if isinstance(l, tuple) else math.log(l)
    if log_l < 0:
        raise DomainError("l must be >= 1")
    if z0_mod <= 0:
        raise DomainError("|exp(z0/2)| must be positive")
    return math.exp(q_bound_log(a, x, l, z0_mod))


# ---------------------------------------------------------------------------
# principal-sheet Hankel values in split form


def _mp_hankel_log(kind, nu, t):
    with mpmath.workdps(30):
        f = mpmath.hankel1 if kind == 1 else mpmath.hankel2
        v = f(nu, mpmath.mpc(t))
        lv = mpmath.log(v)
    return float(lv.real), float(lv.imag)


def _principal_hankel(kind, nu, tau):
    """(log_mod, phase) of H^(kind)_nu(tau) for tau with Re(tau) >= 0."""
    tau = np.asarray(tau, dtype=complex)
    log_mod = np.empty(tau.shape)
    phase = np.empty(tau.shape)
    big = np.abs(tau) >= LARGE_ARGUMENT
    small = ~big
    s = 1.0 if kind == 1 else -1.0
    if small.any():
        ts = tau[small]
        he = sp.hankel1e(nu, ts) if kind == 1 else sp.hankel2e(nu, ts)
        with np.errstate(divide="ignore"):
            log_mod[small] = np.log(np.abs(he)) - s * ts.imag
        phase[small] = np.angle(he) + s * ts.real
        bad = small.copy()
        bad[small] = ~np.isfinite(he) | (he == 0)
        for idx in zip(*np.nonzero(bad)):
            log_mod[idx], phase[idx] = _mp_hankel_log(kind, nu, tau[idx])
    if big.any():
        tb = tau[big]
        q = _q_array(s, nu, tb)
        corr = np.log(1.0 + q)
        root = 0.5 * np.log(2.0 / (np.pi * tb))
        expo = s * 1j * (tb - np.pi * nu / 2 - np.pi / 4)
        lg = root + expo + corr
        log_mod[big] = lg.real
        phase[big] = lg.imag
    return log_mod, phase


def _split_add(l1, p1, l2, p2):
    """Add exp(l1+i p1) + exp(l2+i p2) elementwise, returning split form."""
    l1, p1, l2, p2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (l1, p1, l2, p2)))
    first_big = l1 >= l2
    lb = np.where(first_big, l1, l2)
    pb = np.where(first_big, p1, p2)
    ls = np.where(first_big, l2, l1)
    ps = np.where(first_big, p2, p1)
    with np.errstate(invalid="ignore", over="ignore"):
        diff = np.where(np.isneginf(ls), -np.inf, ls - lb)
        r = 1.0 + np.exp(diff + 1j * (ps - pb))
    r = np.where(np.isneginf(lb), 1.0, r)
    with np.errstate(divide="ignore"):
        lout = lb + np.log(np.abs(r))
    return lout, pb + np.angle(r)


def _connection_coefficients(kind, nu, m):
    """(A, B) with H^(kind)(e^{i m pi} tau) = A H^(1)(tau) + B H^(2)(tau)."""
    e_minus = complex(cospi(nu), -sinpi(nu))
    if kind == 1:
        return -sin_ratio(m - 1, nu), -e_minus * sin_ratio(m, nu)
    return e_minus.conjugate() * sin_ratio(m, nu), sin_ratio(m + 1, nu)


def _split_reduce(z):
    z = np.asarray(z, dtype=complex)
    m = np.rint(z.imag / np.pi).astype(int)
    tau = np.exp(z - 1j * np.pi * m)
    return m, tau


def hankel_split(kind, nu, z):
    """H^(kind)_nu at the cover points exp(z), z an array of logarithms.

    Returns ``(log_mod, phase)`` arrays.  Each point is reduced to the
    principal strip |arg| <= pi/2 by a rotation e^{i m pi}; the rotated
    value is the Watson combination of principal H^(1), H^(2).
    """
    if kind not in (1, 2):
        raise DomainError("kind must be 1 or 2")
    nu = _check_order(nu)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("Hankel functions are undefined at the branch origin")
    m, tau = _split_reduce(z)
    l1, p1 = _principal_hankel(1, nu, tau)
    l2, p2 = _principal_hankel(2, nu, tau)
    lo = np.empty(z.shape)
    po = np.empty(z.shape)
    for mv in np.unique(m):
        sel = m == mv
        if mv == 0:
            lo[sel], po[sel] = (l1[sel], p1[sel]) if kind == 1 else (l2[sel], p2[sel])
            continue
        a_c, b_c = _connection_coefficients(kind, nu, int(mv))
        with np.errstate(divide="ignore"):
            la = math.log(abs(a_c)) if a_c != 0 else -np.inf
            lb = math.log(abs(b_c)) if b_c != 0 else -np.inf
        lo[sel], po[sel] = _split_add(l1[sel] + la, p1[sel] + cmath.phase(a_c),
                                      l2[sel] + lb, p2[sel] + cmath.phase(b_c))
    return lo, po


def hankel(kind, nu, z):
    """H^(1)_nu or H^(2)_nu at the cover point exp(z), as a ScaledComplex."""
    z = _as_logpoint(z)
    lo, po = hankel_split(kind, nu, np.array([z.z]))
    return ScaledComplex(float(lo[0]), float(po[0]))


def hankel_derivative(kind, nu, z):
    """d/dt H^(kind)_nu(t) at t = exp(z), from the order recurrence."""
    z = _as_logpoint(z)
    nu = _check_order(nu)
    h = hankel(kind, nu, z)
    over_t = ScaledComplex(-z.z.real, -z.z.imag) * nu
    if nu >= 1:
        return hankel(kind, nu - 1, z) - over_t * h
    return over_t * h - hankel(kind, nu + 1, z)


def hankel_log_derivative(kinds, nu, z):
    """t * (d/dt) log prod_k H^(k)_nu(t) at t = exp(z), vectorized over z."""
    nu = _check_order(nu)
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for kind in kinds:
        l0, p0 = hankel_split(kind, nu, z)
        if nu >= 1:
            l1, p1 = hankel_split(kind, nu - 1, z)
            out += np.exp(z + (l1 - l0) + 1j * (p1 - p0)) - nu
        else:
            l1, p1 = hankel_split(kind, nu + 1, z)
            out += nu - np.exp(z + (l1 - l0) + 1j * (p1 - p0))
    return out


def hankel_connect(kind, nu, tau, m):
    """H^(kind)_nu(e^{i m pi} tau) by iterating the single-rotation formulas.

    Starting from the values H^(1)(tau), H^(2)(tau), each step applies
    H1(e^{-i pi} t) = 2cos(pi nu) H1(t) + e^{-i pi nu} H2(t),
    H2(e^{-i pi} t) = -e^{i pi nu} H1(t)
    (or the inverse rotation for m > 0).
    """
    tau = _as_logpoint(tau)
    nu = _check_order(nu)
    h1 = hankel(1, nu, tau)
    h2 = hankel(2, nu, tau)
    c2 = 2.0 * float(cospi(nu))
    e_minus = complex(cospi(nu), -sinpi(nu))
    e_plus = e_minus.conjugate()
    for _ in range(abs(int(m))):
        if m < 0:
            h1, h2 = h1 * c2 + h2 * e_minus, -(h1 * e_plus)
        else:
            h1, h2 = -(h2 * e_minus), h2 * c2 + h1 * e_plus
    return (h1 if kind == 1 else h2).to_complex()


# ---------------------------------------------------------------------------
# J and Y on the cover


def bessel_jy_split(nu, z):
    """(J_nu, Y_nu) at the cover points exp(z); unscaled complex arrays."""
    nu = _check_order(nu)
    z = np.asarray(z, dtype=complex)
    m, tau = _split_reduce(z)
    j = sp.jv(nu, tau)
    y = sp.yv(nu, tau)
    if not np.any(m):
        return j, y
    jr = np.empty(z.shape, dtype=complex)
    yr = np.empty(z.shape, dtype=complex)
    c = float(cospi(nu))
    for mv in np.unique(m):
        sel = m == mv
        rot = complex(cospi(mv * nu), sinpi(mv * nu))
        jr[sel] = rot * j[sel]
        yr[sel] = rot.conjugate() * y[sel] + 2j * sin_ratio(int(mv), nu) * c * j[sel]
    return jr, yr


def bessel_j(nu, z):
    """J_nu at the cover point exp(z), via J(e^{i m pi} t) = e^{i m pi nu} J(t)."""
    z = _as_logpoint(z)
    nu = _check_order(nu)
    j, _ = bessel_jy_split(nu, np.array([z.z]))
    if np.abs(np.exp(z.z)) == 0.0:
        return complex(sp.jv(nu, 0.0))
    return complex(j[0])


def bessel_y(nu, z):
    """Y_nu at the cover point exp(z)."""
    z = _as_logpoint(z)
    nu = _check_order(nu)
    if abs(cmath.exp(z.z)) == 0.0:
        raise DomainError("Y_nu is singular at the branch origin")
    _, y = bessel_jy_split(nu, np.array([z.z]))
    return complex(y[0])


def bessel_jy_derivatives(nu, t):
    """J'_nu(t), Y'_nu(t) for real t > 0 from the order recurrence."""
    nu = _check_order(nu)
    t = np.asarray(t, dtype=float)
    if nu >= 1:
        jd = sp.jv(nu - 1, t) - nu / t * sp.jv(nu, t)
        yd = sp.yv(nu - 1, t) - nu / t * sp.yv(nu, t)
    else:
        jd = nu / t * sp.jv(nu, t) - sp.jv(nu + 1, t)
        yd = nu / t * sp.yv(nu, t) - sp.yv(nu + 1, t)
    return jd, yd


# ---------------------------------------------------------------------------
# cylinder function


def _mp_cylinder(nu, lam, x):
    with mpmath.workdps(30):
        lam = mpmath.mpf(lam)
        return float(mpmath.bessely(nu, lam) * mpmath.besselj(nu, lam * x)
                     - mpmath.besselj(nu, lam) * mpmath.bessely(nu, lam * x))


def cylinder_g(nu, lam, x):
    """G_nu(lam, x) = Y_nu(lam) J_nu(lam x) - J_nu(lam) Y_nu(lam x), real inputs.

    Broadcasts over ``lam`` and ``x``.  Where x == 1 the same J, Y values are
    reused for both factors, so G(lam, 1) is exactly zero.
    """
    nu = _check_order(nu)
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("cylinder_g needs lam > 0")
    if np.any(x < 1):
        raise DomainError("cylinder_g needs x >= 1")
    # J, Y at lam are computed before broadcasting against x
    j0 = sp.jv(nu, lam)
    y0 = sp.yv(nu, lam)
    lam, x, j, y = np.broadcast_arrays(lam, x, j0, y0)
    at_one = x == 1.0
    jx = np.where(at_one, j, sp.jv(nu, lam * x))
    yx = np.where(at_one, y, sp.yv(nu, lam * x))
    with np.errstate(invalid="ignore", over="ignore"):
        g = y * jx - j * yx
    g = np.where(at_one, 0.0, g)
    bad = ~np.isfinite(g)
    if bad.any():
        g = np.array(g, dtype=float)
        for idx in zip(*np.nonzero(bad)):
            g[idx] = _mp_cylinder(nu, lam[idx], x[idx])
    return g[()] if g.ndim == 0 else g


def cylinder_g_cover(nu, z, x):
    """G_nu(exp(z), x) for complex cover points exp(z) and real x >= 1.

    Uses G = (H1(l) H2(l x) - H2(l) H1(l x)) / (2i) = Y(l) J(l x) - J(l) Y(l x).
    """
    z = np.asarray(z, dtype=complex)
    j, y = bessel_jy_split(nu, z)
    jx, yx = bessel_jy_split(nu, z + np.log(np.asarray(x, dtype=float)))
    return y * jx - j * yx


# ---------------------------------------------------------------------------
# argument principle and zero finding


@dataclass
class ZeroSet:
    """Zeros of a Hankel function (or product) inside a rectangle.

    ``region`` is (re_min, re_max, im_min, im_max) in the variable named by
    ``variable``: "t" for the argument plane, "log" for the logarithm of the
    argument.  ``tags`` carries per-zero integer labels (sheet index) when a
    caller needs them.
    """

    nu: float
    kinds: tuple
    region: tuple
    zeros: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    winding_count: int = 0
    variable: str = "t"
    tags: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    def __len__(self):
        return len(self.zeros)

    @property
    def total_multiplicity(self):
        return int(sum(self.multiplicities))


def _wrap(d):
    return (d + np.pi) % (2 * np.pi) - np.pi


def _edge_params(p, q, n, speed):
    """n+1 parameters on [0, 1], equispaced in the arclength weighted by ``speed``."""
    if speed is None:
        return np.linspace(0.0, 1.0, n + 1)
    fine = np.linspace(0.0, 1.0, 64 * n + 1)
    w = speed(p + (q - p) * fine)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (w[1:] + w[:-1]))])
    return np.interp(np.linspace(0.0, cum[-1], n + 1), cum, fine)


def winding_number(phase_fn, vertices, samples_per_edge=32, max_samples=2 ** 15,
                   max_jump=np.pi / 3, speed=None):
    """Winding of a function's phase around a closed polyline.

    ``phase_fn`` maps an array of points to the (unwrapped or principal)
    phase of the function there.  ``speed`` optionally estimates how fast the
    phase turns per unit length; samples are then spread evenly in that
    measure.  Each edge is resampled until consecutive phase increments stay
    below ``max_jump`` and doubling the sampling leaves the edge total
    unchanged.  Returns the real winding number; callers round it.
    """
    verts = list(vertices)
    if verts[0] != verts[-1]:
        verts.append(verts[0])
    total = 0.0
    for p, q in zip(verts[:-1], verts[1:]):
        n = samples_per_edge
        prev = None
        while True:
            pts = p + (q - p) * _edge_params(p, q, n, speed)
            ph = phase_fn(pts)
            if not np.all(np.isfinite(ph)):
                raise AccuracyError("non-finite phase on contour (zero on the boundary?)")
            d = _wrap(np.diff(ph))
            if np.max(np.abs(d)) < max_jump:
                edge = d.sum()
                if prev is not None and abs(edge - prev) < 0.5:
                    total += edge
                    break
                prev = edge
            else:
                prev = None
            n *= 2
            if n > max_samples:
                raise AccuracyError("phase not resolved along contour edge "
                                    f"{p}->{q}; a zero may lie on the boundary")
    return total / (2 * np.pi)


def _rect_vertices(r):
    x0, x1, y0, y1 = r
    return [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]


class _ZeroProblem:
    """Zeros of f(u) = prod_k H^(k)_nu(T(u)) in a rectangle of the u-plane."""

    def __init__(self, kinds, nu, variable, log_scale=0.0):
        self.kinds = tuple(kinds)
        self.nu = nu
        self.variable = variable
        self.log_scale = log_scale

    def to_log(self, u):
        u = np.asarray(u, dtype=complex)
        if self.variable == "t":
            return np.log(u) + self.log_scale
        return u + self.log_scale

    def phase(self, u):
        z = self.to_log(u)
        ph = np.zeros(z.shape)
        for kind in self.kinds:
            ph = ph + hankel_split(kind, self.nu, z)[1]
        return ph

    def speed(self, u):
        """Rough phase speed: oscillation of e^{it} plus nu times the turning of arg t."""
        u = np.asarray(u, dtype=complex)
        if self.variable == "t":
            return len(self.kinds) * (1.0 + (self.nu + 1.0) / np.maximum(np.abs(u), 1e-300))
        t = np.abs(np.exp(u + self.log_scale))
        return len(self.kinds) * (t + self.nu + 1.0)

    def log_mod(self, u):
        z = self.to_log(u)
        lm = np.zeros(z.shape)
        for kind in self.kinds:
            lm = lm + hankel_split(kind, self.nu, z)[0]
        return lm

    def newton_step(self, u):
        """f(u)/f'(u)."""
        z = self.to_log(np.array([u]))
        tld = hankel_log_derivative(self.kinds, self.nu, z)[0]
        # f'/f = tld * dlog(t)/du
        dlog = 1.0 / u if self.variable == "t" else 1.0
        return 1.0 / (tld * dlog)

    def count(self, rect):
        w = winding_number(self.phase, _rect_vertices(rect), speed=self.speed)
        n = int(round(w))
        if abs(w - n) > 0.05:
            raise AccuracyError(f"ill-conditioned winding {w:.3f} on {rect}")
        return n


def _inside(u, r, pad=0.0):
    return (r[0] - pad <= u.real <= r[1] + pad) and (r[2] - pad <= u.imag <= r[3] + pad)


def _newton(prob, u0, rect, tol=1e-14, maxit=60):
    u = complex(u0)
    size = max(rect[1] - rect[0], rect[3] - rect[2])
    for _ in range(maxit):
        step = prob.newton_step(u)
        if not np.isfinite(step):
            return None
        u = u - step
        if not _inside(u, rect, pad=0.25 * size):
            return None
        if abs(step) <= tol * max(1.0, abs(u)):
            return u
    return u if abs(step) <= 1e-10 * max(1.0, abs(u)) else None


def _count_robust(prob, rect):
    """Winding count, nudging the rectangle when the boundary is ill-conditioned."""
    x0, x1, y0, y1 = rect
    h = 1e-3 * max(x1 - x0, y1 - y0)
    for k in range(4):
        try:
            return prob.count(rect), rect
        except AccuracyError:
            rect = (x0 - (k + 1) * h, x1 + (k + 1) * 0.5 * h,
                    y0 - (k + 1) * 0.5 * h, y1 + (k + 1) * h)
    raise AccuracyError(f"winding count ill-conditioned on rectangle {rect}")


def _isolate(prob, rect, n, depth, out, max_depth):
    if n == 0:
        return
    x0, x1, y0, y1 = rect
    if n == 1:
        root = _newton(prob, complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)), rect)
        if root is not None and _inside(root, rect):
            out.append((root, 1))
            return
    size = max(x1 - x0, y1 - y0)
    if depth >= max_depth or size < 1e-9:
        if size < 1e-6:
            c = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
            root = _newton(prob, c, rect) or c
            out.append((root, n))
            return
        raise AccuracyError(f"zero isolation failed: {n} zero(s) in suspect rectangle {rect}")
    # split slightly off-centre so symmetric zero layouts do not land on edges
    xm = x0 + 0.5007 * (x1 - x0)
    ym = y0 + 0.4993 * (y1 - y0)
    children = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
    counts = [prob.count(c) for c in children]
    if sum(counts) != n:
        raise AccuracyError(f"winding-count mismatch in subdivision of {rect}: "
                            f"parent {n}, children {counts}")
    for c, k in zip(children, counts):
        _isolate(prob, c, k, depth + 1, out, max_depth)


def _solve_zeros(prob, region, max_depth=14):
    n, rect = _count_robust(prob, region)
    found = []
    _isolate(prob, rect, n, 0, found, max_depth)
    found.sort(key=lambda p: (round(p[0].real, 12), p[0].imag))
    zs = [p[0] for p in found]
    mult = [p[1] for p in found]
    residuals = [abs(prob.newton_step(u)) / max(1.0, abs(u)) for u in zs]
    return ZeroSet(nu=prob.nu, kinds=prob.kinds, region=tuple(rect), zeros=zs,
                   multiplicities=mult, winding_count=n, variable=prob.variable,
                   residuals=residuals)


def _check_region(region):
    x0, x1, y0, y1 = map(float, region)
    if not (x0 < x1 and y0 < y1):
        raise DomainError("region must be (re_min, re_max, im_min, im_max) with min < max")
    return x0, x1, y0, y1


def find_hankel_zeros(kind, nu, region):
    """Zeros of H^(kind)_nu(t) in a rectangle of the principal t-sheet.

    The rectangle must avoid the closed negative real axis (the branch cut)
    and the origin.  Zeros are isolated by recursive argument-principle
    subdivision and polished by Newton steps using the order recurrence for
    H'.
    """
    if kind not in (1, 2):
        raise DomainError("kind must be 1 or 2")
    nu = _check_order(nu)
    x0, x1, y0, y1 = _check_region(region)
    if y0 <= 0.0 <= y1 and x0 <= 0.0:
        raise DomainError("region intersects the branch cut (-inf, 0]")
    prob = _ZeroProblem((kind,), nu, "t")
    return _solve_zeros(prob, (x0, x1, y0, y1))


def find_log_zeros(kinds, nu, region, scale=1.0):
    """Zeros in zeta of prod_k H^(k)_nu(scale * exp(zeta)) on the log cover."""
    nu = _check_order(nu)
    if scale <= 0:
        raise DomainError("scale must be positive")
    prob = _ZeroProblem(kinds, nu, "log", log_scale=math.log(scale))
    return _solve_zeros(prob, _check_region(region))


def winding_count_fine(kind, nu, region, factor=10, variable="t", scale=1.0):
    """Brute-force argument-principle count on a uniformly refined boundary.

    Independent of the adaptive sampler: the boundary is sampled uniformly
    with ``factor`` times the default density and phase jumps are only
    unwrapped, never refined.
    """
    prob = _ZeroProblem((kind,) if isinstance(kind, int) else tuple(kind), float(nu),
                        variable, log_scale=math.log(scale))
    verts = _rect_vertices(_check_region(region))
    verts.append(verts[0])
    n = 256 * factor
    pts = np.concatenate([p + (q - p) * np.linspace(0, 1, n, endpoint=False)
                          for p, q in zip(verts[:-1], verts[1:])] + [np.array([verts[0]])])
    ph = prob.phase(pts)
    return int(round(_wrap(np.diff(ph)).sum() / (2 * np.pi)))
