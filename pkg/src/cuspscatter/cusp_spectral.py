"""The cusp operator, its zero-mode resolvent kernel and the continuation.

Sign convention: ``L`` below is the positive operator

    L u = -u'' + u'/(1 + x/a) + 4 pi^2 n^2 (1 + x/a)^{2a} u,

the negative of the differential expression of the Laplacian on the n-th
Fourier mode, so its spectrum lies in [0, inf).  "Resolvent at mu" always
means (L - mu)^{-1}.

In the zero mode, with s = a + x, c = a + 1 and nu = (a + 1)/2,

    k(mu, x, y) = (s_x/s_y)^nu s_y int_0^inf G(l, X) G(l, Y) / (J^2 + Y^2)(l)
                                           * l / (l^2 - mu c^2) dl,

X = s_x/c, Y = s_y/c.  The integrand decays like 1/l^2 without
oscillating when x = y, so the l-integral is split at a cut L: [0, L] is
integrated on the real axis and [L, inf) along vertical rays L +- i t after
writing G G/(J^2 + Y^2) as a sum of four Hankel products, each of which
decays exponentially on one of the two rays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import AccuracyError, DomainError, PoleError
from .numbers import LogPoint, ScaledComplex
from .quadrature import QuadratureSpec, gauss_kronrod, panel_breaks
from .special_functions import (ZeroSet, _ZeroProblem, cylinder_g, cylinder_g_cover,
                                find_log_zeros, hankel, hankel_derivative, hankel_split,
                                winding_number)
from .weber import GridFunction, inverse_weight

FOUR_PI2 = 4.0 * math.pi ** 2


@dataclass(frozen=True)
class CuspGeometry:
    """Cusp with metric dx^2 + (1 + x/a)^{-2a} dy^2 on [1, inf) x S^1.

    ``a = 0`` is accepted only with ``degenerate=True``: it stands for the
    flat limit with order nu = 1/2, used to check formulas against
    half-order closed forms.
    """

    a: float
    degenerate: bool = False

    def __post_init__(self):
        a = float(self.a)
        if not math.isfinite(a) or a < 0 or (a == 0 and not self.degenerate):
            raise DomainError(f"cusp parameter must satisfy a > 0, got {a}")
        object.__setattr__(self, "a", a)

    @property
    def nu(self):
        return 0.5 * (self.a + 1.0)

    @property
    def c(self):
        return self.a + 1.0

    def warp(self, x):
        """(1 + x/a)^{-a}, equal to 1 in the degenerate case."""
        x = np.asarray(x, dtype=float)
        if self.a == 0:
            return np.ones_like(x)
        return np.exp(-self.a * np.log1p(x / self.a))

    measure_density = warp

    def drift(self, x):
        """Coefficient 1/(1 + x/a) of u' in L (zero when a = 0)."""
        x = np.asarray(x, dtype=float)
        return self.a / (self.a + x) if self.a > 0 else np.zeros_like(x)

    def mode_potential(self, n, x):
        """4 pi^2 n^2 (1 + x/a)^{2a}."""
        return FOUR_PI2 * n * n / self.warp(x) ** 2

    def schrodinger_potential(self, n, x):
        """V_n of the unitarily equivalent operator -d^2/dx^2 + V_n."""
        x = np.asarray(x, dtype=float)
        q = (1.0 + x / self.a) ** -2
        return (0.25 + 0.5 / self.a) * q + self.mode_potential(n, x)


# ---------------------------------------------------------------------------
# finite differences


def fd_weights(x0, xs, order):
    """Finite-difference weights for the derivatives 0..order at x0 (Fornberg)."""
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def _uniform_step(grid):
    h = np.diff(grid)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        raise DomainError("finite differences need a uniform grid")
    return float(h[0])


def derivatives_fd(values, h):
    """(u', u'') by 4th-order differences; one-sided near the ends."""
    u = np.asarray(values)
    n = len(u)
    if n < 6:
        raise DomainError("grid too coarse: need at least 6 samples")
    d1 = np.empty_like(u)
    d2 = np.empty_like(u)
    d1[2:-2] = (u[:-4] - 8 * u[1:-3] + 8 * u[3:-1] - u[4:]) / (12 * h)
    d2[2:-2] = (-u[:-4] + 16 * u[1:-3] - 30 * u[2:-2] + 16 * u[3:-1] - u[4:]) / (12 * h * h)
    offsets = np.arange(6.0)
    for i in (0, 1):
        w = fd_weights(float(i), offsets, 2)
        d1[i] = w[:, 1] @ u[:6] / h
        d2[i] = w[:, 2] @ u[:6] / (h * h)
        j = n - 1 - i
        wr = fd_weights(float(5 - i), offsets, 2)
        d1[j] = wr[:, 1] @ u[-6:] / h
        d2[j] = wr[:, 2] @ u[-6:] / (h * h)
    return d1, d2


def cusp_laplacian_apply(geo, n, u):
    """L u on the uniform grid of ``u`` (a GridFunction), 4th-order accurate."""
    h = _uniform_step(u.grid)
    d1, d2 = derivatives_fd(u.values, h)
    x = u.grid
    out = -d2 + geo.drift(x) * d1 + geo.mode_potential(n, x) * u.values
    return GridFunction(x, out, "x")


# ---------------------------------------------------------------------------
# zero-mode eigenfunctions


def zero_mode_eigenfunction(geo, lam, x):
    """(a+x)^nu G_nu((a+1) sqrt(lam), (a+x)/(a+1)), solving L u = lam u, u(1) = 0.

    The power (a+x)^nu is applied in log space; the result overflows only
    when the true value exceeds the float64 range.
    """
    if not lam > 0:
        raise DomainError("eigenfunction needs lam > 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 1):
        raise DomainError("x must be >= 1")
    s = geo.a + x
    g = cylinder_g(geo.nu, geo.c * math.sqrt(lam), s / geo.c)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(g)) + geo.nu * np.log(s)
    out = np.sign(g) * np.exp(log_abs)
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# nonzero modes


def _mode_matrix(geo, n, x_max, h):
    m = int(round((x_max - 1.0) / h))
    x = 1.0 + h * np.arange(1, m)
    d = 2.0 / h ** 2 + geo.schrodinger_potential(n, x)
    e = np.full(m - 2, -1.0 / h ** 2)
    return d, e


def _fd_eigs(geo, n, count, x_max, h):
    d, e = _mode_matrix(geo, n, x_max, h)
    if len(d) < count + 2:
        raise DomainError("grid too coarse for the requested eigenvalue count")
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i",
                            select_range=(0, count - 1), lapack_driver="stebz")


def mode_eigenvalues(geo, n, count=1, x_max=None, h=1.0 / 200, rel_tol=1e-6,
                     max_extensions=60):
    """Lowest ``count`` eigenvalues of L on the n-th mode (n != 0).

    Uses the unitarily equivalent Schrodinger form -d^2/dx^2 + V_n with
    Dirichlet ends at 1 and X, 3-point differences with one Richardson
    step (h, h/2), and bisection for the selected eigenvalues.  X grows from
    ``x_max`` (default 1.5) until the eigenvalues change by less than
    ``rel_tol`` relative.  If V_n(X) h^2 >= 0.1 at the final X, h is halved
    until the mesh resolves the potential there.
    """
    n = int(n)
    if n == 0:
        raise DomainError("the zero mode has continuous spectrum; use n != 0")
    if count < 1:
        raise DomainError("count must be >= 1")
    x_max = 1.5 if x_max is None else float(x_max)
    if x_max <= 1:
        raise DomainError("x_max must exceed 1")

    def rich(xm, step):
        e1 = _fd_eigs(geo, n, count, xm, step)
        e2 = _fd_eigs(geo, n, count, xm, step / 2)
        return (4.0 * e2 - e1) / 3.0

    prev = rich(x_max, h)
    for _ in range(max_extensions):
        nxt = x_max + max(0.25, 0.1 * (x_max - 1.0))
        cur = rich(nxt, h)
        x_max = nxt
        if np.all(np.abs(cur - prev) <= rel_tol * np.abs(cur)):
            # the mesh must resolve the potential at the far end
            step = h
            while geo.schrodinger_potential(n, x_max) * step * step >= 0.1:
                step /= 2
                if step < 1e-6:
                    raise DomainError("V_n(X) h^2 < 0.1 would need h < 1e-6")
            if step != h:
                cur = rich(x_max, step)
            return [float(v) for v in cur]
        prev = cur
    raise AccuracyError("eigenvalues did not stabilize under domain extension")


# ---------------------------------------------------------------------------
# zero-mode resolvent kernel


def _hankel_terms(nu, log_lam, log_x, log_y):
    """Logs of the four Hankel products in G(l,X) G(l,Y) / (H1 H2)(l).

    G G/(H1 H2) = -(T1 - T2 - T3 + T4)/4 with
    T1 = (H1/H2)(l) H2(lX) H2(lY),  T2 = H2(lX) H1(lY),
    T3 = H1(lX) H2(lY),             T4 = (H2/H1)(l) H1(lX) H1(lY).
    """
    l1, p1 = hankel_split(1, nu, log_lam)
    l2, p2 = hankel_split(2, nu, log_lam)
    a1x, b1x = hankel_split(1, nu, log_lam + log_x)
    a2x, b2x = hankel_split(2, nu, log_lam + log_x)
    a1y, b1y = hankel_split(1, nu, log_lam + log_y)
    a2y, b2y = hankel_split(2, nu, log_lam + log_y)
    h1x = a1x + 1j * b1x
    h2x = a2x + 1j * b2x
    h1y = a1y + 1j * b1y
    h2y = a2y + 1j * b2y
    r12 = (l1 - l2) + 1j * (p1 - p2)
    return r12 + h2x + h2y, h2x + h1y, h1x + h2y, -r12 + h1x + h1y


_TERM_SIGNS = (-0.25, 0.25, 0.25, -0.25)


def hankel_ratio_density(nu, log_lam, log_x, log_y):
    """G(l,X) G(l,Y) / (H1 H2)(l) at complex l = exp(log_lam), overflow-safe."""
    terms = _hankel_terms(nu, log_lam, log_x, log_y)
    return sum(s * np.exp(t) for s, t in zip(_TERM_SIGNS, terms))


def _tail_cut(geo, mu):
    return 2.0 * geo.c * abs(cmath.sqrt(mu)) + 2.0 * geo.nu + 10.0


def _real_segment(nu, c2mu, X, Y, lo, hi, q):
    """int_lo^hi G G/(J^2+Y^2) l/(l^2 - c2mu) dl on the real axis, per pair."""
    def integrand(lam):
        gx = cylinder_g(nu, lam[:, None], X[None, :])
        gy = cylinder_g(nu, lam[:, None], Y[None, :])
        iw = inverse_weight(nu, lam)
        return gx * gy * (iw * lam / (lam * lam - c2mu))[:, None]

    freq = float(np.max(X + Y - 2.0))
    breaks = panel_breaks(lo, hi, 2.0 * math.pi / max(freq, 1.0))
    cap = max(q.max_subdivisions, 8 * (len(breaks) - 1))
    spec = QuadratureSpec(q.rel_tol, q.abs_tol, cap)
    return gauss_kronrod(integrand, breaks, spec).value


def _ray_tail(nu, c2mu, X, Y, cut, q):
    """int_cut^inf along vertical rays, one ray direction per Hankel term."""
    lx = np.log(X)
    ly = np.log(Y)
    up_t2 = np.where(Y >= X, 1.0, -1.0)
    dirs = np.stack([-np.ones_like(X), up_t2, -up_t2, np.ones_like(X)])

    def integrand(u):
        u = u[:, None]
        s = cut * u / (1.0 - u)
        ds = cut / (1.0 - u) ** 2
        out = 0.0
        for k in range(4):
            lam = cut + 1j * dirs[k][None, :] * s
            ll = np.log(lam)
            term = _hankel_terms(nu, ll, lx[None, :], ly[None, :])[k]
            r = lam / (lam * lam - c2mu)
            out = out + _TERM_SIGNS[k] * np.exp(term) * r * (1j * dirs[k][None, :]) * ds
        return out

    spec = QuadratureSpec(q.rel_tol, q.abs_tol, max(q.max_subdivisions, 500))
    return gauss_kronrod(integrand, np.linspace(0.0, 1.0, 9), spec).value


def kernel_prefactor(geo, x, y):
    """(s_x/s_y)^nu s_y, s = a + x."""
    sx = geo.a + np.asarray(x, dtype=float)
    sy = geo.a + np.asarray(y, dtype=float)
    return np.exp(geo.nu * (np.log(sx) - np.log(sy))) * sy


def line_integral(geo, mu, x, y, lam_lo=0.0, lam_hi=None, q=None):
    """The kernel's l-integral over [lam_lo, lam_hi] (lam_hi=None: to infinity).

    ``mu`` may be any complex number off the integration path; no
    prefactor is applied.  Vectorized over broadcast (x, y) pairs.
    """
    q = q or QuadratureSpec()
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    X = (geo.a + x.ravel()) / geo.c
    Y = (geo.a + y.ravel()) / geo.c
    c2mu = complex(mu) * geo.c ** 2
    nu = geo.nu
    total = np.zeros(X.shape, dtype=complex)
    if lam_hi is None:
        cut = max(_tail_cut(geo, mu), lam_lo)
        if cut > lam_lo:
            total += _real_segment(nu, c2mu, X, Y, lam_lo, cut, q)
        total += _ray_tail(nu, c2mu, X, Y, cut, q)
    elif lam_hi > lam_lo:
        total += _real_segment(nu, c2mu, X, Y, lam_lo, lam_hi, q)
    return total.reshape(shape)


def _check_mu(mu):
    mu = complex(mu)
    if mu.imag == 0 and mu.real >= 0:
        raise DomainError(f"mu={mu} lies on the spectrum [0, inf)")
    return mu


def resolvent_kernel(geo, mu, x, y, q=None):
    """k(mu, x, y) of (L - mu)^{-1} in the zero mode, for mu off [0, inf)."""
    mu = _check_mu(mu)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 1) or np.any(y < 1):
        raise DomainError("x and y must be >= 1")
    val = kernel_prefactor(geo, x, y) * line_integral(geo, mu, x, y, q=q)
    return complex(val) if val.ndim == 0 else val


def _knot_rule(u, lo, hi, order=6):
    """Gauss-Legendre nodes on every knot interval of ``u`` inside [lo, hi]."""
    knots = u.grid[(u.grid >= lo) & (u.grid <= hi)]
    knots = np.unique(np.concatenate([[lo], knots, [hi]]))
    t, w = np.polynomial.legendre.leggauss(order)
    a = knots[:-1, None]
    b = knots[1:, None]
    nodes = (0.5 * (a + b) + 0.5 * (b - a) * t).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    return nodes, weights


def resolvent_apply(geo, mu, u, q=None, chunk=None, max_chunks=400):
    """v = (L - mu)^{-1} u on the grid of the x-GridFunction ``u``.

    v(x) = int k(mu, x, y) u(y) dy with the y-integral taken inside the
    l-integral (both are absolutely convergent).  For each l the inner
    integral of G(l, Y) s_y^{1-nu} u(y) uses a fixed Gauss rule on the knot
    intervals of ``u``; the l-integral runs chunk by chunk until two
    consecutive chunks contribute less than the tolerance.
    """
    mu = _check_mu(mu)
    q = q or QuadratureSpec(rel_tol=1e-8, abs_tol=1e-11)
    nu, c = geo.nu, geo.c
    lo, hi = u.support
    if hi <= lo:
        return GridFunction(u.grid, np.zeros_like(u.grid), "x")
    xs = u.grid
    X = (geo.a + xs) / c
    c2mu = mu * c * c
    yn, yw = _knot_rule(u, lo, hi)
    Yn = (geo.a + yn) / c
    # s_y^{1-nu} u(y) dy, with the (s_x/s_y)^nu s_y prefactor split as
    # (s_x/c)^nu * (s_y/c)^{1-nu} * c
    dens = yw * np.exp((1.0 - nu) * np.log(Yn)) * u(yn) * c

    def integrand(lam):
        ghat = cylinder_g(nu, lam[:, None], Yn[None, :]) @ dens
        gx = cylinder_g(nu, lam[:, None], X[None, :])
        return gx * (ghat * inverse_weight(nu, lam) * lam / (lam * lam - c2mu))[:, None]

    chunk = chunk or max(10.0, 2.0 * c * abs(cmath.sqrt(mu)))
    period = 2.0 * math.pi / max(float(X[-1] + Yn[-1] - 2.0), 1.0)
    total = np.zeros(len(xs), dtype=complex)
    quiet = 0
    start = 0.0
    for _ in range(max_chunks):
        breaks = panel_breaks(start, start + chunk, period)
        spec = QuadratureSpec(q.rel_tol, q.abs_tol, max(q.max_subdivisions, 8 * len(breaks)))
        part = gauss_kronrod(integrand, breaks, spec).value
        total += part
        start += chunk
        size = float(np.max(np.abs(part)))
        quiet = quiet + 1 if size <= max(q.abs_tol, q.rel_tol * float(np.max(np.abs(total)))) else 0
        if quiet >= 2:
            break
    else:
        raise AccuracyError("resolvent l-integral did not decay", estimate=size)
    v = np.exp(nu * np.log(X)) * total
    if np.isrealobj(u.values) and mu.imag == 0:
        v = v.real
    return GridFunction(xs, v, "x")


def resolvent_residual(geo, mu, u, v):
    """sup over interior grid points of |(L - mu) v - u| (4th-order FD)."""
    lv = cusp_laplacian_apply(geo, 0, v)
    r = lv.values - complex(mu) * v.values - u(v.grid)
    return float(np.max(np.abs(r[3:-3])))


# ---------------------------------------------------------------------------
# meromorphic continuation across the continuous spectrum
#
# With l = c e^w the kernel's l-integral reads
#     int_R F(c e^w) e^{2w} / (e^{2w} - e^z) dw,   F = G G/(H1 H2),
# whose integrand has poles at w = z/2 + i pi j and where H1 H2(c e^w) = 0.
# Pushing the path R to a polyline Gamma below (above) the axis between
# alpha and beta picks up -2 pi i (+2 pi i) times the residues at the zeros
# of H1 H2 in the region Omega between R and Gamma.  The result is the
# continuation of k to every z reachable from the physical strip
# 0 < Im z < 2 pi without z/2 + i pi j crossing Gamma.


@dataclass(frozen=True)
class ContourSpec:
    """Polyline alpha -> ... -> beta in the w-plane, below or above the axis.

    ``vertices`` lists the interior vertices; the full path is
    (-inf, alpha] + polyline + [beta, inf).  Interior vertices must lie
    strictly on ``side`` of the real axis, within |Im w| < pi.
    """

    alpha: float
    beta: float
    vertices: tuple
    side: str = "lower"

    def __post_init__(self):
        if self.side not in ("lower", "upper"):
            raise DomainError("side must be 'lower' or 'upper'")
        if not self.alpha < self.beta:
            raise DomainError("need alpha < beta")
        verts = tuple(complex(v) for v in self.vertices)
        if not verts:
            raise DomainError("a contour needs at least one interior vertex")
        sgn = -1.0 if self.side == "lower" else 1.0
        for v in verts:
            if not (0.0 < sgn * v.imag < math.pi):
                raise DomainError(f"vertex {v} must satisfy 0 < {'-' if sgn < 0 else ''}Im w < pi")
        object.__setattr__(self, "vertices", verts)
        pts = self.path
        segs = list(zip(pts[:-1], pts[1:]))
        for i in range(len(segs)):
            for j in range(i + 2, len(segs)):
                if _segments_cross(*segs[i], *segs[j]):
                    raise DomainError("contour polyline is not simple")

    @classmethod
    def box(cls, alpha, beta, depth, side="lower"):
        """alpha -> alpha -+ i depth -> beta -+ i depth -> beta."""
        d = -depth if side == "lower" else depth
        return cls(alpha, beta, (complex(alpha, d), complex(beta, d)), side)

    @property
    def path(self):
        return (complex(self.alpha),) + self.vertices + (complex(self.beta),)

    @property
    def sign(self):
        return -1.0 if self.side == "lower" else 1.0

    def closed_curve(self):
        """Polyline plus the axis segment back to alpha."""
        return list(self.path) + [complex(self.alpha)]

    def encloses(self, p):
        return abs(_polygon_winding(self.closed_curve(), complex(p))) > 0.5

    def distance(self, p):
        """Distance from p to the full path, including both half-lines."""
        p = complex(p)
        pts = self.path
        d = min(_segment_distance(p, u, v) for u, v in zip(pts[:-1], pts[1:]))
        if p.real <= self.alpha:
            d = min(d, abs(p.imag))
        else:
            d = min(d, abs(p - self.alpha))
        if p.real >= self.beta:
            d = min(d, abs(p.imag))
        else:
            d = min(d, abs(p - self.beta))
        return d

    def bounding_box(self, pad=0.05):
        pts = self.path
        re = [p.real for p in pts]
        im = [p.imag for p in pts] + [0.0]
        return (min(re) - pad, max(re) + pad, min(im) - pad, max(im) + pad)


def _cross(o, a, b):
    return (a - o).real * (b - o).imag - (a - o).imag * (b - o).real


def _segments_cross(p1, p2, p3, p4):
    d1 = _cross(p3, p4, p1)
    d2 = _cross(p3, p4, p2)
    d3 = _cross(p1, p2, p3)
    d4 = _cross(p1, p2, p4)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def _segment_distance(p, u, v):
    d = v - u
    t = 0.0 if d == 0 else min(1.0, max(0.0, ((p - u) * d.conjugate()).real / abs(d) ** 2))
    return abs(p - (u + t * d))


def _polygon_winding(pts, p):
    ang = np.angle(np.asarray(pts, dtype=complex) - p)
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(d.sum() / (2 * np.pi))


def enclosed_zeros(geo, contour):
    """Zeros of w -> H1 H2(c e^w) strictly inside the contour's region."""
    zs = find_log_zeros((1, 2), geo.nu, contour.bounding_box(), scale=geo.c)
    keep = [(w, m) for w, m in zip(zs.zeros, zs.multiplicities) if contour.encloses(w)]
    return ZeroSet(nu=geo.nu, kinds=(1, 2), region=zs.region,
                   zeros=[w for w, _ in keep], multiplicities=[m for _, m in keep],
                   winding_count=sum(m for _, m in keep), variable="log")


def contour_winding_count(geo, contour):
    """Argument-principle count of zeros of H1 H2(c e^w) inside the contour."""
    prob = _ZeroProblem((1, 2), geo.nu, "log", log_scale=math.log(geo.c))
    # the closed curve runs counterclockwise for a lower contour
    w = -contour.sign * winding_number(prob.phase, contour.closed_curve(), speed=prob.speed)
    n = int(round(w))
    if abs(w - n) > 0.05:
        raise AccuracyError(f"contour winding {w:.3f} is not near an integer")
    return n


def _residue_terms(geo, z, zeros, X, Y):
    """Residues of F(c e^w) e^{2w}/(e^{2w}-e^z) at the given zeros, per pair."""
    nu, logc = geo.nu, math.log(geo.c)
    out = np.zeros(X.shape, dtype=complex)
    for w in zeros:
        pt = LogPoint(w + logc)
        h1, h2 = hankel(1, nu, pt), hankel(2, nu, pt)
        d1, d2 = hankel_derivative(1, nu, pt), hankel_derivative(2, nu, pt)
        lam = ScaledComplex.from_log(w + logc)
        dw = lam * (d1 * h2 + h1 * d2)
        gx = cylinder_g_cover(nu, np.full(X.shape, w + logc), X)
        gy = cylinder_g_cover(nu, np.full(Y.shape, w + logc), Y)
        e2w = cmath.exp(2 * w)
        ez = cmath.exp(z)
        out += gx * gy * (e2w / (e2w - ez)) / dw.to_complex()
    return out


def _polyline_integral(geo, z, contour, X, Y, q):
    ez = cmath.exp(z)
    logc = math.log(geo.c)
    lx = np.log(X)[None, :]
    ly = np.log(Y)[None, :]
    pts = contour.path
    total = np.zeros(X.shape, dtype=complex)
    for u, v in zip(pts[:-1], pts[1:]):
        d = v - u

        def integrand(t, u=u, d=d):
            w = (u + d * t)[:, None]
            f = hankel_ratio_density(geo.nu, w + logc, lx, ly)
            e2w = np.exp(2 * w)
            return f * (e2w / (e2w - ez)) * d

        freq = float(abs(d)) * geo.c * math.exp(max(u.real, v.real)) * float(np.max(X + Y))
        breaks = panel_breaks(0.0, 1.0, max(1.0 / 64, 2 * math.pi / max(freq, 1.0)))
        spec = QuadratureSpec(q.rel_tol, q.abs_tol, max(q.max_subdivisions, 8 * len(breaks)))
        total += gauss_kronrod(integrand, breaks, spec).value
    return total


def _continued_poles(zeros, side):
    shift = 0.0 if side == "lower" else 1j * math.pi
    return [2.0 * (w + shift) for w in zeros]


def resolvent_kernel_continued(geo, z, x, y, contour, zeros=None, q=None,
                               check_zeros=True):
    """Continuation of the zero-mode kernel k(e^z, x, y) through ``contour``.

    ``z`` is a LogPoint (or complex logarithm).  ``zeros`` are the zeros of
    H1 H2(c e^w) inside the contour's region (computed when omitted); with
    ``check_zeros`` their number is compared with the argument-principle
    count along the closed contour.
    """
    q = q or QuadratureSpec()
    zz = z.z if isinstance(z, LogPoint) else complex(z)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 1) or np.any(y < 1):
        raise DomainError("x and y must be >= 1")
    p0 = zz / 2
    pm = p0 - 1j * math.pi
    for p in (p0, pm):
        if contour.distance(p) < 1e-6:
            raise DomainError(f"z/2 + i pi j = {p} lies on the integration contour")
    inside = contour.encloses
    if contour.side == "lower":
        ok = (p0.imag > 0 or inside(p0) or (p0.imag == 0 and contour.alpha < p0.real < contour.beta)) \
            and (pm.imag < 0 and not inside(pm))
    else:
        ok = (pm.imag < 0 or inside(pm) or (pm.imag == 0 and contour.alpha < pm.real < contour.beta)) \
            and (p0.imag > 0 and not inside(p0))
    if not ok:
        raise DomainError(f"z={zz} is not reached by continuation through this contour")
    if zeros is None:
        zeros = enclosed_zeros(geo, contour)
    zlist = list(getattr(zeros, "zeros", zeros))
    mults = list(getattr(zeros, "multiplicities", [1] * len(zlist)))
    if any(m != 1 for m in mults):
        raise DomainError("residue formula assumes simple zeros")
    for w in zlist:
        if not inside(w):
            raise DomainError(f"zero {w} is not inside the contour region")
    if check_zeros:
        n = contour_winding_count(geo, contour)
        if n != len(zlist):
            raise DomainError(f"{len(zlist)} zeros supplied but the argument principle "
                              f"counts {n} inside the contour")
    for pole in _continued_poles(zlist, contour.side):
        if abs(zz - pole) < 1e-6:
            raise PoleError(f"z={zz} is within 1e-6 of the pole {pole}")

    xb, yb = np.broadcast_arrays(x, y)
    X = (geo.a + xb.ravel()) / geo.c
    Y = (geo.a + yb.ravel()) / geo.c
    mu = cmath.exp(zz)
    c = geo.c
    total = line_integral(geo, mu, xb.ravel(), yb.ravel(), 0.0, c * math.exp(contour.alpha), q)
    total = total + line_integral(geo, mu, xb.ravel(), yb.ravel(), c * math.exp(contour.beta), None, q)
    total = total + _polyline_integral(geo, zz, contour, X, Y, q)
    if zlist:
        total = total + contour.sign * 2j * math.pi * _residue_terms(geo, zz, zlist, X, Y)
    val = (kernel_prefactor(geo, xb, yb).ravel() * total).reshape(xb.shape)
    return complex(val) if val.ndim == 0 else val


def residue_contribution(geo, z, w, x, y, side="lower"):
    """The single term -+2 pi i Res_w (with prefactor) for one zero w."""
    zz = z.z if hasattr(z, "z") else complex(z)
    X = np.atleast_1d((geo.a + np.asarray(x, dtype=float)) / geo.c)
    Y = np.atleast_1d((geo.a + np.asarray(y, dtype=float)) / geo.c)
    sgn = -1.0 if side == "lower" else 1.0
    r = sgn * 2j * math.pi * _residue_terms(geo, zz, [w], X, Y)
    val = kernel_prefactor(geo, x, y) * r
    return complex(val[0]) if val.size == 1 else val


def pole_set_H(geo, window, k_range=(-2, 2)):
    """Points z of ``window`` with H1 H2(c e^{z/2 + k pi i}) = 0, Im z outside (0, 2 pi).

    ``window`` is (re_min, re_max, im_min, im_max) in the z-plane; sheets
    k_range[0] <= k <= k_range[1] are searched.  Each returned point carries
    the list of k for which it is a zero in ``tags``.
    """
    re0, re1, im0, im1 = map(float, window)
    if not (re0 < re1 and im0 < im1) or not all(map(math.isfinite, (re0, re1, im0, im1))):
        raise DomainError("window must be a bounded rectangle")
    found = []
    for k in range(int(k_range[0]), int(k_range[1]) + 1):
        region = (re0 / 2, re1 / 2, im0 / 2 + k * math.pi, im1 / 2 + k * math.pi)
        zs = find_log_zeros((1, 2), geo.nu, region, scale=geo.c)
        for zeta, m in zip(zs.zeros, zs.multiplicities):
            zp = 2.0 * (zeta - 1j * k * math.pi)
            if 0.0 < zp.imag < 2.0 * math.pi:
                continue
            for item in found:
                if abs(item[0] - zp) < 1e-8 * max(1.0, abs(zp)):
                    item[2].append(k)
                    break
            else:
                found.append([zp, m, [k]])
    found.sort(key=lambda t: (t[0].imag, t[0].real))
    return ZeroSet(nu=geo.nu, kinds=(1, 2), region=(re0, re1, im0, im1),
                   zeros=[f[0] for f in found], multiplicities=[f[1] for f in found],
                   winding_count=sum(f[1] for f in found), variable="z",
                   tags=[f[2] for f in found])
