"""Weber transform pair for the cylinder function G_nu.

    W[f](x)      = int_0^inf f(lam) G_nu(lam, x) lam dlam,         x >= 1
    W^{-1}[g](l) = int_1^inf g(x) G_nu(l, x) x dx / (J_nu(l)^2 + Y_nu(l)^2)

Inputs are GridFunctions (cubic interpolants of samples, zero off the grid)
or plain callables together with an explicit support interval.  All
transforms are vectorized over their evaluation points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp
from scipy.interpolate import CubicSpline

from .errors import DomainError
from .quadrature import QuadratureSpec, gauss_kronrod, panel_breaks
from .special_functions import _check_order, cylinder_g

# lower cut of the lam-integral; [0, EPS] is done analytically
SMALL_LAMBDA = 1e-8
PANELS_PER_PERIOD = 8


@dataclass
class GridFunction:
    """Samples of a function on a strictly increasing grid.

    ``domain`` is "x" (grid starts at 1) or "lambda" (grid starts at 0).
    Evaluation uses a cubic spline through the samples and returns zero
    outside the grid.
    """

    grid: np.ndarray
    values: np.ndarray
    domain: str = "x"
    _spline: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        vals = np.asarray(self.values)
        self.values = vals.astype(complex if np.iscomplexobj(vals) else float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise DomainError("grid and values must be 1-d arrays of equal length")
        if len(self.grid) < 4:
            raise DomainError("need at least 4 samples for cubic interpolation")
        if not np.all(np.diff(self.grid) > 0):
            raise DomainError("grid must be strictly increasing")
        if self.domain not in ("x", "lambda"):
            raise DomainError("domain must be 'x' or 'lambda'")
        start = 1.0 if self.domain == "x" else 0.0
        if self.grid[0] != start:
            raise DomainError(f"{self.domain}-grid must start at {start}")
        self._spline = CubicSpline(self.grid, self.values)

    @classmethod
    def from_function(cls, fn, grid, domain="x"):
        grid = np.asarray(grid, dtype=float)
        return cls(grid, fn(grid), domain)

    @property
    def spacing(self):
        return np.diff(self.grid)

    @property
    def support(self):
        """Smallest grid interval outside of which all samples are zero."""
        nz = np.nonzero(self.values)[0]
        if len(nz) == 0:
            return (self.grid[0], self.grid[0])
        i0 = max(nz[0] - 1, 0)
        i1 = min(nz[-1] + 1, len(self.grid) - 1)
        return (float(self.grid[i0]), float(self.grid[i1]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.grid[0], self.grid[-1]
        out = self._spline(np.clip(t, lo, hi))
        return np.where((t >= lo) & (t <= hi), out, 0.0)


def _as_integrand(f, support, default_lo, q):
    """Return (callable, lo, hi) for a GridFunction or callable input."""
    if isinstance(f, GridFunction):
        lo, hi = f.support if support is None else support
        return f, lo, hi
    if not callable(f):
        raise DomainError("input must be a GridFunction or a callable")
    if support is None:
        if q.truncation is None:
            raise DomainError("callable inputs need a support interval or a truncation")
        support = (default_lo, q.truncation)
    return f, float(support[0]), float(support[1])


def spectral_weight(nu, lam):
    """J_nu(lam)^2 + Y_nu(lam)^2 = |H^(1)_nu(lam)|^2 for real lam > 0."""
    nu = _check_order(nu)
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("spectral weight needs lam > 0")
    w = np.abs(sp.hankel1e(nu, lam)) ** 2
    return w[()] if w.ndim == 0 else w


def inverse_weight(nu, lam):
    """1 / (J_nu^2 + Y_nu^2), equal to 0 where the weight overflows."""
    with np.errstate(over="ignore"):
        w = spectral_weight(nu, lam)
    with np.errstate(divide="ignore"):
        return np.where(np.isfinite(w), 1.0 / w, 0.0)


def small_lambda_limit(nu, x):
    """lim_{lam -> 0} G_nu(lam, x)."""
    x = np.asarray(x, dtype=float)
    if nu == 0:
        return -(2.0 / math.pi) * np.log(x)
    return (x ** (-nu) - x ** nu) / (math.pi * nu)


def _oscillation_breaks(lo, hi, freq):
    """Initial panels of one oscillation period each.

    The adaptive driver then bisects where needed; the subdivision budget is
    PANELS_PER_PERIOD times the initial panel count.
    """
    period = 2.0 * math.pi / max(freq, 1.0)
    return panel_breaks(lo, hi, period)


def _budget(q, breaks):
    cap = max(q.max_subdivisions, PANELS_PER_PERIOD * (len(breaks) - 1))
    return QuadratureSpec(q.rel_tol, q.abs_tol, cap, q.truncation)


def weber_forward(nu, f, x, q=None, support=None):
    """W_nu[f](x) for x >= 1 (scalar or array).

    ``f`` is a lambda-GridFunction or a callable on lam >= 0; for callables
    ``support`` (or ``q.truncation``) bounds the integration range.  A
    callable may return an array with trailing axes; the result then carries
    them after the x axes.
    """
    nu = _check_order(nu)
    q = q or QuadratureSpec()
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 1):
        raise DomainError("weber_forward needs x >= 1")
    fn, lo, hi = _as_integrand(f, support, 0.0, q)
    if q.truncation is not None:
        hi = min(hi, q.truncation)
    lo = max(lo, 0.0)
    if hi <= lo:
        return np.zeros(np.shape(x)) if np.ndim(x) else 0.0

    def integrand(lam):
        fv = np.asarray(fn(lam))
        g = cylinder_g(nu, lam[:, None], xs[None, :]) * lam[:, None]
        return g.reshape(g.shape + (1,) * (fv.ndim - 1)) * fv[:, None, ...]

    start = max(lo, SMALL_LAMBDA)
    total = 0.0
    if lo < SMALL_LAMBDA:
        # f(lam) G(lam, x) lam ~ f(0) G(0, x) lam on [0, eps]
        f0 = np.asarray(fn(np.array([0.0])))[0]
        g0 = small_lambda_limit(nu, xs)
        total = np.multiply.outer(g0, f0) * (0.5 * SMALL_LAMBDA ** 2) if np.ndim(f0) else g0 * f0 * 0.5 * SMALL_LAMBDA ** 2
    breaks = _oscillation_breaks(start, hi, float(np.max(xs)))
    res = gauss_kronrod(integrand, breaks, _budget(q, breaks)).value + total
    return res if np.ndim(x) else res[0]


def weber_inverse(nu, g, lam, q=None, support=None):
    """W_nu^{-1}[g](lam) for lam > 0 (scalar or array).

    ``g`` is an x-GridFunction or a callable on x >= 1 with the same
    conventions as :func:`weber_forward`.
    """
    nu = _check_order(nu)
    q = q or QuadratureSpec()
    ls = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(ls <= 0):
        raise DomainError("weber_inverse needs lam > 0")
    fn, lo, hi = _as_integrand(g, support, 1.0, q)
    if q.truncation is not None:
        hi = min(hi, q.truncation)
    lo = max(lo, 1.0)
    if hi <= lo:
        return np.zeros(np.shape(lam)) if np.ndim(lam) else 0.0
    iw = inverse_weight(nu, ls)

    def integrand(x):
        gv = np.asarray(fn(x))
        k = cylinder_g(nu, ls[None, :], x[:, None]) * (x[:, None] * iw[None, :])
        return k.reshape(k.shape + (1,) * (gv.ndim - 1)) * gv[:, None, ...]

    breaks = _oscillation_breaks(lo, hi, float(np.max(ls)))
    res = gauss_kronrod(integrand, breaks, _budget(q, breaks)).value
    return res if np.ndim(lam) else res[0]


def outer_rule(lo, hi, freq, order=20):
    """Composite Gauss-Legendre nodes and weights, panels of half a period."""
    x, w = np.polynomial.legendre.leggauss(order)
    period = 2.0 * math.pi / max(freq, 1.0)
    pts = panel_breaks(lo, hi, 0.5 * period)
    a = pts[:-1, None]
    b = pts[1:, None]
    nodes = (0.5 * (a + b) + 0.5 * (b - a) * x).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    return nodes, weights


def weber_roundtrip(nu, f, r, x_max, q=None, support=None):
    """W_nu^{-1}[W_nu[f]](r) with the x-integral cut at ``x_max``.

    The inner transform is computed at all outer nodes in one vectorized
    adaptive pass; the outer integral uses a fixed composite rule.
    """
    nu = _check_order(nu)
    q = q or QuadratureSpec()
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    xn, wx = outer_rule(1.0, x_max, float(np.max(rs)))
    inner = weber_forward(nu, f, xn, q, support)
    kern = cylinder_g(nu, rs[None, :], xn[:, None]) * xn[:, None]
    res = (wx * inner) @ kern * inverse_weight(nu, rs)
    return res if np.ndim(r) else res[0]


def weber_multiplier(nu, m, u, q=None, lam_max=None, support=None):
    """W_nu[ m(lam) W_nu^{-1}[u] ] sampled on the grid of ``u``.

    ``u`` is an x-GridFunction, or a callable with ``support`` in which case
    a callable of x is returned.  ``m`` is a callable multiplier; the
    lam-integral is cut at ``lam_max`` (default ``q.truncation``).
    """
    nu = _check_order(nu)
    q = q or QuadratureSpec()
    lam_max = lam_max if lam_max is not None else q.truncation
    if lam_max is None:
        raise DomainError("weber_multiplier needs lam_max or q.truncation")
    inner_q = QuadratureSpec(q.rel_tol, q.abs_tol, q.max_subdivisions, None)
    _, lo, hi = _as_integrand(u, support, 1.0, inner_q)

    def apply(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        ln, wl = outer_rule(0.0, lam_max, max(float(np.max(xs)), hi))
        spec = np.asarray(m(ln)) * weber_inverse(nu, u, ln, inner_q, support)
        kern = cylinder_g(nu, ln[:, None], xs[None, :]) * ln[:, None]
        return (wl * spec) @ kern

    if isinstance(u, GridFunction):
        return GridFunction(u.grid, apply(u.grid), "x")
    return apply


def isometry_defect(nu, g, lam_max, q=None, support=None):
    """Relative defect of the Plancherel identity for W_nu^{-1}.

    |int |W^{-1} g|^2 w lam dlam - int |g|^2 x dx| / int |g|^2 x dx, with
    w = J_nu^2 + Y_nu^2 and the lam-integral cut at ``lam_max``.
    """
    nu = _check_order(nu)
    q = q or QuadratureSpec()
    fn, lo, hi = _as_integrand(g, support, 1.0, q)
    xn, wx = outer_rule(max(lo, 1.0), hi, 20.0)
    norm_x = float(np.sum(wx * np.abs(fn(xn)) ** 2 * xn))
    ln, wl = outer_rule(0.0, lam_max, hi)
    f = weber_inverse(nu, g, ln, q, support)
    with np.errstate(over="ignore"):
        w = spectral_weight(nu, ln)
    dens = np.where(np.isfinite(w), np.abs(f) ** 2 * w, 0.0) * ln
    norm_l = float(np.sum(wl * dens))
    return abs(norm_l - norm_x) / norm_x


def smooth_bump(t, center, half_width, sharpness=1.0):
    """C-infinity bump exp(k - k/(1-u^2)), u = (t-center)/half_width, zero for |u| >= 1.

    Larger ``sharpness`` k concentrates the bump near its center, which makes
    its transforms decay faster.
    """
    t = np.asarray(t, dtype=float)
    u = (t - center) / half_width
    out = np.zeros_like(t)
    m = np.abs(u) < 1
    out[m] = np.exp(sharpness - sharpness / (1.0 - u[m] ** 2))
    return out
