import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuspscatter.cusp_spectral import CuspGeometry, cusp_laplacian_apply
from cuspscatter.errors import DomainError, PoleError
from cuspscatter.numbers import LogPoint
from cuspscatter.scattering import (
    SpectralShift,
    eta_factor,
    functional_equation_residual,
    generalized_eigenfunction,
    incoming_outgoing,
    model_scattering_matrix,
    omega_factor,
    phi_n,
    scattering_matrix_scaled,
    scattering_winding,
    xi_factor,
)
from cuspscatter.special_functions import hankel
from cuspscatter.weber import GridFunction

from oracles import mp_scattering, mp_shift_factors

FLAT = CuspGeometry(0.0, degenerate=True)
RESONANCE_A2 = complex(2 * math.log(1 / 3), -math.pi)


def phase_gap(p, q):
    return abs((p - q + math.pi) % (2 * math.pi) - math.pi)


def assert_matches_oracle(got, ref, tol):
    ref_log = float(mpmath.log(abs(ref)))
    assert abs(got.log_mod - ref_log) < tol * max(1.0, abs(ref_log))
    assert phase_gap(got.phase, float(mpmath.arg(ref))) < tol * max(1.0, abs(ref_log))


# ---------------------------------------------------------------------------
# scattering matrix


def test_half_order_closed_form():
    assert model_scattering_matrix(FLAT, 0.0) == pytest.approx(
        complex(math.cos(2), -math.sin(2)), abs=1e-12)
    assert abs(model_scattering_matrix(FLAT, 0.0) - (-0.41615 - 0.90930j)) < 1e-5


@given(st.floats(-3.0, 3.0), st.floats(-9.0, 9.0))
def test_half_order_closed_form_everywhere(zr, zi):
    z = complex(zr, zi)
    ref = cmath.exp(-2j * cmath.exp(z / 2))
    assert abs(model_scattering_matrix(FLAT, z) - ref) < 1e-12 * abs(ref)
    assert functional_equation_residual(FLAT, z) < 1e-12


@pytest.mark.parametrize("a", [0.5, 2.0, 4.0, 10.0])
def test_unitarity_on_real_axis(a):
    g = CuspGeometry(a)
    for zr in np.linspace(-4.0, 4.0, 20):
        assert abs(abs(model_scattering_matrix(g, zr)) - 1.0) < 1e-10


@pytest.mark.parametrize("a,z", [(2.0, 0.0), (2.0, 1 + 2j), (0.5, -0.3 + 5j),
                                 (4.0, 0.2 - 2.5j), (2.0, 0.5 + 9j), (7.3, -1.0 - 7j)])
def test_scattering_matrix_matches_oracle(a, z):
    ref = complex(mp_scattering(a, z))
    assert abs(model_scattering_matrix(CuspGeometry(a), z) - ref) < 1e-12 * abs(ref)


def test_scaled_value_beyond_float_range():
    c = scattering_matrix_scaled(CuspGeometry(4.0), complex(11.0, 1.0))
    assert c.log_mod > 800
    ref = mp_scattering(4.0, complex(11.0, 1.0))
    assert_matches_oracle(c, ref, 1e-12)


def test_resonance_is_a_pole():
    g = CuspGeometry(2.0)
    with pytest.raises(PoleError):
        model_scattering_matrix(g, RESONANCE_A2)
    with pytest.raises(PoleError):
        model_scattering_matrix(g, LogPoint(RESONANCE_A2 + 1e-14))
    assert abs(scattering_winding(g, RESONANCE_A2, 0.05)) == 1
    assert scattering_winding(g, complex(0.0, 1.0), 0.3) == 0


# ---------------------------------------------------------------------------
# functional equation


@pytest.mark.parametrize("a", [0.5, 2.0, 4.0])
def test_functional_equation_on_grid(a):
    g = CuspGeometry(a)
    worst = 0.0
    for zr in np.linspace(-1.0, 1.0, 5):
        for zi in np.linspace(0.0, 2 * math.pi, 5):
            worst = max(worst, functional_equation_residual(g, complex(zr, zi)))
    assert worst < 1e-8


def test_functional_equation_is_deterministic():
    g = CuspGeometry(2.0)
    z = complex(0.3, 1.1)
    assert functional_equation_residual(g, z) == functional_equation_residual(g, z)


# ---------------------------------------------------------------------------
# generalized eigenfunction


@pytest.mark.parametrize("a,z", [(2.0, 0.4), (2.0, 1j * math.pi / 2), (5.5, -0.5 + 2j)])
def test_dirichlet_boundary(a, z):
    g = CuspGeometry(a)
    inc, out = incoming_outgoing(g, z, 1.0)
    assert abs(generalized_eigenfunction(g, z, 1.0)) < 1e-10 * max(abs(inc), abs(out))


def test_eigenfunction_solves_the_zero_mode_equation():
    g = CuspGeometry(2.0)
    z = 1j * math.pi / 2
    res = []
    # coarse grids: below h ~ 1/100 rounding in the stencils dominates
    for n in (81, 161):
        grid = np.linspace(1.0, 5.0, n)
        e = GridFunction(grid, generalized_eigenfunction(g, z, grid), "x")
        r = cusp_laplacian_apply(g, 0, e).values - cmath.exp(z) * e.values
        res.append(np.max(np.abs(r[3:-3])) / np.max(np.abs(e.values)))
    assert res[1] < 1e-8
    # fourth-order finite differences: halving h cuts the residual about 16 times
    assert res[0] / res[1] > 12


def test_outgoing_part_decays_on_the_half_period_line():
    g = CuspGeometry(2.0)
    z = complex(0.2, math.pi)
    xs = np.linspace(1.0, 12.0, 40)
    mags = [g.nu * math.log(g.a + x) + hankel(1, g.nu, LogPoint(z / 2 + math.log(g.a + x))).log_mod
            for x in xs]
    assert np.all(np.diff(mags) < 0)
    inc = [g.nu * math.log(g.a + x) + hankel(2, g.nu, LogPoint(z / 2 + math.log(g.a + x))).log_mod
           for x in xs]
    assert np.all(np.diff(inc) > 0)


def test_eigenfunction_input_validation():
    with pytest.raises(DomainError):
        generalized_eigenfunction(CuspGeometry(2.0), 0.0, 0.5)
    with pytest.raises(PoleError):
        generalized_eigenfunction(CuspGeometry(2.0), RESONANCE_A2, 2.0)


# ---------------------------------------------------------------------------
# spectral shift factors


def test_spectral_shift_log_value():
    sh = SpectralShift(4.0)
    assert sh.l_of_a == pytest.approx(16 * math.gamma(2.5) * 4, rel=1e-12)
    assert SpectralShift(4.0, "sqrt").l_of_a == pytest.approx(16 * math.gamma(2.5) * 2, rel=1e-12)
    big = SpectralShift(400.0)
    with mpmath.workdps(30):
        ref = 400 * mpmath.log(2) + mpmath.loggamma(200.5) + mpmath.log(400)
    assert big.log_l == pytest.approx(float(ref), rel=1e-12)
    assert big.l_of_a == math.inf
    assert SpectralShift(0.2).l_of_a >= 1.0
    with pytest.raises(DomainError):
        SpectralShift(4.0, "cube")
    with pytest.raises(DomainError):
        SpectralShift(-1.0)


@pytest.mark.parametrize("a,z", [(4.0, 0.0), (4.0, 2j * math.pi), (4.0, 0.3 + 1j),
                                 (6.0, -0.2 + 1.5j + 2j * math.pi), (2.5, 0.1 - 2j * math.pi),
                                 (2.5, 0.4), (8.0, -0.7 - 2.2j + 4j * math.pi)])
def test_shift_factors_match_oracle(a, z):
    g, sh = CuspGeometry(a), SpectralShift(a)
    eta_ref, xi_ref = mp_shift_factors(a, z)
    assert_matches_oracle(eta_factor(sh, g, z), eta_ref, 1e-12)
    assert_matches_oracle(xi_factor(sh, g, z), xi_ref, 1e-12)


def test_xi_first_sheet_reduction():
    a, z = 4.0, 0.35
    g, sh = CuspGeometry(a), SpectralShift(a)
    c = scattering_matrix_scaled(g, z + 2 * sh.log_l).to_complex()
    phase = cmath.exp(-2j * a * sh.l_of_a * cmath.exp(z / 2))
    expect = -(cmath.exp(1j * math.pi * a / 2) / c) * phase
    assert abs(xi_factor(sh, g, z).to_complex() - expect) < 1e-12
    assert abs(abs(phase) - 1.0) < 1e-15


def test_eta_first_sheet_reduction():
    a, z = 4.0, 0.0
    g, sh = CuspGeometry(a), SpectralShift(a)
    c = scattering_matrix_scaled(g, z + 2 * sh.log_l).to_complex()
    l = sh.l_of_a
    bracket = 1j * c * math.sin(-math.pi * (a + 1) / 2) * cmath.exp(-1j * math.pi * a / 4) \
        / math.cos(math.pi * a / 2)
    expect = a ** (-a / 2) * math.sqrt(math.pi * l / 2) * cmath.exp(-1j * a * l) / bracket
    got = eta_factor(sh, g, z).to_complex()
    assert got != 0 and abs(got - expect) < 1e-12 * abs(expect)


def test_eta_log_representable_for_large_a():
    g, sh = CuspGeometry(64.0), SpectralShift(64.0)
    e = eta_factor(sh, g, complex(0.1, 0.4))
    assert math.isfinite(e.log_mod) and abs(e.log_mod) > 709


def test_shift_factor_domain_errors():
    g, sh = CuspGeometry(3.0), SpectralShift(3.0)
    with pytest.raises(DomainError):
        eta_factor(sh, g, 0.0)
    with pytest.raises(DomainError):
        xi_factor(sh, g, 0.0)
    with pytest.raises(DomainError):
        omega_factor(g, 0.0)


def test_omega_unimodular_on_the_real_line():
    g = CuspGeometry(2.0)
    for lam in np.linspace(-2.0, 3.0, 7):
        assert abs(abs(omega_factor(g, lam)) - 1.0) < 1e-10


def test_omega_pole_at_resonance():
    with pytest.raises(PoleError):
        omega_factor(CuspGeometry(2.0), RESONANCE_A2)


@pytest.mark.parametrize("lam", [0.3, complex(-0.4, 1.0) + 2j * math.pi,
                                 complex(0.2, -0.5) + 4j * math.pi])
def test_phi_n_is_omega_up_to_phase(lam):
    # for a = 4n: omega = i phi_n exp((-1)^{1+k} 2 i a e^{lam/2})
    n = 1
    g = CuspGeometry(4.0 * n)
    k = LogPoint(lam).k
    phase = cmath.exp((-1) ** (1 + k) * 2j * g.a * cmath.exp(complex(lam) / 2))
    assert abs(omega_factor(g, lam) - 1j * phi_n(n, lam) * phase) < 1e-10 * abs(omega_factor(g, lam))


def test_phi_n_sheet_reductions():
    g = CuspGeometry(8.0)
    lam0 = complex(0.4, 0.3)
    c0 = model_scattering_matrix(g, lam0)
    assert phi_n(2, lam0) == pytest.approx(1j / c0, rel=1e-12)
    lam1 = lam0 + 2j * math.pi
    assert phi_n(2, lam1) == pytest.approx(1j * model_scattering_matrix(g, lam1), rel=1e-12)
    lam2 = lam0 + 4j * math.pi
    c2 = model_scattering_matrix(g, lam2)
    # k = 2: numerator -i C, denominator -1 ... sin(3 pi/2) = -1, sin(pi) = 0
    assert phi_n(2, lam2) == pytest.approx((-1.0) / (1j * c2), rel=1e-12)
    with pytest.raises(DomainError):
        phi_n(0, lam0)
