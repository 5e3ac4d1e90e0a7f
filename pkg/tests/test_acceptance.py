"""One test per acceptance criterion.  Each prints a single PASS/FAIL line."""

import cmath
import io
import math

import numpy as np

from cuspscatter.cli import config_from_args, run
from cuspscatter.cusp_spectral import (
    ContourSpec,
    CuspGeometry,
    contour_winding_count,
    enclosed_zeros,
    mode_eigenvalues,
    residue_contribution,
    resolvent_apply,
    resolvent_kernel,
    resolvent_kernel_continued,
    resolvent_residual,
)
from cuspscatter.limit_study import (
    coefficient_convergence,
    convergence_study,
    eigenfunction_decomposition_check,
    zero_trajectories,
)
from cuspscatter.numbers import LogPoint
from cuspscatter.scattering import SpectralShift, functional_equation_residual, model_scattering_matrix
from cuspscatter.special_functions import (
    bessel_j,
    bessel_jy_derivatives,
    bessel_y,
    hankel,
    hankel_connect,
)
from cuspscatter.weber import GridFunction, isometry_defect, smooth_bump, weber_roundtrip

from oracles import bvp_resolvent, prufer_eigenvalue

SAMPLE_NU = (0.5, 1.0, 2.5, 7.5)
SAMPLE_T = (0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0)


def report(label, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, detail


def lp(t):
    return LogPoint(cmath.log(t))


def test_ac01_special_function_core():
    wr = prod = sheet = half = 0.0
    for nu in SAMPLE_NU:
        for t in SAMPLE_T:
            j, y = bessel_j(nu, lp(t)).real, bessel_y(nu, lp(t)).real
            jd, yd = bessel_jy_derivatives(nu, t)
            wr = max(wr, abs(j * yd - jd * y - 2 / (math.pi * t)))
            p = (hankel(1, nu, lp(t)) * hankel(2, nu, lp(t))).to_complex()
            prod = max(prod, abs(p - (j * j + y * y)) / (j * j + y * y))
            tau = lp(t)
            for m in (-2, -1, 1, 2):
                for kind in (1, 2):
                    direct = hankel(kind, nu, tau.shift(1j * math.pi * m)).to_complex()
                    conn = hankel_connect(kind, nu, tau, m)
                    sheet = max(sheet, abs(direct - conn) / abs(conn))
    for t in np.linspace(0.1, 60.0, 200):
        ref = -1j * math.sqrt(2 / (math.pi * t)) * cmath.exp(1j * t)
        for kind, r in ((1, ref), (2, ref.conjugate())):
            half = max(half, abs(hankel(kind, 0.5, lp(t)).to_complex() - r) / abs(r))
        jref = math.sqrt(2 / (math.pi * t)) * math.sin(t)
        half = max(half, abs(bessel_j(0.5, lp(t)).real - jref) / math.sqrt(2 / (math.pi * t)))
    ok = max(wr, prod, sheet) < 1e-8 and half < 1e-10
    report("AC1 special functions", ok,
           f"wronskian {wr:.1e}, product {prod:.1e}, sheet {sheet:.1e}, half-order {half:.1e}")


def test_ac02_weber_inversion():
    def lam_bump(lam):
        return smooth_bump(lam, 4.0, 2.0, 8.0)

    def x_bump(x):
        return smooth_bump(x, 3.0, 1.0)

    r = np.linspace(2.5, 5.5, 7)
    rt, iso = {}, {}
    for nu in (0.5, 1.0, 2.0, 5.0):
        back = weber_roundtrip(nu, lam_bump, r, 30.0, support=(2.0, 6.0))
        rt[nu] = float(np.max(np.abs(back - lam_bump(r))))
        iso[nu] = isometry_defect(nu, x_bump, 60.0, support=(2.0, 4.0))
    ok = max(rt.values()) < 1e-5 and max(iso.values()) < 1e-4
    report("AC2 Weber inversion", ok,
           f"roundtrip {max(rt.values()):.1e}, isometry {max(iso.values()):.1e}")


def test_ac03_resolvent():
    g, mu = CuspGeometry(2.0), -1.0

    def bump(x):
        return smooth_bump(x, 3.0, 1.0)

    grid = np.linspace(1.0, 9.0, 1601)  # h = 1/200
    u = GridFunction.from_function(bump, grid)
    v = resolvent_apply(g, mu, u)
    res = resolvent_residual(g, mu, u, v)
    xb, vb = bvp_resolvent(2.0, mu, bump)
    m = xb <= 9.0
    bvp = float(np.max(np.abs(v(xb[m]) - vb[m])))
    sym = 0.0
    for x, y in ((1.5, 2.0), (1.2, 4.5), (2.5, 3.5), (3.0, 7.0)):
        kxy = resolvent_kernel(g, mu, x, y) * (g.a + y) ** g.a
        kyx = resolvent_kernel(g, mu, y, x) * (g.a + x) ** g.a
        sym = max(sym, abs(kxy - kyx) / abs(kxy))
    ok = res < 1e-3 and bvp < 1e-4 and sym < 1e-7
    report("AC3 resolvent", ok, f"residual {res:.1e}, BVP {bvp:.1e}, symmetry {sym:.1e}")


def test_ac04_continuation():
    g = CuspGeometry(2.0)
    shallow = ContourSpec.box(-2.0, 1.0, 1.0)
    deep = ContourSpec.box(-2.0, 1.0, 2.0)
    direct_err = 0.0
    for zr in (0.5, 1.5):
        z = complex(zr, 0.1)
        direct = resolvent_kernel(g, cmath.exp(z), 1.5, 2.0)
        for c in (shallow, deep):
            cont = resolvent_kernel_continued(g, z, 1.5, 2.0, c)
            direct_err = max(direct_err, abs(cont - direct) / abs(direct))
    # zeros found inside each contour agree with the argument principle
    counts = [(len(enclosed_zeros(g, c).zeros), contour_winding_count(g, c)) for c in (shallow, deep)]
    zeros = enclosed_zeros(g, deep).zeros
    bookkeeping = 0.0
    for z in (0.5 - 0.1j, 0.5 + 0.1j, 0.5 - 1j):
        k = resolvent_kernel_continued(g, z, 1.5, 2.0, shallow)
        raw = resolvent_kernel_continued(g, z, 1.5, 2.0, deep, zeros=[], check_zeros=False)
        res = sum(residue_contribution(g, z, w, 1.5, 2.0) for w in zeros)
        bookkeeping = max(bookkeeping, abs(k - raw - res) / abs(res))
    ok = (direct_err < 1e-6 and all(a == b for a, b in counts) and counts[1][0] == 1
          and bookkeeping < 1e-6)
    report("AC4 continuation", ok,
           f"vs direct {direct_err:.1e}, counts {counts}, residue bookkeeping {bookkeeping:.1e}")


def test_ac05_discrete_spectrum_floor():
    floor = 4 * math.pi ** 2
    lowest, agree = {}, 0.0
    for a in (1.0, 4.0):
        g = CuspGeometry(a)
        ev = mode_eigenvalues(g, 1, count=1)[0]
        ref = prufer_eigenvalue(lambda x: float(g.schrodinger_potential(1, x)), 0, 1.0, 2.5,
                                (0.9 * ev, 1.1 * ev))
        lowest[a] = ev
        agree = max(agree, abs(ev - ref) / ref)
    ok = min(lowest.values()) > floor and agree < 1e-5
    report("AC5 spectrum floor", ok,
           f"lowest {', '.join(f'a={a:g}: {v:.4f}' for a, v in lowest.items())} "
           f"(floor {floor:.3f}), shooting {agree:.1e}")


def test_ac06_scattering():
    unit = fe = 0.0
    for a in (0.5, 2.0, 4.0):
        g = CuspGeometry(a)
        for zr in np.linspace(-4.0, 4.0, 21):
            unit = max(unit, abs(abs(model_scattering_matrix(g, zr)) - 1.0))
        for zr in np.linspace(-1.0, 1.0, 5):
            for zi in np.linspace(0.0, 2 * math.pi, 5):
                fe = max(fe, functional_equation_residual(g, complex(zr, zi)))
    flat = CuspGeometry(0.0, degenerate=True)
    half = 0.0
    for zr in np.linspace(-2.0, 2.0, 9):
        for zi in np.linspace(-6.0, 6.0, 7):
            z = complex(zr, zi)
            ref = cmath.exp(-2j * cmath.exp(z / 2))
            half = max(half, abs(model_scattering_matrix(flat, z) - ref) / abs(ref))
    ok = unit < 1e-10 and fe < 1e-8 and half < 1e-12
    report("AC6 scattering", ok, f"|C|-1 {unit:.1e}, functional equation {fe:.1e}, half-order {half:.1e}")


def test_ac07_limit_study():
    ladder = [4.0, 16.0, 64.0, 256.0]
    rep = convergence_study(ladder, np.linspace(1.0, 10.0, 19),
                            [0.0, 0.5 + 0.5j, -1.0 - 2.0j, 1.5 + 2.9j])
    dec = 0.0
    for a, z in ((4.0, 0.0), (16.0, 0.5 + 1j * math.pi / 4), (6.0, 0.3 - 0.4j + 2j * math.pi),
                 (2.5, -0.5 + 0.2j)):
        sh, g = SpectralShift(a), CuspGeometry(a)
        dec = max(dec, eigenfunction_decomposition_check(sh, g, z, np.linspace(1.0, 5.0, 9)))
    ok = rep.bound_violations == [] and rep.strictly_decreasing() and dec < 1e-8
    sup = [max(p, q) for p, q in zip(rep.sup_p_err, rep.sup_q_err)]
    report("AC7 limit study", ok,
           f"sup errors {', '.join(f'{s:.1e}' for s in sup)}, violations {len(rep.bound_violations)}, "
           f"decomposition {dec:.1e}")


def test_ac08_coefficient_convergence():
    rows = coefficient_convergence([CuspGeometry(a) for a in (4.0, 16.0, 64.0, 256.0)], 5.0)
    cols = {k: [r[k] for r in rows] for k in ("drift", "growth", "warp")}
    ok = all(all(b < a for a, b in zip(c[:-1], c[1:])) for c in cols.values())
    report("AC8 coefficient convergence", ok,
           "; ".join(f"{k} {c[0]:.1e}->{c[-1]:.1e}" for k, c in cols.items()))


def test_ac09_zero_trajectories():
    tr = zero_trajectories([2 * n + 0.5 for n in (5, 10, 20)], (-1.2, 1.2, -0.9, -0.02))
    counts = [len(z) for z in tr.scaled_zeros]
    ok = (all(b < a for a, b in zip(tr.hausdorff[:-1], tr.hausdorff[1:]))
          and counts == tr.fine_counts)
    report("AC9 zero trajectories", ok,
           f"Hausdorff {', '.join(f'{d:.3f}' for d in tr.hausdorff)}, counts {counts} "
           f"vs oracle {tr.fine_counts}")


def test_ac10_cli_contract():
    def invoke(argv):
        config, _ = config_from_args(argv)
        out, err = io.StringIO(), io.StringIO()
        return run(config, out, err), out.getvalue()

    argv = ["scatter", "--a", "2", "--grid=-2:2:21"]
    first, second = invoke(argv), invoke(argv)
    same = first[0] == 0 and first[1] == second[1] and len(first[1]) > 0
    codes = {
        "domain": invoke(["limit", "--a", "3"])[0],
        "accuracy": invoke(["resolvent", "--mode", "kernel", "--grid", "2:3:2", "--tol", "1e-17"])[0],
        "pole": invoke(["scatter", "--a", "2", "--grid=-2.1972245773362196:-2.1972245773362196:1",
                        "--z-im=-3.141592653589793"])[0],
    }
    ok = same and codes == {"domain": 2, "accuracy": 3, "pole": 4}
    report("AC10 CLI", ok, f"byte-identical {same}, exit codes {codes}")
