"""Command-line driver: every computation as a subcommand with CSV/JSON output.

    cuspscatter <subcommand> [--a A] [--nu NU] [--z-re X] [--z-im Y]
                [--grid start:stop:count] [--rho a|sqrt|log] [--tol TOL]
                [--out PATH] [--format csv|json] [--config FILE] [--check]

Exit codes: 0 success, 2 domain error, 3 accuracy error, 4 pole error.
Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .cusp_spectral import (
    ContourSpec,
    CuspGeometry,
    enclosed_zeros,
    mode_eigenvalues,
    resolvent_apply,
    resolvent_kernel,
    resolvent_kernel_continued,
    resolvent_residual,
)
from .errors import AccuracyError, CuspError, DomainError
from .limit_study import (
    coefficient_convergence,
    convergence_study,
    eigenfunction_decomposition_check,
    zero_trajectories,
)
from .numbers import LogPoint
from .quadrature import QuadratureSpec
from .scattering import SpectralShift, functional_equation_residual, model_scattering_matrix
from .special_functions import bessel_j, bessel_y, hankel
from .weber import GridFunction, isometry_defect, smooth_bump, weber_roundtrip

SUBCOMMANDS = ("eval", "weber-test", "resolvent", "continue", "scatter", "modes", "limit", "zeros")

# key -> kind; "list" keys accept comma separated numbers
KEYS = {
    "a": "list", "nu": "list", "z_re": "float", "z_im": "float", "grid": "grid",
    "rho": "str", "tol": "float", "out": "str", "format": "str", "n": "int",
    "count": "int", "x": "float", "y": "float", "side": "str", "depth": "float",
    "alpha": "float", "beta": "float", "mode": "str", "x_max": "float", "kind": "int",
}

DEFAULTS = {
    "eval": dict(nu=[2.5], z_re=3.0, z_im=0.0),
    "weber-test": dict(nu=[0.5, 1.0, 2.0, 5.0], x_max=30.0),
    "resolvent": dict(a=[2.0], z_re=-1.0, z_im=0.0, grid="1:8:1401", mode="apply"),
    "continue": dict(a=[2.0], z_re=-1.0, z_im=-1.0, x=2.0, y=3.0, side="lower",
                     alpha=-2.0, beta=1.0, depth=2.0),
    "scatter": dict(a=[2.0], z_im=0.0, grid="-2:2:21"),
    "modes": dict(a=[1.0], n=1, count=3),
    "limit": dict(a=[4.0, 16.0, 64.0, 256.0], z_re=0.0, z_im=0.0, grid="1:10:10", x_max=5.0),
    "zeros": dict(nu=[10.5, 20.5, 40.5], kind=1),
}


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict = field(default_factory=dict)

    def get(self, key, default=None):
        if key in self.parameters:
            return self.parameters[key]
        return DEFAULTS.get(self.subcommand, {}).get(key, default)


# ---------------------------------------------------------------------------
# parsing


def parse_grid(text):
    """"start:stop:count" -> numpy array (count >= 1)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must be start:stop:count, got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise DomainError(f"invalid grid {text!r}")
    return np.linspace(start, stop, count)


def _parse_value(key, raw):
    kind = KEYS[key]
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "list":
            if isinstance(raw, (list, tuple)):
                return [float(v) for v in raw]
            return [float(v) for v in str(raw).split(",") if v.strip()]
        if kind == "grid":
            parse_grid(raw)
        return str(raw)
    except ValueError as exc:
        raise DomainError(f"cannot parse {key} = {raw!r}: {exc}") from None


def read_config_file(path):
    """Plain ``key = value`` lines; blank lines and '#' comments are skipped."""
    params = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in KEYS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            params[key] = _parse_value(key, value)
    return params


# ---------------------------------------------------------------------------
# validation


def _odd_integer(a):
    return a == round(a) and int(round(a)) % 2 == 1


def validate(config):
    """All constraint violations of ``config`` as a list of messages."""
    diags = []
    if config.subcommand not in SUBCOMMANDS:
        return [f"unknown subcommand {config.subcommand!r}"]
    for key in config.parameters:
        if key not in KEYS:
            diags.append(f"unknown key {key!r}")
    for key, value in config.parameters.items():
        vals = value if isinstance(value, list) else [value]
        for v in vals:
            if isinstance(v, float) and not math.isfinite(v):
                diags.append(f"{key} must be finite, got {v}")
    if config.get("rho", "a") not in ("a", "sqrt", "log"):
        diags.append("rho must be one of a, sqrt, log")
    if config.get("format", "csv") not in ("csv", "json"):
        diags.append("format must be csv or json")
    tol = config.get("tol")
    if tol is not None and not tol > 0:
        diags.append("tol must be positive")
    grid = config.get("grid")
    if grid is not None:
        try:
            parse_grid(grid)
        except (DomainError, ValueError) as exc:
            diags.append(str(exc))
    a_vals = config.get("a") or []
    sub = config.subcommand
    if sub in ("resolvent", "continue", "scatter", "modes", "limit"):
        for a in a_vals:
            if not a > 0:
                diags.append(f"a must be positive, got {a}")
    if sub == "limit":
        for a in a_vals:
            if _odd_integer(a):
                diags.append(f"a={a:g} is an odd integer: the shift factors eta and xi "
                             "are undefined for a in {2n+1}")
            if a <= 2:
                diags.append(f"a={a:g}: the remainder bound q_bound is only valid for a > 2")
        z_im = config.get("z_im", 0.0)
        if math.isfinite(z_im) and math.isclose(math.remainder(z_im - math.pi, 2 * math.pi), 0.0,
                                                abs_tol=1e-15):
            diags.append("Im(z0) = pi lies on the excluded lines Im(z + 2k pi i) = pi")
    if sub == "resolvent" and config.get("z_im", 0.0) == 0 and config.get("z_re", 0.0) >= 0:
        diags.append("mu must lie off the spectrum [0, inf)")
    if sub == "modes" and config.get("n", 1) == 0:
        diags.append("modes needs a nonzero mode index n")
    if sub in ("eval", "weber-test", "zeros"):
        for nu in config.get("nu") or []:
            if nu < 0:
                diags.append(f"nu must be >= 0, got {nu}")
    if sub == "continue" and config.get("side") not in ("lower", "upper"):
        diags.append("side must be lower or upper")
    if sub == "resolvent" and config.get("mode") not in ("apply", "kernel"):
        diags.append("mode must be apply or kernel")
    return diags


# ---------------------------------------------------------------------------
# subcommands; each returns (columns, rows, summary)


def _quad(config, rel=1e-10):
    # an explicit tolerance scales the absolute floor too, so that an
    # unattainable request surfaces as an accuracy error
    tol = config.get("tol")
    if not tol:
        return QuadratureSpec(rel_tol=rel)
    return QuadratureSpec(rel_tol=tol, abs_tol=tol * 1e-3)


def _z(config):
    return complex(config.get("z_re", 0.0), config.get("z_im", 0.0))


def _single(config, key):
    vals = config.get(key)
    if not vals or len(vals) != 1:
        raise DomainError(f"{config.subcommand} needs exactly one value of {key}")
    return vals[0]


def _cmd_eval(config):
    nu = _single(config, "nu")
    grid = config.get("grid")
    z_im = config.get("z_im", 0.0)
    res = parse_grid(grid) if grid else np.array([config.get("z_re")])
    cols = ["nu", "t_re", "t_im", "h1_re", "h1_im", "h2_re", "h2_im", "j_re", "j_im",
            "y_re", "y_im"]
    rows = []
    for re in res:
        t = complex(re, z_im)
        pt = LogPoint.from_value(t)
        h1 = hankel(1, nu, pt).to_complex()
        h2 = hankel(2, nu, pt).to_complex()
        j = complex(bessel_j(nu, pt))
        y = complex(bessel_y(nu, pt))
        rows.append([nu, t.real, t.imag, h1.real, h1.imag, h2.real, h2.imag,
                     j.real, j.imag, y.real, y.imag])
    return cols, rows, {}


def _lambda_bump(lam):
    return smooth_bump(lam, 4.0, 2.0, 8.0)


def _x_bump(x):
    return smooth_bump(x, 3.0, 1.0)


def _cmd_weber(config):
    q = _quad(config)
    r = np.linspace(2.5, 5.5, 13)
    rows = []
    for nu in config.get("nu"):
        rt = weber_roundtrip(nu, _lambda_bump, r, config.get("x_max"), q, support=(2.0, 6.0))
        err = float(np.max(np.abs(rt - _lambda_bump(r))))
        iso = isometry_defect(nu, _x_bump, 60.0, q, support=(2.0, 4.0))
        rows.append([nu, err, iso])
    summary = dict(max_roundtrip_err=max(r[1] for r in rows), max_isometry_defect=max(r[2] for r in rows))
    return ["nu", "roundtrip_sup_err", "isometry_defect"], rows, summary


def _cmd_resolvent(config):
    geo = CuspGeometry(_single(config, "a"))
    mu = _z(config)
    grid = parse_grid(config.get("grid"))
    if config.get("mode") == "kernel":
        q = _quad(config)
        rows = []
        for x in grid:
            k = resolvent_kernel(geo, mu, np.full(grid.shape, x), grid, q)
            rows.extend([x, y, v.real, v.imag] for y, v in zip(grid, np.atleast_1d(k)))
        return ["x", "y", "k_re", "k_im"], rows, {}
    u = GridFunction(grid, _x_bump(grid))
    v = resolvent_apply(geo, mu, u)
    res = resolvent_residual(geo, mu, u, v)
    rows = [[x, val.real, val.imag] for x, val in zip(grid, np.asarray(v.values, dtype=complex))]
    return ["x", "v_re", "v_im"], rows, dict(residual=res)


def _cmd_continue(config):
    geo = CuspGeometry(_single(config, "a"))
    z = _z(config)
    contour = ContourSpec.box(config.get("alpha"), config.get("beta"), config.get("depth"),
                              config.get("side"))
    zeros = enclosed_zeros(geo, contour)
    grid = config.get("grid")
    xs = parse_grid(grid) if grid else np.array([config.get("x")])
    y = config.get("y")
    q = _quad(config)
    rows = []
    for x in xs:
        k = resolvent_kernel_continued(geo, z, x, y, contour, zeros, q)
        rows.append([z.real, z.imag, x, y, k.real, k.imag, len(zeros)])
    return ["z_re", "z_im", "x", "y", "k_re", "k_im", "enclosed_zeros"], rows, {}


def _cmd_scatter(config):
    geo = CuspGeometry(_single(config, "a"))
    z_im = config.get("z_im", 0.0)
    rows = []
    for re in parse_grid(config.get("grid")):
        z = complex(re, z_im)
        c = model_scattering_matrix(geo, z)
        rows.append([re, z_im, c.real, c.imag, abs(c), functional_equation_residual(geo, z)])
    return ["z_re", "z_im", "c_re", "c_im", "c_abs", "fe_residual"], rows, {}


def _cmd_modes(config):
    geo = CuspGeometry(_single(config, "a"))
    n = config.get("n")
    floor = 4 * math.pi ** 2 * n * n
    eig = mode_eigenvalues(geo, n, count=config.get("count"))
    rows = [[i, float(e), floor, float(e) - floor] for i, e in enumerate(eig)]
    return ["index", "eigenvalue", "floor", "margin"], rows, dict(a=geo.a, n=n)


def _cmd_limit(config):
    a_vals = config.get("a")
    xs = parse_grid(config.get("grid"))
    z = _z(config)
    z0 = LogPoint(z).z0
    z0_grid = sorted({z0, 0j, complex(0.5, 0.7), complex(-1.0, -2.0), complex(2.0, 2.5)},
                     key=lambda v: (v.real, v.imag))
    rep = convergence_study(a_vals, xs, z0_grid, config.get("rho", "a"))
    coeff = coefficient_convergence([CuspGeometry(a) for a in a_vals], config.get("x_max"))
    rows = []
    for a, p, qv, b, cc in zip(rep.a_values, rep.sup_p_err, rep.sup_q_err, rep.q_bound_envelope,
                               coeff):
        geo = CuspGeometry(a)
        dec = eigenfunction_decomposition_check(SpectralShift(a, config.get("rho", "a")), geo,
                                                z, np.linspace(1.0, 5.0, 9))
        rows.append([a, p, qv, b, dec, cc["drift"], cc["growth"], cc["warp"]])
    summary = dict(bound_violations=len(rep.bound_violations),
                   strictly_decreasing=rep.strictly_decreasing())
    return (["a", "sup_p_err", "sup_q_err", "q_bound", "decomposition_residual",
             "drift_err", "growth_err", "warp_err"], rows, summary)


def _cmd_zeros(config):
    region = (-1.2, 1.2, -0.9, -0.02) if config.get("kind") == 1 else (-1.2, 1.2, 0.02, 0.9)
    tr = zero_trajectories(config.get("nu"), region, kind=config.get("kind"))
    rows = []
    for lvl, (nu, ws) in enumerate(zip(tr.nu_list, tr.scaled_zeros)):
        match = tr.matching[lvl] if lvl < len(tr.matching) else [None] * len(ws)
        dist = tr.hausdorff[lvl] if lvl < len(tr.hausdorff) else math.nan
        for i, (w, m) in enumerate(zip(ws, match)):
            rows.append([nu, i, w.real, w.imag, -1 if m is None else m, dist])
    summary = dict(hausdorff=tr.hausdorff, counts=[len(s) for s in tr.scaled_zeros],
                   oracle_counts=tr.fine_counts)
    return ["nu", "index", "w_re", "w_im", "match_next", "hausdorff_next"], rows, summary


COMMANDS = {
    "eval": _cmd_eval, "weber-test": _cmd_weber, "resolvent": _cmd_resolvent,
    "continue": _cmd_continue, "scatter": _cmd_scatter, "modes": _cmd_modes,
    "limit": _cmd_limit, "zeros": _cmd_zeros,
}


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def format_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (list, tuple)):
        return [_json_value(u) for u in v]
    if isinstance(v, dict):
        return {k: _json_value(u) for k, u in v.items()}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    return v


def format_json(config, columns, rows, summary):
    doc = dict(subcommand=config.subcommand,
               parameters={k: config.get(k) for k in sorted(set(DEFAULTS[config.subcommand])
                                                             | set(config.parameters))},
               columns=columns, rows=rows, summary=summary)
    return json.dumps(_json_value(doc), indent=2, sort_keys=False) + "\n"


def run(config, stdout=None, stderr=None):
    """Execute ``config``; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    diags = validate(config)
    if diags:
        stderr.write(json.dumps(dict(error="domain", message="invalid configuration",
                                     diagnostics=diags)) + "\n")
        return DomainError.exit_code
    try:
        columns, rows, summary = COMMANDS[config.subcommand](config)
    except CuspError as exc:
        stderr.write(json.dumps(_json_value(exc.to_dict())) + "\n")
        return exc.exit_code
    except ValueError as exc:
        err = DomainError(str(exc))
        stderr.write(json.dumps(err.to_dict()) + "\n")
        return err.exit_code
    except (OverflowError, ZeroDivisionError, FloatingPointError) as exc:
        err = AccuracyError(f"{type(exc).__name__}: {exc}")
        stderr.write(json.dumps(err.to_dict()) + "\n")
        return err.exit_code
    fmt = config.get("format", "csv")
    text = format_csv(columns, rows) if fmt == "csv" else format_json(config, columns, rows, summary)
    out = config.get("out")
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


class _Parser(argparse.ArgumentParser):
    """Usage errors become DomainError so they share the JSON diagnostic path."""

    def error(self, message):
        raise DomainError(f"usage: {message}")


def build_parser():
    p = _Parser(prog="cuspscatter", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--a", help="cusp parameter (comma list for limit)")
    p.add_argument("--nu", help="Bessel order (comma list for weber-test, zeros)")
    p.add_argument("--z-re", dest="z_re", help="real part of z (or mu for resolvent)")
    p.add_argument("--z-im", dest="z_im", help="imaginary part of z")
    p.add_argument("--grid", help="start:stop:count")
    p.add_argument("--rho", help="scaling function in l(a): a, sqrt or log")
    p.add_argument("--tol", help="relative quadrature tolerance")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", help="csv or json")
    p.add_argument("--n", help="Fourier mode index (modes)")
    p.add_argument("--count", help="number of eigenvalues (modes)")
    p.add_argument("--mode", help="apply or kernel (resolvent)")
    p.add_argument("--side", help="lower or upper (continue)")
    p.add_argument("--kind", help="Hankel kind (zeros)")
    p.add_argument("--config", help="file of key = value lines; flags take precedence")
    p.add_argument("--check", action="store_true", help="validate only, print diagnostics")
    return p


def config_from_args(argv):
    args = build_parser().parse_args(argv)
    params = read_config_file(args.config) if args.config else {}
    for key in KEYS:
        raw = getattr(args, key, None)
        if raw is not None:
            params[key] = _parse_value(key, raw)
    return RunConfig(args.subcommand, params), args.check


def main(argv=None):
    try:
        config, check = config_from_args(argv)
    except CuspError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(json.dumps(dict(error="domain", message=str(exc))) + "\n")
        return DomainError.exit_code
    if check:
        diags = validate(config)
        sys.stdout.write(json.dumps(dict(subcommand=config.subcommand, diagnostics=diags)) + "\n")
        return 0 if not diags else DomainError.exit_code
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
