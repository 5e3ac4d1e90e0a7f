"""Sweep the cusp parameter a and tabulate how the spectral objects approach
the hyperbolic limit.

    python scripts/limit_study.py --a 4,16,64,256 --rho a --out limit.csv
"""

import argparse
import csv
import sys

import numpy as np

from cuspscatter.cusp_spectral import CuspGeometry
from cuspscatter.limit_study import (
    coefficient_convergence,
    convergence_study,
    eigenfunction_decomposition_check,
)
from cuspscatter.scattering import SpectralShift

Z0_GRID = [0.0, 0.5 + 0.5j, -1.0 - 2.0j, 1.5 + 2.9j]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", default="4,16,64,256", help="comma separated ladder")
    ap.add_argument("--rho", default="a", choices=("a", "sqrt", "log"))
    ap.add_argument("--x-max", type=float, default=10.0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    ladder = [float(v) for v in args.a.split(",")]
    xs = np.linspace(1.0, args.x_max, 19)
    rep = convergence_study(ladder, xs, Z0_GRID, rho=args.rho)
    coeff = coefficient_convergence([CuspGeometry(a) for a in ladder], 5.0)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["a", "sup_p_err", "sup_q_err", "q_bound", "decomposition_residual",
                "drift_err", "growth_err", "warp_err"])
    for a, p, q, b, cc in zip(rep.a_values, rep.sup_p_err, rep.sup_q_err,
                              rep.q_bound_envelope, coeff):
        dec = eigenfunction_decomposition_check(SpectralShift(a, args.rho), CuspGeometry(a),
                                                0.3 + 0.2j, np.linspace(1.0, 5.0, 9))
        w.writerow([format(v, ".17g") for v in (a, p, q, b, dec, cc["drift"], cc["growth"],
                                                cc["warp"])])
    if args.out:
        out.close()
    print(f"bound violations: {len(rep.bound_violations)}, "
          f"strictly decreasing: {rep.strictly_decreasing()}", file=sys.stderr)
    return 0 if rep.strictly_decreasing() and not rep.bound_violations else 1


if __name__ == "__main__":
    sys.exit(main())
