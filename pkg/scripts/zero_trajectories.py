"""Track the scaled Hankel zeros w = t/nu along nu = 2n + 1/2 and report
the Hausdorff distance between consecutive levels.

    python scripts/zero_trajectories.py --n 5,10,20 --out zeros.csv
"""

import argparse
import csv
import sys

from cuspscatter.limit_study import zero_trajectories

REGION = (-1.2, 1.2, -0.9, -0.02)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="5,10,20", help="comma separated n, nu = 2n + 1/2")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    nus = [2 * int(v) + 0.5 for v in args.n.split(",")]
    tr = zero_trajectories(nus, REGION)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["nu", "index", "w_re", "w_im"])
    for nu, ws in zip(tr.nu_list, tr.scaled_zeros):
        for i, z in enumerate(sorted(ws, key=lambda v: v.real)):
            w.writerow([format(nu, ".17g"), i, format(z.real, ".17g"), format(z.imag, ".17g")])
    if args.out:
        out.close()
    for (nu0, nu1), d in zip(zip(nus[:-1], nus[1:]), tr.hausdorff):
        print(f"hausdorff(nu={nu0:g}, nu={nu1:g}) = {d:.6f}", file=sys.stderr)
    counts = [len(s) for s in tr.scaled_zeros]
    print(f"counts {counts}, winding oracle {tr.fine_counts}", file=sys.stderr)
    return 0 if counts == tr.fine_counts else 1


if __name__ == "__main__":
    sys.exit(main())
