"""Tangential part of e_2 over the sphere: its norm on a grid, written as CSV.

The norm squared is 1 - y^2, so the field vanishes exactly at (0, +-1, 0);
the scan shows where a grid sees those zeros.
"""
import argparse
import csv
import sys

import numpy as np

from movingframes import demos
from movingframes.atlas import project_ambient_field, unit_sphere
from movingframes.frames import Frame


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--nu", type=int, default=200)
    p.add_argument("--nv", type=int, default=100)
    p.add_argument("--output", default="-")
    args = p.parse_args()

    s = unit_sphere()
    pts = s.grid(args.nu, args.nv)
    field = project_ambient_field(s, Frame(np.eye(3)), pts)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["u", "v", "norm"])
    for i, (u, v) in enumerate(pts):
        w.writerow([repr(float(u)), repr(float(v)), repr(float(np.linalg.norm(field.ambient(i)[:, 1])))])
    if out is not sys.stdout:
        out.close()

    scan = demos.sphere_obstruction(args.nu, args.nv)
    print(f"tol {scan['tol']:.4f}: {len(scan['hits'])} hits, hits per zero {scan['hitsPerZero']}, "
          f"max distance {scan['maxDistanceToZero']:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
