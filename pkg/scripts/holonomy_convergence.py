"""Holonomy of complement continuation as the loop sampling is refined.

Prints one row per resolution for the Moebius v-loop, the sphere equator and
a closed loop of 2-planes in R^4 whose holonomy is a genuine rotation.
"""
import argparse

import numpy as np

from movingframes import demos
from movingframes.atlas import FrameField
from movingframes.dilation import kernel_rows, loop_holonomy
from movingframes.frames import Frame


def plane_loop(samples, seed=1):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    ts = np.linspace(0.0, 2 * np.pi, samples)
    frames = []
    for t in ts:
        R = np.eye(4)
        for (i, j), w in (((0, 2), 1.0), ((1, 3), 2.0)):
            c, s = np.cos(w * t), np.sin(w * t)
            R[i, i] = R[j, j] = c
            R[i, j], R[j, i] = s, -s
        frames.append(Frame(np.eye(4)[:2] @ (Q @ R @ Q.T)))
    return FrameField("path", np.column_stack([ts, np.zeros_like(ts)]), frames)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--start", type=int, default=50)
    args = p.parse_args()

    print(f"{'samples':>8} {'mobius H':>12} {'equator |H-I|':>14} {'plane loop angle':>17} {'change':>10}")
    prev = None
    for level in range(args.levels):
        n = args.start * 2**level
        mob = demos.mobius_loop(n)
        eq = demos.equator_loop(n)
        pl = plane_loop(n)
        h_mob = loop_holonomy(mob, demos.default_seed(mob)).holonomy[0, 0]
        d_eq = loop_holonomy(eq, demos.default_seed(eq)).distance
        H = loop_holonomy(pl, Frame(kernel_rows(pl.frames[0])), closure=np.eye(2)).holonomy
        angle = np.arctan2(H[1, 0], H[0, 0])
        change = "" if prev is None else f"{abs(angle - prev):.2e}"
        print(f"{n:>8} {h_mob:>12.8f} {d_eq:>14.2e} {angle:>17.8f} {change:>10}")
        prev = angle


if __name__ == "__main__":
    main()
