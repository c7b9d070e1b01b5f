#!/usr/bin/env python3
"""Print the triviality trend table for three model maps.

A right multiplication (exactly trivial), a bounded-weight expansion map
(trivial with constant controlled by sup|phi|) and the lifted index-2
coordinate map (nontrivial: its residual grows with the dimension when
the sample stream mixes spiky and spread frames).
"""

import numpy as np

from schatlab.centralizers import (
    KPBicentralizer,
    KPOnH,
    LiftedQuasilinear,
    RightMultiplication,
)
from schatlab.twisted import splitting_distance

SEED = 1
DIMS = [8, 16, 32, 64]


def right_mult(dim: int) -> RightMultiplication:
    rng = np.random.default_rng(SEED + dim)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return RightMultiplication(z / np.sqrt(2.0))


def table(label, spec, p, q, side, tag):
    rows = splitting_distance(spec, DIMS, seed=SEED, n_samples=48,
                              p=p, q=q, side=side, tag=tag)
    cells = "  ".join(f"{r['residual']:10.3e}" for r in rows)
    print(f"{label:28s} {cells}")


if __name__ == "__main__":
    header = "  ".join(f"{d:>10d}" for d in DIMS)
    print(f"{'map (residual by dim)':28s} {header}")
    table("right multiplication", right_mult, 2.0, 2.0, "left", "ginibre")
    table("bounded-weight expansion", KPBicentralizer("min_s_1", 2.0),
          2.0, 2.0, "left", "ginibre")
    table("lifted coordinate map", LiftedQuasilinear(KPOnH("s"), p=1.0, q=1.0),
          1.0, 1.0, "right", "sparse")
