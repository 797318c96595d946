"""Closed-form flag curvature against the assembled Koszul/finite-difference route on su(2)+R,
across drift strengths, with the literal variant alongside.

    python scripts/compare_flag_curvature.py --flags 200
"""

import argparse

import numpy as np

from randersflag import examples
from randersflag.randers import RandersSpec, curvature_report, random_flag
from randersflag.riemann import PAPER_LITERAL

parser = argparse.ArgumentParser()
parser.add_argument("--flags", type=int, default=100)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

print(f"{'t':>5} {'max|closed-assembled|':>22} {'median rel(literal)':>20} {'K range':>20}")
for t in (0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
    rs, x = examples.su2_x_r(t)
    spec = RandersSpec(rs, x)
    rng = np.random.default_rng(args.seed)
    gaps, rels, ks = [], [], []
    for _ in range(args.flags):
        rep = curvature_report(spec, random_flag(rng, rs), (PAPER_LITERAL,))
        gaps.append(abs(rep.K_thm42_oracle_consistent - rep.K_assembled_oracle))
        rels.append(rep.discrepancy["paper_literal_vs_oracle_consistent_rel"])
        ks.append(rep.K_thm42_oracle_consistent)
    print(f"{t:>5} {max(gaps):>22.2e} {np.median(rels):>20.3f} "
          f"{f'[{min(ks):.3f}, {max(ks):.3f}]':>20}")
