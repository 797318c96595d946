"""Refuted flag-curvature formula versus the Koszul oracle on small Lie groups.

    python scripts/reproduce_counterexample.py --samples 200 --seed 1
"""

import argparse

from randersflag import examples
from randersflag.lie_core import nilpotency_class

parser = argparse.ArgumentParser()
parser.add_argument("--samples", type=int, default=100)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

print(f"{'algebra':<12} {'class':>6} {'flags':>6} {'max|K_old|':>11} {'min K':>9} {'max K':>9}  sign mix        verdict")
for name in ("heisenberg3", "su2", "abelian:3"):
    rs, _ = examples.build(name)
    rep = examples.run_counterexample(rs, args.samples, args.seed)
    cls = nilpotency_class(rs.algebra)
    mix = rep.sign_mix
    print(f"{name:<12} {cls if cls is not None else '-':>6} {len(rep.flags):>6} "
          f"{max(abs(k) for k in rep.k_thm22):>11.3g} {min(rep.k_oracle):>9.4f} {max(rep.k_oracle):>9.4f}  "
          f"+{mix['positive']:<4} -{mix['negative']:<4} 0:{mix['zero']:<4} {rep.verdict}")
