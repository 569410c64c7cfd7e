"""Write the figure CSVs (default: tests/golden/) and print point-K summaries.

    python scripts/reproduce_figures.py [OUTDIR] [--points N]
"""

import argparse
from pathlib import Path

from spe_elacp.figures import write_figures
from spe_elacp.protocol import ProtocolParams, amplification_boundary, run_protocol

ROOT = Path(__file__).resolve().parents[1]

parser = argparse.ArgumentParser()
parser.add_argument("outdir", nargs="?", default=ROOT / "tests" / "golden")
parser.add_argument("--points", type=int, default=200)
args = parser.parse_args()

for path in write_figures(args.outdir, args.points):
    print("wrote", path)

for alpha2 in (0.4, 0.8):
    t1, t2 = amplification_boundary(alpha2)
    gains = [run_protocol(ProtocolParams(eta, alpha2, t1, t2)).gain for eta in (0.2, 0.4, 0.6, 0.8)]
    print(f"alpha2={alpha2}: K at t1={t1:.4f}, t2={t2:.4f}; g there = {', '.join(f'{g:.12f}' for g in gains)}")
