#!/usr/bin/env python3
"""Write the one-parameter family table for p in {2, 5, 13} as JSON and CSV."""
import argparse
import pathlib

from mumford_diffusion.checks import dumps, family_report
from mumford_diffusion.cli import render_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="2,5,13")
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--outdir", default="reports")
    a = ap.parse_args()
    primes = tuple(int(p) for p in a.primes.split(","))
    rows = family_report(primes, a.points, a.precision)
    out = pathlib.Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "epsilon_family.json").write_text(dumps(rows) + "\n")
    (out / "epsilon_family.csv").write_text(render_csv(rows))
    for r in rows:
        print(f"p={r['p']:>2} eps={r['epsilon']:>3} {r['status']:<7} |z1|={r.get('abs_z1')} |z2|={r.get('abs_z2')} "
              f"|eta|={r.get('abs_eta')} crit={r.get('critical_residual')}")


if __name__ == "__main__":
    main()
