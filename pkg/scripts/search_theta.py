#!/usr/bin/env python3
"""Norm-decreasing search on the theta graph over the exhaustive genus-2 grid."""
import argparse
import pathlib

from mumford_diffusion.checks import dumps, search_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="2,5,13")
    ap.add_argument("--normalization", default="attracting", choices=("attracting", "repelling"))
    ap.add_argument("--outdir", default="reports")
    a = ap.parse_args()
    primes = tuple(int(p) for p in a.primes.split(","))
    rep = search_report(primes, mode=a.normalization)
    out = pathlib.Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"search_theta_{a.normalization}.json").write_text(dumps(rep) + "\n")
    for r in rep:
        print(f"p={r['p']:>2} tuples={r['explored_tuples']} rows={r['rows']} "
              f"equal/larger/smaller={r['rows_norm_equal']}/{r['rows_norm_larger']}/{r['rows_norm_smaller']} "
              f"failures={r['failures']} -> {r['result']}")


if __name__ == "__main__":
    main()
