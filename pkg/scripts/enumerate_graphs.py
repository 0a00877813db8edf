#!/usr/bin/env python3
"""Enumerate stable graphs of a genus and classify each one."""
import argparse
import collections

from mumford_diffusion import graphs as gr


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=3)
    a = ap.parse_args()
    tally = collections.Counter()
    for G in gr.enumerate_stable_graphs(a.genus):
        cl = gr.classify_spectrum(G)
        scan = gr.classify_all_trees(G)
        aut = gr.automorphism_group(G)
        tally[cl.decision] += 1
        print(f"{G.to_json_dict()['edges']}  |Aut|={aut.effective_order:<4} mouths={len(gr.find_mouths(G))} "
              f"{cl.decision}{'' if scan.tree_invariant else '  (depends on tree)'}")
    print(dict(tally))


if __name__ == "__main__":
    main()
