"""Command-line front end.

Every subcommand writes one JSON document (or CSV with ``--csv``) to stdout or
``--out``.  Exit codes: 0 success, 2 tolerance breach, 3 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import checks
from . import graphs as gr
from . import teichmueller as tm
from .config import ConfigError, RunConfig, load_config
from .padic import FieldParams
from .schwartz import TestFunction, tf_norm
from .spectral import RadialSymbol, ToleranceBreach, solve_cauchy

EXIT_OK, EXIT_TOLERANCE, EXIT_INPUT = 0, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic output


def _clean(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating, Fraction)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return float(f"{x:.15g}")
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_clean(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "to_json_dict"):
        return _clean(x.to_json_dict())
    return str(x)


def render_json(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"


def render_csv(rows: list) -> str:
    rows = [_clean(r) for r in rows]
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def emit(doc, cfg: RunConfig, as_csv: bool = False, rows_key: str = "rows") -> None:
    text = render_csv(doc[rows_key]) if as_csv else render_json(doc)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _graph(path) -> gr.StableGraph:
    try:
        return gr.StableGraph.load(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read graph {path}: {exc}") from exc


def _tree(G, spec):
    if spec is None:
        return None
    try:
        return gr.SpanningTree(G, frozenset(int(e) for e in spec.split(",") if e != ""))
    except ValueError as exc:
        raise InputError(f"bad spanning tree {spec!r}: {exc}") from exc


def cmd_classify(args, cfg):
    G = _graph(args.graph)
    if args.all_trees:
        scan = gr.classify_all_trees(G)
        doc = {"graph": G.to_json_dict(), "tree_invariant": scan.tree_invariant,
               "rows": [{"tree": list(t), "decision": d} for t, d in scan.decisions]}
        emit(doc, cfg, args.csv)
    else:
        doc = gr.classify_spectrum(G, _tree(G, args.tree)).to_json_dict()
        emit(doc, cfg, False)
    return EXIT_OK


def cmd_enumerate(args, cfg):
    graphs = gr.enumerate_stable_graphs(args.genus, max_edges=args.max_edges)
    rows = []
    for i, G in enumerate(graphs):
        cl = gr.classify_spectrum(G)
        rows.append({"index": i, "graph": G.to_json_dict(), "vertices": G.n, "edges": len(G.edges),
                     "decision": cl.decision, "automorphisms": gr.automorphism_group(G).effective_order})
    emit({"genus": args.genus, "count": len(rows), "rows": rows}, cfg, args.csv)
    return EXIT_OK


def _symbol(cfg: RunConfig, params: FieldParams) -> RadialSymbol:
    return RadialSymbol.default(params, cfg.alpha, cfg.lam)


def cmd_spectrum(args, cfg):
    G = _graph(args.graph)
    params = cfg.field()
    gammas = [int(g) for g in args.gamma.split(",")]
    if any(g > 0 for g in gammas):
        raise InputError("gamma values must be <= 0")
    table = tm.wavelet_spectrum(G, params, _symbol(cfg, params), gammas, cfg.rho,
                                tm.Normalization(cfg.normalization))
    cl = gr.classify_spectrum(G)
    doc = {"graph": G.to_json_dict(), "p": params.p, "f": params.f, "norm_base": params.base,
           "lambda": cfg.lam, "alpha": cfg.alpha, "gammas": gammas, **table,
           "lattice_decision": "Contained" if table["contained"] else "NotContained",
           "graph_decision": cl.decision}
    emit(doc, cfg, args.csv)
    return EXIT_OK


def _group_maps(name, params, N, rho):
    groups = checks.kernel_groups(params, N, rho)
    if name not in groups:
        raise InputError(f"unknown group {name!r}; choose from {sorted(groups)}")
    return groups[name]


def cmd_evolve(args, cfg):
    try:
        with open(args.psi) as fh:
            psi = TestFunction.from_json(fh.read(), cfg.field())
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read test function {args.psi}: {exc}") from exc
    try:
        times = [float(t) for t in args.times.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --times {args.times!r}") from exc
    if any(t < 0 for t in times):
        raise InputError("times must be nonnegative")
    params = psi.params
    if args.graph:
        G = _graph(args.graph)
        maps = tm.graph_action_maps(G, params, rho=cfg.rho, mode=tm.Normalization(cfg.normalization))
        if maps[0].N != psi.N:
            raise InputError(f"graph acts on dimension {maps[0].N}, psi lives in dimension {psi.N}")
    else:
        maps = _group_maps(args.group, params, psi.N, cfg.rho)
    trace = solve_cauchy(_symbol(cfg, params), maps, psi, times)
    m0 = trace.masses[0]
    drift = max(abs(m - m0) for m in trace.masses)
    rows = [{"t": t, "mass": m, "l2_norm": tf_norm(u)} for t, m, u in zip(trace.times, trace.masses, trace.states)]
    res = dict(zip(trace.residual_times, trace.residuals))
    for r in rows:
        r["residual"] = res.get(r["t"])
    doc = {"group_order": len(maps), "rows": rows, "mass_drift": drift, "max_residual": trace.max_residual()}
    emit(doc, cfg, args.csv)
    if drift > cfg.tol.mass * max(1.0, abs(m0)):
        print(f"mass drift {drift:.3e} exceeds {cfg.tol.mass:.1e}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_family(args, cfg):
    params = cfg.field()
    eps_list = [int(e) for e in args.epsilon.split(",")] if args.epsilon else None
    s = int(args.s) if args.s is not None else None
    rows = []
    grid = tm.epsilon_grid(params, args.points) if eps_list is None else [params(e) for e in eps_list]
    for k, eps in enumerate(grid):
        row = tm.epsilon_family(params, eps, s)
        rows.append({"k": k, "epsilon": eps_list[k] if eps_list else k * params.p, "status": row.status,
                     **row.values})
    emit({"p": params.p, "f": params.f, "s": s if s is not None else params.p, "rows": rows}, cfg, args.csv)
    return EXIT_OK


def cmd_search(args, cfg):
    G = _graph(args.graph)
    params = cfg.field()
    res = tm.search_norm_decreasing(G, params, _tree(G, args.tree), tm.Normalization(cfg.normalization),
                                    samples=args.samples, seed=cfg.seed, rho=cfg.rho)
    doc = checks.search_summary(res)
    doc["mouth_local"] = res.mouth_local
    doc["rows"] = [vars(r) for r in res.rows] if args.rows else []
    emit(doc, cfg, args.csv)
    return EXIT_OK


def cmd_selftest(args, cfg):
    results = checks.run_all(quick=args.quick)
    rows = [{"name": r.name, "status": "REPORT" if r.passed is None else ("PASS" if r.passed else "FAIL"),
             "detail": r.detail, "seconds": round(r.seconds, 2)} for r in results]
    for r in results:
        print(r.line(), file=sys.stderr)
    emit({"rows": rows, "passed": sum(r["status"] == "PASS" for r in rows),
          "failed": sum(r["status"] == "FAIL" for r in rows)}, cfg, args.csv)
    return EXIT_TOLERANCE if any(r["status"] == "FAIL" for r in rows) else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="JSON configuration file")
    g.add_argument("--prime", type=int)
    g.add_argument("--degree", type=int)
    g.add_argument("--precision", type=int)
    g.add_argument("--norm-base", dest="norm_base", type=str.upper, choices=("P", "Q"))
    g.add_argument("--alpha", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--nu-max", dest="nu_max", type=int)
    g.add_argument("--rho", type=int)
    g.add_argument("--tol", type=float, help="set every tolerance to this value")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="write output here instead of stdout")
    g.add_argument("--kernel-mode", dest="kernel_mode", choices=("reconciled", "literal"))
    g.add_argument("--normalization", choices=("attracting", "repelling"))
    g.add_argument("--csv", action="store_true", help="emit the row table as CSV")

    ap = argparse.ArgumentParser(prog="mumford", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="decide the spectrum lattice condition for a graph")
    p.add_argument("graph")
    p.add_argument("--tree", help="comma separated edge ids of the spanning tree")
    p.add_argument("--all-trees", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", parents=[common], help="list stable graphs of a genus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--max-edges", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("spectrum", parents=[common], help="wavelet eigenvalue table of H_G for a graph")
    p.add_argument("graph")
    p.add_argument("--gamma", default="0", help="comma separated wavelet scales (<= 0)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("evolve", parents=[common], help="solve the Cauchy problem for a test function")
    p.add_argument("--psi", required=True, help="test function JSON")
    p.add_argument("--times", required=True, help="comma separated times")
    p.add_argument("--group", default="trivial", help="trivial or shell_swap")
    p.add_argument("--graph", help="use the automorphism action of this graph instead")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("family", parents=[common], help="one-parameter family report")
    p.add_argument("--epsilon", help="comma separated integer epsilons (default: k p, k < points)")
    p.add_argument("--s", help="integer parameter along the solution line (default p)")
    p.add_argument("--points", type=int, default=10)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search", parents=[common], help="hunt for a norm-decreasing automorphism")
    p.add_argument("graph")
    p.add_argument("--tree")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--rows", action="store_true", help="include every explored row")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return ap


_CONFIG_FLAGS = ("prime", "degree", "precision", "norm_base", "alpha", "lam", "nu_max", "rho", "tol", "seed",
                 "out", "kernel_mode", "normalization")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, overrides={k: getattr(args, k) for k in _CONFIG_FLAGS})
        return args.func(args, cfg)
    except ToleranceBreach as exc:
        print(f"tolerance breach: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (InputError, ConfigError, gr.GraphError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
