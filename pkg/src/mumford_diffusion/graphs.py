"""Stable multigraphs, spanning trees, lasso bases, automorphisms and mouths.

Vertices are stored as indices 0..n-1 with optional external labels; edge e is
the pair edges[e] = (u, v) with u <= v, a loop when u == v.  A step of an edge
path is (e, s): s = +1 walks edges[e] from u to v, s = -1 from v to u.
Degrees count a loop twice throughout.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .group_action import FiniteGroup


class GraphError(ValueError):
    """Malformed graph input or a size guard was exceeded."""


@dataclass(frozen=True)
class StableGraph:
    n: int
    edges: tuple
    labels: tuple = None

    def __post_init__(self):
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) refers to an unknown vertex")
        object.__setattr__(self, "edges", edges)
        labels = tuple(range(self.n)) if self.labels is None else tuple(self.labels)
        if len(labels) != self.n or len(set(labels)) != self.n:
            raise GraphError("vertex labels must be distinct, one per vertex")
        object.__setattr__(self, "labels", labels)

    # -- I/O -----------------------------------------------------------------

    @classmethod
    def from_json_dict(cls, doc: dict) -> StableGraph:
        try:
            verts = list(doc["vertices"])
            raw = [tuple(e) for e in doc["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError("graph JSON needs 'vertices' and 'edges'") from exc
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise GraphError("duplicate vertex ids")
        try:
            edges = [(index[u], index[v]) for u, v in raw]
        except (KeyError, ValueError) as exc:
            raise GraphError(f"bad edge list: {exc}") from exc
        return cls(len(verts), tuple(edges), tuple(verts))

    @classmethod
    def from_json(cls, text: str) -> StableGraph:
        try:
            return cls.from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc

    @classmethod
    def load(cls, path) -> StableGraph:
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_json_dict(self) -> dict:
        return {"vertices": list(self.labels),
                "edges": [[self.labels[u], self.labels[v]] for u, v in self.edges]}

    # -- basic invariants ----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def loops_at(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == b == v)

    def multiplicity(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        return sum(1 for e in self.edges if e == key)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        adj = defaultdict(set)
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @property
    def genus(self) -> int:
        """First Betti number of a connected graph."""
        if not self.is_connected():
            raise GraphError("genus is defined for connected graphs")
        return self.n_edges - self.n + 1

    def is_stable(self) -> bool:
        return self.is_connected() and all(self.degree(v) >= 3 for v in range(self.n)) and self.genus >= 2

    def relabel(self, perm: Sequence[int]) -> StableGraph:
        """The graph with vertex v renamed perm[v]."""
        return StableGraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))


# ---------------------------------------------------------------------------
# named examples


def dumbbell() -> StableGraph:
    return StableGraph(2, ((0, 1), (0, 0), (1, 1)))


def rose(loops: int = 2) -> StableGraph:
    return StableGraph(1, ((0, 0),) * loops)


def theta() -> StableGraph:
    return StableGraph(2, ((0, 1),) * 3)


def theta_with_loops() -> StableGraph:
    """Three parallel edges with a loop at each endpoint."""
    return StableGraph(2, ((0, 1), (0, 1), (0, 1), (0, 0), (1, 1)))


# ---------------------------------------------------------------------------
# spanning trees and lasso bases


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


@dataclass(frozen=True)
class SpanningTree:
    graph: StableGraph
    tree_edges: frozenset

    def __post_init__(self):
        G = self.graph
        if len(self.tree_edges) != G.n - 1:
            raise GraphError("a spanning tree has n - 1 edges")
        uf = _UnionFind(G.n)
        for e in self.tree_edges:
            u, v = G.edges[e]
            if not uf.union(u, v):
                raise GraphError("edge set contains a cycle")

    @property
    def non_tree_edges(self) -> tuple:
        return tuple(e for e in range(self.graph.n_edges) if e not in self.tree_edges)

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for e in self.tree_edges for a, b in [self.graph.edges[e]])

    def is_leaf(self, v: int) -> bool:
        return self.degree(v) == 1

    def star_half_edges(self) -> tuple:
        """Half-edges of the *-tree: (non-tree edge, endpoint) pairs, two per edge."""
        out = []
        for e in self.non_tree_edges:
            u, v = self.graph.edges[e]
            out.extend([(e, u), (e, v)])
        return tuple(out)

    def path(self, a: int, b: int) -> list:
        """Steps of the unique tree path from a to b."""
        G = self.graph
        adj = defaultdict(list)
        for e in sorted(self.tree_edges):
            u, v = G.edges[e]
            adj[u].append((v, e, 1))
            adj[v].append((u, e, -1))
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            for y, e, s in adj[x]:
                if y not in prev:
                    prev[y] = (x, e, s)
                    stack.append(y)
        steps = []
        x = b
        while prev[x] is not None:
            px, e, s = prev[x]
            steps.append((e, s))
            x = px
        return steps[::-1]

    def to_json(self) -> list:
        return sorted(self.tree_edges)


def spanning_trees(G: StableGraph) -> list:
    """All spanning trees as sorted edge-index tuples (loops never belong to a tree)."""
    candidates = [e for e in range(G.n_edges) if not G.is_loop(e)]
    out = []
    for combo in itertools.combinations(candidates, G.n - 1):
        uf = _UnionFind(G.n)
        if all(uf.union(*G.edges[e]) for e in combo):
            out.append(SpanningTree(G, frozenset(combo)))
    return out


def default_spanning_tree(G: StableGraph, root: int = 0) -> SpanningTree:
    """Breadth-first tree taking the lowest-index edge to each new vertex."""
    seen = {root}
    chosen = []
    frontier = [root]
    while frontier:
        nxt = []
        for x in frontier:
            for e, (u, v) in enumerate(G.edges):
                if x not in (u, v) or u == v:
                    continue
                y = v if u == x else u
                if y not in seen:
                    seen.add(y)
                    chosen.append(e)
                    nxt.append(y)
        frontier = nxt
    if len(seen) != G.n:
        raise GraphError("graph is not connected")
    return SpanningTree(G, frozenset(chosen))


def _step_endpoints(G: StableGraph, step):
    e, s = step
    u, v = G.edges[e]
    return (u, v) if s == 1 else (v, u)


@dataclass(frozen=True)
class Lasso:
    edge: int
    steps: tuple


@dataclass(frozen=True)
class GeometricBasis:
    tree: SpanningTree
    base: int
    lassos: tuple

    @property
    def letters(self) -> dict:
        """Non-tree edge -> generator index 1..g."""
        return {l.edge: i + 1 for i, l in enumerate(self.lassos)}

    def word(self, steps) -> tuple:
        """Freely reduced word in W+- read off an edge path (tree edges are trivial)."""
        letters = self.letters
        out = []
        for e, s in steps:
            if e in letters:
                out.append(letters[e] * s)
        return free_reduce(out)


def free_reduce(word: Iterable[int]) -> tuple:
    out = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "1"
    return " ".join(f"w{abs(a)}" + ("^-1" if a < 0 else "") for a in word)


def lasso_basis(G: StableGraph, T: SpanningTree | None = None, P: int = 0) -> GeometricBasis:
    """One lasso per non-tree edge: tree path P -> u, the edge u -> v, tree path v -> P."""
    T = default_spanning_tree(G) if T is None else T
    lassos = []
    for e in T.non_tree_edges:
        u, v = G.edges[e]
        steps = tuple(T.path(P, u)) + ((e, 1),) + tuple(T.path(v, P))
        lassos.append(Lasso(e, steps))
    return GeometricBasis(T, P, tuple(lassos))


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class GraphAutomorphism:
    vperm: tuple
    eperm: tuple
    flips: tuple  # per edge; only loops may be flipped

    def apply_step(self, G: StableGraph, step):
        e, s = step
        img = self.eperm[e]
        if G.is_loop(e):
            return (img, -s if self.flips[e] else s)
        start, _ = _step_endpoints(G, step)
        return (img, 1 if G.edges[img][0] == self.vperm[start] else -1)

    def apply_path(self, G: StableGraph, steps):
        return tuple(self.apply_step(G, st) for st in steps)

    def compose(self, other: GraphAutomorphism) -> GraphAutomorphism:
        """self o other."""
        vp = tuple(self.vperm[i] for i in other.vperm)
        ep = tuple(self.eperm[i] for i in other.eperm)
        fl = tuple(bool(other.flips[e]) ^ bool(self.flips[other.eperm[e]]) for e in range(len(ep)))
        return GraphAutomorphism(vp, ep, fl)

    @property
    def effective_key(self):
        return (self.vperm, self.eperm)

    def is_automorphism_of(self, G: StableGraph) -> bool:
        for e, (u, v) in enumerate(G.edges):
            a, b = G.edges[self.eperm[e]]
            if {a, b} != {self.vperm[u], self.vperm[v]}:
                return False
            if self.flips[e] and u != v:
                return False
        return sorted(self.eperm) == list(range(G.n_edges)) and sorted(self.vperm) == list(range(G.n))

    def label(self) -> str:
        flips = "".join("f" if f else "." for f in self.flips)
        return f"v{list(self.vperm)}e{list(self.eperm)}{flips if any(self.flips) else ''}"


def _vertex_signature(G: StableGraph, v: int):
    mults = sorted(G.multiplicity(v, w) for w in range(G.n) if w != v and G.multiplicity(v, w))
    return (G.degree(v), G.loops_at(v), tuple(mults))


def _vertex_isomorphisms(G: StableGraph, H: StableGraph, limit: int | None = None):
    """Vertex bijections G -> H preserving all edge multiplicities."""
    if G.n != H.n:
        return
    sg = [_vertex_signature(G, v) for v in range(G.n)]
    sh = [_vertex_signature(H, v) for v in range(H.n)]
    if sorted(sg) != sorted(sh):
        return
    mg = [[G.multiplicity(a, b) for b in range(G.n)] for a in range(G.n)]
    mh = [[H.multiplicity(a, b) for b in range(H.n)] for a in range(H.n)]
    order = sorted(range(G.n), key=lambda v: (-sg[v][0], v))
    assign = [None] * G.n
    used = [False] * G.n
    count = 0

    def rec(i):
        nonlocal count
        if i == G.n:
            count += 1
            yield tuple(assign)
            return
        v = order[i]
        for w in range(H.n):
            if used[w] or sh[w] != sg[v]:
                continue
            if any(mg[v][x] != mh[w][assign[x]] for x in order[:i]) or mg[v][v] != mh[w][w]:
                continue
            assign[v], used[w] = w, True
            yield from rec(i + 1)
            assign[v], used[w] = None, False
            if limit is not None and count >= limit:
                return

    yield from rec(0)


@dataclass
class AutomorphismGroup:
    graph: StableGraph
    full: list
    effective: list

    @property
    def order(self) -> int:
        return len(self.full)

    @property
    def effective_order(self) -> int:
        return len(self.effective)

    def as_finite_group(self, effective: bool = True) -> FiniteGroup:
        elems = self.effective if effective else self.full
        key = (lambda a: a.effective_key) if effective else (lambda a: a)
        index = {key(a): i for i, a in enumerate(elems)}

        def strip(a):
            return GraphAutomorphism(a.vperm, a.eperm, (False,) * len(a.flips)) if effective else a

        table = [[index[key(strip(a.compose(b)))] for b in elems] for a in elems]
        return FiniteGroup(elems, table, [a.label() for a in elems])


def automorphism_group(G: StableGraph, max_vertices: int = 12, max_order: int = 200_000) -> AutomorphismGroup:
    """All incidence-preserving (vertex, edge, loop-flip) triples, and the quotient by loop flips."""
    if G.n > max_vertices:
        raise GraphError(f"{G.n} vertices exceed the exhaustive-search guard of {max_vertices}")
    classes = defaultdict(list)
    for e, uv in enumerate(G.edges):
        classes[uv].append(e)
    loops = [e for e in range(G.n_edges) if G.is_loop(e)]
    per_vperm = 2 ** len(loops)
    for members in classes.values():
        per_vperm *= math.factorial(len(members))
    full, effective = [], []
    for vp in _vertex_isomorphisms(G, G):
        if len(full) + per_vperm > max_order:
            raise GraphError(f"automorphism group exceeds {max_order} elements")
        keys = sorted(classes)
        images = [tuple(sorted((vp[u], vp[v]))) for u, v in keys]
        choices = [itertools.permutations(classes[img]) for img in images]
        for combo in itertools.product(*choices):
            ep = [None] * G.n_edges
            for src, dst in zip(keys, combo):
                for e, f_ in zip(classes[src], dst):
                    ep[e] = f_
            ep = tuple(ep)
            effective.append(GraphAutomorphism(vp, ep, (False,) * G.n_edges))
            for bits in itertools.product((False, True), repeat=len(loops)):
                fl = [False] * G.n_edges
                for e, b in zip(loops, bits):
                    fl[e] = b
                full.append(GraphAutomorphism(vp, ep, tuple(fl)))
    key = lambda a: (a.vperm, a.eperm, a.flips)
    full.sort(key=key)
    effective.sort(key=key)
    return AutomorphismGroup(G, full, effective)


def lasso_image_word(G: StableGraph, basis: GeometricBasis, aut: GraphAutomorphism, i: int) -> tuple:
    """Word of sigma(w_i) rebased at P through the tree; i is 1-based."""
    img = aut.apply_path(G, basis.lassos[i - 1].steps)
    moved = aut.vperm[basis.base]
    T = basis.tree
    rebased = tuple(T.path(basis.base, moved)) + img + tuple(T.path(moved, basis.base))
    return basis.word(rebased)


@dataclass
class OrbitReport:
    closed: bool
    witness: dict | None = None

    def __bool__(self):
        return self.closed


def basis_orbit_closed(G: StableGraph, basis: GeometricBasis | None = None,
                       group: AutomorphismGroup | None = None) -> OrbitReport:
    """Does every automorphism send each lasso to a letter of W+-?

    The witness, if any, is the violation with the shortest image word.
    """
    basis = lasso_basis(G) if basis is None else basis
    group = automorphism_group(G) if group is None else group
    best = None
    for aut in group.effective:
        for i in range(1, len(basis.lassos) + 1):
            word = lasso_image_word(G, basis, aut, i)
            if len(word) == 1:
                continue
            cand = (len(word), aut.vperm, aut.eperm, i, word)
            if best is None or cand < best[0]:
                best = (cand, aut, i, word)
    if best is None:
        return OrbitReport(True)
    _, aut, i, word = best
    return OrbitReport(False, {"automorphism": aut, "generator": i, "image": word,
                               "text": f"w{i} -> {format_word(word)}"})


# ---------------------------------------------------------------------------
# mouths


@dataclass(frozen=True)
class Mouth:
    u: int
    v: int
    length: int
    arms: tuple  # three tuples of edge indices

    @property
    def corners(self):
        return (self.u, self.v)


def _simple_paths(G: StableGraph, a: int, b: int, max_len: int):
    adj = defaultdict(list)
    for e, (u, v) in enumerate(G.edges):
        if u != v:
            adj[u].append((v, e))
            adj[v].append((u, e))
    out = []
    path_e, path_v = [], [a]
    visited = {a}

    def rec(x):
        if len(path_e) > max_len:
            return
        for y, e in adj[x]:
            if y == b:
                out.append((tuple(path_e + [e]), tuple(path_v[1:])))
                continue
            if y in visited:
                continue
            visited.add(y)
            path_e.append(e)
            path_v.append(y)
            rec(y)
            path_e.pop()
            path_v.pop()
            visited.discard(y)

    rec(a)
    return [(es, inner) for es, inner in out if len(es) <= max_len]


def find_mouths(G: StableGraph) -> list:
    """Every (corner pair, arm length) admitting three internally disjoint arms."""
    mouths = []
    for a, b in itertools.combinations(range(G.n), 2):
        by_len = defaultdict(list)
        for es, inner in _simple_paths(G, a, b, G.n - 1):
            by_len[len(es)].append((es, frozenset(inner), frozenset(es)))
        for L in sorted(by_len):
            paths = by_len[L]
            found = None
            for p1, p2, p3 in itertools.combinations(paths, 3):
                if (p1[1] & p2[1]) or (p1[1] & p3[1]) or (p2[1] & p3[1]):
                    continue
                if (p1[2] & p2[2]) or (p1[2] & p3[2]) or (p2[2] & p3[2]):
                    continue
                found = (p1[0], p2[0], p3[0])
                break
            if found:
                mouths.append(Mouth(a, b, L, found))
    return mouths


def mouths_bruteforce(G: StableGraph, max_edges: int = 16) -> set:
    """(u, v, length) of every subdivided theta with equal arms, by scanning edge subsets."""
    if G.n_edges > max_edges:
        raise GraphError("too many edges for the subset scan")
    plain = [e for e in range(G.n_edges) if not G.is_loop(e)]
    found = set()
    for r in range(3, len(plain) + 1):
        for sub in itertools.combinations(plain, r):
            deg = Counter()
            inc = defaultdict(list)
            for e in sub:
                u, v = G.edges[e]
                deg[u] += 1
                deg[v] += 1
                inc[u].append(e)
                inc[v].append(e)
            corners = [x for x, d in deg.items() if d == 3]
            if len(corners) != 2 or any(d not in (2, 3) for d in deg.values()):
                continue
            u, v = sorted(corners)
            lengths = []
            ok = True
            used = set()
            for e0 in inc[u]:
                x, e, L = u, e0, 0
                while True:
                    used.add(e)
                    a, b = G.edges[e]
                    x = b if a == x else a
                    L += 1
                    if deg[x] == 3:
                        break
                    e = next(f for f in inc[x] if f != e)
                if x != v:
                    ok = False
                    break
                lengths.append(L)
            if ok and len(used) == r and len(set(lengths)) == 1:
                found.add((u, v, lengths[0]))
    return found


# ---------------------------------------------------------------------------
# classification


CONTAINED = "Contained"
NOT_CONTAINED = "NotContained"


def genus2_case(G: StableGraph) -> str | None:
    """'a' (two loops joined by a bridge), 'b' (rose) or 'c' (theta) for genus-2 stable graphs."""
    if not G.is_stable() or G.genus != 2:
        return None
    if G.n == 1:
        return "b"
    if G.n == 2:
        return "c" if G.multiplicity(0, 1) == 3 else "a"
    return None


@dataclass
class Classification:
    decision: str
    genus: int
    tree: SpanningTree
    mouths: list
    witness: dict | None
    explanation: list
    case: str | None = None

    def to_json_dict(self) -> dict:
        G = self.tree.graph
        lab = G.labels
        witness = None
        if self.witness is not None:
            witness = {k: (v if not isinstance(v, GraphAutomorphism) else v.label())
                       for k, v in self.witness.items()}
            for k in ("corner", "u", "v"):
                if k in witness:
                    witness[k] = lab[witness[k]]
            if "image" in witness:
                witness["image"] = list(witness["image"])
        return {
            "graph": G.to_json_dict(),
            "genus": self.genus,
            "spanning_tree": [[lab[a], lab[b]] for e in sorted(self.tree.tree_edges) for a, b in [G.edges[e]]],
            "mouths": [{"corners": [lab[m.u], lab[m.v]], "arm_length": m.length,
                        "arms": [list(arm) for arm in m.arms]} for m in self.mouths],
            "decision": self.decision,
            "case": self.case,
            "witness": witness,
            "explanation": self.explanation,
        }


def _corner_condition(G: StableGraph, T: SpanningTree, v: int):
    dg, dt = G.degree(v), T.degree(v)
    return T.is_leaf(v) and dg - dt <= 2, dg, dt


def classify_spectrum(G: StableGraph, T: SpanningTree | None = None) -> Classification:
    """Lattice decision for the spectrum of the invariant operator of Aut G."""
    if not G.is_stable():
        raise GraphError("graph is not stable")
    T = default_spanning_tree(G) if T is None else T
    if T.graph != G:
        raise GraphError("spanning tree belongs to a different graph")
    g = G.genus
    mouths = find_mouths(G)
    lab = G.labels
    if g == 2:
        case = genus2_case(G)
        report = basis_orbit_closed(G, lasso_basis(G, T, 0))
        if report.closed:
            return Classification(CONTAINED, g, T, mouths, None,
                                  [f"genus 2, case ({case}): Aut acts on W+- by permutations and inversions",
                                   "equal eigenvalues for all automorphisms, so the spectrum lies in the lattice"],
                                  case)
        return Classification(NOT_CONTAINED, g, T, mouths, report.witness,
                              [f"genus 2, case ({case}): {report.witness['text']} is not in W+-",
                               "norm-decreasing points give differing eigenvalues whose average leaves the lattice"],
                              case)
    explanation = []
    if not mouths:
        explanation.append("no mouth: Aut acts on every geometric basis by permutations and inversions")
        return Classification(CONTAINED, g, T, mouths, None, explanation)
    witness = None
    for m in mouths:
        for v in m.corners:
            ok, dg, dt = _corner_condition(G, T, v)
            name = f"mouth {{{lab[m.u]}, {lab[m.v]}}} (arm length {m.length}), corner {lab[v]}"
            if not T.is_leaf(v):
                explanation.append(f"{name}: not a leaf of T (deg_T = {dt})")
                continue
            rel = "<=" if dg - dt <= 2 else ">"
            explanation.append(f"{name}: leaf of T, deg_G - deg_T = {dg} - {dt} = {dg - dt} {rel} 2")
            if ok and witness is None:
                witness = {"u": m.u, "v": m.v, "corner": v, "arm_length": m.length,
                           "deg_G": dg, "deg_T": dt}
    return Classification(NOT_CONTAINED if witness else CONTAINED, g, T, mouths, witness, explanation)


@dataclass
class TreeScan:
    decisions: list  # (tree edge tuple, decision)
    tree_invariant: bool


def classify_all_trees(G: StableGraph) -> TreeScan:
    rows = [(tuple(sorted(T.tree_edges)), classify_spectrum(G, T).decision) for T in spanning_trees(G)]
    return TreeScan(rows, len({d for _, d in rows}) <= 1)


# ---------------------------------------------------------------------------
# canonical forms and enumeration


def canonical_form(G: StableGraph) -> tuple:
    """Lexicographically least sorted edge list over signature-respecting relabelings."""
    sig = [_vertex_signature(G, v) for v in range(G.n)]
    cells = defaultdict(list)
    for v in range(G.n):
        cells[sig[v]].append(v)
    keys = sorted(cells, reverse=True)
    best = None
    for combo in itertools.product(*(itertools.permutations(cells[k]) for k in keys)):
        order = [v for block in combo for v in block]
        perm = [0] * G.n
        for new, old in enumerate(order):
            perm[old] = new
        form = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in G.edges))
        if best is None or form < best:
            best = form
    return (G.n, tuple(keys), best)


def canonical_graph(G: StableGraph) -> StableGraph:
    n, _, edges = canonical_form(G)
    return StableGraph(n, edges)


def enumerate_stable_graphs(g: int, max_edges: int | None = None) -> list:
    """Isomorphism classes of stable graphs of genus g (vertices <= 2g - 2, edges <= 3g - 3)."""
    if g < 2:
        raise GraphError("stable graphs have genus >= 2")
    max_edges = 3 * g - 3 if max_edges is None else max_edges
    found = {}
    for n in range(1, 2 * g - 1):
        E = g + n - 1
        if E > max_edges:
            break
        types = [(u, v) for u in range(n) for v in range(u, n)]
        for multiset in itertools.combinations_with_replacement(types, E):
            G = StableGraph(n, multiset)
            if not G.is_stable():
                continue
            key = canonical_form(G)
            if key not in found:
                found[key] = canonical_graph(G)
    return [found[k] for k in sorted(found)]


def enumerate_multigraphs(max_edges: int) -> list:
    """Connected multigraphs with loops, 1..max_edges edges and no isolated vertices, up to isomorphism."""
    level = {canonical_form(StableGraph(1, ())): StableGraph(1, ())}
    out = []
    for _ in range(max_edges):
        nxt = {}
        for G in level.values():
            cands = [(u, v) for u in range(G.n) for v in range(u, G.n)]
            for u, v in cands:
                H = StableGraph(G.n, G.edges + ((u, v),))
                nxt.setdefault(canonical_form(H), H)
            for u in range(G.n):
                H = StableGraph(G.n + 1, G.edges + ((u, G.n),))
                nxt.setdefault(canonical_form(H), H)
        level = nxt
        out.extend(level[k] for k in sorted(level))
    return out
