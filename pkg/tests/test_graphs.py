import itertools
import json
import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumford_diffusion import graphs as gr
from mumford_diffusion.graphs import (
    CONTAINED,
    NOT_CONTAINED,
    GraphAutomorphism,
    GraphError,
    SpanningTree,
    StableGraph,
)

ASYMMETRIC_G5 = StableGraph(5, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (1, 1), (2, 2), (3, 3), (4, 4)))


# -- oracles ----------------------------------------------------------------


def to_nx(G: StableGraph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from((v, {"loops": G.loops_at(v)}) for v in range(G.n))
    for u, v in G.edges:
        if u != v:
            c = H.get_edge_data(u, v, {"count": 0})["count"]
            H.add_edge(u, v, count=c + 1)
    return H


def nx_isomorphic(G, H) -> bool:
    return nx.is_isomorphic(to_nx(G), to_nx(H), node_match=lambda a, b: a["loops"] == b["loops"],
                            edge_match=lambda a, b: a["count"] == b["count"])


def nx_stable_graphs(g):
    out = []
    for n in range(1, 2 * g - 1):
        types = [(u, v) for u in range(n) for v in range(u, n)]
        for ms in itertools.combinations_with_replacement(types, g + n - 1):
            H = nx.MultiGraph()
            H.add_nodes_from(range(n))
            H.add_edges_from(ms)
            if not nx.is_connected(H) or any(d < 3 for _, d in H.degree()):
                continue
            G = StableGraph(n, ms)
            if not any(nx_isomorphic(G, K) for K in out):
                out.append(G)
    return out


def aut_orders_oracle(G: StableGraph):
    """(full, effective) orders: vertex maps preserving multiplicities, times edge symmetries."""
    M = to_nx(G)
    gm = nx.algorithms.isomorphism.GraphMatcher(M, M, node_match=lambda a, b: a["loops"] == b["loops"],
                                                edge_match=lambda a, b: a["count"] == b["count"])
    vertex_auts = sum(1 for _ in gm.isomorphisms_iter())
    edge_sym = 1
    flips = 1
    for v in range(G.n):
        k = G.loops_at(v)
        edge_sym *= math.factorial(k)
        flips *= 2 ** k
    for u, v in itertools.combinations(range(G.n), 2):
        edge_sym *= math.factorial(G.multiplicity(u, v))
    return vertex_auts * edge_sym * flips, vertex_auts * edge_sym


# -- model --------------------------------------------------------------------


def test_named_graphs():
    for G, deg, genus in ((gr.dumbbell(), [3, 3], 2), (gr.rose(), [4], 2), (gr.theta(), [3, 3], 2),
                          (gr.theta_with_loops(), [5, 5], 4)):
        assert [G.degree(v) for v in range(G.n)] == deg
        assert G.genus == genus and G.is_stable() and G.is_connected()


def test_json_round_trip_and_errors(tmp_path):
    G = StableGraph.from_json_dict({"vertices": ["a", "b"], "edges": [["a", "b"], ["a", "a"], ["b", "b"]]})
    assert G.labels == ("a", "b") and G.genus == 2
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_json_dict()))
    assert StableGraph.load(path) == G
    for bad in ('{"vertices": [0]}', '{"vertices": [0, 0], "edges": []}', '{"vertices": [0], "edges": [[0, 1]]}',
                "not json"):
        with pytest.raises(GraphError):
            StableGraph.from_json(bad)


def test_spanning_trees_and_paths():
    G = gr.theta_with_loops()
    trees = gr.spanning_trees(G)
    assert len(trees) == 3
    T = SpanningTree(G, frozenset({0}))
    assert T.non_tree_edges == (1, 2, 3, 4)
    assert T.path(0, 1) == [(0, 1)] and T.path(1, 0) == [(0, -1)]
    assert T.is_leaf(0) and T.degree(1) == 1
    with pytest.raises(GraphError):
        SpanningTree(G, frozenset({0, 1}))


@given(st.lists(st.integers(-3, 3).filter(bool), max_size=12))
def test_free_reduction(word):
    red = gr.free_reduce(word)
    assert all(a != -b for a, b in zip(red, red[1:]))
    assert gr.free_reduce(red) == red
    assert gr.free_reduce(list(word) + [-a for a in reversed(word)]) == ()


# -- automorphisms ------------------------------------------------------------


@pytest.mark.parametrize("G, full, eff", [(gr.dumbbell(), 8, 2), (gr.rose(), 8, 2), (gr.theta(), 12, 12),
                                          (gr.theta_with_loops(), 48, 12)])
def test_named_automorphism_orders(G, full, eff):
    A = gr.automorphism_group(G)
    assert (A.order, A.effective_order) == (full, eff)
    assert all(a.is_automorphism_of(G) for a in A.full)
    assert A.as_finite_group().order == eff


@pytest.mark.parametrize("G", gr.enumerate_stable_graphs(3), ids=lambda G: str(G.edges))
def test_automorphism_orders_against_networkx(G):
    A = gr.automorphism_group(G)
    assert (A.order, A.effective_order) == aut_orders_oracle(G)


def test_asymmetric_graph_has_trivial_group():
    assert ASYMMETRIC_G5.genus == 5 and ASYMMETRIC_G5.is_stable()
    A = gr.automorphism_group(ASYMMETRIC_G5)
    assert A.effective_order == 1
    assert aut_orders_oracle(ASYMMETRIC_G5)[1] == 1
    assert gr.basis_orbit_closed(ASYMMETRIC_G5).closed


def test_no_genus3_graph_is_asymmetric():
    assert min(gr.automorphism_group(G).effective_order for G in gr.enumerate_stable_graphs(3)) > 1


def test_compose_is_associative_on_theta():
    auts = gr.automorphism_group(gr.theta_with_loops()).full[:10]
    for a, b, c in itertools.product(auts[:4], repeat=3):
        assert a.compose(b).compose(c) == a.compose(b.compose(c))


# -- bases and orbit closure ---------------------------------------------------


def test_theta_lasso_images():
    G = gr.theta()
    basis = gr.lasso_basis(G, SpanningTree(G, frozenset({0})))
    swap = GraphAutomorphism((1, 0), (1, 0, 2), (False, False, False))
    assert gr.lasso_image_word(G, basis, swap, 1) == (1,)
    assert gr.lasso_image_word(G, basis, swap, 2) == (-2, 1)
    rep = gr.basis_orbit_closed(G, basis)
    assert not rep.closed and rep.witness["text"] == "w2 -> w2 w1^-1"


@pytest.mark.parametrize("G", [gr.dumbbell(), gr.rose(), gr.theta(), gr.theta_with_loops(), ASYMMETRIC_G5])
def test_orbit_closure_independent_of_base_vertex_and_tree(G):
    answers = {gr.basis_orbit_closed(G, gr.lasso_basis(G, T, P)).closed
               for T in gr.spanning_trees(G)[:6] for P in range(G.n)}
    assert len(answers) == 1


def test_lasso_words_are_letters():
    G = gr.theta_with_loops()
    basis = gr.lasso_basis(G)
    for i, lasso in enumerate(basis.lassos, 1):
        assert basis.word(lasso.steps) == (i,)


# -- mouths and classification -------------------------------------------------


def test_mouths_match_bruteforce_on_small_graphs():
    for G in gr.enumerate_multigraphs(5):
        assert {(m.u, m.v, m.length) for m in gr.find_mouths(G)} == gr.mouths_bruteforce(G)


def test_genus2_classification():
    assert gr.classify_spectrum(gr.dumbbell()).decision == CONTAINED
    assert gr.classify_spectrum(gr.rose()).decision == CONTAINED
    cl = gr.classify_spectrum(gr.theta())
    assert cl.decision == NOT_CONTAINED and cl.witness["text"] == "w2 -> w2 w1^-1"


def test_example_graph_has_a_mouth_but_contained_spectrum():
    G = gr.theta_with_loops()
    cl = gr.classify_spectrum(G, SpanningTree(G, frozenset({0})))
    assert gr.find_mouths(G)
    assert cl.decision == CONTAINED
    assert "deg_G - deg_T = 5 - 1 = 4 > 2" in cl.explanation[0]
    doc = cl.to_json_dict()
    assert set(doc) >= {"decision", "graph", "spanning_tree", "mouths", "explanation"}
    assert gr.classify_all_trees(G).tree_invariant


def test_mouthless_graphs_are_contained():
    for G in gr.enumerate_stable_graphs(3):
        if not gr.find_mouths(G):
            assert gr.classify_spectrum(G).decision == CONTAINED


# -- enumeration ---------------------------------------------------------------


def test_genus2_enumeration():
    graphs = gr.enumerate_stable_graphs(2)
    assert len(graphs) == 3
    for H in (gr.dumbbell(), gr.rose(), gr.theta()):
        assert sum(nx_isomorphic(G, H) for G in graphs) == 1


def test_genus3_enumeration_against_networkx():
    ours = gr.enumerate_stable_graphs(3)
    oracle = nx_stable_graphs(3)
    assert len(ours) == len(oracle) == 15
    for G in ours:
        assert sum(nx_isomorphic(G, H) for H in oracle) == 1


@given(st.permutations(range(4)))
def test_canonical_form_is_relabeling_invariant(perm):
    G = StableGraph(4, ((0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (2, 3)))
    assert gr.canonical_form(G.relabel(perm)) == gr.canonical_form(G)


def nx_multigraphs(k):
    out = []
    for n in range(1, k + 2):
        types = [(u, v) for u in range(n) for v in range(u, n)]
        for ms in itertools.combinations_with_replacement(types, k):
            H = nx.MultiGraph()
            H.add_nodes_from(range(n))
            H.add_edges_from(ms)
            if nx.is_connected(H):
                G = StableGraph(n, ms)
                if not any(nx_isomorphic(G, K) for K in out):
                    out.append(G)
    return out


def test_multigraph_enumeration_against_networkx():
    ours = gr.enumerate_multigraphs(4)
    for k in range(1, 5):
        layer = [G for G in ours if len(G.edges) == k]
        assert len(layer) == len(nx_multigraphs(k))
    assert [len([G for G in ours if len(G.edges) == k]) for k in (1, 2)] == [2, 4]
