from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumford_diffusion import graphs as gr
from mumford_diffusion import teichmueller as tm
from mumford_diffusion.checks import random_genus2_tuple
from mumford_diffusion.moebius import INF, moebius_apply, points_equal
from mumford_diffusion.padic import FieldParams, PadicVector

F5 = FieldParams(5, precision=32)
seeds = st.integers(0, 2**32 - 1)


def test_tuple_validation():
    tm.SchottkyTuple.genus2(F5, 5, 25).validate()
    with pytest.raises(tm.TupleError):
        tm.SchottkyTuple.genus2(F5, 1, 5).validate()
    with pytest.raises(tm.TupleError):
        tm.SchottkyTuple.genus2(F5, 5, 5, y2=1).validate()  # y2 collides with the fixed point 1
    with pytest.raises(tm.TupleError):
        tm.SchottkyTuple(F5, (F5(5),), F5(-1))


@given(seeds)
@settings(max_examples=25)
def test_generators_have_prescribed_data(seed):
    tup = random_genus2_tuple(F5, np.random.default_rng(seed))
    for i, g in enumerate(tm.generators(tup), 1):
        a, r = tup.fixed_points(i)
        assert points_equal(moebius_apply(g, a), a) and points_equal(moebius_apply(g, r), r)
    w1, w2 = tm.generators_genus2(tup)
    assert w1.projectively_equal(tm.generators(tup)[0])
    assert w2.projectively_equal(tm.generators(tup)[1])
    back = tm.normalize_generators(F5, tm.generators(tup))
    assert back.coordinates() == tup.coordinates()


@given(seeds)
@settings(max_examples=25)
def test_general_closed_form_of_w(seed):
    tup = random_genus2_tuple(F5, np.random.default_rng(seed))
    assert tm.entrywise_equal(tm.composite_w(tup), tm.closed_form_w(tup))


def test_y2_minus1_specialisation():
    t1, t2 = F5(5), F5(50)
    w = tm.composite_w(tm.SchottkyTuple.genus2(F5, t1, t2))
    assert tm.entrywise_equal(tm.specialized_w_y2_minus1(F5, t1, t2), w)
    assert not tm.entrywise_equal(tm.reference_w_y2_minus1(F5, t1, t2), w)


@given(seeds)
@settings(max_examples=20)
def test_fixed_point_algebra(seed):
    rng = np.random.default_rng(seed)
    tup = random_genus2_tuple(F5, rng, y2=-1)
    act = tm.sigma_action_genus2(F5, *tup.t)
    assert act.vieta_residuals["product_true"] == 0 and act.vieta_residuals["sum_true"] == 0
    assert all(act.beta_checks.values())
    beta = tm.beta_map(F5, act.z1, act.z2)
    assert moebius_apply(beta, F5(0)) == act.eta
    # the honest multiplier of w has the size of t1 t2 but is a different number
    assert act.true_multiplier.valuation == act.t.valuation


def test_reference_vieta_relations_fail():
    act = tm.sigma_action_genus2(F5, 5, 10)
    assert act.vieta_residuals["product_reference"] > 0
    assert act.true_multiplier != act.t


def test_linear_system_solutions():
    z1, z2 = tm.epsilon_roots(F5, 0)
    assert tm.critical_residual(z1, z2) == F5(2)
    t1, t2 = tm.solve_t_from_roots(z1, z2)
    assert t1.is_zero()
    line = tm.line_solution(z1, z2)
    for s in (0, 3, 7):
        a, b = line.at(F5(s))
        assert (z1 * z2 * a - b - (z1 * z2 - 1)).is_zero()
    # on the critical curve the system degenerates to a line
    # the residual factors as (z1 - 1)(z2 - 1)
    z1, z2 = F5(3), F5(1)
    assert tm.critical_residual(z1, z2).is_zero()
    assert isinstance(tm.solve_t_from_roots(z1, z2), tm.LineSolution)


def test_epsilon_roots_example():
    z1, z2 = tm.epsilon_roots(F5, 0)
    assert z1 * z2 == F5(1) and (z1 + z2).is_zero()
    assert [z1.digits()[0], z2.digits()[0]] == [2, 3]


@pytest.mark.parametrize("p", [2, 5, 13])
def test_epsilon_family_rows(p):
    params = FieldParams(p, precision=32)
    rows = [tm.epsilon_family(params, e) for e in tm.epsilon_grid(params, 4)]
    for r in rows:
        assert set(tm.FAMILY_KEYS) <= set(r.values)
        if r.status != "NoRoot":
            assert r.values["critical_residual"] == float(FieldParams(p)(2).norm())
            assert r.values["first_equation_residual"] == 0.0


def test_action_of_dumbbell_swap_exchanges_multipliers():
    G = gr.dumbbell()
    basis = gr.lasso_basis(G)
    tup = tm.SchottkyTuple.genus2(F5, 5, 50)
    for aut in gr.automorphism_group(G).effective:
        img = tm.act_on_tuple(tup, tm.image_words(G, basis, aut))
        assert sorted(c.valuation for c in img.t) == [1, 2]
        assert img.norm() == tup.norm()


def test_repelling_normalisation_gives_another_chart():
    tup = tm.SchottkyTuple.genus2(F5, 5, 50)
    img = tm.act_on_tuple(tup, [(1,), (2,)], tm.Normalization.REPELLING)
    assert img.t == tup.t
    assert img.y2 != tup.y2 or img.coordinates() == tup.coordinates()


def test_graph_action_maps():
    maps = tm.graph_action_maps(gr.theta(), F5)
    assert len(maps) == 12 and all(m.N == 3 for m in maps)
    x = PadicVector(tm.SchottkyTuple.genus2(F5, 5, 50).coordinates())
    images = {tuple(c.sort_key() for c in m(x)) for m in maps}
    assert len(images) > 1
    junk = PadicVector([F5(1), F5(2), F5(3)])  # |t1| = 1: not an admissible tuple
    assert all(m(junk) == junk for m in maps)


def test_coordinate_round_trip():
    tup = next(tm.higher_genus_grid(F5, 3, 1, seed=2))[1]
    again = tm.tuple_from_coordinates(F5, tup.coordinates())
    assert again == tup
    with pytest.raises(tm.TupleError):
        tm.tuple_from_coordinates(F5, [F5(1)] * 4)


def test_averaged_eigenvalue_report():
    rep = tm.averaged_eigenvalue_report(F5, [Fraction(1), Fraction(1, 5)])
    assert rep["average"] == 2.0 and not rep["in_lattice"]
    rep = tm.averaged_eigenvalue_report(F5, [Fraction(1), Fraction(1)])
    assert rep["in_lattice"]


@pytest.mark.parametrize("G", [gr.dumbbell(), gr.rose()])
def test_search_on_contained_graphs_finds_nothing(G):
    res = tm.search_norm_decreasing(G, FieldParams(3, precision=24))
    assert not res.found and res.end_to_end is None


def test_theta_search_report_is_consistent():
    res = tm.search_norm_decreasing(gr.theta(), FieldParams(3, precision=24))
    ok = [r for r in res.rows if r.status == "ok"]
    assert res.explored == 16
    assert (res.witness is None) == all(r.norm_sigma_x >= r.norm_x for r in ok)


def test_wavelet_spectrum_for_dumbbell():
    table = tm.wavelet_spectrum(gr.dumbbell(), FieldParams(3))
    assert table["N"] == 3 and table["group_order"] == 2
    assert len(table["rows"]) == 26 and table["contained"]
