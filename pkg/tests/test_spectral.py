import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumford_diffusion.group_action import extend_action, identity_map, rescale_core, shell_swap_core
from mumford_diffusion.padic import FieldParams, PadicVector
from mumford_diffusion.schwartz import LatticeWindow, TestFunction, tf_inner, tf_integrate, tf_norm
from mumford_diffusion.spectral import (
    H_G_op,
    HeatKernel,
    J_op,
    NotConstant,
    RadialSymbol,
    ToleranceBreach,
    build_wavelet,
    eigenvalue,
    gamma_sigma,
    kernel_sample_points,
    positivity_check,
    solve_cauchy,
    spectrum_in_lattice,
    wavelet_direct,
    wavelet_indices,
)

F3 = FieldParams(3)
SYM = RadialSymbol.default(F3)


def swap_group(params=F3, N=1, rho=1):
    return [identity_map(params, N, rho), extend_action(params, N, shell_swap_core(0), rho=rho, name="sw")]


def test_symbol_validation():
    SYM.check()
    with pytest.raises(ValueError):
        RadialSymbol.default(F3, alpha=1.0, lam=4.0)
    with pytest.raises(ValueError):
        RadialSymbol.default(F3, alpha=-1.0)
    assert SYM.value(-2) == SYM.lam and SYM.value(2) == 9.0


@pytest.mark.parametrize("maps", [[identity_map(F3, 1)], swap_group()], ids=["trivial", "swap"])
@pytest.mark.parametrize("t", [0.05, 1.0, 3.0])
def test_kernel_mass_and_support(maps, t):
    Z = HeatKernel(SYM, maps, t)
    assert abs(Z.mass() - 1) < 1e-12
    assert Z.eval(PadicVector([F3.uniformizer_power(-1)])).value == 0.0
    ztf = Z.as_test_function(8, M=2)
    assert abs(tf_integrate(ztf) - 1) < 1e-10


def test_shell_sum_matches_fft_kernel():
    Z = HeatKernel(SYM, swap_group(), 0.3)
    ztf = Z.as_test_function(7)
    for v in range(0, 6):
        x = PadicVector([F3.uniformizer_power(v) * 2])
        assert abs(Z.eval(x, nu_max=7).value - ztf(x).real) < 1e-10


def test_tail_bound_certifies_truncation():
    Z = HeatKernel(SYM, [identity_map(F3, 1)], 0.01)
    zero = PadicVector([F3(0)])
    coarse, fine = Z.eval(zero, 6), Z.eval(zero, 40)
    assert abs(fine.value - coarse.value) <= coarse.tail_bound
    assert Z.eval_to_tolerance(zero, 1e-10).tail_bound <= 1e-10
    with pytest.raises(ToleranceBreach):
        HeatKernel(SYM, [identity_map(F3, 1)], 1e-6, nu_max=4).eval_to_tolerance(zero, 1e-10, max_nu=8)


@pytest.mark.parametrize("mode", ["reconciled", "literal"])
def test_semigroup(mode):
    maps = swap_group()
    a = HeatKernel(SYM, maps, 0.4, mode=mode).as_test_function(6)
    b = HeatKernel(SYM, maps, 0.3, mode=mode).as_test_function(6)
    ab = HeatKernel(SYM, maps, 0.7, mode=mode).as_test_function(6)
    from mumford_diffusion.schwartz import tf_convolve

    gap = tf_norm(tf_convolve(a, b) - ab)
    if mode == "reconciled":
        assert gap < 1e-12
    else:
        # the literal normalisation divides by |G| once per kernel
        assert gap > 1e-3


def test_positivity_trivial_group():
    Z = HeatKernel(SYM, [identity_map(F3, 2)], 0.5)
    rep = positivity_check(Z, kernel_sample_points(F3, 2, 30))
    assert rep.nonnegative and rep.min_value >= 0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_operators_are_self_adjoint(seed):
    rng = np.random.default_rng(seed)
    w = LatticeWindow(1, 1, 2)
    phi, psi = TestFunction.random(F3, w, rng), TestFunction.random(F3, w, rng)
    for op in (H_G_op(SYM, swap_group()), J_op(SYM, swap_group()[1])):
        lhs, rhs = tf_inner(op(phi), psi), tf_inner(phi, op(psi))
        assert abs(lhs - rhs) < 1e-10 * tf_norm(phi) * tf_norm(psi)
    # and H_G is nonnegative
    assert tf_inner(H_G_op(SYM, swap_group())(phi), phi).real >= -1e-10


@pytest.mark.parametrize("fp", [(2, 1), (3, 1), (2, 2)])
@pytest.mark.parametrize("gamma", [0, -1])
def test_wavelets_match_closed_form_and_are_orthonormal(fp, gamma):
    params = FieldParams(*fp)
    idxs = wavelet_indices(params, 1, gamma)
    ws = [build_wavelet(params, 1, gamma, i.b, i.k).function for i in idxs]
    for i, w in zip(idxs[:4], ws):
        d = wavelet_direct(params, 1, gamma, i.b, i.k)
        assert np.allclose(w.refine_to(d.window.join(w.window)).values,
                           d.refine_to(d.window.join(w.window)).values, atol=1e-12)
    gram = np.array([[tf_inner(a, b) for b in ws] for a in ws])
    assert np.allclose(gram, np.eye(len(ws)), atol=1e-12)


def test_wavelet_count_and_index_checks():
    assert len(wavelet_indices(F3, 2, -1)) == 9 * 8
    with pytest.raises(ValueError):
        build_wavelet(F3, 1, 0, ((0,),), ((0,),))
    with pytest.raises(ValueError):
        wavelet_indices(F3, 1, 1)


def test_eigenvalues_under_rescaling_core():
    # the Fourier support of a gamma-wavelet sits on the shell 1 - gamma <= rho
    rescale = extend_action(F3, 1, rescale_core(1), rho=3, name="r")
    for gamma in (0, -1, -2):
        for idx in wavelet_indices(F3, 1, gamma)[:3]:
            gs = gamma_sigma(rescale, gamma, idx.k)
            assert gs.value == gamma + 1
            w = build_wavelet(F3, 1, gamma, idx.b, idx.k).function
            mu = eigenvalue("J", SYM, [rescale], gamma, idx.k)
            assert tf_norm(J_op(SYM, rescale)(w) - w * mu) < 1e-10


def test_nonconstant_gamma_sigma_is_reported():
    weird = extend_action(F3, 1, lambda x: x if x[0].digits()[1] == 0 else x.shift(1), rho=3, name="weird")
    with pytest.raises(NotConstant):
        eigenvalue("H_G", SYM, [weird], -2, ((1,),))


def test_swap_group_eigenvalue_is_not_a_lattice_point():
    mu = eigenvalue("H_G", SYM, swap_group(), 0, ((1,),))
    assert mu == 1.0
    assert not spectrum_in_lattice([mu], SYM.lam, 3).contained
    assert spectrum_in_lattice([2.0, 8.0, 0.0], SYM.lam, 3).contained


def test_cauchy_eigen_evolution_and_convergence():
    maps = swap_group()
    w = build_wavelet(F3, 1, 0, ((0,),), ((1,),)).function
    times = np.linspace(0, 2, 101)
    tr = solve_cauchy(SYM, maps, w, times)
    for u, t in zip(tr.states, times):
        assert tf_norm(u - w * math.exp(-t)) < 1e-12
    r1 = solve_cauchy(SYM, maps, w, np.linspace(0, 2, 101)).max_residual()
    r2 = solve_cauchy(SYM, maps, w, np.linspace(0, 2, 201)).max_residual()
    assert math.log2(r1 / r2) > 1.9


def test_cauchy_matches_kernel_convolution():
    maps = swap_group()
    psi = TestFunction.random(F3, LatticeWindow(1, 1, 2), np.random.default_rng(4))
    tr = solve_cauchy(SYM, maps, psi, [0.0, 0.25])
    assert tr.states[1].allclose(HeatKernel(SYM, maps, 0.25).convolve(psi), atol=1e-12)
    assert abs(tr.masses[1] - tr.masses[0]) < 1e-12
    with pytest.raises(ValueError):
        solve_cauchy(SYM, maps, psi, [-1.0])
