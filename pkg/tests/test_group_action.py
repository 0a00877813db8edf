import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumford_diffusion.group_action import (
    ActionError,
    ExtendedMap,
    FiniteGroup,
    check_sigma_increasing,
    check_sigma_radial,
    extend_action,
    identity_map,
    map_group,
    permutation_core,
    random_point,
    rescale_core,
    shell_exponent,
    shell_swap_core,
    unit_scale_core,
)
from mumford_diffusion.padic import FieldParams, PadicVector

F = FieldParams(3)


def _swap(N=1, rho=2):
    return extend_action(F, N, shell_swap_core(0), rho=rho, name="sw")


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_extension_follows_the_three_regions(seed, rho):
    sw = _swap(2, rho)
    core = shell_swap_core(0)
    x = random_point(F, 2, np.random.default_rng(seed), -6, 4)
    s = shell_exponent(x)
    if s > rho:
        assert sw(x) == x
    elif s > 0:
        assert sw(x) == core(x.shift(rho)).shift(-rho)
    else:
        assert sw(x) == core(x)
        # composition on the polydisk matches the composite core
        assert sw.compose(sw)(x) == sw(sw(x)) == x


def test_extension_acts_shellwise_through_rescaling():
    sw = _swap(1, rho=2)
    x = PadicVector([F.uniformizer_power(-2)])  # shell 2 lands on the unit sphere after rescaling
    assert sw(x) == PadicVector([F.uniformizer_power(-1)])
    assert sw(PadicVector([F.uniformizer_power(-3)])) == PadicVector([F.uniformizer_power(-3)])


def test_core_leaving_the_disk_raises():
    bad = extend_action(F, 1, rescale_core(-1), rho=1)
    with pytest.raises(ActionError):
        bad(PadicVector([F(1)]))
    with pytest.raises(ValueError):
        ExtendedMap(F, 1, rescale_core(1), 0)


def test_generated_group_orders():
    samples = [random_point(F, 2, np.random.default_rng(i), -2, 2) for i in range(12)]
    assert map_group([_swap(2)], samples).order == 2
    perm = extend_action(F, 2, permutation_core((1, 0)), rho=2, name="perm")
    assert map_group([_swap(2), perm], samples).order == 4
    unit = extend_action(F, 2, unit_scale_core(F(-1)), rho=2, name="neg")
    assert map_group([unit], samples).order == 2


def test_finite_group_validation():
    g = FiniteGroup(["e", "a"], [[0, 1], [1, 0]])
    assert g.identity == 0 and g.inverses == [0, 1]
    assert FiniteGroup.from_json_dict(g.to_json_dict()).table == g.table
    with pytest.raises(ValueError):
        FiniteGroup(["e", "a"], [[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        FiniteGroup(["x", "y"], [[1, 0], [0, 0]])
    # a non-associative table with identity and inverses
    t = [[0, 1, 2], [1, 0, 0], [2, 2, 0]]
    with pytest.raises(ValueError):
        FiniteGroup(list("eab"), t)


def test_radiality_checks():
    sw = _swap(1, rho=1)
    radial = lambda x: float(F.base) ** shell_exponent(sw(x))
    assert check_sigma_radial(radial, sw)
    assert check_sigma_increasing(radial, sw)
    plain = lambda x: float(F.base) ** shell_exponent(x)
    assert not check_sigma_radial(plain, sw)
    assert identity_map(F, 1)(PadicVector([F(5)])) == PadicVector([F(5)])
