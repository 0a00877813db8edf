import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mumford_diffusion.padic import (
    FieldParams,
    NoRoot,
    ParamsMismatch,
    PadicVector,
    character_phase,
    is_irreducible_mod_p,
    padic_sqrt,
    padic_trace,
)

from conftest import field_and_scalars, fields, scalars


@given(field_and_scalars(3))
def test_ring_axioms(data):
    _, a, b, c = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == a.params.zero()


@given(field_and_scalars(2, nonzero=True))
def test_division_inverts_multiplication(data):
    _, a, b = data
    assert (a * b) / b == a
    assert a * a.inverse() == a.params.one()


@given(field_and_scalars(2))
def test_norm_is_ultrametric_and_multiplicative(data):
    _, a, b = data
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a + b).norm() <= max(a.norm(), b.norm())
    if a.norm() != b.norm():
        assert (a + b).norm() == max(a.norm(), b.norm())


@given(fields(), st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_rationals_embed(params, n, d):
    x = params(Fraction(n, d))
    if n == 0:
        assert x.is_zero()
        return
    v = 0
    while n % params.p == 0:
        n //= params.p
        v += 1
    while d % params.p == 0:
        d //= params.p
        v -= 1
    assert x.valuation == v
    assert x.norm() == Fraction(params.base) ** -v


def test_integer_expansion_digits():
    F = FieldParams(5)
    assert F(38).digits()[:3] == [3, 2, 1]
    assert F(-1).digits()[:4] == [4, 4, 4, 4]
    assert F(Fraction(1, 5)).valuation == -1


def test_norm_base_choice_for_extensions():
    assert FieldParams(3, 2).base == 9
    assert FieldParams(3, 2, norm_base="P").base == 3
    assert FieldParams(3, 2).uniformizer_power(1).norm() == Fraction(1, 9)


@given(field_and_scalars(1, nonzero=True))
def test_sqrt_of_square(data):
    params, a = data
    assume(params.p != 2)
    r = padic_sqrt(a * a)
    assert r * r == a * a
    assert r == a or r == -a


def test_sqrt_failures():
    F = FieldParams(5)
    with pytest.raises(NoRoot):
        padic_sqrt(F(2))
    with pytest.raises(NoRoot):
        padic_sqrt(F(5))
    F2 = FieldParams(2)
    assert padic_sqrt(F2(17)) ** 2 == F2(17)
    with pytest.raises(NoRoot):
        padic_sqrt(F2(3))


@given(field_and_scalars(2))
def test_character_is_additive(data):
    _, a, b = data
    lhs = character_phase(a + b)
    rhs = (character_phase(a) + character_phase(b)) % 1
    assert lhs == rhs


@given(fields(), st.integers(0, 5))
def test_character_trivial_on_integers(params, v):
    x = params(7).shift(v) + params.one()
    assert character_phase(x) == 0


def test_trace_of_one_is_degree():
    for p, f in ((2, 2), (3, 2), (5, 1)):
        F = FieldParams(p, f)
        assert padic_trace(F.one()) == F.rational_params()(f)


def test_moduli_are_irreducible():
    assert is_irreducible_mod_p((1, 1, 1), 2)
    assert not is_irreducible_mod_p((1, 0, 1), 2)
    with pytest.raises(ValueError):
        FieldParams(4)


def test_mixing_fields_is_rejected():
    with pytest.raises(ParamsMismatch):
        FieldParams(3)(1) + FieldParams(5)(1)


def test_vector_norm_is_max():
    F = FieldParams(3)
    v = PadicVector([F(9), F(Fraction(1, 3)), F(2)])
    assert v.norm() == 3
    assert v.valuation() == -1
    assert v.shift(1).norm() == 1
