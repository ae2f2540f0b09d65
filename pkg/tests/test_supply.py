import pytest
from hypothesis import given

from gen import supplies, world
from lindep.diagnostics import LinDepError
from lindep.supply import (
    assoc_inv,
    check_production,
    endpoints,
    pow_production,
    tensor_pow_distr,
    unitl,
    unitl_inv,
)
from lindep.syntax import (
    Assoc,
    Comp,
    Dupl,
    Empty,
    Erase,
    Id,
    Inl,
    Iota,
    Pow,
    SecInl,
    Swap,
    Tensor,
    TensorF,
    Unitr,
    Var,
    numeral,
)

ENV, CTX = world()
X, Y = Iota(Var(2)), Iota(Var(1))


def test_basic_endpoints():
    assert endpoints(ENV, CTX, Swap(X, Y)) == (Tensor(X, Y), Tensor(Y, X))
    assert endpoints(ENV, CTX, Unitr(X)) == (Tensor(X, Empty()), X)
    assert endpoints(ENV, CTX, SecInl(Var(2))) == (Iota(Inl(Var(2))), X)
    assert endpoints(ENV, CTX, Assoc(X, Y, X))[0] == Tensor(Tensor(X, Y), X)


def test_composition_must_match():
    with pytest.raises(LinDepError):
        endpoints(ENV, CTX, Comp(Swap(X, Y), Swap(X, Y)))


def test_check_production_rejects_wrong_target():
    with pytest.raises(LinDepError):
        check_production(ENV, CTX, Swap(X, Y), Tensor(X, Y), Tensor(X, Y))


@given(supplies(), supplies(), supplies())
def test_assoc_inverse(a, b, c):
    src = Tensor(a, Tensor(b, c))
    check_production(ENV, CTX, Comp(Assoc(a, b, c), assoc_inv(a, b, c)), src, src)


@given(supplies())
def test_left_units(d):
    check_production(ENV, CTX, Comp(unitl(d), unitl_inv(d)), d, d)


@given(supplies())
def test_pow_of_identity(d):
    for k in range(4):
        p = pow_production(ENV, CTX, Id(d), numeral(k))
        check_production(ENV, CTX, p, Pow(d, numeral(k)), Pow(d, numeral(k)))


def test_pow_open_multiplicity_needs_identity():
    with pytest.raises(LinDepError):
        pow_production(ENV, CTX, Swap(X, Y), Var(0))


def test_distr_small():
    p = tensor_pow_distr(ENV, numeral(2), numeral(1), X, Y)
    check_production(ENV, CTX, p, Tensor(Pow(X, numeral(2)), Pow(Y, numeral(2))), Pow(Tensor(X, Pow(Y, numeral(1))), numeral(2)))


def test_distr_needs_numerals():
    with pytest.raises(LinDepError):
        tensor_pow_distr(ENV, Var(0), numeral(1), X, Y)


def test_tensor_functor():
    p = TensorF(Swap(X, Y), Id(X))
    assert endpoints(ENV, CTX, p) == (Tensor(Tensor(X, Y), X), Tensor(Tensor(Y, X), X))


def test_exponential_rules_have_endpoints():
    src, tgt = endpoints(ENV, CTX, Dupl(X))
    assert src != tgt
    src, tgt = endpoints(ENV, CTX, Erase(X))
    assert tgt == Empty()
