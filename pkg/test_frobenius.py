#!/usr/bin/env python3
"""Test the Frobenius algebra layer: loading, validation, products, Euler classes and diagonal transfers"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from frobenius import AlgebraError, EngineError, FrobeniusAlgebra, ShapeError, format_rational, parse_rational


def test_rationals_round_trip_as_num_den():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(4) == Fraction(4)
    assert format_rational(Fraction(1, 2)) == "1/2"
    assert format_rational(2) == "2/1"


def test_error_hierarchy():
    assert issubclass(AlgebraError, EngineError)
    assert issubclass(AlgebraError, ValueError)
    assert issubclass(ShapeError, ValueError)


def test_point_algebra(point):
    assert point.d == 0
    assert point.dim == 1
    assert point.euler_class() == {0: Fraction(1)}


def test_P2_products_and_euler(P2):
    x, pt = P2.element("x"), P2.element("pt")
    assert P2.multiply(x, x) == pt
    assert P2.multiply(x, pt) == {}
    assert P2.euler_class() == {P2.index("pt"): Fraction(3)}
    assert P2.integrate(P2.euler_class()) == 3
    assert P2.multiply(P2.euler_class(), P2.euler_class()) == {}


def test_P2_dual_basis(P2):
    assert P2.dual_element(P2.index("1")) == P2.element("pt")
    assert P2.dual_element(P2.index("x")) == P2.element("x")
    for i in range(P2.dim):
        for j in range(P2.dim):
            assert P2.pairing(P2.dual_element(i), {j: Fraction(1)}) == (1 if i == j else 0)


def test_odd_algebra_is_super_commutative(odd):
    a, b, pt = odd.index("a"), odd.index("b"), odd.index("pt")
    assert odd.basis_product(a, b) == {pt: Fraction(1)}
    assert odd.basis_product(b, a) == {pt: Fraction(-1)}
    assert odd.basis_product(a, a) == {}
    assert odd.euler_class() == {}


def test_K3_euler_characteristic(K3):
    assert K3.dim == 24
    assert K3.integrate(K3.euler_class()) == 24


def test_element_parsing(P2):
    assert P2.element({"x": "1/2", "pt": 2}) == {1: Fraction(1, 2), 2: Fraction(2)}
    with pytest.raises(ShapeError):
        P2.index("y")


def test_to_dict_round_trip_keeps_fingerprint(P2, odd):
    for algebra in (P2, odd):
        assert FrobeniusAlgebra.from_dict(algebra.to_dict()).fingerprint() == algebra.fingerprint()


def _point_data(**overrides):
    data = {
        "name": "bad",
        "complex_dim": 0,
        "basis": [{"label": "1", "degree": 0}],
        "unit": "1",
        "mult": [],
        "integral": ["1/1"],
    }
    data.update(overrides)
    return data


def test_invalid_algebras_are_rejected():
    with pytest.raises(AlgebraError):
        FrobeniusAlgebra.from_dict(_point_data(integral=["0/1"]))
    with pytest.raises(AlgebraError):
        FrobeniusAlgebra.from_dict(_point_data(euler={"1": "2/1"}))
    with pytest.raises(AlgebraError):
        FrobeniusAlgebra.from_dict(_point_data(complex_dim=1))
    with pytest.raises(AlgebraError):
        FrobeniusAlgebra.from_dict(_point_data(mult=[["1", "z", "1", "1/1"]]))
    data = _point_data()
    del data["integral"]
    with pytest.raises(AlgebraError):
        FrobeniusAlgebra.from_dict(data)


def test_euler_is_multiplied_diagonal(P2):
    assert P2.multiply_tensor(P2.tau_push_terms(2, P2.unit_element())) == P2.euler_class()


def test_kunneth_signs(P2, odd):
    assert P2.kunneth_terms({(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}) == {(1, 1): Fraction(1)}
    a, b = odd.index("a"), odd.index("b")
    assert odd.kunneth_terms({(0, a): Fraction(1)}, {(b, 0): Fraction(1)}) == {(b, a): Fraction(-1)}


_P2 = load("P2")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_tau_push_is_adjoint_to_multiplication(a, i, j):
    tau = _P2.tau_push_terms(2, {a: Fraction(1)})
    lhs = _P2.tensor_pairing(tau, {(i, j): Fraction(1)})
    rhs = _P2.integrate(_P2.multiply({a: Fraction(1)}, _P2.multiply({i: Fraction(1)}, {j: Fraction(1)})))
    assert lhs == rhs


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
