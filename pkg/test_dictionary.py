#!/usr/bin/env python3
"""Test the deformed Heisenberg operators, the Hilbert-side transport and the Chern generating function"""

from fractions import Fraction

import pytest

from frobenius import ConfigError, ShapeError
from fock import MonomialFock, OrbifoldFock, PartitionFunction, bracket_residual, reduced_basis
from jucys import JucysClasses
from dictionary import (
    DeformParam,
    DeformedModel,
    GaussianRational,
    chern_cases,
    chern_generating,
    cubic_term_residual,
    deform_cases,
    dictionary_cases,
    hilbert_class,
    hilbert_product,
    shift_number,
    theta_tilde,
)


def assert_cases_pass(cases):
    assert cases
    failures = [(c.id, r.residual) for c in cases for r in [c.run()] if not r.passed]
    assert failures == []


def test_rational_deformation_factors():
    param = DeformParam(Fraction(2))
    assert param.t == 64
    assert param.creation(2) == 16
    assert param.annihilation(2) == Fraction(1, 4)
    assert param.central(2) == 4
    assert param.split_factor(2) == 64
    assert param.label == "s=2/1"
    assert DeformParam.parse("1/2").s == Fraction(1, 2)
    with pytest.raises(ShapeError):
        DeformParam(Fraction(0))


def test_minus_one_rule():
    param = DeformParam.minus_one()
    assert param.t == -1
    assert (param.creation(2), param.annihilation(2), param.central(2), param.split_factor(2)) == (1, -1, -1, -1)
    assert param.label == "t=-1"


def test_minus_one_needs_d_two_mod_four(point, P2):
    with pytest.raises(ConfigError):
        DeformParam.minus_one().check(point)
    DeformParam.minus_one().check(P2)


@pytest.mark.parametrize("param, central", [(DeformParam(Fraction(2)), Fraction(4)), (DeformParam.minus_one(), Fraction(-1))])
def test_deformed_heisenberg_central_term(P2, param, central):
    model = DeformedModel(MonomialFock(P2), param)
    for c in range(P2.dim):
        v = model.base.create(1, {c: Fraction(1)}, model.vacuum())
        assert bracket_residual(model, central, 2, v) is None


def test_gaussian_rationals():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert GaussianRational.i_power(3) == GaussianRational(0, -1)
    assert (GaussianRational(1, 1) / GaussianRational(1, -1)) == i
    assert str(GaussianRational(1, -2)) == "1/1-2/1i"
    assert str(GaussianRational(Fraction(1, 2))) == "1/2"
    assert not GaussianRational()
    with pytest.raises(ZeroDivisionError):
        i / 0


def test_theta_tilde_phases():
    rho = PartitionFunction.of([(1, 3), (2, 1)])
    assert shift_number(rho) == 2
    assert theta_tilde({rho: Fraction(1)}) == {rho: GaussianRational(-1)}
    assert theta_tilde({PartitionFunction.of([(1, 2)]): Fraction(2)}) == {PartitionFunction.of([(1, 2)]): GaussianRational(0, 2)}


def test_hilbert_product_unit_and_guard(point, P2):
    fock = OrbifoldFock(P2)
    unit = {PartitionFunction(): Fraction(1)}
    for rho in reduced_basis(P2, 2)[:5]:
        assert hilbert_product(fock, unit, {rho: Fraction(1)}, 2) == {rho: Fraction(1)}
    with pytest.raises(ConfigError):
        hilbert_product(OrbifoldFock(point), unit, unit, 1)


def test_hilbert_classes_need_t_minus_one(P2):
    with pytest.raises(ConfigError):
        hilbert_class(JucysClasses(P2, 1), 1, P2.unit_element(), 2)
    assert hilbert_class(JucysClasses(P2, -1), 0, P2.unit_element(), 2) == {PartitionFunction(): Fraction(2)}


@pytest.mark.parametrize("param", [DeformParam(Fraction(2)), DeformParam(Fraction(-1, 3)), DeformParam.minus_one()])
def test_cubic_split_and_join_terms(P2, param):
    assert cubic_term_residual(P2, param, 4) is None


def test_chern_series_low_levels(P2):
    series = chern_generating(P2, P2.element("x"), 2, 2)
    assert series[0].coefficient(0) == {(): Fraction(1)}
    assert series[1].terms == {0: {((0, 1),): Fraction(1)}, 1: {((1, 1),): Fraction(1)}}
    assert series[2].terms == {
        0: {((0, 1), (0, 1)): Fraction(1, 2)},
        1: {((0, 1), (1, 1)): Fraction(1), ((0, 2),): Fraction(-1, 2)},
        2: {((1, 1), (1, 1)): Fraction(1, 2), ((1, 2),): Fraction(-1, 2)},
    }
    with pytest.raises(ShapeError):
        chern_generating(P2, P2.element("pt"), 2, 2)


def test_chern_identities(P2):
    assert_cases_pass(chern_cases(P2, P2.element("x"), 2, 2))


def test_deformation_suite(P2):
    assert_cases_pass(deform_cases(P2, [DeformParam(Fraction(2)), DeformParam.minus_one()], 1, 1, 1))


def test_dictionary_suite(P2):
    assert_cases_pass(dictionary_cases(P2, 2, max_k=1, max_mode=1))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
