#!/usr/bin/env python3
"""Test the Jucys-Murphy classes, the Goulden operator and the commutator identities"""

from fractions import Fraction

import pytest

from frobenius import ShapeError
from fock import OrbifoldFock, PartitionFunction
from jucys import (
    HbarSeries,
    JucysClasses,
    O_commute_cases,
    comm_cases,
    cubic_cases,
    eta_cases,
    jucys_cases,
    level_basis,
)
from orbiring import OrbElement, identity_tensor, is_invariant
from symgroup import all_permutations, orbits


def assert_cases_pass(cases):
    assert cases
    failures = [(c.id, r.residual) for c in cases for r in [c.run()] if not r.passed]
    assert failures == []


def test_xi_elements(P2):
    classes = JucysClasses(P2)
    assert classes.xi(1, 3).is_zero()
    assert len(classes.xi(3, 3).components) == 2
    with pytest.raises(ShapeError):
        classes.xi(4, 3)


def test_O_zero_is_the_diagonal_class(P2):
    classes = JucysClasses(P2)
    x = P2.element("x")
    expected = identity_tensor(P2, 2, {0: x}) + identity_tensor(P2, 2, {1: x})
    assert classes.O(0, x, 2) == expected


def test_eta_on_a_point_is_the_sum_of_all_permutations(point):
    classes = JucysClasses(point)
    expected = OrbElement(point, 3, {s: {(0,) * len(orbits(s)): Fraction(1)} for s in all_permutations(3)})
    assert classes.eta(point.unit_element(), 3) == expected


def test_goulden_on_a_three_cycle(point):
    classes = JucysClasses(point)
    fock = OrbifoldFock(point)
    three = fock.p_rho(PartitionFunction.of([(0, 3)]), 3)
    two = fock.p_rho(PartitionFunction.of([(0, 2)]), 3)
    assert classes.goulden(three) == two.scale(-3)


def test_classes_are_invariant_with_expected_degree(P2):
    classes = JucysClasses(P2)
    cls = classes.O(2, P2.element("x"), 3)
    assert is_invariant(cls)
    assert cls.degree() == 2 * 2 + 2


def test_epsilon_constant_term(P2):
    classes = JucysClasses(P2)
    x = P2.element("x")
    series = classes.epsilon(x, 2)
    assert series.coefficient(0) == identity_tensor(P2, 2, {0: x, 1: x})
    assert series.coefficient(5) is None


def test_hbar_series_evaluation(P2):
    unit = OrbElement.unit(P2, 1)
    series = HbarSeries(1, {0: unit, 1: unit.scale(2)})
    assert series.evaluate(Fraction(1, 2)) == unit.scale(2)


def test_argument_errors(point):
    classes = JucysClasses(point)
    with pytest.raises(ShapeError):
        classes.O_hbar(point.unit_element(), 2)
    with pytest.raises(ShapeError):
        classes.P(2, point.unit_element(), 2)
    with pytest.raises(ShapeError):
        classes.O(-1, point.unit_element(), 2)


def test_level_basis_labels(P2):
    labels = [label for label, _ in level_basis(OrbifoldFock(P2), 1)]
    assert labels == ["p(-1,1)", "p(-1,x)", "p(-1,pt)"]


def test_cubic_description_of_the_goulden_operator(point, P2):
    assert_cases_pass(cubic_cases(JucysClasses(point), 3))
    assert_cases_pass(cubic_cases(JucysClasses(P2), 2))


def test_commutator_identity(P2):
    classes = JucysClasses(P2)
    gamma = P2.element({"1": 1, "x": 1})
    assert_cases_pass(comm_cases(classes, gamma, P2.element("x"), 1, 2))


def test_eta_and_epsilon_identities(P2):
    classes = JucysClasses(P2)
    assert_cases_pass(eta_cases(classes, P2.element({"1": 1, "x": 1}), P2.element("x"), 2))


def test_jucys_identities(P2):
    classes = JucysClasses(P2)
    assert_cases_pass(jucys_cases(classes, P2.element({"1": 1, "x": 1}), 2, 4))


def test_O_classes_commute(P2):
    assert_cases_pass(O_commute_cases(JucysClasses(P2), 1, 2))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
