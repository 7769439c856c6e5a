#!/usr/bin/env python3
"""Test the W-algebra operators J^p_n, their field form, zero modes and the bracket table"""

from fractions import Fraction

import pytest

from frobenius import ConfigError
from fock import MonomialFock, OrbifoldFock, PartitionFunction
from jucys import JucysClasses
from orbiring import invariant_product
from suites import vertex_ring_cases, zeromode_commute_cases
from vertexw import (
    GeneralizedPartition,
    J_op,
    J_p_bracket_cases,
    Omega,
    VertexRing,
    eq41_cases,
    generalized_partitions,
    jacobi_cases,
    jacobi_residual,
    normal_mode,
    omega_antisymmetry,
    vertex_ring_product,
    w_bracket,
    walgebra_cases,
    zeromode_cases,
)


def assert_cases_pass(cases):
    assert cases
    failures = [(c.id, r.residual) for c in cases for r in [c.run()] if not r.passed]
    assert failures == []


def test_generalized_partition_statistics():
    lam = GeneralizedPartition((-1, -1, 2))
    assert lam.length == 3
    assert lam.size == 0
    assert lam.s == 6
    assert lam.bang == 2
    assert generalized_partitions(2, 0, 1) == (GeneralizedPartition((-1, 1)),)


def test_omega_values():
    assert Omega(1, 1, 2, 1) == 6
    assert Omega(1, 1, 1, 2) == -6
    grid = [(m, n, p, q) for m in range(-2, 3) for n in range(-2, 3) for p in range(4) for q in range(4)]
    assert omega_antisymmetry(grid) is None


def test_jacobi_identity_on_random_triples(P2):
    cases = jacobi_cases(P2, 2, 2)
    assert len(cases) == 10
    assert len({c.id for c in cases}) == 10
    assert_cases_pass(cases)


def test_jacobi_identity_with_odd_classes(odd):
    a, b = odd.index("a"), odd.index("b")
    assert jacobi_residual(odd, [(1, 1, a), (0, -1, b), (1, 0, a)], 3) is None
    assert_cases_pass(jacobi_cases(odd, 1, 1, max_n=2, samples=5, seed=7))


def test_jacobi_samples_are_seeded(P2):
    assert [c.id for c in jacobi_cases(P2, 3, 2, seed=4)] == [c.id for c in jacobi_cases(P2, 3, 2, seed=4)]
    assert [c.id for c in jacobi_cases(P2, 3, 2, seed=4)] != [c.id for c in jacobi_cases(P2, 3, 2, seed=5)]


def test_J_zero_is_the_heisenberg_field(P2):
    model = MonomialFock(P2)
    x = P2.element("x")
    created = J_op(P2, 0, -1, x).apply(model, model.vacuum())
    assert created == {((1, 1),): Fraction(1)}
    assert J_op(P2, 0, 1, P2.element("pt")).apply(model, model.create(1, P2.element("1"), model.vacuum())) == model.vacuum()


def test_degenerate_operators_vanish(P2):
    assert normal_mode(P2, 0, 0, P2.unit_element()).is_zero()
    assert J_op(P2, -1, 0, P2.unit_element()).is_zero()


def test_w_bracket_needs_positive_dimension(point):
    with pytest.raises(ConfigError):
        w_bracket(point, 1, 0, point.unit_element(), 1, 0, point.unit_element())
    with pytest.raises(ConfigError):
        walgebra_cases(point, 1, 1, 1)


def test_heisenberg_entry_of_the_bracket_table(P2):
    x = P2.element("x")
    assert w_bracket(P2, 0, 1, x, 0, -1, x).identity == 1
    assert w_bracket(P2, 0, 1, x, 0, 1, x).identity == 0


def test_field_form_agrees(P2):
    assert_cases_pass(eq41_cases(P2, 2, 1, 1))


def test_zero_modes_give_the_jucys_classes(P2):
    assert_cases_pass(zeromode_cases(JucysClasses(P2), 1, 2))


def test_bracket_with_heisenberg_modes(P2):
    assert_cases_pass(J_p_bracket_cases(JucysClasses(P2), 1, 1, 1))


def test_w_bracket_table_on_small_modes(P2):
    assert_cases_pass(walgebra_cases(P2, 1, 1, 1, classes=[0, 1]))


def test_vertex_ring_matches_the_orbifold_product(point):
    two = PartitionFunction.of([(0, 2)])
    expected = {PartitionFunction(()): Fraction(12), PartitionFunction(((0, 3),)): Fraction(4)}
    ring = VertexRing(point, 3)
    assert vertex_ring_product(point, {two: Fraction(1)}, {two: Fraction(1)}, 3, ring) == expected
    fock = OrbifoldFock(point)
    x = fock.p_rho(two, 3)
    assert fock.coordinates(invariant_product(x, x)) == expected


def test_zero_mode_ring_on_sampled_pairs(P2, odd):
    classes = JucysClasses(P2)
    cases = vertex_ring_cases(classes, 2) + zeromode_commute_cases(classes, 2)
    assert [c.id for c in cases] == ["zeromode/vertex-ring/n=1", "zeromode/vertex-ring/n=2", "zeromode/commute/n=1", "zeromode/commute/n=2"]
    assert_cases_pass(cases)
    assert_cases_pass(zeromode_commute_cases(JucysClasses(odd), 2, seed=3))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
