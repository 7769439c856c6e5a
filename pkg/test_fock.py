#!/usr/bin/env python3
"""Test the Fock space models: Heisenberg relations, the p_rho(n) basis and coordinates"""

from fractions import Fraction

import pytest

from conftest import load
from frobenius import ShapeError
from fock import (
    SAMPLE_PAIRS,
    SAMPLE_TRIPLES,
    FockVector,
    MonomialFock,
    OrbifoldFock,
    PartitionFunction,
    RationalSpan,
    apply_word,
    bracket_residual,
    fock_dimension,
    format_coordinates,
    matrix_rank,
    number_operator,
    orbifold_dimension,
    parse_ops,
    reduce_monomials,
    reduced_basis,
    sample_tuples,
)
from orbiring import OrbElement
from symgroup import centralizer_order, class_members, integer_partitions, orbits


@pytest.mark.parametrize("name", ["point", "P2", "odd"])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_fock_and_orbifold_dimensions_agree(name, n):
    algebra = load(name)
    assert orbifold_dimension(algebra, n) == fock_dimension(algebra, n)


def test_known_dimensions(point, P2, odd):
    assert [fock_dimension(point, n) for n in range(5)] == [1, 1, 2, 3, 5]
    assert [fock_dimension(P2, n) for n in range(4)] == [1, 3, 9, 22]
    assert fock_dimension(odd, 2) == 12


def test_reduced_basis_of_point(point):
    assert reduced_basis(point, 3) == [PartitionFunction(()), PartitionFunction(((0, 2),)), PartitionFunction(((0, 3),))]


def test_partition_function_validation(P2, odd):
    with pytest.raises(ShapeError):
        PartitionFunction.from_mapping(odd, {"a": [1, 1]})
    with pytest.raises(ShapeError):
        PartitionFunction.from_mapping(P2, {"x": [0]})
    rho = PartitionFunction.from_mapping(P2, {"x": [2, 1], "pt": [1]})
    assert rho.norm == 4
    assert rho.length == 3
    assert rho.to_mapping(P2) == {"x": [1, 2], "pt": [1]}


@pytest.mark.parametrize("shape", [s for n in range(1, 5) for s in integer_partitions(n)])
def test_dual_pairing_is_the_centralizer_order_on_a_point(point, shape):
    monomial = tuple((0, r) for r in sorted(shape))
    assert MonomialFock(point).dual_pairing(monomial) == centralizer_order(shape)


def test_point_classes_are_scaled_class_sums(point):
    fock = OrbifoldFock(point)
    value = fock.p_rho(PartitionFunction.of([(0, 2)]), 3)
    expected = OrbElement(point, 3, {s: {(0,) * len(orbits(s)): Fraction(2)} for s in class_members((2, 1))})
    assert value == expected


def test_unit_class_is_the_ring_unit(P2):
    fock = OrbifoldFock(P2)
    for n in range(4):
        assert fock.unit_class(n) == OrbElement.unit(P2, n)


def test_p_rho_vanishes_below_its_norm(P2):
    fock = OrbifoldFock(P2)
    assert fock.p_rho(PartitionFunction.of([(1, 2)]), 1).is_zero()


def test_coordinates_recover_the_basis(P2):
    fock = OrbifoldFock(P2)
    for rho in reduced_basis(P2, 2):
        assert fock.coordinates(fock.p_rho(rho, 2), check=True) == {rho: Fraction(1)}


def test_odd_creations_anticommute(odd):
    model = MonomialFock(odd)
    a, b = odd.element("a"), odd.element("b")
    ab = model.create(1, a, model.create(1, b, model.vacuum()))
    ba = model.create(1, b, model.create(1, a, model.vacuum()))
    assert ab == model.scale(ba, -1)
    assert model.create(1, a, model.create(1, a, model.vacuum())) == {}


def test_annihilation_pairs_with_the_created_class(P2):
    model = MonomialFock(P2)
    v = model.create(1, P2.element("1"), model.vacuum())
    assert model.annihilate(1, P2.element("pt"), v) == model.vacuum()
    assert model.annihilate(1, P2.element("x"), v) == {}


def test_models_agree_on_an_operator_word(P2):
    word = parse_ops(P2, "p(1,x) p(-2,x) p(-1,x)")
    monomials = MonomialFock(P2)
    fock = OrbifoldFock(P2)
    expected = {((1, 2),): Fraction(1)}
    assert apply_word(monomials, word, monomials.vacuum()) == expected
    result = apply_word(fock, word, fock.vacuum())
    assert fock.monomial_coordinates(result.level(2)) == expected
    assert format_coordinates(P2, reduce_monomials(P2, expected)) == {"x(2)": "1/1"}


def test_bad_operator_words(P2):
    with pytest.raises(ShapeError):
        parse_ops(P2, "q(1,x)")
    with pytest.raises(ShapeError):
        parse_ops(P2, "p(1,y)")


@pytest.mark.parametrize("name", ["P2", "odd"])
def test_heisenberg_relations_on_monomials(name):
    algebra = load(name)
    model = MonomialFock(algebra)
    for c in range(algebra.dim):
        v = model.create(1, {c: Fraction(1)}, model.vacuum())
        assert bracket_residual(model, Fraction(1), 2, v) is None


def test_heisenberg_relations_on_the_orbifold_model(P2):
    fock = OrbifoldFock(P2)
    v = FockVector.of(fock.p_rho(PartitionFunction.of([(1, 1)]), 1))
    assert bracket_residual(fock, Fraction(1), 2, v) is None


def test_number_operator_counts_points(P2):
    fock = OrbifoldFock(P2)
    for rho in reduced_basis(P2, 2):
        v = FockVector.of(fock.p_rho(rho, 2))
        assert number_operator(fock, v, 2) == v.scale(2)


def test_fock_vector_arithmetic(P2):
    fock = OrbifoldFock(P2)
    v = fock.vacuum() + FockVector.of(fock.unit_class(2))
    assert sorted(v.levels) == [0, 2]
    assert (v - v).is_zero()
    assert fock.split_levels(v)[2] == FockVector.of(fock.unit_class(2))


def test_rational_span():
    span = RationalSpan()
    assert span.insert({"a": Fraction(1), "b": Fraction(1)})
    assert span.insert({"b": Fraction(1)})
    assert not span.insert({"a": Fraction(2), "b": Fraction(2)})
    assert span.rank == 2
    assert span.express({"a": Fraction(1)}) == {0: Fraction(1), 1: Fraction(-1)}
    assert span.express({"c": Fraction(1)}) is None


def test_sample_tuples_cover_the_whole_basis(P2):
    assert sample_tuples(["a", "b", "c"], 2, 20) == [(u, v) for u in "abc" for v in "abc"]
    basis = reduced_basis(P2, 3)
    pairs = sample_tuples(basis, 2, SAMPLE_PAIRS, seed="x")
    assert len(set(pairs)) == SAMPLE_PAIRS == 20
    assert pairs == sample_tuples(basis, 2, SAMPLE_PAIRS, seed="x")
    assert any(rho not in basis[:4] for pair in pairs for rho in pair)
    triples = sample_tuples(basis, 3, SAMPLE_TRIPLES, seed=1)
    assert len(set(triples)) == SAMPLE_TRIPLES == 10
    assert all(len(t) == 3 and set(t) <= set(basis) for t in triples)


def test_matrix_rank_agrees_with_the_incremental_span():
    vectors = [{"a": Fraction(1), "b": Fraction(2)}, {"a": Fraction(2), "b": Fraction(4)}, {"c": Fraction(1, 3)}]
    span = RationalSpan()
    for v in vectors:
        span.insert(v)
    assert matrix_rank(vectors) == span.rank == 2
    assert matrix_rank([]) == 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
