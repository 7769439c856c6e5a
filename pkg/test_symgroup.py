#!/usr/bin/env python3
"""Test permutations, classes, Jucys-Murphy elements and the Frobenius characteristic"""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobenius import ShapeError
from symgroup import (
    all_permutations,
    centralizer,
    centralizer_order,
    class_representative,
    class_sum,
    compose,
    conjugacy_data,
    conjugate,
    cycle,
    cycle_type,
    epsilon_generating_residual,
    identity,
    integer_partitions,
    inverse,
    jm_element,
    joint_orbits,
    jucys_identity_holds,
    length,
    orbits,
    sign,
)


def permutations_of(n_max: int):
    return st.integers(1, n_max).flatmap(lambda n: st.permutations(list(range(n)))).map(tuple)


def test_composition_applies_right_factor_first():
    assert compose(cycle(3, (1, 2)), cycle(3, (2, 3))) == cycle(3, (1, 2, 3))


def test_cycle_statistics():
    sigma = cycle(5, (1, 2, 3), (4, 5))
    assert cycle_type(sigma) == (3, 2)
    assert length(sigma) == 3
    assert sign(sigma) == -1
    assert orbits(sigma) == ((0, 1, 2), (3, 4))


def test_bad_cycle_is_rejected():
    with pytest.raises(ShapeError):
        cycle(3, (1, 4))


def test_integer_partitions_order():
    assert integer_partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert integer_partitions(0) == ((),)


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes_add_up(n):
    assert sum(Fraction(factorial(n), centralizer_order(shape)) for shape in integer_partitions(n)) == factorial(n)


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 1), (3,), (2, 2), (2, 1, 1), (4,)])
def test_centralizer_sizes(shape):
    assert len(centralizer(class_representative(shape))) == centralizer_order(shape)


def test_conjugacy_data_conjugates_representatives():
    for sigma, (rep, g) in conjugacy_data(4).items():
        assert conjugate(g, rep) == sigma


@pytest.mark.parametrize("n", range(1, 6))
def test_jucys_identity(n):
    assert jucys_identity_holds(n) is None


def test_frobenius_generating_identity():
    assert epsilon_generating_residual(4) == {}


def test_jm_elements():
    assert jm_element(1, 3).is_zero()
    assert len(jm_element(3, 3).terms) == 2
    with pytest.raises(ShapeError):
        jm_element(0, 3)


def test_class_algebra_product_in_S3():
    transpositions, three_cycles = class_sum((2, 1)), class_sum((3,))
    assert (transpositions * three_cycles).terms == transpositions.scale(2).terms


@settings(max_examples=50, deadline=None)
@given(permutations_of(6))
def test_inverse_and_identity(sigma):
    assert compose(sigma, inverse(sigma)) == identity(len(sigma))
    assert joint_orbits(sigma, identity(len(sigma))) == orbits(sigma)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.permutations(list(range(n))), st.permutations(list(range(n))))))
def test_conjugation_preserves_cycle_type(pair):
    h, sigma = (tuple(p) for p in pair)
    assert cycle_type(conjugate(h, sigma)) == cycle_type(sigma)
    assert sign(compose(h, sigma)) == sign(h) * sign(sigma)


def test_all_permutations_count():
    assert len(all_permutations(4)) == 24


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
