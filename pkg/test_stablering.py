#!/usr/bin/env python3
"""Test the stable ring: fitting, the point constants, the table store, shapes and generators"""

from fractions import Fraction

import pytest

from frobenius import ConsistencyError, ShapeError
from fock import PartitionFunction
from jucys import JucysClasses
from stablering import (
    GeneratorReport,
    StableEntry,
    StableStore,
    StableTable,
    StableTabulator,
    expand_constants,
    expand_O_product,
    falling,
    fit_stable_expansion,
    has_shape_witness,
    o_product,
    point_oracle_residual,
    stability_cases,
    universality_cases,
    verify_generators,
)


def pf(*parts):
    return PartitionFunction.of(parts)


EMPTY = pf()
P1, P2_, P3 = pf((0, 1)), pf((0, 2)), pf((0, 3))
P11, P21, P22 = pf((0, 1), (0, 1)), pf((0, 1), (0, 2)), pf((0, 2), (0, 2))


def assert_cases_pass(cases):
    assert cases
    failures = [(c.id, r.residual) for c in cases for r in [c.run()] if not r.passed]
    assert failures == []


def test_falling_factorials():
    assert falling(5, 2) == 20
    assert falling(3, 0) == 1
    assert falling(2, 3) == 0


def test_expand_constants_adds_unit_parts():
    assert expand_constants({P1: Fraction(1)}, 4, 0) == {EMPTY: Fraction(4)}
    assert expand_constants({P3: Fraction(1)}, 2, 0) == {}


def test_fit_recovers_known_constants():
    constants = {P11: Fraction(2), P3: Fraction(4), P22: Fraction(1)}
    fit = fit_stable_expansion(lambda n: expand_constants(constants, n, 0), 4, 0)
    assert fit.stable
    assert fit.constants == constants
    assert fit.window == (4, 5, 6)


def test_fit_detects_growth_beyond_the_bound():
    fit = fit_stable_expansion(lambda n: {EMPTY: Fraction(n ** 3)} if n else {}, 2, 0)
    assert not fit.stable
    assert fit.residual.startswith("n=3")


def test_fit_detects_support_beyond_the_bound():
    fit = fit_stable_expansion(lambda n: {P3: Fraction(1)} if n >= 3 else {}, 2, 0)
    assert not fit.stable
    assert fit.residual.startswith("support")


def test_point_structure_constants(point):
    tabulator = StableTabulator(point)
    assert tabulator.structure_constants(P2_, P2_).constants == {P11: Fraction(2), P3: Fraction(4), P22: Fraction(1)}
    assert tabulator.structure_constants(P1, P2_).constants == {P21: Fraction(1), P2_: Fraction(2)}
    assert tabulator.structure_constants(EMPTY, EMPTY).constants == {EMPTY: Fraction(1)}


def test_point_oracle(point):
    entry = StableTabulator(point).structure_constants(P2_, P2_)
    for n in range(2, 5):
        assert point_oracle_residual(entry, n) is None


def test_level_product_at_n3(point):
    assert StableTabulator(point).level_product(P2_, P2_, 3) == {EMPTY: Fraction(12), P3: Fraction(4)}


def test_store_is_idempotent_and_rejects_conflicts(tmp_path, P2):
    store = StableStore(tmp_path, P2)
    rho, sigma = pf((1, 1)), pf((1, 2))
    entry = StableEntry(rho, sigma, {pf((1, 3)): Fraction(1, 2)}, (3, 4, 5), True)
    assert store.get(rho, sigma) is None
    path = store.put(entry)
    assert store.put(entry) == path
    assert store.get(rho, sigma) == entry
    changed = StableEntry(rho, sigma, {pf((1, 3)): Fraction(1)}, (3, 4, 5), True)
    with pytest.raises(ConsistencyError):
        store.put(changed)


def test_tabulator_writes_through_the_store(tmp_path, point):
    store = StableStore(tmp_path, point)
    StableTabulator(point, store=store).structure_constants(P1, P1)
    assert store.get(P1, P1).constants == {P11: Fraction(1), P1: Fraction(1)}


def test_table_multiply_and_rows(point):
    table = StableTabulator(point).tabulate(2)
    assert table.multiply({P1: Fraction(1)}, {P1: Fraction(1)}) == {P11: Fraction(1), P1: Fraction(1)}
    assert table.multiply({P2_: Fraction(1)}, {P1: Fraction(1)}) is None
    assert ["-", "-", "-", "1/1"] in table.rows()
    assert StableTable(point).to_dict()["class_order"] == ["1"]


def test_stability_suite_on_a_point(point):
    assert_cases_pass(stability_cases(StableTabulator(point), 2, oracle_max_n=4))


def test_shape_witness():
    assert has_shape_witness(P2_, 3, (1,), 0, True)
    assert not has_shape_witness(pf((0, 5)), 5, (1,), 0, True)


def test_goulden_class_expansion(point):
    classes = JucysClasses(point)
    expansion = expand_O_product(classes, (1,), [point.unit_element()], 3)
    assert expansion.coordinates == {P2_: Fraction(-1, 2)}
    assert expansion.violations == []
    with pytest.raises(ShapeError):
        o_product(classes, (1, 2), [point.unit_element()], 3)


def test_universality_on_a_point(point):
    assert_cases_pass(universality_cases(JucysClasses(point), 1, 3, max_s=1))


@pytest.mark.parametrize("family", ["O", "P"])
def test_generators_span_the_ring(point, P2, family):
    for algebra, n in ((point, 3), (P2, 2)):
        report = verify_generators(JucysClasses(algebra), n, family)
        assert report.passed
        assert report.rank == report.confirmed_rank == report.target


def test_generator_report_needs_the_confirmed_rank():
    assert GeneratorReport("O", 3, 3, 3, 5).passed
    assert GeneratorReport("O", 3, 3, 3, 5, confirmed_rank=3).passed
    assert not GeneratorReport("O", 3, 3, 3, 5, confirmed_rank=2).passed
    assert not GeneratorReport("O", 3, 3, 2, 5, confirmed_rank=2).passed


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
