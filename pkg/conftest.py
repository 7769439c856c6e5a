#!/usr/bin/env python3
"""Model algebras shared by the test files"""

from pathlib import Path

import pytest

from frobenius import FrobeniusAlgebra

ALGEBRA_DIR = Path(__file__).parent / "algebras"


def load(name: str) -> FrobeniusAlgebra:
    return FrobeniusAlgebra.load(ALGEBRA_DIR / f"{name}.json")


@pytest.fixture(scope="session")
def point() -> FrobeniusAlgebra:
    return load("point")


@pytest.fixture(scope="session")
def P2() -> FrobeniusAlgebra:
    return load("P2")


@pytest.fixture(scope="session")
def odd() -> FrobeniusAlgebra:
    return load("odd")


@pytest.fixture(scope="session")
def K3() -> FrobeniusAlgebra:
    return load("K3")
