"""Общие фикстуры тестов."""
import pytest

from core.space import Space
from schemas.measures import load_measure
from services.gallery import data_dir


@pytest.fixture
def unit() -> Space:
    """[0, 1]"""
    return Space.real_line(0, 1, True, True)


@pytest.fixture
def naturals() -> Space:
    return Space.discrete_nat()


@pytest.fixture
def cofinite() -> Space:
    return Space.cofinite_nat()


@pytest.fixture
def exm4_pair():
    """μ = ½·Лебег + ½·δ_{2/3}, ν = 1_{[0,1/3) ∪ (2/3,1]}·Лебег + ⅓·δ_{1/3} на [0, 1]."""
    return load_measure(data_dir() / "exm4_mu.json"), load_measure(data_dir() / "exm4_nu.json")
