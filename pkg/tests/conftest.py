from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, settings

import legsum as L

settings.register_profile(
    "fast",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
settings.load_profile("fast")

GRID_NAMES = ("U1", "C", "A", "B", "Aprime")


@pytest.fixture(scope="session")
def cat() -> dict[str, L.MountainRange]:
    return L.catalog()


@pytest.fixture(scope="session")
def A(cat):
    return cat["A"]


@pytest.fixture(scope="session")
def B(cat):
    return cat["B"]


@pytest.fixture(scope="session")
def C(cat):
    return cat["C"]


@pytest.fixture(scope="session")
def U1(cat):
    return cat["U1"]


@pytest.fixture(scope="session")
def Aprime(cat):
    return cat["Aprime"]


def make_grid_specs(cat, max_n: int = 3) -> list[L.SumSpec]:
    """Every multiset of catalog knots with 1 <= total multiplicity <= max_n."""
    out = []
    for n in range(1, max_n + 1):
        for combo in itertools.combinations_with_replacement(GRID_NAMES, n):
            parts = [(cat[nm], combo.count(nm)) for nm in GRID_NAMES if nm in combo]
            out.append(L.SumSpec.of(parts))
    return out


@pytest.fixture(scope="session")
def grid_specs(cat) -> list[L.SumSpec]:
    return make_grid_specs(cat)
