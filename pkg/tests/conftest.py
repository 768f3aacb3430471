"""Shared pytest fixtures."""

import pytest

from qpulba.machine import MachineSpec


@pytest.fixture
def spec_1_1() -> MachineSpec:
    return MachineSpec.create(1, 1)


@pytest.fixture
def spec_2_1() -> MachineSpec:
    return MachineSpec.create(2, 1)


@pytest.fixture
def spec_1_2() -> MachineSpec:
    return MachineSpec.create(1, 2)


@pytest.fixture
def spec_2_2() -> MachineSpec:
    return MachineSpec.create(2, 2)
