from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from graspstab import Contact, GraspModel

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"

THREE_PRELOAD = [[1.0, -0.5], [1.0, 0.0], [1.0, 0.5]]
FOUR_PRELOAD = [[1.0, 0.0]] * 4


def three_contact(preloaded: bool = False) -> GraspModel:
    contacts = [
        Contact([-1, 0], [-1, 0], 0.5),
        Contact([0, -1], [0, -1], 0.5),
        Contact([1, 0], [1, 0], 0.5),
    ]
    return GraspModel(contacts, preload=THREE_PRELOAD if preloaded else None)


def four_contact(preloaded: bool = False) -> GraspModel:
    positions = [(-1, 1), (-1, -1), (1, -1), (1, 1)]
    normals = [(-1, 0), (-1, 0), (1, 0), (1, 0)]
    contacts = [Contact(p, n, 0.5) for p, n in zip(positions, normals)]
    return GraspModel(contacts, preload=FOUR_PRELOAD if preloaded else None)


@pytest.fixture
def m3():
    return three_contact()


@pytest.fixture
def m3p():
    return three_contact(True)


@pytest.fixture
def m4():
    return four_contact()


@pytest.fixture
def m4p():
    return four_contact(True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
