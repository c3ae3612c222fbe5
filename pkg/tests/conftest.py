import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from liepair.liealg import chevalley_algebra
from liepair.rootsys import build_root_system

_cache = {}


def algebra(tag: str):
    """Chevalley algebras are immutable; share them across all tests."""
    if tag not in _cache:
        _cache[tag] = chevalley_algebra(build_root_system(tag[0], int(tag[1:])))
    return _cache[tag]


@pytest.fixture
def a1():
    return algebra("A1")


@pytest.fixture
def a2():
    return algebra("A2")


@pytest.fixture
def a3():
    return algebra("A3")


@pytest.fixture
def b2():
    return algebra("B2")


@pytest.fixture
def b3():
    return algebra("B3")


@pytest.fixture
def g2():
    return algebra("G2")
