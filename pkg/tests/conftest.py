"""Test configuration and fixtures for cutset-region tests."""

from pathlib import Path

import numpy as np
import pytest

from cutset_region.models.probability import Alphabet, Channel, JointPMF
from cutset_region.models.source import DistortionSpec, SourceSpec
from cutset_region.services.networks import identity_network, one_way_pipe, two_way_pipes
from cutset_region.utils.problem_parser import parse_problem

FIXTURES = Path(__file__).parent / "fixtures"


def load_problem(name: str):
    """Parse a spec file from ``tests/fixtures``."""
    return parse_problem((FIXTURES / name).read_text(encoding="utf-8"))


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture
def rng():
    """Fresh seeded generator per test."""
    return np.random.default_rng(12345)


@pytest.fixture
def identity_m2():
    return identity_network(2)


@pytest.fixture
def clean_pipe():
    return one_way_pipe(0.0)


@pytest.fixture
def two_pipes():
    return two_way_pipes()


@pytest.fixture
def uniform_bit_source():
    """W1 a uniform bit, W2 constant; party 2 wants W1 and party 1 wants nothing."""
    return SourceSpec(
        m=2,
        source_alphabets=(Alphabet(size=2), Alphabet(size=1)),
        joint=JointPMF((("W1", 2), ("W2", 1)), [0.5, 0.5]),
        message_alphabets=(Alphabet(size=1), Alphabet(size=2)),
        functions=((0, 0), (0, 1)),
    )


@pytest.fixture
def lossless():
    return DistortionSpec.hamming((1, 2), (0.0, 0.0))


@pytest.fixture
def swap_source():
    """Two independent uniform bits; each party wants the other's bit."""
    return SourceSpec(
        m=2,
        source_alphabets=(Alphabet(size=2), Alphabet(size=2)),
        joint=JointPMF((("W1", 2), ("W2", 2)), np.full(4, 0.25)),
        message_alphabets=(Alphabet(size=2), Alphabet(size=2)),
        functions=((0, 1, 0, 1), (0, 0, 1, 1)),
    )


def flip_reconstruction(src: SourceSpec, flip: float) -> Channel:
    """Each Mhat_i equals M_i = f_i(W) flipped independently with probability ``flip``; binary messages."""
    m = src.m
    rows = []
    for w in np.ndindex(*src.source_sizes):
        messages = [src.function_table(i)[w] for i in range(1, m + 1)]
        row = np.ones(1)
        for message in messages:
            marginal = np.array([flip, flip])
            marginal[message] = 1.0 - flip
            row = np.multiply.outer(row, marginal).ravel()
        rows.append(row)
    return Channel(src.source_variables(), src.reconstruction_variables(), np.array(rows))
