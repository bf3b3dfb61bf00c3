"""Seeded generators of random distributions, channels and property cases.

Every case gets its own 64-bit seed spawned from the suite seed, so a failing
case can be replayed on its own.
"""

from collections.abc import Sequence
from math import prod

import numpy as np

from ..models.network import NetworkSpec, input_names, output_names
from ..models.probability import Alphabet, Channel, JointPMF, VariableLike
from ..models.source import SourceSpec, source_names


def case_seeds(seed: int, count: int) -> list[int]:
    """``count`` independent 64-bit seeds derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pmf(rng: np.random.Generator, variables: Sequence[VariableLike]) -> JointPMF:
    """Joint pmf drawn uniformly from the simplex."""
    sizes = [size if isinstance(size, int) else size.size for _, size in variables]
    table = rng.dirichlet(np.ones(prod(sizes)))
    return JointPMF(variables, table / table.sum())


def random_channel(
    rng: np.random.Generator,
    inputs: Sequence[VariableLike],
    outputs: Sequence[VariableLike],
) -> Channel:
    """Channel whose rows are drawn uniformly from the simplex."""
    in_count = prod(size if isinstance(size, int) else size.size for _, size in inputs)
    out_count = prod(size if isinstance(size, int) else size.size for _, size in outputs)
    rows = rng.dirichlet(np.ones(out_count), size=in_count)
    return Channel(inputs, outputs, rows / rows.sum(axis=1, keepdims=True))


def random_network(rng: np.random.Generator, m: int = 2, input_size: int = 2, output_size: int = 2) -> NetworkSpec:
    channel = random_channel(
        rng,
        [(name, input_size) for name in input_names(m)],
        [(name, output_size) for name in output_names(m)],
    )
    return NetworkSpec.from_channel(channel)


def random_input(rng: np.random.Generator, net: NetworkSpec) -> JointPMF:
    return random_pmf(rng, list(zip(net.input_names, net.input_sizes, strict=True)))


def random_relays(rng: np.random.Generator, net: NetworkSpec, relay_sizes: Sequence[int]) -> tuple[Channel, ...]:
    """Deterministic per-party maps X'_i = g_i(Y_i) with random images."""
    relays = []
    for i, (alphabet, size) in enumerate(zip(net.output_alphabets, relay_sizes, strict=True), start=1):
        images = rng.integers(0, size, size=alphabet.size)
        relays.append(
            Channel.deterministic(
                [(f"Y{i}", alphabet)], [(f"Xp{i}", size)], lambda y, images=images: (int(images[y[0]]),)
            )
        )
    return tuple(relays)


def binary_symmetric(name_in: str, name_out: str, crossover: float) -> Channel:
    return Channel(
        [(name_in, 2)],
        [(name_out, 2)],
        [[1 - crossover, crossover], [crossover, 1 - crossover]],
    )


def random_posts(rng: np.random.Generator, net: NetworkSpec) -> tuple[Channel, ...]:
    """Per-party post-processors: binary-symmetric for binary outputs, Dirichlet rows otherwise."""
    posts = []
    for i, alphabet in enumerate(net.output_alphabets, start=1):
        if alphabet.size == 2:
            posts.append(binary_symmetric(f"Y{i}", f"Z{i}", float(rng.uniform(0.0, 0.5))))
        else:
            posts.append(random_channel(rng, [(f"Y{i}", alphabet)], [(f"Z{i}", alphabet)]))
    return tuple(posts)


def random_source(rng: np.random.Generator, m: int = 2, source_size: int = 2, message_size: int = 2) -> SourceSpec:
    """Random source law with uniformly drawn message functions."""
    points = source_size**m
    return SourceSpec(
        m=m,
        source_alphabets=(Alphabet(size=source_size),) * m,
        joint=random_pmf(rng, [(name, source_size) for name in source_names(m)]),
        message_alphabets=(Alphabet(size=message_size),) * m,
        functions=tuple(tuple(int(v) for v in rng.integers(0, message_size, size=points)) for _ in range(m)),
    )
