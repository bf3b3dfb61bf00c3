"""Builders for the small reference networks used in checks and fixtures."""

import numpy as np

from ..core.exceptions import InvalidParameterError
from ..models.network import NetworkSpec, input_names, output_names
from ..models.probability import Channel


def identity_network(m: int, size: int = 2) -> NetworkSpec:
    """Every party hears only its own input: Y_i = X_i."""
    inputs = tuple((name, size) for name in input_names(m))
    return NetworkSpec.from_channel(Channel.identity(inputs, output_names(m)))


def one_way_pipe(crossover: float = 0.0) -> NetworkSpec:
    """Two parties; Y2 is X1 through a BSC(crossover) and Y1 is always 0."""
    if not 0.0 <= crossover <= 1.0:
        raise InvalidParameterError(f"Crossover must lie in [0, 1], got {crossover}", details={"p": crossover})
    bsc = np.array([[1 - crossover, crossover], [crossover, 1 - crossover]])
    # axes (x1, x2, y1, y2)
    table = np.zeros((2, 2, 2, 2))
    table[:, :, 0, :] = bsc[:, None, :]
    return NetworkSpec.from_table([2, 2], [2, 2], table)


def two_way_pipes() -> NetworkSpec:
    """Two orthogonal clean bit pipes: Y1 = X2 and Y2 = X1."""
    inputs = (("X1", 2), ("X2", 2))
    outputs = (("Y1", 2), ("Y2", 2))
    return NetworkSpec.from_channel(Channel.deterministic(inputs, outputs, lambda x: (x[1], x[0])))


def input_independent_network(m: int, input_size: int = 2, output_size: int = 2) -> NetworkSpec:
    """Outputs are uniform and independent of every input."""
    shape = (input_size,) * m + (output_size,) * m
    return NetworkSpec.from_table([input_size] * m, [output_size] * m, np.full(shape, float(output_size) ** -m))


def two_user_mac(kernel) -> NetworkSpec:
    """Parties 1 and 2 send to party 3 through q(y3 | x1, x2).

    ``kernel`` is laid out as (x1, x2, y3). Party 3 has a single input
    symbol and parties 1 and 2 hear nothing.
    """
    kernel = np.asarray(kernel, dtype=float)
    if kernel.ndim != 3:
        raise InvalidParameterError(
            f"MAC kernel must be laid out as (x1, x2, y3), got {kernel.ndim} axes", details={"ndim": kernel.ndim}
        )
    a, b, c = kernel.shape
    return NetworkSpec.from_table([a, b, 1], [1, 1, c], kernel.reshape(a, b, 1, 1, 1, c))


def binary_adder_mac() -> NetworkSpec:
    """Y3 = X1 + X2 over binary inputs."""
    kernel = np.zeros((2, 2, 3))
    for x1 in range(2):
        for x2 in range(2):
            kernel[x1, x2, x1 + x2] = 1.0
    return two_user_mac(kernel)
