"""Network, permissible-set and rate-matrix models."""

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .probability import Alphabet, Channel, JointPMF


def input_names(m: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(1, m + 1))


def output_names(m: int) -> tuple[str, ...]:
    return tuple(f"Y{i}" for i in range(1, m + 1))


class NetworkSpec(BaseModel):
    """Memoryless network q(y1..ym | x1..xm).

    The channel inputs are named ``X1..Xm`` and its outputs ``Y1..Ym``, in
    party order, with the declared alphabets.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(..., ge=2)
    input_alphabets: tuple[Alphabet, ...]
    output_alphabets: tuple[Alphabet, ...]
    channel: Channel

    @model_validator(mode="after")
    def check_channel(self) -> "NetworkSpec":
        if len(self.input_alphabets) != self.m or len(self.output_alphabets) != self.m:
            raise ValueError(f"Network with m={self.m} needs {self.m} input and output alphabets")
        expected_inputs = tuple(zip(input_names(self.m), (a.size for a in self.input_alphabets), strict=True))
        expected_outputs = tuple(zip(output_names(self.m), (a.size for a in self.output_alphabets), strict=True))
        if tuple((n, a.size) for n, a in self.channel.inputs) != expected_inputs:
            raise ValueError(f"Channel inputs {self.channel.input_names} do not match {expected_inputs}")
        if tuple((n, a.size) for n, a in self.channel.outputs) != expected_outputs:
            raise ValueError(f"Channel outputs {self.channel.output_names} do not match {expected_outputs}")
        return self

    @classmethod
    def from_table(cls, input_sizes: list[int], output_sizes: list[int], table) -> "NetworkSpec":
        """Build a network from a dense table laid out as (x1..xm, y1..ym)."""
        m = len(input_sizes)
        inputs = tuple(zip(input_names(m), input_sizes, strict=True))
        outputs = tuple(zip(output_names(len(output_sizes)), output_sizes, strict=True))
        return cls.from_channel(Channel(inputs, outputs, table))

    @classmethod
    def from_channel(cls, channel: Channel) -> "NetworkSpec":
        return cls(
            m=len(channel.inputs),
            input_alphabets=tuple(a for _, a in channel.inputs),
            output_alphabets=tuple(a for _, a in channel.outputs),
            channel=channel,
        )

    @property
    def input_names(self) -> tuple[str, ...]:
        return input_names(self.m)

    @property
    def output_names(self) -> tuple[str, ...]:
        return output_names(self.m)

    @property
    def input_sizes(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.input_alphabets)


class ExplicitPsi(BaseModel):
    """Permissible set given as a finite list of input distributions over ``X1..Xm``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["explicit"] = "explicit"
    distributions: tuple[JointPMF, ...] = Field(..., min_length=1)


class AllPsi(BaseModel):
    """Every joint input distribution, sampled on the simplex grid of resolution ``grid``."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["all"] = "all"
    grid: int = Field(..., ge=2)


class IndependentPsi(BaseModel):
    """Product input distributions, each party's marginal on its own simplex grid."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["independent"] = "independent"
    grid: int = Field(..., ge=2)


PermissibleSet = Annotated[ExplicitPsi | AllPsi | IndependentPsi, Field(discriminator="kind")]


class RateMatrix(BaseModel):
    """Rates R[i][j] from party i+1 to party j+1; the diagonal is ignored."""

    model_config = ConfigDict(frozen=True)

    rates: tuple[tuple[float, ...], ...]

    @model_validator(mode="after")
    def check_rates(self) -> "RateMatrix":
        m = len(self.rates)
        if m < 2 or any(len(row) != m for row in self.rates):
            raise ValueError(f"Rate matrix must be square with at least two parties, got {m} rows")
        if any(not np.isfinite(r) or r < 0 for row in self.rates for r in row):
            raise ValueError("Rates must be finite and nonnegative")
        return self

    @property
    def m(self) -> int:
        return len(self.rates)

    def as_array(self) -> np.ndarray:
        return np.array(self.rates, dtype=float)
