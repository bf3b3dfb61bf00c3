"""Source, message-function and distortion models."""

from math import prod

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils.validators import validate_distortion_matrix
from .probability import Alphabet, Channel, JointPMF


def source_names(m: int) -> tuple[str, ...]:
    return tuple(f"W{i}" for i in range(1, m + 1))


def message_names(m: int) -> tuple[str, ...]:
    return tuple(f"M{i}" for i in range(1, m + 1))


def reconstruction_names(m: int) -> tuple[str, ...]:
    return tuple(f"Mhat{i}" for i in range(1, m + 1))


class SourceSpec(BaseModel):
    """Sources W1..Wm with law p(w) and the messages M_i = f_i(W1..Wm) each party wants.

    ``functions[i]`` lists f_{i+1} over the W-product alphabet in row-major order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(..., ge=2)
    source_alphabets: tuple[Alphabet, ...]
    joint: JointPMF
    message_alphabets: tuple[Alphabet, ...]
    functions: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_source(self) -> "SourceSpec":
        if len(self.source_alphabets) != self.m or len(self.message_alphabets) != self.m:
            raise ValueError(f"Source with m={self.m} needs {self.m} source and message alphabets")
        expected = tuple(zip(source_names(self.m), (a.size for a in self.source_alphabets), strict=True))
        if tuple((n, a.size) for n, a in self.joint.variables) != expected:
            raise ValueError(f"Source joint over {self.joint.names} does not match {expected}")
        if len(self.functions) != self.m:
            raise ValueError(f"Need {self.m} message functions, got {len(self.functions)}")
        points = prod(self.source_sizes)
        for i, (values, alphabet) in enumerate(zip(self.functions, self.message_alphabets, strict=True), start=1):
            if len(values) != points:
                raise ValueError(f"Function f{i} has {len(values)} values, the source product has {points}")
            if any(not 0 <= v < alphabet.size for v in values):
                raise ValueError(f"Function f{i} leaves its message alphabet of size {alphabet.size}")
        return self

    @property
    def source_names(self) -> tuple[str, ...]:
        return source_names(self.m)

    @property
    def message_names(self) -> tuple[str, ...]:
        return message_names(self.m)

    @property
    def reconstruction_names(self) -> tuple[str, ...]:
        return reconstruction_names(self.m)

    @property
    def source_sizes(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.source_alphabets)

    @property
    def message_sizes(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.message_alphabets)

    def function_table(self, i: int) -> np.ndarray:
        """f_i as an integer array shaped like the source product."""
        return np.array(self.functions[i - 1], dtype=np.int64).reshape(self.source_sizes)

    def message_channel(self, names: tuple[str, ...] | None = None) -> Channel:
        """Deterministic channel W1..Wm -> (M1..Mm), outputs named ``names``."""
        names = self.message_names if names is None else names
        inputs = tuple(zip(self.source_names, self.source_sizes, strict=True))
        outputs = tuple(zip(names, self.message_sizes, strict=True))
        tables = [self.function_table(i) for i in range(1, self.m + 1)]
        return Channel.deterministic(inputs, outputs, lambda w: tuple(t[w] for t in tables))

    def reconstruction_variables(self) -> tuple[tuple[str, Alphabet], ...]:
        return tuple(zip(self.reconstruction_names, self.message_alphabets, strict=True))

    def source_variables(self) -> tuple[tuple[str, Alphabet], ...]:
        return tuple(zip(self.source_names, self.source_alphabets, strict=True))


class DistortionSpec(BaseModel):
    """Per-party distortion matrices Delta_i and targets D_i."""

    model_config = ConfigDict(frozen=True)

    matrices: tuple[tuple[tuple[float, ...], ...], ...]
    targets: tuple[float, ...]

    @model_validator(mode="after")
    def check_distortion(self) -> "DistortionSpec":
        if len(self.matrices) != len(self.targets):
            raise ValueError(f"Got {len(self.matrices)} distortion matrices but {len(self.targets)} targets")
        for i, matrix in enumerate(self.matrices, start=1):
            validate_distortion_matrix(np.array(matrix, dtype=float), i)
        if any(not np.isfinite(t) or t < 0 for t in self.targets):
            raise ValueError(f"Distortion targets must be finite and nonnegative, got {self.targets}")
        return self

    @classmethod
    def hamming(cls, sizes: tuple[int, ...], targets: tuple[float, ...]) -> "DistortionSpec":
        matrices = tuple(tuple(tuple(float(a != b) for b in range(s)) for a in range(s)) for s in sizes)
        return cls(matrices=matrices, targets=tuple(targets))

    @property
    def m(self) -> int:
        return len(self.targets)

    def matrix(self, i: int) -> np.ndarray:
        return np.array(self.matrices[i - 1], dtype=float)

    def target(self, i: int) -> float:
        return self.targets[i - 1]
