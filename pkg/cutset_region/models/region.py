"""Cut vectors, down-set regions and membership certificates."""

import math
from collections.abc import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.cuts import cut_count


class CutVector(BaseModel):
    """Point of R_+^c, c = 2^m - 2, in canonical cut order."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=2)
    coords: tuple[float, ...]

    @model_validator(mode="after")
    def check_coords(self) -> "CutVector":
        if len(self.coords) != cut_count(self.m):
            raise ValueError(f"A cut vector for m={self.m} needs {cut_count(self.m)} coordinates, got {len(self.coords)}")
        if any(not math.isfinite(x) or x < 0 for x in self.coords):
            raise ValueError(f"Cut vector coordinates must be finite and nonnegative, got {self.coords}")
        return self

    @classmethod
    def from_array(cls, m: int, values: Iterable[float]) -> "CutVector":
        return cls(m=m, coords=tuple(float(x) for x in values))

    @classmethod
    def zero(cls, m: int) -> "CutVector":
        return cls(m=m, coords=(0.0,) * cut_count(m))

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    def coordinate(self, k: int) -> float:
        """Coordinate of cut ``k`` (1-based)."""
        return self.coords[k - 1]


class Region(BaseModel):
    """Down-set of a finite generator family, optionally of its convex hull."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=2)
    generators: tuple[CutVector, ...] = ()
    convexified: bool = False

    @model_validator(mode="after")
    def check_dimensions(self) -> "Region":
        for index, generator in enumerate(self.generators):
            if generator.m != self.m:
                raise ValueError(f"Generator {index} has m={generator.m}, region has m={self.m}")
        return self

    @classmethod
    def from_matrix(cls, m: int, matrix: np.ndarray, convexified: bool = False) -> "Region":
        return cls(
            m=m,
            generators=tuple(CutVector.from_array(m, row) for row in np.asarray(matrix, dtype=float)),
            convexified=convexified,
        )

    @property
    def dimension(self) -> int:
        return cut_count(self.m)

    def matrix(self) -> np.ndarray:
        """Generators stacked as rows, shape ``(len(generators), 2^m - 2)``."""
        if not self.generators:
            return np.zeros((0, self.dimension))
        return np.array([g.coords for g in self.generators], dtype=float)


class MembershipResult(BaseModel):
    """Answer of a membership query with its certificate.

    ``indices``/``weights`` name the generators whose convex combination
    dominates the probe; a single index with weight 1 for plain dominance.
    """

    model_config = ConfigDict(frozen=True)

    contained: bool
    indices: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    @property
    def support(self) -> int:
        return len(self.indices)


class RegionDocument(BaseModel):
    """Serialized form of a region."""

    m: int = Field(..., ge=2)
    convexified: bool
    generators: list[list[float]]
