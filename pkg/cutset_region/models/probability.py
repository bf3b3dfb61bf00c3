"""Probability value objects: alphabets, joint pmfs and channels."""

from collections.abc import Callable, Iterable, Mapping, Sequence
from itertools import product as cartesian
from math import prod
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import DimensionMismatchError, UnknownVariableError, VariableCollisionError
from ..utils.validators import validate_conditional_table, validate_pmf_table, validate_table_size


class Alphabet(BaseModel):
    """A finite alphabet ``{0, ..., size-1}`` with optional symbol labels."""

    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=1)
    labels: tuple[str, ...] | None = None

    @model_validator(mode="after")
    def check_labels(self) -> "Alphabet":
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError(f"Alphabet of size {self.size} got {len(self.labels)} labels")
            if len(set(self.labels)) != len(self.labels):
                raise ValueError("Alphabet labels must be distinct")
        return self


Variable = tuple[str, Alphabet]
VariableLike = tuple[str, Alphabet | int]


def _as_variables(variables: Iterable[VariableLike]) -> tuple[Variable, ...]:
    result = tuple(
        (str(name), alphabet if isinstance(alphabet, Alphabet) else Alphabet(size=int(alphabet)))
        for name, alphabet in variables
    )
    names = [name for name, _ in result]
    if len(set(names)) != len(names):
        duplicates = sorted({name for name in names if names.count(name) > 1})
        raise VariableCollisionError(f"Duplicate variable names: {duplicates}", details={"names": duplicates})
    return result


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.flags.writeable = False
    return array


class JointPMF:
    """Dense joint distribution over named finite variables.

    The table is stored as an n-d array whose axes follow the variable order,
    so the flattened C-order view is the documented row-major layout.
    Instances are immutable.
    """

    __slots__ = ("_variables", "_table")

    def __init__(self, variables: Iterable[VariableLike], table: Any, *, validate: bool = True):
        self._variables = _as_variables(variables)
        if not self._variables:
            raise DimensionMismatchError("A joint distribution needs at least one variable")
        shape = tuple(alphabet.size for _, alphabet in self._variables)
        array = np.asarray(table, dtype=float)
        expected = prod(shape)
        validate_table_size(expected)
        if array.size != expected:
            raise DimensionMismatchError(
                f"Table has {array.size} entries, the product alphabet has {expected}",
                details={"entries": int(array.size), "expected": expected},
            )
        array = array.reshape(shape)
        if validate:
            validate_pmf_table(array)
        self._table = _frozen(array)

    @classmethod
    def uniform(cls, variables: Iterable[VariableLike]) -> "JointPMF":
        variables = _as_variables(variables)
        shape = tuple(alphabet.size for _, alphabet in variables)
        return cls(variables, np.full(shape, 1.0 / prod(shape)))

    @classmethod
    def point_mass(cls, variables: Iterable[VariableLike], outcome: Sequence[int]) -> "JointPMF":
        variables = _as_variables(variables)
        table = np.zeros(tuple(alphabet.size for _, alphabet in variables))
        table[tuple(outcome)] = 1.0
        return cls(variables, table)

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self._variables

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._variables)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._table.shape

    @property
    def table(self) -> np.ndarray:
        return self._table

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as e:
            raise UnknownVariableError(
                f"Variable {name!r} is not in {list(self.names)}", details={"name": name}
            ) from e

    def alphabet(self, name: str) -> Alphabet:
        return self._variables[self.axis(name)][1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointPMF):
            return NotImplemented
        return self._variables == other._variables and np.array_equal(self._table, other._table)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        spec = ", ".join(f"{name}:{alphabet.size}" for name, alphabet in self._variables)
        return f"JointPMF({spec})"


class Channel:
    """Conditional table ``p(outputs | inputs)``.

    Axes are the input variables followed by the output variables; every slice
    with the inputs fixed is a pmf over the outputs. Instances are immutable.
    """

    __slots__ = ("_inputs", "_outputs", "_table")

    def __init__(
        self,
        inputs: Iterable[VariableLike],
        outputs: Iterable[VariableLike],
        table: Any,
        *,
        validate: bool = True,
    ):
        self._inputs = _as_variables(inputs)
        self._outputs = _as_variables(outputs)
        clash = set(self.input_names) & set(self.output_names)
        if clash:
            raise VariableCollisionError(
                f"Channel inputs and outputs share names: {sorted(clash)}", details={"names": sorted(clash)}
            )
        if not self._outputs:
            raise DimensionMismatchError("A channel needs at least one output variable")
        shape = tuple(a.size for _, a in self._inputs) + tuple(a.size for _, a in self._outputs)
        array = np.asarray(table, dtype=float)
        validate_table_size(prod(shape))
        if array.size != prod(shape):
            raise DimensionMismatchError(
                f"Channel table has {array.size} entries, expected {prod(shape)}",
                details={"entries": int(array.size), "expected": prod(shape)},
            )
        array = array.reshape(shape)
        if validate:
            validate_conditional_table(array, len(self._inputs))
        self._table = _frozen(array)

    @classmethod
    def deterministic(
        cls,
        inputs: Iterable[VariableLike],
        outputs: Iterable[VariableLike],
        mapping: Callable[[tuple[int, ...]], Sequence[int]] | Mapping[tuple[int, ...], Sequence[int]],
    ) -> "Channel":
        """Build the 0/1 channel of a total map from input tuples to output tuples."""
        inputs = _as_variables(inputs)
        outputs = _as_variables(outputs)
        in_shape = tuple(a.size for _, a in inputs)
        out_shape = tuple(a.size for _, a in outputs)
        lookup = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
        table = np.zeros(in_shape + out_shape)
        for point in cartesian(*(range(size) for size in in_shape)):
            image = tuple(int(v) for v in lookup(point))
            if len(image) != len(out_shape) or any(not 0 <= v < s for v, s in zip(image, out_shape, strict=True)):
                raise DimensionMismatchError(
                    f"Map sends {point} to {image}, outside the output alphabets {out_shape}",
                    details={"input": list(point), "image": list(image)},
                )
            table[point + image] = 1.0
        return cls(inputs, outputs, table)

    @classmethod
    def identity(cls, inputs: Iterable[VariableLike], output_names: Sequence[str]) -> "Channel":
        inputs = _as_variables(inputs)
        if len(output_names) != len(inputs):
            raise DimensionMismatchError("Identity channel needs one output per input")
        outputs = tuple((name, alphabet) for name, (_, alphabet) in zip(output_names, inputs, strict=True))
        return cls.deterministic(inputs, outputs, lambda point: point)

    @property
    def inputs(self) -> tuple[Variable, ...]:
        return self._inputs

    @property
    def outputs(self) -> tuple[Variable, ...]:
        return self._outputs

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._inputs)

    @property
    def output_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._outputs)

    @property
    def input_shape(self) -> tuple[int, ...]:
        return tuple(a.size for _, a in self._inputs)

    @property
    def output_shape(self) -> tuple[int, ...]:
        return tuple(a.size for _, a in self._outputs)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def rows(self) -> np.ndarray:
        """Conditional table as a 2-d array: one row per input configuration."""
        return self._table.reshape(prod(self.input_shape), prod(self.output_shape))

    def rename(self, mapping: Mapping[str, str]) -> "Channel":
        inputs = tuple((mapping.get(name, name), a) for name, a in self._inputs)
        outputs = tuple((mapping.get(name, name), a) for name, a in self._outputs)
        return Channel(inputs, outputs, self._table, validate=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Channel):
            return NotImplemented
        return (
            self._inputs == other._inputs
            and self._outputs == other._outputs
            and np.array_equal(self._table, other._table)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        ins = ", ".join(f"{n}:{a.size}" for n, a in self._inputs)
        outs = ", ".join(f"{n}:{a.size}" for n, a in self._outputs)
        return f"Channel({outs} | {ins})"
