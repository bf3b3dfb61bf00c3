"""Discrete probability kernels over named variables.

All functions are pure: they never modify their arguments and return new
immutable ``JointPMF``/``Channel`` objects. Entropies are in bits.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from functools import reduce
from math import prod

import numpy as np

from ..config import settings
from ..core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    OverlappingVariablesError,
    UnknownVariableError,
    VariableCollisionError,
)
from ..models.probability import Alphabet, Channel, JointPMF
from ..utils.validators import validate_table_size

logger = logging.getLogger(__name__)


def _check_names(j: JointPMF, names: Iterable[str]) -> None:
    known = set(j.names)
    unknown = [name for name in names if name not in known]
    if unknown:
        raise UnknownVariableError(
            f"Unknown variables {unknown}; joint has {list(j.names)}", details={"unknown": unknown}
        )


def marginalize(j: JointPMF, keep: Iterable[str]) -> JointPMF:
    """Sum out every variable not in ``keep``; the kept variables stay in joint order."""
    keep = set(keep)
    if not keep:
        raise InvalidParameterError("Cannot marginalize onto an empty variable set")
    _check_names(j, keep)
    dropped = tuple(axis for axis, name in enumerate(j.names) if name not in keep)
    if not dropped:
        return j
    variables = tuple(v for v in j.variables if v[0] in keep)
    return JointPMF(variables, j.table.sum(axis=dropped), validate=False)


def compose(ch: Channel, input: JointPMF) -> JointPMF:
    """Joint over ``input``'s variables followed by ``ch``'s outputs: p(in) * ch(out | in)."""
    _check_names(input, ch.input_names)
    clash = set(ch.output_names) & set(input.names)
    if clash:
        raise VariableCollisionError(
            f"Channel outputs {sorted(clash)} already exist in the input joint", details={"names": sorted(clash)}
        )
    for name, alphabet in ch.inputs:
        if input.alphabet(name).size != alphabet.size:
            raise DimensionMismatchError(
                f"Variable {name!r} has size {input.alphabet(name).size} in the joint, {alphabet.size} in the channel",
                details={"name": name},
            )

    validate_table_size(prod(input.shape) * prod(ch.output_shape))
    positions = [input.axis(name) for name in ch.input_names]
    n_in, n_out = len(positions), len(ch.outputs)
    # channel input axes reordered to follow the joint's axis order
    order = sorted(range(n_in), key=positions.__getitem__)
    kernel = np.transpose(ch.table, order + list(range(n_in, n_in + n_out)))
    shape = [1] * len(input.shape) + list(ch.output_shape)
    for position in positions:
        shape[position] = input.shape[position]
    kernel = kernel.reshape(shape)
    table = input.table.reshape(input.shape + (1,) * n_out) * kernel
    return JointPMF(input.variables + ch.outputs, table, validate=False)


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def entropy(j: JointPMF, vars: Iterable[str]) -> float:
    """Shannon entropy in bits of the marginal on ``vars``; 0 for an empty set."""
    vars = set(vars)
    if not vars:
        return 0.0
    return _entropy_bits(marginalize(j, vars).table.ravel())


def binary_entropy(p: float) -> float:
    """Closed-form binary entropy in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def cmi(j: JointPMF, A: Iterable[str], B: Iterable[str], C: Iterable[str] = ()) -> float:
    """Conditional mutual information I(A; B | C) in bits.

    Computed as H(A,C) + H(B,C) - H(A,B,C) - H(C); values within
    ``settings.cmi_clamp_tol`` below zero are clamped to 0.
    """
    A, B, C = set(A), set(B), set(C)
    if not A or not B:
        raise InvalidParameterError("I(A;B|C) needs nonempty A and B")
    overlap = (A & B) | (A & C) | (B & C)
    if overlap:
        raise OverlappingVariablesError(
            f"Variable sets overlap on {sorted(overlap)}", details={"overlap": sorted(overlap)}
        )
    _check_names(j, A | B | C)
    value = entropy(j, A | C) + entropy(j, B | C) - entropy(j, A | B | C) - entropy(j, C)
    if value < 0.0:
        if value < -settings.cmi_clamp_tol:
            logger.warning(f"CMI evaluated to {value:.3e}, beyond the clamp tolerance")
        return 0.0
    return value


def product(j1: JointPMF, j2: JointPMF) -> JointPMF:
    """Independent joint of two pmfs over disjoint variables."""
    clash = set(j1.names) & set(j2.names)
    if clash:
        raise VariableCollisionError(f"Both joints define {sorted(clash)}", details={"names": sorted(clash)})
    validate_table_size(j1.table.size * j2.table.size)
    return JointPMF(j1.variables + j2.variables, np.multiply.outer(j1.table, j2.table), validate=False)


def iid_extension(j: JointPMF, n: int) -> JointPMF:
    """Product law of ``n`` independent copies of ``j``.

    Stage ``s`` (1-based) renames every variable ``V`` to ``V_s``; ``n = 1``
    returns ``j`` unchanged.
    """
    if n < 1:
        raise InvalidParameterError(f"Extension length must be positive, got {n}", details={"n": n})
    if n == 1:
        return j
    validate_table_size(j.table.size**n)
    copies = [rename(j, {name: f"{name}_{stage}" for name in j.names}) for stage in range(1, n + 1)]
    return reduce(product, copies)


def rename(j: JointPMF, mapping: Mapping[str, str]) -> JointPMF:
    _check_names(j, mapping)
    variables = tuple((mapping.get(name, name), alphabet) for name, alphabet in j.variables)
    return JointPMF(variables, j.table, validate=False)


def reorder(j: JointPMF, names: Sequence[str]) -> JointPMF:
    """Permute the axes so that variables appear in ``names`` order."""
    if sorted(names) != sorted(j.names):
        raise UnknownVariableError(
            f"Reorder needs a permutation of {list(j.names)}, got {list(names)}", details={"names": list(names)}
        )
    axes = [j.axis(name) for name in names]
    return JointPMF([j.variables[a] for a in axes], np.transpose(j.table, axes), validate=False)


def cascade(first: Channel, second: Channel) -> Channel:
    """Series connection: sum over ``first``'s outputs, which must be exactly ``second``'s inputs."""
    if sorted(first.output_names) != sorted(second.input_names):
        raise DimensionMismatchError(
            f"Cascade needs second inputs {list(second.input_names)} to equal first outputs {list(first.output_names)}",
        )
    mid = len(first.outputs)
    order = [second.input_names.index(name) for name in first.output_names]
    for name, alphabet in first.outputs:
        if second.inputs[second.input_names.index(name)][1].size != alphabet.size:
            raise DimensionMismatchError(f"Alphabet of {name!r} differs between the two channels")
    kernel = np.transpose(second.table, order + list(range(mid, second.table.ndim)))
    table = np.tensordot(first.table, kernel, axes=mid)
    return Channel(first.inputs, second.outputs, table, validate=False)


def parallel(*channels: Channel) -> Channel:
    """Product channel of independent components acting on disjoint variables."""
    if not channels:
        raise InvalidParameterError("parallel() needs at least one channel")
    inputs = sum((ch.inputs for ch in channels), ())
    outputs = sum((ch.outputs for ch in channels), ())
    table = reduce(np.multiply.outer, (ch.table for ch in channels))
    # outer product interleaves (in_1, out_1, in_2, out_2, ...); gather inputs first
    in_axes, out_axes, offset = [], [], 0
    for ch in channels:
        n_in, n_out = len(ch.inputs), len(ch.outputs)
        in_axes.extend(range(offset, offset + n_in))
        out_axes.extend(range(offset + n_in, offset + n_in + n_out))
        offset += n_in + n_out
    return Channel(inputs, outputs, np.transpose(table, in_axes + out_axes), validate=False)


def stage_mixture(
    j: JointPMF,
    stages: Sequence[Sequence[str]],
    base_names: Sequence[str],
    selector: str | None = None,
) -> JointPMF:
    """Law of the stage-selected tuple for a fair selector ``G`` independent of ``j``.

    ``stages[g]`` lists the stage-``g`` variables aligned with ``base_names``.
    The result is over ``base_names``; with ``selector`` set, ``G`` is kept as
    the first variable.
    """
    if not stages:
        raise InvalidParameterError("stage_mixture needs at least one stage")
    tables = []
    variables = None
    for names in stages:
        if len(names) != len(base_names):
            raise DimensionMismatchError("Every stage must list one variable per base name")
        stage = reorder(marginalize(j, names), list(names))
        if variables is None:
            variables = tuple((base, alphabet) for base, (_, alphabet) in zip(base_names, stage.variables, strict=True))
        elif tuple(a.size for _, a in stage.variables) != tuple(a.size for _, a in variables):
            raise DimensionMismatchError("Stages disagree on alphabet sizes")
        tables.append(stage.table)
    n = len(stages)
    if selector is None:
        return JointPMF(variables, sum(tables) / n, validate=False)
    return JointPMF(((selector, Alphabet(size=n)),) + variables, np.stack(tables) / n, validate=False)
