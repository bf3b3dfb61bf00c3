"""Channel-side cut computations.

The cut value of a party set T is I(X_T; Y_{T^c} | X_{T^c}); the cut vector
lists it for every cut in canonical order. The phi region of a network is the
union of the down-sets of its cut vectors over a permissible set of input
laws, enumerated on a simplex grid.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb, prod

import numpy as np

from ..config import settings
from ..core.cuts import complement, cut_label, cut_subsets
from ..core.exceptions import (
    DimensionMismatchError,
    EnumerationCapExceededError,
    InvalidParameterError,
    RegionKindMismatchError,
)
from ..models.network import (
    AllPsi,
    ExplicitPsi,
    IndependentPsi,
    NetworkSpec,
    PermissibleSet,
    RateMatrix,
)
from ..models.probability import Channel, JointPMF
from ..models.region import CutVector, Region
from ..models.reports import CutsetRateReport, Resolution, TimeSharingCertificate
from . import probkit
from .regioncalc import hull_support, region_contains

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhiEnumeration:
    """A phi region together with the input law behind each generator."""

    network: NetworkSpec
    inputs: np.ndarray
    region: Region
    resolution: Resolution

    def convex_hull(self) -> "PhiEnumeration":
        """Convexified region restricted to hull-relevant generators, inputs kept aligned."""
        kept = hull_support(self.region.matrix())
        region = Region(
            m=self.region.m,
            generators=tuple(self.region.generators[i] for i in kept),
            convexified=True,
        )
        logger.debug(f"Convex hull keeps {kept.size} of {len(self.region.generators)} generators")
        return PhiEnumeration(self.network, self.inputs[kept], region, self.resolution)


def _clamp(values: np.ndarray) -> np.ndarray:
    drift = values.min(initial=0.0)
    if drift < -settings.cmi_clamp_tol:
        logger.warning(f"Cut value evaluated to {drift:.3e}, beyond the clamp tolerance")
    return np.maximum(values, 0.0)


def cut_vector_of_joint(
    joint: JointPMF,
    m: int,
    inputs_by_party: Sequence[Sequence[str]],
    outputs_by_party: Sequence[Sequence[str]],
    conditioning: Sequence[str] = (),
) -> CutVector:
    """Cut vector of an explicit joint.

    Coordinate k is I(inputs of T_k; outputs of T_k^c | inputs of T_k^c,
    conditioning). Used for physical networks, virtual channels (W, M-hat)
    and composed networks with several outputs per party.
    """
    if len(inputs_by_party) != m or len(outputs_by_party) != m:
        raise DimensionMismatchError(f"Expected per-party variable lists for {m} parties")
    coords = []
    for subset in cut_subsets(m):
        rest = complement(m, subset)
        a = [name for i in subset for name in inputs_by_party[i - 1]]
        b = [name for j in rest for name in outputs_by_party[j - 1]]
        c = [name for j in rest for name in inputs_by_party[j - 1]] + list(conditioning)
        coords.append(probkit.cmi(joint, a, b, c))
    return CutVector.from_array(m, coords)


def _check_input_law(net: NetworkSpec, input: JointPMF) -> JointPMF:
    expected = dict(zip(net.input_names, net.input_sizes, strict=True))
    actual = {name: alphabet.size for name, alphabet in input.variables}
    if actual != expected:
        raise DimensionMismatchError(
            f"Input law over {actual} does not match the network inputs {expected}",
            details={"expected": expected, "actual": actual},
        )
    return probkit.reorder(input, net.input_names)


def cut_vector(net: NetworkSpec, input: JointPMF) -> CutVector:
    """Cut vector of ``net`` driven by the input law ``input`` over ``X1..Xm``."""
    input = _check_input_law(net, input)
    joint = probkit.compose(net.channel, input)
    return cut_vector_of_joint(
        joint,
        net.m,
        [[name] for name in net.input_names],
        [[name] for name in net.output_names],
    )


def conditional_cut_vector(net: NetworkSpec, joint_xz: JointPMF) -> CutVector:
    """Cut vector conditioned on every non-input variable of ``joint_xz``.

    For a time-sharing variable Z this equals sum_z p(z) cut_vector(q(x|z)).
    """
    extra = [name for name in joint_xz.names if name not in net.input_names]
    for name, size in zip(net.input_names, net.input_sizes, strict=True):
        if joint_xz.alphabet(name).size != size:
            raise DimensionMismatchError(f"Variable {name} has the wrong alphabet size", details={"name": name})
    joint = probkit.compose(net.channel, joint_xz)
    return cut_vector_of_joint(
        joint,
        net.m,
        [[name] for name in net.input_names],
        [[name] for name in net.output_names],
        conditioning=extra,
    )


def _batched_entropy(joint: np.ndarray, keep: frozenset[int]) -> np.ndarray:
    if not keep:
        return np.zeros(joint.shape[0])
    drop = tuple(1 + axis for axis in range(joint.ndim - 1) if axis not in keep)
    marginal = joint.sum(axis=drop) if drop else joint
    flat = marginal.reshape(joint.shape[0], -1)
    logs = np.log2(flat, out=np.zeros_like(flat), where=flat > 0)
    return -(flat * logs).sum(axis=1)


def _cut_matrix(joint: np.ndarray, m: int) -> np.ndarray:
    # per-point axes: inputs 0..m-1, outputs m..2m-1
    cache: dict[frozenset[int], np.ndarray] = {}

    def h(axes: list[int]) -> np.ndarray:
        key = frozenset(axes)
        if key not in cache:
            cache[key] = _batched_entropy(joint, key)
        return cache[key]

    columns = []
    for subset in cut_subsets(m):
        rest = complement(m, subset)
        a = [i - 1 for i in subset]
        b = [m + j - 1 for j in rest]
        c = [j - 1 for j in rest]
        columns.append(h(a + c) + h(b + c) - h(a + b + c) - h(c))
    return _clamp(np.stack(columns, axis=1))


def batch_cut_matrix(net: NetworkSpec, inputs: np.ndarray) -> np.ndarray:
    """Cut vectors for a stack of input tables, shape ``(P, *input_sizes)`` -> ``(P, 2^m - 2)``."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.shape[1:] != net.input_sizes:
        raise DimensionMismatchError(
            f"Input tables of shape {inputs.shape[1:]} do not match the network inputs {net.input_sizes}"
        )
    kernel = net.channel.table
    chunk = max(1, settings.max_table_entries // kernel.size)
    rows = []
    for start in range(0, inputs.shape[0], chunk):
        block = inputs[start : start + chunk]
        joint = block.reshape(block.shape + (1,) * net.m) * kernel[None]
        rows.append(_cut_matrix(joint, net.m))
    if not rows:
        return np.zeros((0, 2**net.m - 2))
    return np.concatenate(rows)


def _check_grid_count(count: int) -> None:
    if count > settings.max_grid_points:
        raise EnumerationCapExceededError(
            f"Input grid has {count} points, cap is {settings.max_grid_points}",
            details={"points": count, "cap": settings.max_grid_points},
        )


def simplex_grid(n: int, g: int) -> np.ndarray:
    """Points of the probability simplex in R^n whose coordinates are multiples of 1/(g-1).

    Rows are in lexicographic order of the underlying integer compositions;
    every point of grid g reappears in grid 2g-1.
    """
    if g < 2:
        raise InvalidParameterError(f"Grid resolution must be at least 2, got {g}", details={"grid": g})
    total = g - 1
    count = comb(total + n - 1, n - 1)
    _check_grid_count(count)
    if n == 1:
        return np.ones((1, 1))
    bars = np.array(list(combinations(range(total + n - 1), n - 1)), dtype=np.int64)
    edges = np.hstack([np.full((count, 1), -1), bars, np.full((count, 1), total + n - 1)])
    return (np.diff(edges, axis=1) - 1) / total


def grid_size(psi: PermissibleSet, sizes: Sequence[int]) -> int:
    match psi:
        case ExplicitPsi():
            return len(psi.distributions)
        case AllPsi():
            return comb(psi.grid - 1 + prod(sizes) - 1, prod(sizes) - 1)
        case IndependentPsi():
            return prod(comb(psi.grid - 1 + s - 1, s - 1) for s in sizes)
    raise InvalidParameterError(f"Unknown permissible set {psi!r}")


def covering_all_grid(psi: IndependentPsi, factors: int) -> AllPsi:
    """Coarsest joint grid holding every product of ``factors`` marginals on ``psi.grid``."""
    if factors < 1:
        raise InvalidParameterError(f"Need at least one factor, got {factors}", details={"factors": factors})
    return AllPsi(grid=(psi.grid - 1) ** factors + 1)


def enumerate_inputs(net: NetworkSpec, psi: PermissibleSet) -> tuple[np.ndarray, Resolution]:
    """Input tables of the permissible set, stacked as ``(P, *input_sizes)``.

    Independent tables are products of per-party marginals in multiples of
    1/(g-1), so their entries are multiples of 1/(g-1)^k for k parties and
    most of them are not on the joint grid of the same g. The Independent
    grid sits inside the All grid only from ``covering_all_grid(psi, k)`` on.
    """
    sizes = net.input_sizes
    count = grid_size(psi, sizes)
    _check_grid_count(count)
    match psi:
        case ExplicitPsi():
            tables = np.stack([_check_input_law(net, p).table for p in psi.distributions])
            return tables, Resolution(kind="explicit", points=count)
        case AllPsi():
            tables = simplex_grid(prod(sizes), psi.grid).reshape((-1, *sizes))
            return tables, Resolution(kind="all", grid=psi.grid, points=count)
        case IndependentPsi():
            grids = [simplex_grid(s, psi.grid) for s in sizes]
            tables = grids[0]
            for grid in grids[1:]:
                tables = np.einsum("a...,bj->ab...j", tables, grid).reshape(
                    (-1, *tables.shape[1:], grid.shape[1])
                )
            return tables, Resolution(kind="independent", grid=psi.grid, points=count)
    raise InvalidParameterError(f"Unknown permissible set {psi!r}")


def enumerate_phi(net: NetworkSpec, psi: PermissibleSet) -> PhiEnumeration:
    inputs, resolution = enumerate_inputs(net, psi)
    logger.info(f"Evaluating {inputs.shape[0]} input laws ({resolution.kind}, grid={resolution.grid})")
    region = Region.from_matrix(net.m, batch_cut_matrix(net, inputs))
    return PhiEnumeration(net, inputs, region, resolution)


def phi_region(net: NetworkSpec, psi: PermissibleSet) -> Region:
    """Non-convexified region generated by the cut vectors of every enumerated input law."""
    return enumerate_phi(net, psi).region


def input_law(net: NetworkSpec, table: np.ndarray) -> JointPMF:
    """Wrap a dense table over ``X1..Xm`` as a validated input law."""
    return JointPMF(tuple(zip(net.input_names, net.input_sizes, strict=True)), table)


def timeshare_decomposition(
    r: Region,
    v: CutVector,
    net: NetworkSpec,
    inputs: np.ndarray,
) -> TimeSharingCertificate | None:
    """Explicit time-sharing law realizing a point of the convexified region.

    ``inputs[i]`` must be the input law of generator ``i``. Returns ``None``
    when ``v`` is not contained.
    """
    if not r.convexified:
        raise RegionKindMismatchError("Time-sharing decompositions need a convexified region")
    if len(r.generators) != inputs.shape[0]:
        raise DimensionMismatchError(
            f"Region has {len(r.generators)} generators but {inputs.shape[0]} input laws were given"
        )
    membership = region_contains(r, v)
    if not membership.contained:
        return None
    indices = list(membership.indices)
    pz = np.array(membership.weights)
    qxz = inputs[indices]
    # Z is the last axis of the joint q(x, z)
    table = np.moveaxis(pz.reshape((-1,) + (1,) * net.m) * qxz, 0, -1)
    joint_xz = JointPMF(
        tuple(zip(net.input_names, net.input_sizes, strict=True)) + (("Z", len(indices)),),
        table / table.sum(),
        validate=False,
    )
    achieved = conditional_cut_vector(net, joint_xz)
    shortfall = float(np.max(v.as_array() - achieved.as_array()))
    if shortfall > settings.certificate_tol:
        logger.warning(f"Time-sharing certificate falls short by {shortfall:.3e}")
    return TimeSharingCertificate(
        pz=[float(p) for p in pz],
        qxz=[[float(x) for x in q.ravel()] for q in qxz],
        generator_indices=indices,
        achieved=list(achieved.coords),
    )


def cut_capacity(net: NetworkSpec, psi: PermissibleSet, k: int) -> float:
    """Largest value of cut ``k`` over the enumerated permissible set."""
    cut_label(net.m, k)
    inputs, _ = enumerate_inputs(net, psi)
    return float(batch_cut_matrix(net, inputs)[:, k - 1].max())


def aggregate_rates(rates: RateMatrix) -> np.ndarray:
    """Total rate crossing each cut: u_k = sum of R[i][j] over i in T_k, j outside."""
    matrix = rates.as_array()
    m = rates.m
    return np.array(
        [sum(matrix[i - 1, j - 1] for i in subset for j in complement(m, subset)) for subset in cut_subsets(m)]
    )


def classical_cutset_check(rates: RateMatrix, net: NetworkSpec, psi: PermissibleSet) -> CutsetRateReport:
    """Test a rate matrix against the convexified phi region of the network."""
    if rates.m != net.m:
        raise DimensionMismatchError(
            f"Rate matrix is for {rates.m} parties, network has {net.m}", details={"rates": rates.m, "network": net.m}
        )
    demand = aggregate_rates(rates)
    phi = enumerate_phi(net, psi).convex_hull()
    certificate = timeshare_decomposition(phi.region, CutVector.from_array(net.m, demand), net, phi.inputs)
    if certificate is not None:
        slack = np.array(certificate.achieved) - demand
        return CutsetRateReport(
            message="Rates lie inside the cut-set region",
            inside=True,
            demand=demand.tolist(),
            slack=slack.tolist(),
            certificate=certificate,
            resolution=phi.resolution,
        )

    capacity = phi.region.matrix().max(axis=0)
    slack = capacity - demand
    violated = [int(k) + 1 for k in np.flatnonzero(slack < -settings.dominance_slack)]
    if violated:
        message = "Rates violate " + ", ".join(cut_label(net.m, k) for k in violated)
    else:
        message = "Every cut is met alone but no time-sharing meets them jointly"
    logger.info(message)
    return CutsetRateReport(
        success=False,
        message=message,
        inside=False,
        demand=demand.tolist(),
        violated_cuts=violated,
        slack=slack.tolist(),
        resolution=phi.resolution,
    )


def degrade(net: NetworkSpec, posts: Sequence[Channel]) -> NetworkSpec:
    """Network whose output Y_i is further passed through ``posts[i]`` at party i."""
    if len(posts) != net.m:
        raise DimensionMismatchError(f"Need {net.m} post-processors, got {len(posts)}")
    renamed = []
    for i, (post, (name, alphabet)) in enumerate(zip(posts, net.channel.outputs, strict=True), start=1):
        if len(post.inputs) != 1 or len(post.outputs) != 1 or post.input_shape != (alphabet.size,):
            raise DimensionMismatchError(
                f"Post-processor {i} must map one variable of size {alphabet.size} to one output",
                details={"party": i},
            )
        renamed.append(post.rename({post.input_names[0]: name, post.output_names[0]: f"__Z{i}"}))
    combined = probkit.cascade(net.channel, probkit.parallel(*renamed))
    return NetworkSpec.from_channel(combined.rename({f"__Z{i}": f"Y{i}" for i in range(1, net.m + 1)}))
