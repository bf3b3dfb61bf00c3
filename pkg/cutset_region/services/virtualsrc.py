"""Source-side computations.

A reconstruction p(mhat | w) acts as a virtual channel from the sources to
the parties. Its cut vector must fit in the convexified phi region of the
physical network whenever the reconstruction meets the distortion targets.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import product as cartesian
from math import comb, prod

import numpy as np

from ..config import settings
from ..core.cuts import complement, cut_label, cut_subsets
from ..core.exceptions import (
    DimensionMismatchError,
    DistortionPreconditionError,
    EnumerationCapExceededError,
    InvalidParameterError,
)
from ..models.network import NetworkSpec, PermissibleSet
from ..models.probability import Channel, JointPMF
from ..models.problem import SearchConfig
from ..models.region import CutVector
from ..models.reports import NoWitnessAtResolution, PerturbationStage, Theorem1Verdict, WitnessFound
from ..models.source import DistortionSpec, SourceSpec
from . import probkit
from .cutset import PhiEnumeration, cut_vector_of_joint, enumerate_phi, simplex_grid, timeshare_decomposition
from .regioncalc import region_contains

logger = logging.getLogger(__name__)

_DISTORTION_TOL = 1e-9


def _check_pair(src: SourceSpec, dist: DistortionSpec) -> None:
    if dist.m != src.m:
        raise DimensionMismatchError(f"Distortion spec is for {dist.m} parties, source has {src.m}")
    for i in range(1, src.m + 1):
        if dist.matrix(i).shape[0] != src.message_sizes[i - 1]:
            raise DimensionMismatchError(
                f"Distortion matrix {i} is {dist.matrix(i).shape[0]}x{dist.matrix(i).shape[0]}, "
                f"message alphabet has {src.message_sizes[i - 1]} symbols",
                details={"party": i},
            )


def _check_reconstruction(src: SourceSpec, rec: Channel) -> None:
    expected_in = tuple(zip(src.source_names, src.source_sizes, strict=True))
    expected_out = tuple(zip(src.reconstruction_names, src.message_sizes, strict=True))
    if tuple((n, a.size) for n, a in rec.inputs) != expected_in:
        raise DimensionMismatchError(f"Reconstruction inputs {rec.input_names} must be {expected_in}")
    if tuple((n, a.size) for n, a in rec.outputs) != expected_out:
        raise DimensionMismatchError(f"Reconstruction outputs {rec.output_names} must be {expected_out}")


def reconstruction_joint(src: SourceSpec, rec: Channel) -> JointPMF:
    """Joint law of (W1..Wm, Mhat1..Mhatm)."""
    _check_reconstruction(src, rec)
    return probkit.compose(rec, src.joint)


def joint_distortion(joint: JointPMF, src: SourceSpec, dist: DistortionSpec, i: int) -> float:
    """E[Delta_i(f_i(W), Mhat_i)] for a joint containing W1..Wm and Mhat_i."""
    _check_pair(src, dist)
    name = src.reconstruction_names[i - 1]
    marginal = probkit.reorder(
        probkit.marginalize(joint, (*src.source_names, name)),
        (*src.source_names, name),
    )
    # cost[w, mhat] = Delta_i(f_i(w), mhat)
    cost = dist.matrix(i)[src.function_table(i)]
    return float(np.sum(marginal.table * cost))


def expected_distortion(src: SourceSpec, dist: DistortionSpec, rec: Channel, i: int) -> float:
    return joint_distortion(reconstruction_joint(src, rec), src, dist, i)


def virtual_cut_vector_of_joint(joint: JointPMF, m: int) -> CutVector:
    """Coordinate k is I(W_T; Mhat_{T^c} | W_{T^c}) for T = T_k."""
    return cut_vector_of_joint(
        joint,
        m,
        [[f"W{i}"] for i in range(1, m + 1)],
        [[f"Mhat{i}"] for i in range(1, m + 1)],
    )


def virtual_cut_vector(src: SourceSpec, rec: Channel) -> CutVector:
    return virtual_cut_vector_of_joint(reconstruction_joint(src, rec), src.m)


def _verdict(
    v: CutVector,
    distortions: list[float],
    net: NetworkSpec,
    hull: PhiEnumeration,
) -> Theorem1Verdict:
    certificate = timeshare_decomposition(hull.region, v, net, hull.inputs)
    if certificate is not None:
        return Theorem1Verdict(
            message="Virtual cut vector lies inside the convexified phi region",
            status="witness_found",
            inside=True,
            virtual_cut_vector=list(v.coords),
            distortion=distortions,
            cut_slack=(np.array(certificate.achieved) - v.as_array()).tolist(),
            certificate=certificate,
            resolution=hull.resolution,
        )
    slack = hull.region.matrix().max(axis=0) - v.as_array()
    violated = [int(k) + 1 for k in np.flatnonzero(slack < -settings.dominance_slack)]
    if violated:
        message = "Virtual cut vector violates " + ", ".join(cut_label(net.m, k) for k in violated)
    else:
        message = "Every cut is met alone but no time-sharing meets them jointly"
    return Theorem1Verdict(
        success=False,
        message=message,
        status="no_witness_at_resolution",
        inside=False,
        virtual_cut_vector=list(v.coords),
        distortion=distortions,
        violated_cuts=violated,
        cut_slack=slack.tolist(),
        resolution=hull.resolution,
    )


def _check_distortions(distortions: list[float], dist: DistortionSpec, slack: float = 0.0) -> None:
    for i, (value, target) in enumerate(zip(distortions, dist.targets, strict=True), start=1):
        if value > target + slack + _DISTORTION_TOL:
            raise DistortionPreconditionError(
                f"Party {i} has expected distortion {value!r} above its target {target + slack!r}",
                details={"party": i, "distortion": value, "target": target + slack},
            )


def theorem1_check(
    src: SourceSpec,
    dist: DistortionSpec,
    rec: Channel,
    net: NetworkSpec,
    psi: PermissibleSet,
    hull: PhiEnumeration | None = None,
) -> Theorem1Verdict:
    """Test whether the virtual cut vector of ``rec`` fits the network's convexified phi region.

    Raises:
        DistortionPreconditionError: If ``rec`` misses a distortion target
    """
    if src.m != net.m:
        raise DimensionMismatchError(f"Source has {src.m} parties, network has {net.m}")
    joint = reconstruction_joint(src, rec)
    distortions = [joint_distortion(joint, src, dist, i) for i in range(1, src.m + 1)]
    _check_distortions(distortions, dist)
    hull = hull if hull is not None else enumerate_phi(net, psi).convex_hull()
    return _verdict(virtual_cut_vector_of_joint(joint, src.m), distortions, net, hull)


def _deterministic_candidates(rows: int, cols: int) -> Iterator[np.ndarray]:
    eye = np.eye(cols)
    for choice in cartesian(range(cols), repeat=rows):
        yield eye[list(choice)]


def _stochastic_candidates(rows: int, points: np.ndarray, skip_vertices: bool) -> Iterator[np.ndarray]:
    vertex = np.isclose(points.max(axis=1), 1.0)
    for choice in cartesian(range(points.shape[0]), repeat=rows):
        if skip_vertices and all(vertex[c] for c in choice):
            continue
        yield points[list(choice)]


def witness_search(
    src: SourceSpec,
    dist: DistortionSpec,
    net: NetworkSpec,
    psi: PermissibleSet,
    search: SearchConfig,
) -> WitnessFound | NoWitnessAtResolution:
    """Search reconstructions meeting the distortion targets for one that fits the region.

    Deterministic maps come first, in lexicographic order, when there are at
    most ``settings.max_deterministic_recs`` of them; then, unless
    ``search.deterministic_only``, reconstructions whose rows lie on the
    simplex grid of resolution ``search.grid``. The first fitting candidate
    in this order is returned.
    """
    if src.m != net.m:
        raise DimensionMismatchError(f"Source has {src.m} parties, network has {net.m}")
    _check_pair(src, dist)
    rows, cols = prod(src.source_sizes), prod(src.message_sizes)

    phases: list[tuple[str, Iterator[np.ndarray]]] = []
    deterministic_count = cols**rows
    if deterministic_count <= settings.max_deterministic_recs:
        phases.append(("deterministic", _deterministic_candidates(rows, cols)))
    else:
        logger.warning(f"Skipping {deterministic_count} deterministic reconstructions, above the cap")
    if not search.deterministic_only:
        stochastic_count = comb(search.grid - 1 + cols - 1, cols - 1) ** rows
        if stochastic_count <= settings.max_stochastic_recs:
            points = simplex_grid(cols, search.grid)
            phases.append(("stochastic", _stochastic_candidates(rows, points, skip_vertices=bool(phases))))
        else:
            logger.warning(f"Skipping {stochastic_count} grid reconstructions, above the cap")
    if not phases:
        raise EnumerationCapExceededError(
            "No reconstruction family fits under the search caps",
            details={"deterministic": deterministic_count, "cap": settings.max_deterministic_recs},
        )

    hull = enumerate_phi(net, psi).convex_hull()
    capacity = hull.region.matrix().max(axis=0)
    source_mass = src.joint.table.reshape(rows)
    # row costs: cost[i][w, o] = p(w) * Delta_i(f_i(w), mhat_i(o))
    out_index = np.indices(src.message_sizes).reshape(src.m, cols)
    costs = []
    for i in range(1, src.m + 1):
        f = src.function_table(i).reshape(rows)
        costs.append(source_mass[:, None] * dist.matrix(i)[f[:, None], out_index[i - 1][None, :]])
    limits = np.array(dist.targets) + _DISTORTION_TOL

    rec_inputs = src.source_variables()
    rec_outputs = src.reconstruction_variables()
    searched = 0
    best: tuple[float, list[int], np.ndarray] | None = None
    for phase, candidates in phases:
        logger.info(f"Searching {phase} reconstructions")
        for table in candidates:
            searched += 1
            if np.any(np.array([np.sum(table * c) for c in costs]) > limits):
                continue
            rec = Channel(rec_inputs, rec_outputs, table, validate=False)
            v = virtual_cut_vector(src, rec)
            slack = capacity - v.as_array()
            worst = float(slack.min())
            if worst >= -settings.dominance_slack and region_contains(hull.region, v).contained:
                verdict = theorem1_check(src, dist, rec, net, psi, hull=hull)
                logger.info(f"Witness found after {searched} candidates")
                return WitnessFound(
                    reconstruction=rec,
                    reconstruction_rows=rec.rows().tolist(),
                    deterministic=phase == "deterministic",
                    candidates_searched=searched,
                    verdict=verdict,
                )
            if best is None or worst > best[0]:
                violated = [int(k) + 1 for k in np.flatnonzero(slack < -settings.dominance_slack)]
                best = (worst, violated, slack)

    logger.info(f"No witness among {searched} candidates")
    if best is None:
        return NoWitnessAtResolution(candidates_searched=searched, resolution=hull.resolution)
    return NoWitnessAtResolution(
        candidates_searched=searched,
        min_violation=max(-best[0], 0.0),
        best_violated_cuts=best[1],
        best_cut_slack=best[2].tolist(),
        resolution=hull.resolution,
    )


def _delta_min(matrix: np.ndarray, r: int) -> float:
    nonzero = matrix[matrix > 0]
    if not nonzero.size:
        raise InvalidParameterError(
            f"Distortion matrix of party {r} is all zero; the indicator repair needs a nonzero entry",
            details={"party": r},
        )
    return float(nonzero.min())


def perturbation_mi_budget(
    src: SourceSpec,
    dist: DistortionSpec,
    eps: float,
    r: int,
    p_q0: float | None = None,
) -> float:
    """Upper bound on the cut-value increase caused by repairing party ``r``.

    With D_r > 0 the bound is H(W) * eps / (D_r + eps). With D_r = 0 it is
    h(P(Q=0)) + P(Q=0) * H(W), using the realized ``p_q0`` when given and
    otherwise the bound P(Q=0) <= eps / delta_min.
    """
    if eps < 0:
        raise InvalidParameterError(f"eps must be nonnegative, got {eps}", details={"eps": eps})
    entropy = probkit.entropy(src.joint, src.source_names)
    target = dist.target(r)
    if target > 0:
        return entropy * eps / (target + eps)
    if p_q0 is None:
        p = min(eps / _delta_min(dist.matrix(r), r), 1.0)
        return probkit.binary_entropy(min(p, 0.5)) + p * entropy
    return probkit.binary_entropy(p_q0) + p_q0 * entropy


@dataclass(frozen=True)
class PerturbationOutcome:
    joint: JointPMF
    stages: list[PerturbationStage]


def _replace_channel(src: SourceSpec, r: int, current: str, new: str) -> Channel:
    """(W, G_r, Q) -> G_r': keep G_r when Q = 1, else emit f_r(W)."""
    size = src.message_sizes[r - 1]
    f = src.function_table(r)
    inputs = (*src.source_variables(), (current, size), ("Q", 2))
    return Channel.deterministic(inputs, ((new, size),), lambda x: (x[-2] if x[-1] == 1 else f[x[:-2]],))


def perturb_reconstruction(
    joint: JointPMF,
    src: SourceSpec,
    dist: DistortionSpec,
    eps: float,
) -> PerturbationOutcome:
    """Repair a joint over (W, Mhat) whose distortions are within D + eps so they meet D.

    Parties are repaired in order r = 1..m. For D_r > 0 an independent
    Q_r ~ Bernoulli with P(Q_r = 0) = eps / (D_r + eps) switches Mhat_r to
    M_r; for D_r = 0, Q_r is the indicator that Mhat_r has zero distortion.
    Q_r is built as an explicit table axis and summed out.
    """
    _check_pair(src, dist)
    if eps < 0:
        raise InvalidParameterError(f"eps must be nonnegative, got {eps}", details={"eps": eps})
    names = (*src.source_names, *src.reconstruction_names)
    if sorted(joint.names) != sorted(names):
        raise DimensionMismatchError(f"Joint over {joint.names} must be over {names}")
    joint = probkit.reorder(joint, names)
    _check_distortions([joint_distortion(joint, src, dist, i) for i in range(1, src.m + 1)], dist, eps)

    stages = []
    for r in range(1, src.m + 1):
        name = src.reconstruction_names[r - 1]
        before = joint_distortion(joint, src, dist, r)
        cut_before = virtual_cut_vector_of_joint(joint, src.m)
        target = dist.target(r)
        if target > 0:
            case = "mixing"
            p_q0 = eps / (target + eps)
            extended = probkit.product(joint, JointPMF((("Q", 2),), [p_q0, 1.0 - p_q0], validate=False))
        else:
            case = "indicator"
            f = src.function_table(r)
            delta = dist.matrix(r)
            size = src.message_sizes[r - 1]
            indicator = Channel.deterministic(
                (*src.source_variables(), (name, size)),
                (("Q", 2),),
                lambda x, f=f, delta=delta: (int(delta[f[x[:-1]], x[-1]] == 0),),
            )
            extended = probkit.compose(indicator, joint)
            p_q0 = float(probkit.marginalize(extended, ["Q"]).table[0])
        repaired = probkit.compose(_replace_channel(src, r, name, f"{name}'"), extended)
        kept = [n for n in repaired.names if n not in (name, "Q")]
        joint = probkit.reorder(probkit.rename(probkit.marginalize(repaired, kept), {f"{name}'": name}), names)

        cut_after = virtual_cut_vector_of_joint(joint, src.m)
        budget = perturbation_mi_budget(src, dist, eps, r, p_q0=None if case == "mixing" else p_q0)
        stage = PerturbationStage(
            party=r,
            case=case,
            p_q0=p_q0,
            distortion_before=before,
            distortion_after=joint_distortion(joint, src, dist, r),
            budget=budget,
            cut_before=list(cut_before.coords),
            cut_after=list(cut_after.coords),
            increase=(cut_after.as_array() - cut_before.as_array()).tolist(),
        )
        logger.debug(f"Stage {r} ({case}): P(Q=0)={p_q0:.6g}, distortion {before:.6g} -> {stage.distortion_after:.6g}")
        stages.append(stage)
    return PerturbationOutcome(joint=joint, stages=stages)


def affected_cuts(m: int, r: int) -> list[int]:
    """Cuts (1-based) whose receiving side contains party ``r``."""
    return [k for k, subset in enumerate(cut_subsets(m), start=1) if r in complement(m, subset)]
