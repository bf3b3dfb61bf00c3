"""Down-set geometry in R_+^c.

Regions are finite generator families read either as the down-set of their
union or, when convexified, as the down-set of their convex hull. Convex
membership is a linear feasibility problem over the generator weights.
"""

import json
import logging

import numpy as np

from ..config import settings
from ..core.exceptions import (
    DimensionMismatchError,
    EnumerationCapExceededError,
    InvalidParameterError,
    RegionKindMismatchError,
)
from ..models.region import CutVector, MembershipResult, Region, RegionDocument
from .simplex import find_feasible_point

logger = logging.getLogger(__name__)

_WEIGHT_FLOOR = 1e-12


def _check_same_m(left: int, right: int) -> None:
    if left != right:
        raise DimensionMismatchError(
            f"Dimension mismatch: m={left} against m={right}", details={"left": left, "right": right}
        )


def dominates(a: CutVector, b: CutVector, slack: float | None = None) -> bool:
    """True iff ``a >= b`` coordinatewise, up to ``slack`` per coordinate."""
    _check_same_m(a.m, b.m)
    slack = settings.dominance_slack if slack is None else slack
    return bool(np.all(a.as_array() + slack >= b.as_array()))


def caratheodory_reduce(
    points: np.ndarray,
    weights: np.ndarray,
    max_support: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Shrink the support of a convex combination without moving its value.

    While more than ``max_support`` (default ``c + 1``) points carry weight,
    a null-space direction of the affine system is subtracted until one
    weight reaches zero.

    Returns:
        ``(indices, weights)`` of the surviving support, weights summing to 1
    """
    points = np.asarray(points, dtype=float)
    weights = np.asarray(weights, dtype=float).copy()
    max_support = points.shape[1] + 1 if max_support is None else max_support
    support = np.flatnonzero(weights > _WEIGHT_FLOOR)

    while support.size > max_support:
        system = np.vstack([points[support].T, np.ones(support.size)])
        _, _, vh = np.linalg.svd(system)
        direction = vh[-1]
        if not np.any(direction > _WEIGHT_FLOOR):
            direction = -direction
        positive = direction > _WEIGHT_FLOOR
        ratios = np.full(support.size, np.inf)
        ratios[positive] = weights[support][positive] / direction[positive]
        leaving = int(np.argmin(ratios))
        weights[support] -= ratios[leaving] * direction
        weights[support[leaving]] = 0.0
        support = np.flatnonzero(weights > _WEIGHT_FLOOR)

    kept = weights[support]
    return support, kept / kept.sum()


def _convex_membership(matrix: np.ndarray, target: np.ndarray, slack: float) -> MembershipResult:
    count, dim = matrix.shape
    # G^T lambda - s = v - slack, sum(lambda) = 1, lambda >= 0, s >= 0
    A = np.zeros((dim + 1, count + dim))
    A[:dim, :count] = matrix.T
    A[:dim, count:] = -np.eye(dim)
    A[dim, :count] = 1.0
    b = np.append(target - slack, 1.0)
    point = find_feasible_point(A, b)
    if point is None:
        return MembershipResult(contained=False)
    indices, weights = caratheodory_reduce(matrix, point[:count])
    return MembershipResult(
        contained=True,
        indices=tuple(int(i) for i in indices),
        weights=tuple(float(w) for w in weights),
    )


def region_contains(r: Region, v: CutVector, slack: float | None = None) -> MembershipResult:
    """Membership of ``v`` in ``r`` with a certificate.

    A dominating generator is always tried first and yields a one-point
    certificate; convexified regions fall back to the weight feasibility
    problem, whose certificate has support at most ``2^m - 1``.
    """
    _check_same_m(r.m, v.m)
    slack = settings.dominance_slack if slack is None else slack
    matrix = r.matrix()
    if not matrix.shape[0]:
        return MembershipResult(contained=False)
    target = v.as_array()
    dominating = np.flatnonzero(np.all(matrix + slack >= target, axis=1))
    if dominating.size:
        return MembershipResult(contained=True, indices=(int(dominating[0]),), weights=(1.0,))
    if not r.convexified:
        return MembershipResult(contained=False)
    return _convex_membership(matrix, target, slack)


def minkowski_sum(r1: Region, r2: Region) -> Region:
    """Region generated by all pairwise sums, ``r1`` generators varying slowest."""
    _check_same_m(r1.m, r2.m)
    if r1.convexified != r2.convexified:
        raise RegionKindMismatchError(
            "Minkowski sum needs both regions convexified or both not",
            details={"left": r1.convexified, "right": r2.convexified},
        )
    total = len(r1.generators) * len(r2.generators)
    if total > settings.max_generators:
        raise EnumerationCapExceededError(
            f"Minkowski sum would have {total} generators, cap is {settings.max_generators}",
            details={"generators": total, "cap": settings.max_generators},
        )
    sums = (r1.matrix()[:, None, :] + r2.matrix()[None, :, :]).reshape(total, r1.dimension)
    return Region.from_matrix(r1.m, sums, convexified=r1.convexified)


def scale(r: Region, t: float) -> Region:
    if not np.isfinite(t) or t < 0:
        raise InvalidParameterError(f"Scale factor must be a nonnegative real, got {t}", details={"t": t})
    return Region.from_matrix(r.m, r.matrix() * t, convexified=r.convexified)


def hull_support(matrix: np.ndarray) -> np.ndarray:
    """Indices of the generators that can change convex down-set membership.

    A generator is dropped when another surviving generator dominates it, or
    when it lies in the convex down-set of the survivors. Order is preserved.
    """
    matrix = np.asarray(matrix, dtype=float)
    alive = np.ones(matrix.shape[0], dtype=bool)
    if matrix.shape[0] <= 1:
        return np.flatnonzero(alive)
    for i in range(matrix.shape[0]):
        others = alive.copy()
        others[i] = False
        if np.any(np.all(matrix[others] >= matrix[i], axis=1)):
            alive[i] = False

    for i in np.flatnonzero(alive):
        others = alive.copy()
        others[i] = False
        if np.count_nonzero(others) < 2:
            continue
        if _convex_membership(matrix[others], matrix[i], 0.0).contained:
            alive[i] = False
    return np.flatnonzero(alive)


def convexify(r: Region, prune: bool = True) -> Region:
    """Mark ``r`` convexified, keeping only the generators ``hull_support`` selects."""
    if not prune:
        return Region(m=r.m, generators=r.generators, convexified=True)
    kept = hull_support(r.matrix())
    logger.debug(f"convexify kept {kept.size} of {len(r.generators)} generators")
    return Region(m=r.m, generators=tuple(r.generators[i] for i in kept), convexified=True)


def region_to_json(r: Region) -> str:
    document = RegionDocument(m=r.m, convexified=r.convexified, generators=[list(g.coords) for g in r.generators])
    return json.dumps(document.model_dump(mode="json"), indent=2, sort_keys=True)


def region_from_json(text: str) -> Region:
    document = RegionDocument.model_validate_json(text)
    return Region(
        m=document.m,
        generators=tuple(CutVector(m=document.m, coords=tuple(g)) for g in document.generators),
        convexified=document.convexified,
    )
