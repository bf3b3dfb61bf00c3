"""Tests for down-set regions, membership certificates and the feasibility solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutset_region.core.cuts import cut_count, cut_label, cut_subsets
from cutset_region.core.exceptions import (
    DimensionMismatchError,
    EnumerationCapExceededError,
    InvalidParameterError,
    RegionKindMismatchError,
)
from cutset_region.models.region import CutVector, Region
from cutset_region.services.regioncalc import (
    caratheodory_reduce,
    convexify,
    dominates,
    hull_support,
    minkowski_sum,
    region_contains,
    region_from_json,
    region_to_json,
    scale,
)
from cutset_region.services.simplex import find_feasible_point

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def vec(*coords: float) -> CutVector:
    m = {2: 2, 6: 3}[len(coords)]
    return CutVector(m=m, coords=tuple(float(c) for c in coords))


def region(*points, convexified: bool = False) -> Region:
    return Region(m=2, generators=tuple(vec(*p) for p in points), convexified=convexified)


def test_cut_ordering():
    """Test the canonical bitmask ordering of cuts."""
    assert cut_count(3) == 6
    assert cut_subsets(2) == ((1,), (2,))
    assert cut_subsets(3) == ((1,), (2,), (1, 2), (3,), (1, 3), (2, 3))
    assert cut_label(3, 5) == "T={1,3}"
    with pytest.raises(InvalidParameterError):
        cut_label(2, 3)


def test_cut_vector_validation():
    """Test cut vectors reject wrong lengths and negative coordinates."""
    with pytest.raises(ValueError):
        CutVector(m=2, coords=(1.0,))
    with pytest.raises(ValueError):
        CutVector(m=2, coords=(1.0, -0.5))
    assert CutVector.zero(3).coords == (0.0,) * 6


def test_dominates():
    """Test the coordinatewise order with slack."""
    assert dominates(vec(1, 1), vec(1, 0.5))
    assert dominates(vec(1, 1), vec(1 + 5e-10, 1))
    assert not dominates(vec(1, 1), vec(1.1, 0))
    with pytest.raises(DimensionMismatchError):
        dominates(vec(1, 1), CutVector.zero(3))


def test_non_convex_membership_is_dominance_only():
    """Test the midpoint of two generators lies outside the plain down-set."""
    r = region((1, 0), (0, 1))
    assert region_contains(r, vec(1, 0)).contained
    assert region_contains(r, vec(0.0, 0.7)).contained
    assert not region_contains(r, vec(0.5, 0.5)).contained


def test_convex_membership_certificate():
    """Test membership in the convex down-set with a weight certificate."""
    r = region((1, 0), (0, 1), convexified=True)
    result = region_contains(r, vec(0.5, 0.5))
    assert result.contained
    assert sorted(result.indices) == [0, 1]
    assert sum(result.weights) == pytest.approx(1.0)
    achieved = sum(w * r.matrix()[i] for i, w in zip(result.indices, result.weights, strict=True))
    assert np.all(achieved >= np.array([0.5, 0.5]) - 1e-9)
    assert not region_contains(r, vec(0.6, 0.6)).contained


def test_dominating_generator_gives_single_point_certificate():
    """Test a point under one generator is certified by that generator alone."""
    r = region((2, 2), (0, 3), convexified=True)
    result = region_contains(r, vec(1, 1))
    assert result.indices == (0,)
    assert result.weights == (1.0,)


def test_empty_region_contains_nothing():
    """Test an empty region."""
    assert not region_contains(Region(m=2), CutVector.zero(2)).contained


def test_minkowski_sum_and_kind_mismatch():
    """Test pairwise sums and the convexification guard."""
    total = minkowski_sum(region((1, 0), (0, 1)), region((0.5, 0.5),))
    np.testing.assert_allclose(total.matrix(), [[1.5, 0.5], [0.5, 1.5]])
    with pytest.raises(RegionKindMismatchError):
        minkowski_sum(region((1, 0)), region((1, 0), convexified=True))
    with pytest.raises(DimensionMismatchError):
        minkowski_sum(region((1, 0)), Region(m=3, generators=(CutVector.zero(3),)))


def test_minkowski_sum_generator_cap(monkeypatch):
    """Test the generator cap of the Minkowski sum."""
    from cutset_region.config import settings as config

    monkeypatch.setattr(config, "max_generators", 3)
    with pytest.raises(EnumerationCapExceededError):
        minkowski_sum(region((1, 0), (0, 1)), region((1, 0), (0, 1)))


def test_scale():
    """Test scaling and its domain."""
    np.testing.assert_allclose(scale(region((1, 2)), 0.5).matrix(), [[0.5, 1.0]])
    with pytest.raises(InvalidParameterError):
        scale(region((1, 2)), -1.0)


@pytest.mark.parametrize("lam", [0.25, 0.5, 0.75])
def test_scaled_sum_equals_combined_point(lam):
    """Test sum of scaled single-point regions matches the region of the combined point on random probes."""
    rng = np.random.default_rng(int(lam * 100))
    v1 = vec(*rng.uniform(0, 2, size=6))
    v2 = vec(*rng.uniform(0, 2, size=6))
    left = minkowski_sum(
        scale(Region(m=3, generators=(v1,)), lam),
        scale(Region(m=3, generators=(v2,)), 1 - lam),
    )
    right = Region(m=3, generators=(CutVector.from_array(3, lam * v1.as_array() + (1 - lam) * v2.as_array()),))
    probes = rng.uniform(0, 2, size=(1000, 6))
    for probe in probes:
        p = CutVector.from_array(3, probe)
        assert region_contains(left, p).contained == region_contains(right, p).contained


def test_convex_scale_splits_as_sum():
    """Test scale(t1 + t2) matches the sum of scales for a convexified region."""
    rng = np.random.default_rng(4)
    r = region((1, 0), (0, 1), (0.6, 0.6), convexified=True)
    whole = scale(r, 1.0)
    split = minkowski_sum(scale(r, 0.3), scale(r, 0.7))
    for probe in rng.uniform(0, 1.2, size=(200, 2)):
        p = CutVector.from_array(2, probe)
        assert region_contains(whole, p).contained == region_contains(split, p).contained


def test_hull_support_drops_dominated_and_interior_points():
    """Test pruning keeps only hull-relevant generators, in order."""
    matrix = np.array([[1.0, 0.0], [0.2, 0.2], [0.0, 1.0], [0.4, 0.4], [0.6, 0.6]])
    np.testing.assert_array_equal(hull_support(matrix), [0, 2, 4])
    # (0.4, 0.4) lies under the segment from (1, 0) to (0, 1)
    np.testing.assert_array_equal(hull_support(matrix[:4]), [0, 2])


def test_convexify_preserves_membership():
    """Test convexify keeps the convex down-set unchanged."""
    rng = np.random.default_rng(9)
    r = Region.from_matrix(2, rng.uniform(0, 1, size=(30, 2)), convexified=True)
    pruned = convexify(r)
    assert pruned.convexified
    assert len(pruned.generators) <= len(r.generators)
    for probe in rng.uniform(0, 1.1, size=(200, 2)):
        p = CutVector.from_array(2, probe)
        assert region_contains(pruned, p).contained == region_contains(r, p).contained
    assert len(convexify(r, prune=False).generators) == 30


def test_caratheodory_reduce_keeps_value():
    """Test support reduction to at most c + 1 points without moving the combination."""
    rng = np.random.default_rng(2)
    points = rng.uniform(0, 1, size=(10, 2))
    weights = rng.dirichlet(np.ones(10))
    indices, reduced = caratheodory_reduce(points, weights)
    assert indices.size <= 3
    assert reduced.sum() == pytest.approx(1.0)
    assert np.all(reduced > 0)
    np.testing.assert_allclose(reduced @ points[indices], weights @ points, atol=1e-10)
    indices, _ = caratheodory_reduce(points, weights, max_support=5)
    assert indices.size <= 5


def test_region_json_round_trip(tmp_path):
    """Test the region document is stable and parses back."""
    r = region((1, 0.25), (0, 1), convexified=True)
    text = region_to_json(r)
    assert '"convexified": true' in text
    assert region_from_json(text) == r
    path = tmp_path / "region.json"
    path.write_text(text)
    assert region_from_json(path.read_text()) == r


def test_find_feasible_point():
    """Test phase-1 simplex on feasible, infeasible and degenerate systems."""
    A = np.array([[1.0, 1.0, 1.0]])
    x = find_feasible_point(A, np.array([1.0]))
    assert x is not None
    assert np.all(x >= 0)
    np.testing.assert_allclose(A @ x, [1.0])
    assert find_feasible_point(np.array([[1.0, 1.0]]), np.array([-1.0])) is None
    degenerate = np.array([[1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, 1.0]])
    y = find_feasible_point(degenerate, np.array([0.0, 0.0, 1.0]))
    assert y is not None
    np.testing.assert_allclose(degenerate @ y, [0.0, 0.0, 1.0], atol=1e-12)
    with pytest.raises(DimensionMismatchError):
        find_feasible_point(A, np.array([1.0, 2.0]))


def sorted_rows(r: Region) -> np.ndarray:
    rows = np.round(r.matrix(), 12)
    return rows[np.lexsort(rows.T[::-1])]


@settings(max_examples=40, deadline=None)
@given(seed=seeds, convexified=st.booleans())
def test_membership_is_monotone(seed, convexified):
    """Test every point below a contained point is contained."""
    rng = np.random.default_rng(seed)
    r = Region.from_matrix(2, rng.uniform(0, 1, size=(6, 2)), convexified=convexified)
    for probe in rng.uniform(0, 1.1, size=(20, 2)):
        if region_contains(r, CutVector.from_array(2, probe)).contained:
            lower = probe * rng.uniform(0, 1, size=2)
            assert region_contains(r, CutVector.from_array(2, lower)).contained


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_minkowski_sum_commutes_and_associates(seed):
    """Test generator sets of Minkowski sums agree up to order."""
    rng = np.random.default_rng(seed)
    a, b, c = (Region.from_matrix(3, rng.uniform(0, 1, size=(n, 6))) for n in (2, 3, 4))
    np.testing.assert_array_equal(sorted_rows(minkowski_sum(a, b)), sorted_rows(minkowski_sum(b, a)))
    left = minkowski_sum(minkowski_sum(a, b), c)
    right = minkowski_sum(a, minkowski_sum(b, c))
    np.testing.assert_allclose(sorted_rows(left), sorted_rows(right), atol=1e-12)
