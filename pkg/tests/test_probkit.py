"""Tests for the discrete probability kernels."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutset_region.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NormalizationError,
    OverlappingVariablesError,
    TableSizeExceededError,
    UnknownVariableError,
    VariableCollisionError,
)
from cutset_region.models.probability import Channel, JointPMF
from cutset_region.services import probkit
from cutset_region.services.random_cases import binary_symmetric, random_channel, random_pmf, rng_for

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def copy_pair() -> JointPMF:
    """X uniform and Y = X."""
    return JointPMF((("X", 2), ("Y", 2)), [[0.5, 0.0], [0.0, 0.5]])


def test_entropy_of_uniform_pair():
    """Test entropy of two independent uniform bits."""
    j = JointPMF.uniform((("A", 2), ("B", 2)))
    assert probkit.entropy(j, ["A", "B"]) == pytest.approx(2.0)
    assert probkit.entropy(j, ["A"]) == pytest.approx(1.0)
    assert probkit.entropy(j, []) == 0.0


def test_point_mass_carries_no_information():
    """Test a degenerate joint."""
    j = JointPMF.point_mass((("A", 3), ("B", 2)), (2, 1))
    assert j.table[2, 1] == 1.0
    assert probkit.entropy(j, ["A", "B"]) == 0.0
    assert probkit.cmi(j, ["A"], ["B"]) == 0.0


def test_binary_entropy_endpoints():
    """Test binary entropy closed form."""
    assert probkit.binary_entropy(0.0) == 0.0
    assert probkit.binary_entropy(1.0) == 0.0
    assert probkit.binary_entropy(0.5) == pytest.approx(1.0)
    assert probkit.binary_entropy(0.11) == pytest.approx(0.4999, abs=1e-3)


def test_cmi_of_copy_and_independent():
    """Test mutual information of a copied bit and of independent bits."""
    assert probkit.cmi(copy_pair(), ["X"], ["Y"]) == pytest.approx(1.0)
    independent = JointPMF.uniform((("X", 2), ("Y", 2)))
    assert probkit.cmi(independent, ["X"], ["Y"]) == 0.0


def test_cmi_conditioning_can_create_dependence():
    """Test I(X1;X1 xor X2 | X2) = 1 while I(X1; X1 xor X2) = 0."""
    j = JointPMF.uniform((("X1", 2), ("X2", 2)))
    xor = Channel.deterministic((("X1", 2), ("X2", 2)), (("S", 2),), lambda x: (x[0] ^ x[1],))
    joint = probkit.compose(xor, j)
    assert probkit.cmi(joint, ["X1"], ["S"]) == pytest.approx(0.0, abs=1e-12)
    assert probkit.cmi(joint, ["X1"], ["S"], ["X2"]) == pytest.approx(1.0)


def test_cmi_rejects_overlap_and_empty_sets():
    """Test argument validation of cmi."""
    j = copy_pair()
    with pytest.raises(OverlappingVariablesError):
        probkit.cmi(j, ["X"], ["X"])
    with pytest.raises(OverlappingVariablesError):
        probkit.cmi(j, ["X"], ["Y"], ["Y"])
    with pytest.raises(InvalidParameterError):
        probkit.cmi(j, [], ["Y"])
    with pytest.raises(UnknownVariableError):
        probkit.cmi(j, ["X"], ["Z"])


def test_marginalize_keeps_joint_order():
    """Test marginalization sums out dropped axes and preserves order."""
    j = random_pmf(rng_for(1), [("A", 2), ("B", 3), ("C", 2)])
    marginal = probkit.marginalize(j, ["C", "A"])
    assert marginal.names == ("A", "C")
    np.testing.assert_allclose(marginal.table, j.table.sum(axis=1))
    assert probkit.marginalize(j, ["A", "B", "C"]) is j
    with pytest.raises(InvalidParameterError):
        probkit.marginalize(j, [])


def test_compose_appends_outputs():
    """Test composing a BSC onto a uniform bit."""
    j = JointPMF.uniform((("X", 2),))
    joint = probkit.compose(binary_symmetric("X", "Y", 0.1), j)
    assert joint.names == ("X", "Y")
    np.testing.assert_allclose(joint.table, [[0.45, 0.05], [0.05, 0.45]])


def test_compose_aligns_channel_input_order():
    """Test a channel whose inputs are listed in a different order than the joint axes."""
    rng = rng_for(7)
    j = random_pmf(rng, [("A", 2), ("B", 3)])
    ch = random_channel(rng, [("B", 3), ("A", 2)], [("C", 2)])
    joint = probkit.compose(ch, j)
    expected = j.table[:, :, None] * np.transpose(ch.table, (1, 0, 2))
    np.testing.assert_allclose(joint.table, expected)


def test_compose_errors():
    """Test collision and size mismatch in compose."""
    j = copy_pair()
    with pytest.raises(VariableCollisionError):
        probkit.compose(binary_symmetric("X", "Y", 0.1), j)
    with pytest.raises(DimensionMismatchError):
        probkit.compose(Channel((("X", 3),), (("Z", 2),), np.full((3, 2), 0.5)), j)
    with pytest.raises(UnknownVariableError):
        probkit.compose(binary_symmetric("Q", "Z", 0.1), j)


def test_channel_row_normalization_names_row():
    """Test a channel row summing to 0.98 is rejected with its index and sum."""
    with pytest.raises(NormalizationError) as exc:
        Channel((("X", 2),), (("Y", 2),), [[0.5, 0.5], [0.49, 0.49]])
    assert exc.value.details["row"] == 1
    assert exc.value.details["sum"] == pytest.approx(0.98)


def test_iid_extension_and_stage_names():
    """Test two independent copies of a pair."""
    j = copy_pair()
    extended = probkit.iid_extension(j, 2)
    assert extended.names == ("X_1", "Y_1", "X_2", "Y_2")
    assert probkit.cmi(extended, ["X_1", "X_2"], ["Y_1", "Y_2"]) == pytest.approx(2.0)
    assert probkit.iid_extension(j, 1) is j
    with pytest.raises(InvalidParameterError):
        probkit.iid_extension(j, 0)


def test_rename_and_reorder():
    """Test renaming and permuting variables."""
    j = random_pmf(rng_for(3), [("A", 2), ("B", 3)])
    renamed = probkit.rename(j, {"A": "X"})
    assert renamed.names == ("X", "B")
    reordered = probkit.reorder(renamed, ["B", "X"])
    np.testing.assert_array_equal(reordered.table, j.table.T)
    with pytest.raises(UnknownVariableError):
        probkit.reorder(j, ["A"])


def test_cascade_of_two_bscs():
    """Test that BSC(p) then BSC(q) is BSC(p(1-q) + q(1-p))."""
    ch = probkit.cascade(binary_symmetric("X", "Y", 0.1), binary_symmetric("Y", "Z", 0.2))
    crossover = 0.1 * 0.8 + 0.2 * 0.9
    np.testing.assert_allclose(ch.rows(), [[1 - crossover, crossover], [crossover, 1 - crossover]])
    with pytest.raises(DimensionMismatchError):
        probkit.cascade(binary_symmetric("X", "Y", 0.1), binary_symmetric("W", "Z", 0.2))


def test_parallel_gathers_inputs_first():
    """Test the product channel layout."""
    ch = probkit.parallel(binary_symmetric("A", "B", 0.1), binary_symmetric("C", "D", 0.3))
    assert ch.input_names == ("A", "C")
    assert ch.output_names == ("B", "D")
    assert ch.table[0, 1, 0, 1] == pytest.approx(0.9 * 0.7)
    assert ch.table[1, 0, 0, 0] == pytest.approx(0.1 * 0.7)


def test_product_rejects_shared_names():
    """Test product of joints with a common variable."""
    j = JointPMF.uniform((("A", 2),))
    with pytest.raises(VariableCollisionError):
        probkit.product(j, j)


def test_stage_mixture_of_identical_stages():
    """Test the mixture of i.i.d. stages equals the single-stage law."""
    j = random_pmf(rng_for(5), [("X", 2), ("Y", 2)])
    extended = probkit.iid_extension(j, 3)
    stages = [[f"X_{s}", f"Y_{s}"] for s in (1, 2, 3)]
    mixture = probkit.stage_mixture(extended, stages, ["X", "Y"])
    np.testing.assert_allclose(mixture.table, j.table, atol=1e-12)
    with_selector = probkit.stage_mixture(extended, stages, ["X", "Y"], selector="G")
    assert with_selector.names == ("G", "X", "Y")
    assert with_selector.table.sum() == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_chain_rule(seed):
    """Test I(A;B,C) = I(A;B) + I(A;C|B) on random joints."""
    j = random_pmf(rng_for(seed), [("A", 2), ("B", 3), ("C", 2)])
    lhs = probkit.cmi(j, ["A"], ["B", "C"])
    rhs = probkit.cmi(j, ["A"], ["B"]) + probkit.cmi(j, ["A"], ["C"], ["B"])
    assert lhs == pytest.approx(rhs, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_data_processing(seed):
    """Test I(X;Z) <= I(X;Y) for a Markov chain X - Y - Z."""
    rng = rng_for(seed)
    j = random_pmf(rng, [("X", 3)])
    joint = probkit.compose(random_channel(rng, [("X", 3)], [("Y", 2)]), j)
    joint = probkit.compose(random_channel(rng, [("Y", 2)], [("Z", 3)]), joint)
    assert probkit.cmi(joint, ["X"], ["Z"]) <= probkit.cmi(joint, ["X"], ["Y"]) + 1e-12


@settings(max_examples=50, deadline=None)
@given(seed=seeds)
def test_compose_then_marginalize_recovers_input(seed):
    """Test summing out the channel outputs gives back the input joint."""
    rng = rng_for(seed)
    j = random_pmf(rng, [("A", 2), ("B", 3)])
    joint = probkit.compose(random_channel(rng, [("B", 3), ("A", 2)], [("C", 2), ("D", 3)]), j)
    np.testing.assert_allclose(probkit.marginalize(joint, ["A", "B"]).table, j.table, rtol=0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(min_value=1, max_value=3))
def test_iid_extension_entropy_is_additive(seed, n):
    """Test H of n independent copies is n times H of one."""
    j = random_pmf(rng_for(seed), [("X", 2), ("Y", 3)])
    extended = probkit.iid_extension(j, n)
    assert probkit.entropy(extended, extended.names) == pytest.approx(n * probkit.entropy(j, j.names), abs=1e-12)


def test_compose_refuses_oversized_joint(monkeypatch):
    """Test the size cap is applied to the composed joint before it is built."""
    from cutset_region.config import settings as config

    j = JointPMF.uniform((("A", 4), ("B", 4)))
    ch = random_channel(rng_for(2), [("B", 4)], [("C", 4)])
    monkeypatch.setattr(config, "max_table_entries", 32)
    with pytest.raises(TableSizeExceededError) as exc:
        probkit.compose(ch, j)
    assert exc.value.details == {"entries": 64, "cap": 32}
