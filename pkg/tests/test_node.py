import statistics
import warnings

import numpy as np
import pytest

from tnlab.errors import DimensionError, EmptyNode, InvalidTemplate
from tnlab.groups import SupportSet, make_cyclic_translation_group, make_explicit_group, trivial_group
from tnlab.node import (
    TNNode,
    invariance_deficit,
    make_node,
    make_template_set,
    node_from_json,
    node_output,
    node_to_json,
    transfer_deficit,
)
from tnlab.nonlinearity import HARD_RELU, frac_power


@pytest.fixture
def c4():
    return make_cyclic_translation_group(SupportSet.range(0, 4))


def reflection8():
    """i -> -i mod 8: a permutation outside the cyclic group."""
    return make_explicit_group(SupportSet.range(0, 8),
                               permutations=[list(range(8)), [(-i) % 8 for i in range(8)]])


class TestTemplateSet:
    def test_trivial_group(self):
        ts = make_template_set([1.0, 2.0], trivial_group(SupportSet.range(0, 2)))
        np.testing.assert_array_equal(ts.transformed, [[1, 2]])

    def test_one_hot_orbit(self, c4):
        ts = make_template_set([1, 0, 0, 0], c4)
        np.testing.assert_array_equal(ts.transformed, np.eye(4))

    def test_orbit_norms(self, c8, s4_blocks, rng):
        for G in (c8, s4_blocks):
            ts = make_template_set(rng.standard_normal(len(G.support)), G)
            norms = np.sqrt((ts.transformed ** 2).sum(axis=1))
            assert np.max(np.abs(norms - norms[0])) <= 1e-12
            assert len(ts) == len(G)

    def test_errors(self, c4):
        with pytest.raises(DimensionError):
            make_template_set([1, 0, 0], c4)
        with pytest.raises(InvalidTemplate):
            make_template_set([1, np.inf, 0, 0], c4)

    def test_transfer_identity(self, c8, rng):
        ts = make_template_set(rng.standard_normal(8), c8)
        for _ in range(20):
            assert transfer_deficit(ts, rng.standard_normal(8)) <= 1e-12


class TestNodeOutput:
    def test_mean(self, c4):
        node = make_node([[1, 0, 0, 0]], c4, "mean", HARD_RELU)
        np.testing.assert_allclose(node_output(node, [1, 2, 3, 4]), [2.5])

    def test_max(self, c4):
        node = make_node([[1, 0, 0, 0]], c4, "max", HARD_RELU)
        np.testing.assert_array_equal(node_output(node, [1, 2, 3, 4]), [4.0])

    def test_zero_input(self, c8, rng):
        node = make_node(list(rng.standard_normal((3, 8))), c8, "mean", HARD_RELU)
        np.testing.assert_array_equal(node_output(node, np.zeros(8)), [0, 0, 0])

    def test_batched_matches_single(self, c8, rng):
        templates = list(rng.standard_normal((2, 8)))
        X = rng.standard_normal((5, 8))
        node = make_node(templates, c8, "max", HARD_RELU)
        np.testing.assert_array_equal(node_output(node, X), np.stack([node_output(node, x) for x in X]))
        # vectorized pow may round differently by one ulp depending on array length
        node = make_node(templates, c8, "max", frac_power(0.9))
        np.testing.assert_allclose(node_output(node, X), np.stack([node_output(node, x) for x in X]),
                                   rtol=0, atol=1e-12)

    def test_errors(self, c4):
        with pytest.raises(EmptyNode):
            make_node([], c4)
        node = make_node([[1, 0, 0, 0]], c4)
        with pytest.raises(DimensionError):
            node_output(node, [1.0, 2.0])
        with pytest.raises(EmptyNode):
            TNNode((), "mean", HARD_RELU, c4.support)

    def test_zero_template_warns(self, c4):
        with pytest.warns(UserWarning):
            node = make_node([[0, 0, 0, 0]], c4)
        np.testing.assert_array_equal(node_output(node, [1, 2, 3, 4]), [0.0])

    def test_channel_permutation(self, c8, rng):
        templates = list(rng.standard_normal((3, 8)))
        x = rng.standard_normal(8)
        a = node_output(make_node(templates, c8, "max"), x)
        b = node_output(make_node(templates[::-1], c8, "max"), x)
        np.testing.assert_array_equal(a, b[::-1])


class TestInvariance:
    @pytest.mark.parametrize("pooling", ["mean", "max"])
    @pytest.mark.parametrize("channels", [1, 3])
    def test_own_group(self, c8, rng, pooling, channels):
        node = make_node(list(rng.standard_normal((channels, 8))), c8, pooling, HARD_RELU)
        for _ in range(100):
            assert invariance_deficit(node, rng.standard_normal(8), c8) <= 1e-12

    def test_trivial_probe(self, c8, rng):
        node = make_node([rng.standard_normal(8)], c8, "max")
        assert invariance_deficit(node, rng.standard_normal(8), trivial_group(c8.support)) == 0.0

    def test_reflection_negative_control(self, c8, rng):
        node = make_node([rng.standard_normal(8)], c8, "max", HARD_RELU)
        measured = [invariance_deficit(node, rng.standard_normal(8), reflection8()) for _ in range(100)]
        # recorded, not asserted per instance
        assert statistics.median(measured) > 0

    def test_mean_pooled_cyclic_node_sees_every_permutation_as_invariant(self, c8, rng):
        # the C_8 orbit average of any template is constant, so the node only reads sum(x)
        node = make_node([rng.standard_normal(8)], c8, "mean", HARD_RELU)
        assert invariance_deficit(node, rng.standard_normal(8), reflection8()) <= 1e-12

    def test_probe_outside_support(self, c4):
        node = make_node([[1, 0, 0, 0]], c4)
        probe = make_cyclic_translation_group(SupportSet.range(2, 6))
        with pytest.raises(DimensionError):
            invariance_deficit(node, np.ones(6), probe)


class TestJson:
    def test_round_trip(self, c8, rng):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            node = make_node(list(rng.standard_normal((2, 8))), c8, "max", frac_power(0.9))
        again = node_from_json(node_to_json(node))
        x = rng.standard_normal(8)
        np.testing.assert_array_equal(node_output(node, x), node_output(again, x))
        assert again.pooling == "max"
