import itertools
import json
import math

import numpy as np
import pytest

from tnlab import network as nw
from tnlab.errors import DimensionError, OrbitMismatch, UnsupportedTransform
from tnlab.groups import (
    GroupElement,
    SupportSet,
    act,
    compose,
    cyclic_blocks,
    embed,
    make_block_permutation_group,
    make_cyclic_translation_group,
    make_product_group,
)
from tnlab.node import make_node, make_template_set, node_output
from tnlab.nonlinearity import HARD_RELU, IDENTITY, frac_power


@pytest.fixture(scope="module")
def fig1():
    return nw.fig1_network()


@pytest.fixture(scope="module")
def deep3():
    return nw.certified_network(depth=3)


def full_identity(dim):
    return GroupElement(SupportSet.range(0, dim), perm=np.arange(dim))


class TestHierarchy:
    def test_regular(self):
        h = nw.SupportHierarchy.regular(4, [4])
        assert [len(layer) for layer in h.layers] == [4, 1]
        assert h.is_covering
        assert set(h.layers[1][0].indices) == set(range(16))

    def test_union_must_match(self):
        base = cyclic_blocks(2, 2)
        with pytest.raises(ValueError):
            nw.SupportHierarchy((tuple(base), (SupportSet((0, 1, 2), 4),)), (((0, 1),),))

    def test_children_contiguous_and_unique(self):
        base = cyclic_blocks(3, 1)
        with pytest.raises(ValueError):
            nw.SupportHierarchy.from_parent_map(base, [[(0, 2)]])
        with pytest.raises(ValueError):
            nw.SupportHierarchy.from_parent_map(base, [[(0, 1), (1, 2)]])

    def test_not_covering(self):
        h = nw.SupportHierarchy.from_parent_map(cyclic_blocks(3, 2), [[(0, 1), (2,)]])
        assert not h.is_covering


class TestForward:
    def test_single_layer_is_node_output(self, rng):
        net = nw.certified_network(depth=1, block_size=6, templates="random", rng=1)
        x = rng.standard_normal(6)
        np.testing.assert_array_equal(nw.forward(net, x)[0], node_output(net.layers[0][0], x))

    def test_fig1_layer1(self, fig1):
        out = nw.forward(fig1, np.arange(1.0, 17.0))
        np.testing.assert_allclose(out[0], [2.5, 6.5, 10.5, 14.5], atol=1e-15)

    def test_zero_input(self, fig1, deep3):
        for net in (fig1, deep3):
            for layer in nw.forward(net, np.zeros(net.input_dim)):
                assert not np.any(layer)

    def test_dimension_error(self, fig1):
        with pytest.raises(DimensionError):
            nw.forward(fig1, np.ones(15))

    def test_output_dims(self):
        net = nw.certified_network(depth=3, channels=2)
        outs = nw.forward(net, np.ones(net.input_dim))
        assert [o.shape[-1] for o in outs] == [16, 4, 2]

    def test_upper_support_must_address_features(self, fig1):
        bad_support = SupportSet((0, 1, 2, 4), 5)
        G = make_block_permutation_group([SupportSet((i,), 5) for i in bad_support])
        node = make_node([np.ones(4)], G)
        with pytest.raises(DimensionError):
            nw.TNNetwork(fig1.hierarchy, (fig1.layers[0], (node,)))


class TestApplyTransform:
    def test_identity(self, rng):
        x = rng.standard_normal(6)
        spec = nw.TransformSpec((full_identity(6), full_identity(6)), IDENTITY)
        assert nw.apply_transform(spec, x).tobytes() == x.tobytes()

    def test_single_stage_skips_activation(self):
        g = make_cyclic_translation_group(SupportSet.range(0, 3))[1]
        spec = nw.TransformSpec((g,), HARD_RELU)
        np.testing.assert_array_equal(nw.apply_transform(spec, [-1.0, 2.0, -3.0]), [-3, -1, 2])

    def test_hand_evaluated(self):
        swap = make_block_permutation_group(cyclic_blocks(2, 2))[1]
        shifts = make_product_group([make_cyclic_translation_group(b) for b in cyclic_blocks(2, 2)])
        g1 = next(g for g in shifts if g.id == (1, 1))
        spec = nw.TransformSpec((g1, swap), HARD_RELU)
        # [1,-2,3,4] -swap-> [3,4,1,-2] -relu-> [3,4,1,0] -shift-> [4,3,0,1]
        np.testing.assert_array_equal(nw.apply_transform(spec, [1.0, -2.0, 3.0, 4.0]), [4, 3, 0, 1])


class TestLearnTemplates:
    def test_round_trip(self):
        G = make_cyclic_translation_group(SupportSet.range(0, 4))
        seq = [np.roll([1.0, 0, 0, 0], k) for k in range(4)]
        (ts,) = nw.learn_layer_templates(seq, G)
        np.testing.assert_array_equal(ts.transformed, make_template_set([1, 0, 0, 0], G).transformed)

    def test_corrupted(self):
        G = make_cyclic_translation_group(SupportSet.range(0, 4))
        seq = [np.roll([1.0, 0, 0, 0], k) for k in range(4)]
        seq[2] = np.array([0.0, 0.0, 0.9, 0.0])
        with pytest.raises(OrbitMismatch):
            nw.learn_layer_templates(seq, G)
        with pytest.raises(OrbitMismatch):
            nw.learn_layer_templates(seq[:3], G)

    def test_given_template(self, rng, s4_blocks):
        sets = nw.learn_layer_templates(list(rng.standard_normal((2, 16))), s4_blocks, "given_template")
        for ts in sets:
            norms = np.linalg.norm(ts.transformed, axis=1)
            assert np.max(np.abs(norms - norms[0])) <= 1e-12

    def test_multiple_orbits(self, rng):
        G = make_cyclic_translation_group(SupportSet.range(0, 5))
        bases = rng.standard_normal((3, 5))
        seq = [np.roll(t, k) for t in bases for k in range(5)]
        sets = nw.learn_layer_templates(seq, G)
        assert len(sets) == 3
        for ts, t in zip(sets, bases):
            np.testing.assert_array_equal(ts.template, t)


class TestLifting:
    def test_block_swap_lifts_to_block_swap(self, fig1):
        G = fig1.node_group(1, 0)
        g = next(e for e in G if e.id == (1, 0, 2, 3))
        lifted = nw.lift_element(fig1, 1, 0, g)
        x = np.arange(16.0)
        expected = np.concatenate([x[4:8], x[0:4], x[8:16]])
        np.testing.assert_array_equal(act(lifted, x), expected)

    def test_non_block_element_rejected(self):
        net = nw.certified_network(depth=2, channels=2, branching=[2], block_size=3)
        s = net.layers[1][0].support
        g = GroupElement(s, perm=[1, 0, 2, 3])
        with pytest.raises(UnsupportedTransform):
            nw.lift_element(net, 1, 0, g)


class TestFeatureCovariance:
    def test_identity(self, fig1, rng):
        assert nw.feature_covariance_deficit(fig1, rng.standard_normal(16), full_identity(16)) == 0.0

    def test_all_block_permutations(self, fig1, rng):
        X = rng.standard_normal((100, 16))
        for g in fig1.lifted_group(1, 0):
            assert nw.feature_covariance_deficit(fig1, X, g) <= 1e-12

    def test_with_in_block_shifts(self, fig1, rng):
        X = rng.standard_normal((100, 16))
        shifts = [fig1.lifted_group(0, i) for i in range(4)]
        for _ in range(30):
            s = embed([G[int(rng.integers(4))] for G in shifts], fig1.input_support)
            b = embed([fig1.lifted_group(1, 0)[int(rng.integers(24))]], fig1.input_support)
            for g in (compose(s, b), compose(b, s)):
                assert nw.feature_covariance_deficit(fig1, X, g) <= 1e-12

    def test_not_aligned(self, fig1):
        g = GroupElement(SupportSet.range(0, 16), perm=[1, 0] + list(range(2, 4)) + [4, 5, 6, 7][::-1]
                         + list(range(8, 16)))
        nw.feature_covariance_deficit(fig1, np.ones(16), g)  # within-block: still aligned
        straddle = GroupElement(SupportSet.range(0, 16), perm=[4, 1, 2, 3, 0] + list(range(5, 16)))
        with pytest.raises(UnsupportedTransform):
            nw.feature_covariance_deficit(fig1, np.ones(16), straddle)


class TestNonlinearInvariance:
    def test_identity_spec(self, fig1, rng):
        spec = nw.make_transform_spec(fig1, [[0, 0, 0, 0], [0]])
        assert nw.nonlinear_invariance_deficit(fig1, rng.uniform(0, 1, 16), spec) == 0.0

    def test_random_specs(self, fig1, rng):
        X = rng.uniform(0, 1, (20, 16))
        for _ in range(200):
            spec = nw.random_transform_spec(fig1, rng)
            assert nw.nonlinear_invariance_deficit(fig1, X, spec) <= 1e-10

    def test_three_layers(self, deep3, rng):
        X = rng.uniform(0, 1, (20, 32))
        for _ in range(100):
            spec = nw.random_transform_spec(deep3, rng)
            assert nw.nonlinear_invariance_deficit(deep3, X, spec) <= 1e-10

    @pytest.mark.parametrize("kwargs", [
        {"channels": 2},
        {"pooling": "max"},
        {"templates": "random", "top_pooling": "max"},
    ])
    def test_variants(self, kwargs, rng):
        net = nw.certified_network(depth=2, rng=5, **kwargs)
        X = rng.uniform(0, 1, (10, net.input_dim))
        for _ in range(50):
            spec = nw.random_transform_spec(net, rng)
            assert nw.nonlinear_invariance_deficit(net, X, spec) <= 1e-10

    def test_layer0_absorption(self, fig1, rng):
        X = rng.uniform(0, 1, (10, 16))
        base = nw.random_transform_spec(fig1, rng)
        ref = nw.top(fig1, nw.apply_transform(base, X))
        for i in range(4):
            for g in fig1.lifted_group(0, i):
                g_full = embed([g], fig1.input_support)
                spec = nw.TransformSpec((compose(g_full, base.elements[0]),) + base.elements[1:], HARD_RELU)
                np.testing.assert_allclose(nw.top(fig1, nw.apply_transform(spec, X)), ref, rtol=0, atol=1e-12)

    def test_spec_choices_round_trip(self, deep3, rng):
        for _ in range(20):
            spec = nw.random_transform_spec(deep3, rng)
            assert nw.spec_choices(deep3, spec) == spec.choices

    def test_outside_class_rejected_then_measured(self, fig1, rng):
        straddle = GroupElement(SupportSet.range(0, 16), perm=[4, 1, 2, 3, 0] + list(range(5, 16)))
        spec = nw.TransformSpec((full_identity(16), straddle), HARD_RELU)
        with pytest.raises(UnsupportedTransform):
            nw.nonlinear_invariance_deficit(fig1, np.ones(16), spec)
        net = nw.fig1_network(templates="random", rng=3)
        X = rng.uniform(0, 1, (50, 16))
        measured = nw.nonlinear_invariance_deficit(net, X, spec, strict=False, per_sample=True)
        assert np.median(measured) > 0

    def test_uncertified_network_rejected(self, rng):
        net = nw.certified_network(depth=2, activation=frac_power(0.9))
        spec = nw.random_transform_spec(net, rng)
        with pytest.raises(UnsupportedTransform):
            nw.nonlinear_invariance_deficit(net, np.ones(16), spec)

    def test_exhaustive_count(self, fig1):
        assert nw.layer_group_sizes(fig1) == [256, 24]
        assert sum(1 for _ in itertools.islice(nw.iter_transform_specs(fig1), 300)) == 300


class TestHierarchyCost:
    @pytest.mark.parametrize("sizes,expected", [
        ([4, 4, 4], (64, 12)),
        ([7], (7, 7)),
        ([2, 3, 5], (30, 10)),
    ])
    def test_examples(self, sizes, expected):
        assert nw.hierarchy_cost(sizes) == expected

    def test_sum_never_exceeds_product_without_trivial_layers(self):
        for length in range(1, 5):
            for sizes in itertools.product(range(2, 6), repeat=length):
                flat, hier = nw.hierarchy_cost(sizes)
                assert flat == math.prod(sizes) and hier == sum(sizes)
                assert hier <= flat

    def test_trivial_layers_cost_one_each(self):
        # a size-1 layer adds 1 to the sum but leaves the product alone
        assert nw.hierarchy_cost([1, 2]) == (2, 3)
        assert nw.hierarchy_cost([1, 1, 1]) == (1, 3)

    def test_equality_cases(self):
        assert nw.hierarchy_cost([2, 2]) == (4, 4)
        assert nw.hierarchy_cost([1, 2, 3]) == (6, 6)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            nw.hierarchy_cost([2**32, 2**32])

    def test_invalid(self):
        with pytest.raises(ValueError):
            nw.hierarchy_cost([3, 0])


class TestJson:
    def test_round_trip(self, deep3, rng):
        doc = json.loads(json.dumps(nw.network_to_json(deep3)))
        again = nw.network_from_json(doc)
        X = rng.standard_normal((4, 32))
        for a, b in zip(nw.forward(deep3, X), nw.forward(again, X)):
            np.testing.assert_array_equal(a, b)
