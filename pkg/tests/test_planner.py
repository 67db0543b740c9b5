"""Network-level planning: arena size, placements, baseline, savings."""

from fractions import Fraction

import numpy as np
import pytest

from actplan import (
    ChainMismatchError,
    InvalidLayerError,
    LayerSpec,
    NetworkSpec,
    count_parameters,
    derive_dims,
    execute_network_in_arena,
    execute_network_reference,
    min_layer_memory,
    pingpong_network,
    plan_network,
    plan_with_offsets,
    savings_report,
    seeded_test_vectors,
)


def square(edge, c_in=1, k=1, s=1, p=0, c_out=1, groups=1, carry=0):
    return LayerSpec(x_in=edge, y_in=edge, c_in=c_in, k_x=k, k_y=k, s_x=s, s_y=s,
                     p_x=p, p_y=p, c_out=c_out, groups=groups, residual_carry_words=carry)


def lockstep_pair(edge):
    layer = square(edge)
    return NetworkSpec("pair", (layer, layer))


class TestNetworkSpec:
    def test_chain_mismatch_names_layers(self):
        l1 = square(4, c_out=8)
        l2 = square(4, c_in=4, c_out=2)
        with pytest.raises(ChainMismatchError, match=r"layers 1 -> 2"):
            NetworkSpec("bad", (l1, l2))

    def test_spatial_chain_checked(self):
        l1 = square(4, k=3)  # 4 -> 2
        l2 = square(4)
        with pytest.raises(ChainMismatchError):
            NetworkSpec("bad", (l1, l2))

    def test_needs_layers(self):
        with pytest.raises(InvalidLayerError):
            NetworkSpec("empty", ())


class TestPlan:
    def test_single_lockstep_layer(self):
        net = NetworkSpec("id", (square(5),))
        plan = plan_network(net)
        assert plan.arena_size == 26
        assert plan.layer_plans[0].input_base == 0
        assert plan.layer_plans[0].output_base == 25

    def test_two_identical_padded_layers(self):
        layer = square(4, k=3, p=1)
        plan = plan_network(NetworkSpec("two", (layer, layer)))
        assert plan.arena_size == 21
        assert plan.pingpong_size == 32

    def test_bases_descend_and_chain(self):
        net = NetworkSpec("chain", (square(4, k=3, p=1, c_out=2),
                                    square(4, c_in=2, k=3, p=1, c_out=1),
                                    square(4, k=3, p=1, c_out=3)))
        plan = plan_network(net)
        size = plan.arena_size
        for prev, lp in zip(plan.layer_plans, plan.layer_plans[1:]):
            assert lp.input_base == prev.output_base
        for lp, layer in zip(plan.layer_plans, net.layers):
            assert lp.output_base == (lp.input_base - lp.d) % size
            assert 0 <= lp.output_base < size
            assert lp.m_min_layer == min_layer_memory(layer)
            assert lp.m_min_layer <= size

    def test_arena_is_max_over_layers(self):
        layers = (square(4, k=3, p=1, c_out=2), square(4, c_in=2, k=3, p=1, c_out=1))
        both = plan_network(NetworkSpec("n", layers))
        assert both.arena_size == max(min_layer_memory(l) for l in layers)
        # dropping the non-maximal layer cannot grow the arena
        solo = plan_network(NetworkSpec("n1", layers[:1]))
        assert solo.arena_size <= both.arena_size

    def test_degenerate_padded_layer_arena_holds_output(self):
        # every window column of this layer overlaps padding; its output has
        # more words than input + offset spans, so the arena must widen to
        # the output size for the plan to execute at all
        layer = square(2, k=1, p=1)
        dd = derive_dims(layer)
        assert dd.m_out > min_layer_memory(layer)
        net = NetworkSpec("degen", (layer,))
        plan = plan_network(net)
        assert plan.arena_size == dd.m_out
        x, weights = seeded_test_vectors(net, seed=5)
        got = execute_network_in_arena(net, plan, x, weights, checked=True)
        assert np.array_equal(got, execute_network_reference(net, x, weights))

    def test_plan_with_offsets_validation(self):
        net = lockstep_pair(3)
        with pytest.raises(InvalidLayerError):
            plan_with_offsets(net, [1])
        with pytest.raises(InvalidLayerError):
            plan_with_offsets(net, [1, -1])


class TestBaselineAndParams:
    def test_pingpong_is_worst_adjacent_pair(self):
        # layer activations sized 4 -> 8 -> 2: pairs are 4+8 and 8+2
        l1 = LayerSpec(x_in=2, y_in=2, c_in=1, k_x=1, k_y=1, s_x=1, s_y=1,
                       p_x=0, p_y=0, c_out=2)
        l2 = LayerSpec(x_in=2, y_in=2, c_in=2, k_x=2, k_y=2, s_x=2, s_y=2,
                       p_x=0, p_y=0, c_out=2)
        net = NetworkSpec("n", (l1, l2))
        assert pingpong_network(net) == 12

    def test_two_equal_layers(self):
        assert pingpong_network(lockstep_pair(4)) == 32

    def test_carry_counts_in_baseline(self):
        layer = square(4, k=3, p=1, carry=6)
        assert pingpong_network(NetworkSpec("c", (layer,))) == 16 + 6 + 16

    def test_parameter_words(self):
        assert count_parameters(NetworkSpec("a", (square(2),))) == 2
        big = square(8, c_in=64, k=3, p=1, c_out=64)
        assert count_parameters(NetworkSpec("b", (big,))) == 9 * 64 * 64 + 64
        dw = square(8, c_in=64, k=3, p=1, c_out=64, groups=64)
        assert count_parameters(NetworkSpec("c", (dw,))) == 9 * 64 + 64


class TestSavings:
    def test_formulas(self):
        plan = savings_report(lockstep_pair(10))
        # two equal 100-word layers: arena 101, baseline 200
        assert plan.arena_size == 101
        assert plan.pingpong_size == 200
        assert plan.savings_activations_pct == pytest.approx(49.5)
        p, a, pp = plan.parameter_words, plan.arena_size, plan.pingpong_size
        expected_total = ((p + pp) - (p + a)) / (p + pp) * 100
        assert plan.savings_total_pct == pytest.approx(expected_total)

    @pytest.mark.parametrize("edge", [2, 10, 100])
    def test_lockstep_pair_approaches_half(self, edge):
        m = edge * edge
        plan = savings_report(lockstep_pair(edge))
        assert Fraction(plan.pingpong_size - plan.arena_size, plan.pingpong_size) \
            == Fraction(m - 1, 2 * m)

    def test_savings_bounded(self):
        for net in (lockstep_pair(4),
                    NetworkSpec("d", (square(2, k=1, p=1),)),
                    NetworkSpec("s", (square(6, c_in=2, k=3, p=1, c_out=2),))):
            plan = plan_network(net)
            assert 0 <= plan.savings_activations_pct < 50


class TestPackedPlanning:
    def test_packed_plan_halves_words(self):
        layer = square(4, c_in=2, c_out=2)
        packed = plan_network(NetworkSpec("p", (layer, layer), packing=2))
        plain = plan_network(NetworkSpec("q", (layer, layer)))
        assert packed.arena_size == 17  # 16 pixels one word each, lockstep
        assert plain.arena_size == 34   # d = 2 at one word per datum
        assert packed.pingpong_size * 2 == plain.pingpong_size
        # parameters stay in raw words regardless of packing
        assert packed.parameter_words == plain.parameter_words
