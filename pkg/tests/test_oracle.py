"""Brute-force lifetime oracle and the two executors."""

import numpy as np
import pytest

from actplan import (
    ClobberError,
    DimensionMismatchError,
    LayerSpec,
    NetworkSpec,
    SizeLimitError,
    execute_network_in_arena,
    execute_network_reference,
    min_offset,
    min_safe_offset_bruteforce,
    plan_network,
    plan_with_offsets,
    seeded_test_vectors,
    trace_layer,
    verify_layer,
)


def square(edge, c_in=1, k=1, s=1, p=0, c_out=1, groups=1):
    return LayerSpec(x_in=edge, y_in=edge, c_in=c_in, k_x=k, k_y=k, s_x=s, s_y=s,
                     p_x=p, p_y=p, c_out=c_out, groups=groups)


class TestTrace:
    def test_identity_scan(self):
        trace = trace_layer(square(2))
        assert trace.reads == ((0, 0), (1, 1), (2, 2), (3, 3))
        assert trace.writes == ((0, 0), (1, 1), (2, 2), (3, 3))

    def test_corner_window_skips_padded_taps(self):
        trace = trace_layer(square(4, k=3, p=1))
        block0 = sorted(addr for k, addr in trace.reads if k == 0)
        assert block0 == [0, 1, 4, 5]  # 4 of 9 taps in bounds

    def test_two_blocks_per_pixel(self):
        trace = trace_layer(square(2, c_out=2))
        assert len(trace.writes) == 8
        assert [k for k, _ in trace.writes] == list(range(8))

    def test_reads_stay_in_bounds(self):
        for layer in (square(4, k=3, p=1), square(3, k=3, p=1, s=2),
                      square(2, k=1, p=1), square(5, c_in=3, k=2, p=1, c_out=2)):
            m_conv = layer.x_in * layer.y_in * layer.c_in
            trace = trace_layer(layer)
            assert all(0 <= addr < m_conv for _, addr in trace.reads)
            blocks = [k for k, _ in trace.reads]
            assert blocks == sorted(blocks)

    def test_depthwise_reads_own_group_only(self):
        trace = trace_layer(square(2, c_in=2, c_out=2, groups=2))
        for k, addr in trace.reads:
            assert addr % 2 == k % 2  # channel c_out reads channel c_in == c_out

    def test_size_cap(self):
        big = LayerSpec(x_in=640, y_in=640, c_in=64, k_x=3, k_y=3, s_x=1, s_y=1,
                        p_x=1, p_y=1, c_out=64)
        with pytest.raises(SizeLimitError):
            trace_layer(big)


class TestBruteForceOffset:
    def test_lockstep(self):
        for edge in (1, 3, 6):
            assert min_safe_offset_bruteforce(square(edge)) == 1

    def test_channel_doubling(self):
        # the final window's own words may be overwritten once its last tap
        # is read, which the closed form does not exploit: minimum is 3
        # against a closed-form 5
        assert min_safe_offset_bruteforce(square(2, c_out=2)) == 3

    def test_same_padding_three_by_three(self):
        assert min_safe_offset_bruteforce(square(4, k=3, p=1)) == 5

    def test_matches_exhaustive_small_search(self):
        # independent re-derivation from the literal trace: smallest d whose
        # writes never land on a word a later window still reads
        def exhaustive(layer):
            trace = trace_layer(layer)
            last_window = {}
            for k, addr in trace.reads:
                last_window[addr] = k // layer.c_out
            m_in = layer.x_in * layer.y_in * layer.c_in
            t_len = len(trace.writes)
            for d in range(1, m_in + t_len + 1):
                ok = True
                for k, _ in trace.writes:
                    a = k - d
                    if 0 <= a < m_in and last_window.get(a, -1) > k // layer.c_out:
                        ok = False
                        break
                if ok:
                    return d
            raise AssertionError("no safe offset found")

        for layer in (square(2, c_out=2), square(4, k=3, p=1), square(3, c_in=2, c_out=2),
                      square(5, k=1, s=2, c_out=3), square(2, k=1, p=1),
                      square(4, c_in=2, k=3, p=1, c_out=2, groups=2)):
            assert min_safe_offset_bruteforce(layer) == exhaustive(layer), layer

    def test_size_cap(self):
        big = LayerSpec(x_in=640, y_in=640, c_in=64, k_x=3, k_y=3, s_x=1, s_y=1,
                        p_x=1, p_y=1, c_out=64)
        with pytest.raises(SizeLimitError):
            min_safe_offset_bruteforce(big)


class TestVerify:
    def test_match_verdicts(self):
        assert verify_layer(square(4)).verdict == "match"
        assert verify_layer(square(4, k=3, p=1)).verdict == "match"
        assert verify_layer(square(5, c_in=2, k=3, p=1, c_out=2)).verdict == "match"

    def test_conservative_verdict_with_gap(self):
        rep = verify_layer(square(2, c_out=2))
        assert rep.verdict == "closed_form_conservative"
        assert (rep.d_closed_form, rep.d_oracle, rep.gap) == (5, 3, 2)

    def test_forced_unsafe(self):
        layer = square(4, k=3, p=1)
        rep = verify_layer(layer, closed_form_offset=min_safe_offset_bruteforce(layer) - 1)
        assert rep.verdict == "UNSAFE"

    def test_read_frontier_matches_future_window_needs(self):
        # at t=45 the model's frontier (1) equals the lowest address any
        # later window reads, per the trace
        layer = square(4, k=3, p=1)
        trace = trace_layer(layer)
        future = min(addr for k, addr in trace.reads if k > 5)
        from actplan import read_pointer_at
        assert read_pointer_at(45, layer) == future == 1


def identity_weights(net):
    weights = []
    for layer in net.layers:
        w = np.zeros((layer.c_out, layer.k_y, layer.k_x, layer.c_in // layer.groups),
                     dtype=np.int64)
        cy, cx = layer.k_y // 2, layer.k_x // 2
        for c in range(layer.c_out):
            w[c, cy, cx, c % (layer.c_in // layer.groups)] = 1
        weights.append((w, None))
    return weights


class TestExecutors:
    def test_identity_layer_passes_input_through(self):
        net = NetworkSpec("id", (square(4),))
        x = np.arange(16, dtype=np.int64).reshape(4, 4, 1)
        weights = identity_weights(net)
        ref = execute_network_reference(net, x, weights)
        assert np.array_equal(ref, x)
        got = execute_network_in_arena(net, plan_network(net), x, weights, checked=True)
        assert np.array_equal(got, x)

    def test_zero_weights_and_bias(self):
        net = NetworkSpec("z", (square(3, k=3, p=1),))
        x = np.ones((3, 3, 1), dtype=np.int64)
        w = np.zeros((1, 3, 3, 1), dtype=np.int64)
        out = execute_network_reference(net, x, [(w, None)])
        assert not out.any()
        out = execute_network_reference(net, x, [(w, np.array([7]))])
        assert (out == 7).all()

    def test_seeded_replay_is_deterministic(self):
        net = NetworkSpec("n", (square(4, k=3, p=1, c_out=2), square(4, c_in=2, k=3, p=1, c_out=1)))
        x1, w1 = seeded_test_vectors(net, seed=42)
        x2, w2 = seeded_test_vectors(net, seed=42)
        assert np.array_equal(x1, x2)
        a = execute_network_reference(net, x1, w1)
        b = execute_network_reference(net, x2, w2)
        assert np.array_equal(a, b)

    def test_in_arena_matches_reference(self):
        layers = (
            square(5, k=3, p=1, c_out=2),
            square(5, c_in=2, k=3, p=1, c_out=3),
            square(5, c_in=3, k=2, s=2, c_out=2),
            square(2, c_in=2, c_out=2, groups=2),
        )
        net = NetworkSpec("chain", layers)
        plan = plan_network(net)
        x, weights = seeded_test_vectors(net, seed=3)
        ref = execute_network_reference(net, x, weights)
        got = execute_network_in_arena(net, plan, x, weights, checked=True)
        assert np.array_equal(ref, got)

    def test_offset_below_minimum_clobbers(self):
        net = NetworkSpec("tight", (square(4, k=3, p=1),))
        plan = plan_network(net)
        x, weights = seeded_test_vectors(net, seed=0)
        bad = plan_with_offsets(net, [min_safe_offset_bruteforce(net.layers[0]) - 1],
                                arena_size=plan.arena_size)
        with pytest.raises(ClobberError) as exc:
            execute_network_in_arena(net, bad, x, weights, checked=True)
        assert exc.value.layer_index == 0
        assert 0 <= exc.value.address < plan.arena_size
        # unchecked execution produces a wrong result rather than raising
        got = execute_network_in_arena(net, bad, x, weights, checked=False)
        assert not np.array_equal(got, execute_network_reference(net, x, weights))

    def test_residual_carry_region_is_protected(self):
        carried = LayerSpec(x_in=4, y_in=4, c_in=1, k_x=3, k_y=3, s_x=1, s_y=1,
                            p_x=1, p_y=1, c_out=1, residual_carry_words=6)
        net = NetworkSpec("skip", (carried,))
        plan = plan_network(net)  # arena 27: 16 input + 6 carry + offset 5
        assert plan.arena_size == 27
        x, weights = seeded_test_vectors(net, seed=1)
        got = execute_network_in_arena(net, plan, x, weights, checked=True)
        assert np.array_equal(got, execute_network_reference(net, x, weights))
        # an oversized offset wraps the output region onto the carry words,
        # which stay live for the whole layer: the check must fire
        bad = plan_with_offsets(net, [12], arena_size=plan.arena_size)
        with pytest.raises(ClobberError):
            execute_network_in_arena(net, bad, x, weights, checked=True)

    def test_dimension_mismatch(self):
        net = NetworkSpec("n", (square(4),))
        x = np.zeros((3, 3, 1), dtype=np.int64)
        with pytest.raises(DimensionMismatchError):
            execute_network_reference(net, x, identity_weights(net))
        x = np.zeros((4, 4, 1), dtype=np.int64)
        w = np.zeros((2, 1, 1, 1), dtype=np.int64)
        with pytest.raises(DimensionMismatchError):
            execute_network_reference(net, x, [(w, None)])

    def test_exec_cap(self):
        big = LayerSpec(x_in=64, y_in=64, c_in=64, k_x=3, k_y=3, s_x=1, s_y=1,
                        p_x=1, p_y=1, c_out=64)
        net = NetworkSpec("big", (big,))
        x = np.zeros((64, 64, 64), dtype=np.int64)
        with pytest.raises(SizeLimitError):
            execute_network_reference(net, x, identity_weights(net))
