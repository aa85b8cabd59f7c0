import itertools
import json
import math

import numpy as np
import pytest

from renyicq.channels import (
    GcqChannel,
    InputDistribution,
    TypeClass,
    average_output,
    channel_from_json,
    channel_to_json,
    lifted_state,
    load_channel,
    noiseless_channel,
    parse_preset,
    product_channel,
    product_distribution,
    random_cq_channel,
    save_channel,
    type_class_size,
    type_mixing_check,
    type_of,
)
from renyicq.exceptions import ChannelFormatError, ResourceLimitError
from renyicq.operators import HermitianOperator, partial_trace


class TestInputDistribution:
    def test_validation(self):
        with pytest.raises(ValueError):
            InputDistribution({"a": 0.5, "b": 0.6})
        with pytest.raises(ValueError):
            InputDistribution({"a": 1.2, "b": -0.2})

    def test_support_and_entropy(self):
        p = InputDistribution({"a": 0.5, "b": 0.5, "c": 0.0})
        assert p.support == ("a", "b")
        assert p.entropy() == pytest.approx(math.log(2.0))

    def test_point(self):
        p = InputDistribution.point("x")
        assert p.probability("x") == 1.0
        assert p.entropy() == 0.0


class TestGcqChannel:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            GcqChannel({"a": np.eye(2), "b": np.eye(3)})

    def test_psd_enforced(self):
        with pytest.raises(ValueError):
            GcqChannel({"a": np.diag([1.0, -0.5])})

    def test_is_cq(self):
        w, _ = noiseless_channel(2)
        assert w.is_cq
        g = GcqChannel({"a": 2.0 * np.eye(2)})
        assert not g.is_cq

    def test_unknown_symbol(self):
        w, _ = noiseless_channel(2)
        with pytest.raises(ValueError):
            w.output("zz")

    def test_alphabet_sorted(self):
        w = GcqChannel({"b": np.eye(2) / 2, "a": np.eye(2) / 2})
        assert w.alphabet == ("a", "b")


class TestAverageOutput:
    def test_noiseless_uniform(self):
        w, p = noiseless_channel(2)
        assert np.allclose(average_output(w, p).mat, np.eye(2) / 2)

    def test_point_distribution(self):
        w, _ = noiseless_channel(3)
        p = InputDistribution.point("1")
        assert np.allclose(average_output(w, p).mat, w.output("1").mat)

    def test_trace_linearity(self):
        rng = np.random.default_rng(0)
        w, p = random_cq_channel(3, 4, rng)
        want = sum(prob * w.output(s).trace() for s, prob in p.items())
        assert average_output(w, p).trace() == pytest.approx(want, abs=1e-12)


class TestLiftedState:
    def test_single_support_symbol(self):
        w, _ = noiseless_channel(2)
        p = InputDistribution.point("0")
        lifted = lifted_state(w, p)
        assert np.allclose(lifted.mat, w.output("0").mat)

    def test_noiseless_binary_blocks(self):
        w, p = noiseless_channel(2)
        lifted = lifted_state(w, p)
        assert np.allclose(lifted.mat, np.diag([0.5, 0.0, 0.0, 0.5]))

    def test_unit_trace(self):
        rng = np.random.default_rng(1)
        w, p = random_cq_channel(2, 3, rng)
        assert lifted_state(w, p).trace() == pytest.approx(1.0, abs=1e-12)

    def test_marginals(self):
        rng = np.random.default_rng(2)
        w, p = random_cq_channel(2, 3, rng)
        lifted = lifted_state(w, p)
        k = len(p.support)
        classical = partial_trace(lifted, (k, 2), 0).mat
        want = np.diag([p.probability(s) for s in p.support])
        assert np.abs(classical - want).max() < 1e-12
        quantum = partial_trace(lifted, (k, 2), 1).mat
        assert np.abs(quantum - average_output(w, p).mat).max() < 1e-12

    def test_alphabet_cap(self):
        outs = {f"s{i:02d}": np.eye(2) / 2 for i in range(17)}
        w = GcqChannel(outs)
        p = InputDistribution.uniform(w.alphabet)
        with pytest.raises(ResourceLimitError):
            lifted_state(w, p)

    def test_requires_cq(self):
        w = GcqChannel({"a": 2.0 * np.eye(2)})
        with pytest.raises(ValueError):
            lifted_state(w, InputDistribution.point("a"))


class TestProducts:
    def test_outputs_are_tensor_products(self):
        rng = np.random.default_rng(3)
        w, p = random_cq_channel(2, 2, rng)
        ww = product_channel(w, w)
        got = ww.output("(0,1)").mat
        want = np.kron(w.output("0").mat, w.output("1").mat)
        assert np.allclose(got, want)
        assert ww.dim == 4

    def test_product_distribution(self):
        p = InputDistribution({"0": 0.25, "1": 0.75})
        pp = product_distribution(p, p)
        assert pp.probability("(0,1)") == pytest.approx(0.25 * 0.75)
        assert sum(v for _, v in pp.items()) == pytest.approx(1.0)

    def test_dimension_cap(self):
        w1 = GcqChannel({"a": np.eye(64) / 64})
        w2 = GcqChannel({"a": np.eye(65) / 65})
        with pytest.raises(ResourceLimitError):
            product_channel(w1, w2)


class TestTypes:
    def test_type_of(self):
        t = type_of([0, 1, 0, 1])
        assert dict(t.counts) == {"0": 2, "1": 2}
        assert t.n == 4

    def test_constant_sequence(self):
        t = type_of(["a"] * 5)
        assert dict(t.counts) == {"a": 5}

    def test_permutation_invariance(self):
        assert type_of("abcab").counts == type_of("babca").counts

    def test_type_class_size_binary(self):
        t = TypeClass.from_counts({"0": 2, "1": 2})
        size, (lo, hi) = type_class_size(t)
        # oracle: enumerate all binary length-4 sequences with two '1's
        brute = sum(1 for seq in itertools.product("01", repeat=4)
                    if seq.count("1") == 2)
        assert size == brute == 6
        assert lo == pytest.approx(16.0 / 25.0)
        assert hi == pytest.approx(16.0)
        assert lo <= size <= hi

    def test_point_type(self):
        size, _ = type_class_size(TypeClass.from_counts({"a": 5}))
        assert size == 1

    def test_singleton(self):
        size, _ = type_class_size(TypeClass.from_counts({"a": 1}))
        assert size == 1

    def test_n_cap(self):
        with pytest.raises(ValueError):
            type_class_size(TypeClass.from_counts({"a": 21}))

    def test_exact_integer_bounds(self):
        for n in range(1, 13):
            for k1 in range(n + 1):
                t = TypeClass.from_counts({"0": k1, "1": n - k1}, n)
                size, _ = type_class_size(t)
                kk = math.prod(c ** c for _, c in t.counts)
                s = len(t.support)
                assert size * kk <= n ** n
                assert size * (n + 1) ** s * kk >= n ** n

    def test_type_probability(self):
        t = TypeClass.from_counts({"a": 2, "b": 3})
        p = t.as_distribution
        prob = math.prod(p.probability(s) ** c for s, c in t.counts)
        assert prob == pytest.approx(math.exp(-t.n * p.entropy()), rel=1e-12)


class TestTypeMixing:
    def test_uniform_binary(self):
        p = InputDistribution({"0": 0.5, "1": 0.5})
        out = type_mixing_check(p, 2)
        assert out.probability("0") == pytest.approx(0.5, abs=1e-15)

    def test_point(self):
        p = InputDistribution.point("x")
        assert type_mixing_check(p, 4).probability("x") == pytest.approx(1.0)

    def test_skewed_binary(self):
        p = InputDistribution({"0": 0.25, "1": 0.75})
        out = type_mixing_check(p, 3)
        assert out.probability("0") == pytest.approx(0.25, abs=1e-15)
        assert out.probability("1") == pytest.approx(0.75, abs=1e-15)

    def test_caps(self):
        p = InputDistribution.uniform(["a", "b"])
        with pytest.raises(ValueError):
            type_mixing_check(p, 9)
        big = InputDistribution.uniform(list("abcde"))
        with pytest.raises(ValueError):
            type_mixing_check(big, 2)


class TestChannelJson:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        w, p = random_cq_channel(2, 3, rng)
        path = tmp_path / "chan.json"
        save_channel(path, w, p)
        w2, p2 = load_channel(path)
        for s in w.alphabet:
            assert np.abs(w.output(s).mat - w2.output(s).mat).max() < 1e-15
        for s, prob in p.items():
            assert p2.probability(s) == pytest.approx(prob, abs=1e-15)

    def test_distribution_optional(self):
        w, _ = noiseless_channel(2)
        doc = channel_to_json(w)
        w2, p2 = channel_from_json(doc)
        assert p2 is None
        assert w2.alphabet == w.alphabet

    def test_field_diagnostics(self):
        with pytest.raises(ChannelFormatError) as err:
            channel_from_json({"dim": 2, "symbols": ["a"], "outputs": {}})
        assert "outputs.a" in str(err.value)

        with pytest.raises(ChannelFormatError) as err:
            channel_from_json({"dim": 0, "symbols": ["a"], "outputs": {}})
        assert "dim" in str(err.value)

        bad_entry = {"dim": 1, "symbols": ["a"], "outputs": {"a": [[1.0]]}}
        with pytest.raises(ChannelFormatError) as err:
            channel_from_json(bad_entry)
        assert "outputs.a[0][0]" in str(err.value)

    def test_dim_cap(self):
        doc = {"dim": 65, "symbols": ["a"], "outputs": {}}
        with pytest.raises(ResourceLimitError):
            channel_from_json(doc)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ChannelFormatError):
            load_channel(path)

    def test_non_psd_output_rejected(self):
        doc = {
            "dim": 2,
            "symbols": ["a"],
            "outputs": {"a": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]},
        }
        with pytest.raises(ChannelFormatError):
            channel_from_json(doc)


class TestPresets:
    def test_noiseless(self):
        w, p = parse_preset("noiseless:3")
        assert w.dim == 3 and w.is_cq
        assert p.entropy() == pytest.approx(math.log(3.0))

    def test_random_deterministic(self):
        w1, p1 = parse_preset("random:2:3:9")
        w2, p2 = parse_preset("random:2:3:9")
        for s in w1.alphabet:
            assert np.array_equal(w1.output(s).mat, w2.output(s).mat)
        assert p1 == p2

    def test_bare_random_uses_seed(self):
        w1, _ = parse_preset("random", seed=5)
        w2, _ = parse_preset("random", seed=6)
        assert not np.allclose(w1.output("0").mat, w2.output("0").mat)

    def test_bad_tokens(self):
        with pytest.raises(ChannelFormatError):
            parse_preset("noiseless")
        with pytest.raises(ChannelFormatError):
            parse_preset("random:x:3")
        with pytest.raises(ChannelFormatError):
            parse_preset("what:2")
