"""Measures: Markov cylinder masses, chain products, perturbation, sampling."""

import math

import numpy as np
import pytest
from scipy import stats

from mgms.analytics import expected_zero_count_prefix
from mgms.core import (
    BinaryWord,
    block_of,
    chain_length,
    is_multiplicative_prefix,
    iter_golden_words,
    iter_multiplicative_prefixes,
    restrict_to_chain,
)
from mgms.measures import (
    BlockAssignment,
    LogProb,
    MarkovParams,
    logprob_from_bits,
    logprob_prefix_grid,
    markov_cylinder_logprob,
    pdelta_logprob,
    pdelta_logprob_level_indexed,
    pmu_identity_gap,
    pmu_logprob,
    sample_bits_batch,
    sample_chain,
    sample_point,
)
from mgms.rng import RandomStream

from conftest import word


class TestLogProb:
    def test_sentinel_and_arithmetic(self):
        z = LogProb.zero()
        assert z.is_zero and z.to_probability() == 0.0
        a = LogProb(-1.0)
        assert (a + a).value == -2.0
        assert (a + z).is_zero and (z + a).is_zero
        assert float(LogProb.one()) == 0.0 and LogProb.one().to_probability() == 1.0

    def test_rejects_positive_values(self):
        with pytest.raises(ValueError):
            LogProb(0.5)
        with pytest.raises(ValueError):
            LogProb(float("nan"))


class TestMarkovCylinders:
    @pytest.mark.parametrize("r", [0.3, 0.5, 0.7])
    def test_single_symbol_masses(self, r):
        params = MarkovParams(r)
        assert markov_cylinder_logprob(params, word("0")).value == pytest.approx(math.log2(r))
        assert markov_cylinder_logprob(params, word("10")).value == pytest.approx(math.log2(1 - r))
        assert markov_cylinder_logprob(params, word("11")).is_zero
        assert markov_cylinder_logprob(params, word("01")).value == pytest.approx(
            math.log2(r) + math.log2(1 - r)
        )

    def test_empty_word_has_full_mass(self):
        assert markov_cylinder_logprob(MarkovParams(0.4), BinaryWord.empty()).value == 0.0

    @pytest.mark.parametrize("r", [0.3, 0.5698402909980532, 0.8])
    @pytest.mark.parametrize("k", range(1, 11))
    def test_walk_equals_count_formula(self, r, k):
        # (1-r)^N1(u) * r^(N0(u) - N1(u_1..u_{k-1})) against the walk
        params = MarkovParams(r)
        for u in iter_golden_words(k):
            n1 = u.count_ones()
            n1_head = u.prefix(k - 1).count_ones()
            expected = n1 * math.log2(1 - r) + (u.count_zeros() - n1_head) * math.log2(r)
            assert markov_cylinder_logprob(params, u).value == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_normalization(self, k):
        params = MarkovParams(0.37)
        total = sum(markov_cylinder_logprob(params, u).to_probability() for u in iter_golden_words(k))
        assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("k", range(1, 10))
    def test_consistency(self, k):
        params = MarkovParams(0.61)
        for u in iter_golden_words(k):
            lhs = markov_cylinder_logprob(params, u).to_probability()
            rhs = sum(
                markov_cylinder_logprob(params, word(str(u) + c)).to_probability() for c in "01"
            )
            assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_invalid_parameter(self):
        with pytest.raises(ValueError):
            MarkovParams(0.0)
        with pytest.raises(ValueError):
            MarkovParams(1.0)

    def test_transition_matrix_shape(self):
        p = MarkovParams(0.25)
        assert p.initial == (0.25, 0.75)
        assert p.transition == ((0.25, 0.75), (1.0, 0.0))
        assert all(abs(sum(row) - 1) < 1e-15 for row in p.transition)


class TestChainProducts:
    def test_pmu_examples(self, p_val):
        assert pmu_logprob(p_val, word("000")).value == pytest.approx(3 * math.log2(p_val))
        assert pmu_logprob(p_val, word("10")).value == pytest.approx(math.log2(1 - p_val))
        assert pmu_logprob(p_val, word("11")).is_zero
        assert pmu_logprob(None, word("0")).value == pytest.approx(math.log2(p_val))

    def test_pmu_accepts_enclosure(self, p_val):
        from mgms.analytics import solve_p

        assert pmu_logprob(solve_p(), word("0")).value == pytest.approx(math.log2(p_val))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_pmu_is_chainwise_product(self, p_val, n):
        params = MarkovParams(p_val)
        for u in iter_multiplicative_prefixes(n):
            manual = sum(
                markov_cylinder_logprob(params, restrict_to_chain(u, i)).value
                for i in range(1, n + 1, 2)
            )
            assert pmu_logprob(p_val, u).value == pytest.approx(manual, abs=1e-12)

    def test_support_is_exactly_the_admissible_words(self, p_val):
        for n in range(1, 11):
            v = np.arange(2**n)
            for x in v:
                u = word(format(x, f"0{n}b"))
                assert pmu_logprob(p_val, u).is_zero == (not is_multiplicative_prefix(u))

    def test_pdelta_reduces_to_pmu_at_zero_delta(self, p_val):
        a0 = BlockAssignment(delta=0.0)
        for n in range(1, 9):
            for u in iter_multiplicative_prefixes(n):
                assert pdelta_logprob(a0, u).value == pytest.approx(
                    pmu_logprob(p_val, u).value, abs=1e-12
                )

    def test_pdelta_block_examples(self, p_val):
        a = BlockAssignment(delta=0.05)
        assert a.param(0) == p_val and a.param(1) == pytest.approx(p_val + 0.05)
        assert a.param(2) == pytest.approx(p_val + 0.025)
        assert pdelta_logprob(a, word("0")).value == pytest.approx(math.log2(p_val))
        expected = 2 * math.log2(p_val) + math.log2(a.param(1))
        assert pdelta_logprob(a, word("000")).value == pytest.approx(expected)

    def test_custom_parameter_schedule(self, p_val):
        # sign-flipped perturbation via param_fn
        gamma = 0.5
        fn = lambda b: p_val if b == 0 else p_val - 0.05 / b ** (1 + gamma)
        a = BlockAssignment(delta=0.05, param_fn=fn)
        assert a.param(1) == pytest.approx(p_val - 0.05)
        assert pdelta_logprob(a, word("000")).value == pytest.approx(
            2 * math.log2(p_val) + math.log2(p_val - 0.05)
        )

    def test_block_assignment_validation(self):
        with pytest.raises(ValueError):
            BlockAssignment(delta=-0.1)
        with pytest.raises(ValueError):
            BlockAssignment(delta=0.5, p=0.6)  # p + delta >= 1
        with pytest.raises(ValueError):
            BlockAssignment(delta=0.0, p=1.5)

    @pytest.mark.parametrize("delta", [0.0, 0.05, 0.2])
    @pytest.mark.parametrize("n", range(1, 13))
    def test_normalization(self, delta, n):
        a = BlockAssignment(delta=delta)
        total = sum(pdelta_logprob(a, u).to_probability() for u in iter_multiplicative_prefixes(n))
        assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_consistency(self, n):
        a = BlockAssignment(delta=0.07)
        for u in iter_multiplicative_prefixes(n):
            lhs = pdelta_logprob(a, u).to_probability()
            rhs = sum(pdelta_logprob(a, word(str(u) + c)).to_probability() for c in "01")
            assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_level_indexed_form_breaks_consistency_at_block_boundary(self):
        # chain J(3) switches parameter index between n=5 and n=6
        a = BlockAssignment(delta=0.1)
        u5 = word("00000")
        lhs = pdelta_logprob_level_indexed(a, u5).to_probability()
        rhs = sum(
            pdelta_logprob_level_indexed(a, word("00000" + c)).to_probability() for c in "01"
        )
        assert abs(lhs - rhs) > 1e-4  # the literal reading is not a measure
        # while the block form is consistent at the same word
        lhs_b = pdelta_logprob(a, u5).to_probability()
        rhs_b = sum(pdelta_logprob(a, word("00000" + c)).to_probability() for c in "01")
        assert lhs_b == pytest.approx(rhs_b, abs=1e-15)

    def test_level_indexed_form_misses_chain_one_at_powers_of_two(self):
        # at n = 2^l the k <= l products cover only i > 1
        a = BlockAssignment(delta=0.0)
        u = word("0000")
        lit = pdelta_logprob_level_indexed(a, u).value
        full = pdelta_logprob(a, u).value
        chain1 = markov_cylinder_logprob(MarkovParams(a.p), restrict_to_chain(u, 1)).value
        assert lit == pytest.approx(full - chain1, abs=1e-12)

    def test_level_indexed_agrees_on_non_dyadic_small_n(self):
        # away from block boundaries both readings coincide (e.g. n = 3)
        a = BlockAssignment(delta=0.05)
        for u in iter_multiplicative_prefixes(3):
            assert pdelta_logprob_level_indexed(a, u).value == pytest.approx(
                pdelta_logprob(a, u).value, abs=1e-12
            )


class TestIdentityGap:
    @pytest.mark.parametrize("s", ["01", "00", "10"])
    def test_examples_are_zero(self, s):
        assert pmu_identity_gap(word(s)) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
    def test_exhaustive_small_even_lengths(self, n):
        for u in iter_multiplicative_prefixes(n):
            assert abs(pmu_identity_gap(u)) < 1e-10

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            pmu_identity_gap(word("0"))  # odd length
        with pytest.raises(ValueError):
            pmu_identity_gap(word("11"))  # inadmissible


class TestSampling:
    def test_chain_sampler_is_golden_and_deterministic(self, p_val):
        params = MarkovParams(p_val)
        for seed in range(30):
            s = RandomStream(seed, 0, 1)
            u = sample_chain(params, 40, s)
            assert len(u) == 40
            assert all(not (a and b) for a, b in zip(u.array, u.array[1:]))
            assert u == sample_chain(params, 40, RandomStream(seed, 0, 1))

    def test_chain_sampler_never_emits_one_after_one(self, p_val):
        params = MarkovParams(0.3)  # many ones
        arrs = [sample_chain(params, 200, RandomStream(s, 0, 1)).array for s in range(20)]
        for a in arrs:
            assert not np.any(a[1:] & a[:-1])

    def test_one_frequency_matches_initial_law(self):
        params = MarkovParams(0.6)
        draws = np.array(
            [sample_chain(params, 1, RandomStream(9, t, 1))[1] for t in range(100_000)]
        )
        freq = draws.mean()
        se = math.sqrt(0.4 * 0.6 / draws.size)
        assert abs(freq - 0.4) <= 3 * se

    def test_length_two_distribution(self):
        params = MarkovParams(0.55)
        counts = {"00": 0, "01": 0, "10": 0}
        trials = 60_000
        for t in range(trials):
            u = sample_chain(params, 2, RandomStream(4, t, 1))
            counts[str(u)] += 1
        expected = {"00": 0.55**2, "01": 0.55 * 0.45, "10": 0.45}
        chi = sum(
            (counts[w] - trials * q) ** 2 / (trials * q) for w, q in expected.items()
        )
        assert chi < stats.chi2.ppf(1 - 1e-3, df=2)

    def test_sample_point_contract(self):
        a = BlockAssignment(delta=0.05)
        pt = sample_point(a, 257, seed=11)
        assert is_multiplicative_prefix(pt.word)
        assert pt.word == sample_point(a, 257, seed=11).word
        longer = sample_point(a, 400, seed=11)
        assert str(longer.word)[:257] == str(pt.word)
        assert pt.descriptor == longer.descriptor

    def test_sample_point_differs_across_seeds(self):
        a = BlockAssignment(delta=0.0)
        words = {str(sample_point(a, 64, seed=s).word) for s in range(20)}
        assert len(words) > 15

    def test_chain_marginals_chi_square(self, p_val):
        # per-chain restriction law against the cylinder masses, k <= 4
        a = BlockAssignment(delta=0.08)
        n = 48
        trials = 4000
        bits = sample_bits_batch(a, n, seed=13, trials=np.arange(trials))
        for i in (1, 3, 9, 25, 47):
            k = chain_length(n, i)
            params = MarkovParams(a.param(block_of(i)))
            idx = [i * 2**t for t in range(k)]
            sub = bits[:, idx]
            seen = {}
            for row in sub:
                seen[tuple(row)] = seen.get(tuple(row), 0) + 1
            words_k = list(iter_golden_words(k))
            probs = [markov_cylinder_logprob(params, u).to_probability() for u in words_k]
            obs = [seen.get(tuple(u.array), 0) for u in words_k]
            assert sum(obs) == trials  # no inadmissible chain word ever sampled
            chi = sum(
                (o - trials * q) ** 2 / (trials * q) for o, q in zip(obs, probs) if q > 0
            )
            crit = stats.chi2.ppf(1 - 1e-3, df=max(1, len(words_k) - 1))
            assert chi < crit

    def test_vector_sampler_equals_scalar_walk(self):
        a = BlockAssignment(delta=0.03)
        bits = sample_bits_batch(a, 97, seed=21, trials=np.array([0, 4]))
        assert "".join(map(str, bits[0, 1:])) == str(sample_point(a, 97, seed=21).word)
        # trial-4 row reproduces the per-chain walk with trial key 4
        manual = np.zeros(98, dtype=np.uint8)
        for i in range(1, 98, 2):
            params = MarkovParams(a.param(block_of(i)))
            chain = sample_chain(params, chain_length(97, i), RandomStream(21, 4, i))
            m = i
            for sym in chain.array:
                manual[m] = sym
                m <<= 1
        assert np.array_equal(bits[1], manual)

    def test_vector_logprob_matches_reference_and_flags_forbidden(self):
        a = BlockAssignment(delta=0.06)
        rng = np.random.default_rng(5)
        rows = []
        for _ in range(40):
            rows.append(rng.integers(0, 2, size=33, dtype=np.uint8))
        bits = np.concatenate([np.zeros((40, 1), np.uint8), np.array(rows)], axis=1)
        lp = logprob_from_bits(a, bits, 33)
        grid = logprob_prefix_grid(a, bits, [8, 16, 33])
        for r in range(40):
            u = BinaryWord.from_array(bits[r, 1:34])
            ref = pdelta_logprob(a, u)
            if ref.is_zero:
                assert lp[r] == -np.inf
            else:
                assert lp[r] == pytest.approx(ref.value, abs=1e-10)
            for j, n in enumerate([8, 16, 33]):
                ref_n = pdelta_logprob(a, u.prefix(n))
                if ref_n.is_zero:
                    assert grid[r, j] == -np.inf
                else:
                    assert grid[r, j] == pytest.approx(ref_n.value, abs=1e-10)

    def test_sampled_zero_density_matches_expectation(self):
        a = BlockAssignment(delta=0.0)
        n = 2**10
        trials = 400
        bits = sample_bits_batch(a, n, seed=3, trials=np.arange(trials))
        n0 = (n - bits[:, 1:].sum(axis=1)).astype(np.float64)
        mean = n0.mean()
        se = n0.std(ddof=1) / math.sqrt(trials)
        assert abs(mean - expected_zero_count_prefix(n)) <= 3 * se
