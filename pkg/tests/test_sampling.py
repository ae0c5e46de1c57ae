"""Tests for ranking, unranking and uniform sampling of SPM(n)."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sandpile_staircase.enumeration.counting import CountTable
from sandpile_staircase.enumeration.sampling import (
    SeededStream,
    rank_reduced,
    rank_spm,
    sample_spm,
    uniform_random_spm,
    uniformity_pvalue,
    unrank_reduced,
    unrank_spm,
)
from sandpile_staircase.errors import CapacityExceeded, EmptyDomain
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_spm
from sandpile_staircase.structure.genseq import generating_sequence, verify_sequence
from sandpile_staircase.structure.staircase import expand, is_reduced_form, reduce

C = Configuration.of

TABLE = CountTable(120).freeze()


class TestSeededStream:
    def test_same_seed_same_draws(self):
        a = SeededStream(42)
        b = SeededStream(42)
        assert [a.randbelow(1000) for _ in range(20)] == [b.randbelow(1000) for _ in range(20)]

    def test_draws_stay_below_bound(self):
        stream = SeededStream(1)
        bound = 3**90
        for _ in range(50):
            assert 0 <= stream.randbelow(bound) < bound

    def test_bound_one(self):
        assert SeededStream(0).randbelow(1) == 0

    def test_empty_bound(self):
        with pytest.raises(EmptyDomain):
            SeededStream(0).randbelow(0)

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_seed_range(self, seed):
        with pytest.raises(ValueError):
            SeededStream(seed)


class TestRanking:
    def test_unrank_reduced_enumerates_the_class(self):
        for w in range(1, 6):
            for p in range(10):
                total = TABLE.c(p, w)
                forms = [unrank_reduced(p, w, r, TABLE) for r in range(total)]
                assert len(set(forms)) == total
                for rank, form in enumerate(forms):
                    assert is_reduced_form(form.entries, w)
                    assert rank_reduced(form, TABLE) == rank

    def test_unrank_spm_is_a_bijection_onto_the_oracle(self, spm_set):
        for n in range(16):
            total = TABLE.count_spm(n)
            listed = [unrank_spm(n, r, TABLE) for r in range(total)]
            assert set(listed) == spm_set(n).members
            assert [rank_spm(x, TABLE) for x in listed] == list(range(total))

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            unrank_spm(4, 4, TABLE)
        with pytest.raises(ValueError):
            unrank_reduced(1, 2, 3, TABLE)

    def test_table_too_small(self):
        with pytest.raises(CapacityExceeded):
            unrank_spm(11, 0, CountTable(10))

    def test_empty_configuration(self):
        assert unrank_spm(0, 0, TABLE) == Configuration()
        assert rank_spm(Configuration(), TABLE) == 0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=120), st.data())
    def test_random_ranks_give_valid_configurations(self, n, data):
        rank = data.draw(st.integers(min_value=0, max_value=TABLE.count_spm(n) - 1))
        c = unrank_spm(n, rank, TABLE)
        assert c.weight == n
        assert is_valid_spm(c)
        assert expand(reduce(c)) == c
        assert verify_sequence(n, generating_sequence(c)) == c
        assert rank_spm(c, TABLE) == rank


class TestUniformSampling:
    def test_single_grain(self):
        for seed in range(5):
            assert uniform_random_spm(1, TABLE, seed) == C(1)

    def test_deterministic(self):
        assert sample_spm(30, 40, seed=7, table=TABLE) == sample_spm(30, 40, seed=7, table=TABLE)

    def test_seeds_differ(self):
        assert sample_spm(60, 20, seed=1, table=TABLE) != sample_spm(60, 20, seed=2, table=TABLE)

    def test_stream_continues(self):
        stream = SeededStream(9)
        first = uniform_random_spm(40, TABLE, stream)
        second = uniform_random_spm(40, TABLE, stream)
        assert [first, second] == sample_spm(40, 2, seed=9, table=TABLE)

    def test_support(self):
        for n in (50, 100, 120):
            for c in sample_spm(n, 200, seed=n, table=TABLE):
                assert c.weight == n
                assert is_valid_spm(c)

    @pytest.mark.slow
    def test_support_up_to_300(self):
        """10^4 draws at each of 100, 200 and 300 grains are valid SPM configurations."""
        table = CountTable(300)
        for n in (100, 200, 300):
            samples = sample_spm(n, 10_000, seed=n, table=table)
            assert len(samples) == 10_000
            for c in samples:
                assert c.weight == n
                assert is_valid_spm(c), f"{c}"

    def test_four_grains_hit_every_configuration(self):
        assert set(sample_spm(4, 200, seed=3, table=TABLE)) == {C(4), C(3, 1), C(2, 2), C(2, 1, 1)}

    def test_uniformity(self):
        pytest.importorskip("scipy")
        n = 12
        samples = sample_spm(n, 100 * TABLE.count_spm(n), seed=2024, table=TABLE)
        assert uniformity_pvalue(n, samples, TABLE) > 0.001
