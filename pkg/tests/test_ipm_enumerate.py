"""Tests for counting and generating IPM_k(n)."""

import pytest

from sandpile_staircase.enumeration.counting import count_spm
from sandpile_staircase.enumeration.generation import GenStats
from sandpile_staircase.errors import CapacityExceeded
from sandpile_staircase.ipm.basis import IpmBasis, IpmClass, ipm_staircase_width
from sandpile_staircase.ipm.enumerate import (
    IpmCountTable,
    ipm_bases,
    ipm_count,
    ipm_generate,
    iter_ipm,
    iter_ipm_reduced,
)
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_ipm

C = Configuration.of


@pytest.fixture
def table2():
    return IpmCountTable(2, 30)


class TestIpmBases:
    def test_bases_up_to_weight(self):
        """Bases are listed in order while their staircase fits."""
        assert list(ipm_bases(6, 2)) == [IpmBasis(2, 1, 1), IpmBasis(2, 1, 2), IpmBasis(2, 2, 1), IpmBasis(2, 2, 2)]

    def test_no_bases_for_zero(self):
        """Zero grains admit no basis."""
        assert list(ipm_bases(0, 3)) == []


class TestIpmCount:
    @pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (3, 3), (4, 4)])
    def test_small_values_k2(self, n, expected):
        """Hand-checked sizes of IPM_2(n)."""
        assert ipm_count(n, 2) == expected

    @pytest.mark.parametrize("k", [1, 2, 5, 9])
    def test_single_grain(self, k):
        """One grain gives one configuration for every k."""
        assert ipm_count(1, k) == 1

    def test_k1_is_spm(self):
        """k = 1 reduces to the sand pile model."""
        table = IpmCountTable(1, 40)
        for n in range(41):
            assert table.count(n) == count_spm(n)

    def test_basis_counts_sum_to_total(self, table2):
        """Per-basis counts add up to the total."""
        for n in range(1, 31):
            assert sum(table2.basis_counts(n).values()) == table2.count(n)

    def test_basis_counts_match_staircase_widths(self, ipm_set):
        """Per-basis counts match the oracle grouped by staircase width."""
        table = IpmCountTable(3, 14)
        for n in range(1, 15):
            widths = {}
            for c in ipm_set(n, 3).members:
                basis = ipm_staircase_width(c, 3)
                widths[basis] = widths.get(basis, 0) + 1
            nonzero = {b: v for b, v in table.basis_counts(n).items() if v}
            assert nonzero == widths, f"n={n}"

    def test_basis_of_another_k(self, table2):
        """A basis for a different k is rejected."""
        with pytest.raises(ValueError):
            table2.count_basis(5, IpmBasis(3, 1, 1))

    def test_capacity(self):
        """Tables refuse n beyond their capacity."""
        with pytest.raises(CapacityExceeded):
            ipm_count(11, 2, IpmCountTable(2, 10))
        with pytest.raises(CapacityExceeded):
            IpmCountTable(2, 50, max_capacity=40)

    def test_table_for_another_k(self, table2):
        """A table built for one k cannot answer for another."""
        with pytest.raises(ValueError):
            ipm_count(5, 3, table2)

    def test_frozen_table(self):
        """A frozen table still answers reads."""
        table = IpmCountTable(3, 20).freeze()
        assert table.frozen
        assert table.count(20) == IpmCountTable(3, 20).count(20)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_matches_oracle(self, ipm_set, k):
        """Counts equal the oracle sizes."""
        table = IpmCountTable(k, 25)
        for n in range(15):
            assert table.count(n) == len(ipm_set(n, k)), f"n={n}, k={k}"

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_matches_oracle_up_to_25(self, ipm_set, k):
        """Counts equal the oracle sizes up to 25 grains."""
        table = IpmCountTable(k, 25)
        for n in range(15, 26):
            assert table.count(n) == len(ipm_set(n, k)), f"n={n}, k={k}"


class TestIpmGeneration:
    def test_three_grains(self):
        """IPM_2(3) has three members."""
        assert set(iter_ipm(3, 2)) == {C(3), C(2, 1), C(1, 1, 1)}

    def test_empty(self):
        """Zero grains generate the empty configuration and no reduced form."""
        assert list(iter_ipm(0, 2)) == [Configuration()]
        assert list(iter_ipm_reduced(0, 2)) == []

    def test_reduced_forms_are_reduced(self, table2):
        """Every generated tuple classifies as reduced with the right weight."""
        for n in range(1, 16):
            for r in iter_ipm_reduced(n, 2, table=table2):
                check = r.classification
                assert check.kind is IpmClass.REDUCED
                assert check.n == n

    def test_visitor_and_stats(self, table2):
        """The visitor sees every configuration once and counters agree."""
        seen = []
        stats = ipm_generate(12, 2, seen.append, table=table2)
        assert stats.emitted == len(seen) == table2.count(12)
        assert stats.nodes >= 1

    def test_stats_passed_in_accumulate(self):
        """Passing the same counters twice accumulates."""
        stats = GenStats()
        ipm_generate(6, 3, lambda c: None, stats)
        ipm_generate(7, 3, lambda c: None, stats)
        assert stats.emitted == ipm_count(6, 3) + ipm_count(7, 3)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_matches_oracle(self, ipm_set, k):
        """Counts equal the oracle sizes."""
        for n in range(15):
            found = list(iter_ipm(n, k))
            assert len(found) == len(set(found)), f"duplicates at n={n}, k={k}"
            assert set(found) == ipm_set(n, k).members, f"n={n}, k={k}"
            assert all(is_valid_ipm(c, k) for c in found)

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_matches_oracle_up_to_25(self, ipm_set, k):
        """Counts equal the oracle sizes up to 25 grains."""
        table = IpmCountTable(k, 25)
        for n in range(15, 26):
            found = list(iter_ipm(n, k, table=table))
            assert len(found) == len(set(found))
            assert set(found) == ipm_set(n, k).members, f"n={n}, k={k}"

    def test_contains_spm(self, spm_set):
        """Sand pile configurations are also ice pile configurations."""
        for n in range(12):
            assert spm_set(n).members <= set(iter_ipm(n, 3))
