"""Tests for counting SPM(n) and its fibers."""

import pytest

from sandpile_staircase.enumeration.counting import (
    CountTable,
    binomial,
    c,
    count_spm,
    count_spm_width,
    fit_cubic_log,
    measure_operations,
)
from sandpile_staircase.errors import CapacityExceeded, InvalidWidth
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.structure.staircase import fiber_widths, staircase_width


@pytest.fixture
def table():
    """A count table large enough for every small example."""
    return CountTable(200)


class TestBinomial:
    @pytest.mark.parametrize("a, b, expected", [(5, 2, 10), (3, 0, 1), (2, 3, 0)])
    def test_values(self, table, a, b, expected):
        """Small binomial coefficients, including b > a."""
        assert binomial(a, b, table) == expected

    def test_row_out_of_range(self):
        """Rows past the table capacity are refused."""
        with pytest.raises(CapacityExceeded):
            CountTable(3).binomial(10, 1)


class TestReducedFormCount:
    def test_zero_weight(self):
        """Weight zero has exactly one reduced form."""
        assert c(0, 7) == 1

    def test_small_values(self):
        """Hand-checked reduced-form counts."""
        assert c(1, 2) == 3
        assert c(1, 1) == 2
        assert c(3, 1) == 1

    def test_width_zero(self, table):
        """Width zero only admits weight zero."""
        assert table.c(0, 0) == 1
        assert table.c(5, 0) == 0

    def test_out_of_bounds(self):
        """Weights past capacity are refused."""
        with pytest.raises(CapacityExceeded):
            CountTable(4).c(5, 1)

    def test_strided_and_termwise_agree(self):
        """Both summation strategies give the same totals."""
        strided = CountTable(80)
        termwise = CountTable(80, strided=False)
        for n in range(81):
            assert strided.count_spm(n) == termwise.count_spm(n)


class TestCountSpm:
    @pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (3, 2), (4, 4)])
    def test_values(self, n, expected):
        """Small binomial coefficients, including b > a."""
        assert count_spm(n) == expected

    def test_fibers(self):
        """SPM(4) splits into fibers of size 1 and 3."""
        assert count_spm_width(4, 1) == 1
        assert count_spm_width(4, 2) == 3

    def test_worked_fiber(self, spm_set):
        """The width-5 fiber of SPM(20) matches the oracle."""
        members = [x for x in spm_set(20).members if staircase_width(x) == 5]
        assert Configuration.of(6, 6, 3, 3, 1, 1) in members
        assert count_spm_width(20, 5) == len(members)

    def test_invalid_width(self, table):
        """Widths outside the admissible range are rejected."""
        with pytest.raises(InvalidWidth):
            table.count_spm_width(4, 3)
        with pytest.raises(InvalidWidth):
            table.count_spm_width(4, 0)

    def test_capacity(self):
        """Counts beyond the table or its ceiling are refused."""
        with pytest.raises(CapacityExceeded):
            count_spm(11, CountTable(10))
        with pytest.raises(CapacityExceeded):
            CountTable(50, max_capacity=40)

    def test_negative(self, table):
        """Negative n is rejected."""
        with pytest.raises(ValueError):
            table.count_spm(-1)

    def test_matches_oracle(self, spm_set, table):
        """Counts equal the oracle sizes up to 20 grains."""
        for n in range(21):
            assert table.count_spm(n) == len(spm_set(n)), f"n={n}"

    @pytest.mark.slow
    def test_matches_oracle_up_to_30(self, spm_set, table):
        """Counts equal the oracle sizes up to 30 grains."""
        for n in range(21, 31):
            assert table.count_spm(n) == len(spm_set(n)), f"n={n}"

    def test_fibers_sum_to_total(self, table):
        """Fiber counts cover the admissible widths and sum to the total."""
        for n in range(1, 201):
            assert sum(table.fiber_counts(n).values()) == table.count_spm(n)
            assert set(table.fiber_counts(n)) == set(fiber_widths(n))

    def test_non_decreasing(self, table):
        """|SPM(n)| never decreases in n."""
        counts = [table.count_spm(n) for n in range(201)]
        assert counts == sorted(counts)


class TestFreeze:
    def test_frozen_table_answers_reads(self):
        """A frozen table still answers counts."""
        table = CountTable(30).freeze()
        assert table.frozen
        assert table.count_spm(30) == CountTable(30).count_spm(30)

    def test_freeze_is_idempotent(self):
        """Freezing twice does no extra work."""
        table = CountTable(10).freeze()
        ops = table.ops
        table.freeze()
        assert table.ops == ops


class TestOperationCount:
    def test_strided_sums_save_work(self):
        """Strided sums use fewer operations than termwise sums."""
        assert measure_operations(100, strided=True) < measure_operations(100, strided=False)

    @pytest.mark.slow
    def test_cubic_log_trend(self):
        """Operation counts at 100, 200 and 400 grains sit within a factor of 3 of K n^3 log n."""
        samples = {n: measure_operations(n) for n in (100, 200, 400)}
        k, spread = fit_cubic_log(samples)
        assert k > 0
        assert spread < 3
        # quartic growth would multiply by 16 per doubling
        assert samples[400] / samples[200] < 16
