"""Tests for decomposing extended IPM reduced forms."""

import pytest

from sandpile_staircase.errors import InconsistentStep, NotExtended
from sandpile_staircase.ipm.basis import IpmBasis, IpmReducedForm, ipm_reduce
from sandpile_staircase.ipm.decompose import (
    IpmDecomp,
    IpmLevel,
    ipm_decompose,
    ipm_decompose_full,
    ipm_recompose,
    ipm_recompose_full,
)

WORKED_FORM = IpmReducedForm((2, 1, 1, 1, 0, 0, 0, 1), IpmBasis(2, 4, 1))


class TestDecompose:
    def test_worked_form(self):
        """Known decomposition of an extended form."""
        d = ipm_decompose(WORKED_FORM)
        assert d.t_prime == IpmReducedForm((2, 0, 1, 0, 0), IpmBasis(2, 4, 2))
        assert d.c == 1
        assert d.p == 2
        assert d.u == (0, 1)

    def test_zero_form_at_last_class(self):
        """With l = k the all-zero tuple anchors at index 0."""
        basis = IpmBasis(3, 2, 3)
        d = ipm_decompose(IpmReducedForm((0,) * basis.tuple_length, basis))
        assert d.t_prime.entries == ()
        assert d.c == 0
        assert d.p == 0
        assert d.u == (0,) * 6

    def test_zero_form_peels_vacuously(self):
        """With l < k the all-zero prefix peels up to class k."""
        # the anchor sits at index l, so the prefix is l zeros that peel up to class k
        basis = IpmBasis(3, 2, 2)
        d = ipm_decompose(IpmReducedForm((0,) * basis.tuple_length, basis))
        assert d.t_prime == IpmReducedForm((0, 0), IpmBasis(3, 2, 3))
        assert d.c == 1
        assert d.p == 0
        assert d.u == (0, 0, 0)

    def test_recompose_worked_form(self):
        """Recompose inverts decompose on the known form."""
        assert ipm_recompose(ipm_decompose(WORKED_FORM), WORKED_FORM.basis) == WORKED_FORM

    def test_augmented_form_is_rejected(self):
        """A tuple without an anchor zero is not extended."""
        with pytest.raises(NotExtended):
            ipm_decompose(IpmReducedForm((2, 1, 1, 1, 0), IpmBasis(2, 4, 1)))

    def test_str(self):
        """Text form nests the peeled prefix, the offset and the tail."""
        assert str(ipm_decompose(WORKED_FORM)) == "(((2,0,1,0,0) at (4,2), 1), 2, (0,1))"


class TestIpmDecomp:
    def test_tail_outside_slack_positions(self):
        """Tail ones are only allowed at offsets k-1 mod k."""
        with pytest.raises(InconsistentStep):
            IpmDecomp(IpmReducedForm((), IpmBasis(2, 1, 1)), 0, 0, (1,))

    def test_negative_counts(self):
        """Peel counts and offsets must be non-negative."""
        with pytest.raises(InconsistentStep):
            IpmDecomp(IpmReducedForm((), IpmBasis(2, 1, 1)), -1, 0, ())

    def test_zero_in_the_wrong_class(self):
        """The anchor class must match the target basis."""
        d = IpmDecomp(IpmReducedForm((), IpmBasis(2, 4, 1)), 1, 0, ())
        with pytest.raises(InconsistentStep):
            ipm_recompose(d, IpmBasis(2, 4, 1))

    def test_prefix_without_peels(self):
        """A non-empty prefix needs at least one peel."""
        d = IpmDecomp(IpmReducedForm((1,), IpmBasis(2, 4, 1)), 0, 0, ())
        with pytest.raises(InconsistentStep):
            ipm_recompose(d, IpmBasis(2, 4, 1))


class TestFullChain:
    def test_worked_form(self):
        """Known decomposition of an extended form."""
        levels = ipm_decompose_full(WORKED_FORM)
        assert [str(level) for level in levels] == [
            "[4,1] (1;2;01)",
            "[4,2] (1;2;)",
            "[5,1] (3;0;00)",
            "[6,2] (0;0;)",
        ]

    def test_recompose_worked_chain(self):
        """The full chain recomposes to the original form."""
        assert ipm_recompose_full(ipm_decompose_full(WORKED_FORM)) == WORKED_FORM

    def test_single_level(self):
        """A form whose prefix is empty decomposes in one level."""
        basis = IpmBasis(2, 1, 2)
        r = IpmReducedForm((0, 0, 0), basis)
        assert ipm_decompose_full(r) == [IpmLevel(basis, 0, 0, (0, 0))]

    def test_empty_chain(self):
        """Recomposing an empty chain is an error."""
        with pytest.raises(InconsistentStep):
            ipm_recompose_full([])

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_round_trip_on_oracle(self, ipm_set, k):
        """Every reachable form round-trips and has its own chain."""
        for n in range(1, 15):
            seen = set()
            for c in ipm_set(n, k).members:
                r = ipm_reduce(c, k)
                assert ipm_recompose(ipm_decompose(r), r.basis) == r
                levels = ipm_decompose_full(r)
                assert ipm_recompose_full(levels) == r
                key = tuple(levels)
                assert key not in seen
                seen.add(key)

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_round_trip_up_to_25(self, ipm_set, k):
        """Round trip over the oracle up to 25 grains."""
        for n in range(15, 26):
            for c in ipm_set(n, k).members:
                r = ipm_reduce(c, k)
                assert ipm_recompose_full(ipm_decompose_full(r)) == r
