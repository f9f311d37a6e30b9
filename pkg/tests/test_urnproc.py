from fractions import Fraction

import pytest

from urnsolitaire.urnproc import (GREEN, RED, TableSizeError, UrnDomainError,
                                  UrnState, ValueTable, build_table,
                                  expected_rounds, rounds_second_moment,
                                  rounds_variance, simple_expected_rounds,
                                  simple_win_probability, transition_weight,
                                  verify_trivial_identity, win_probability)

F = Fraction


class TestTransitionWeight:
    def test_examples(self):
        assert transition_weight(1, 1, 1, GREEN) == F(1, 2)
        assert transition_weight(1, 2, 1, RED) == F(1, 3)

    @pytest.mark.parametrize("m,n", [(3, 2), (1, 1), (5, 7), (2, 6)])
    def test_normalization(self, m, n):
        total = sum(transition_weight(m, n, k, GREEN) for k in range(1, m + 1)) \
            + sum(transition_weight(m, n, k, RED) for k in range(1, n + 1))
        assert total == 1

    def test_domain_errors(self):
        with pytest.raises(UrnDomainError):
            transition_weight(0, 3, 1, RED)
        with pytest.raises(UrnDomainError):
            transition_weight(3, 2, 4, GREEN)
        with pytest.raises(UrnDomainError):
            transition_weight(3, 2, 0, GREEN)
        with pytest.raises(UrnDomainError):
            transition_weight(3, 2, 1, "blue")


class TestWinProbability:
    def test_known_values(self):
        assert win_probability(5, 7) == F(1, 2)
        assert win_probability(4, 0) == 1
        assert win_probability(0, 9) == 0

    def test_undefined_at_origin(self):
        with pytest.raises(UrnDomainError):
            win_probability(0, 0)

    def test_constant_on_small_grid(self):
        table = build_table("win_prob", 12, 12)
        for m in range(1, 13):
            for n in range(1, 13):
                assert table.get(m, n) == F(1, 2)


class TestExpectedRounds:
    def test_known_initial_conditions(self):
        assert expected_rounds(1, 1) == 1
        assert expected_rounds(2, 2) == F(17, 9)
        assert expected_rounds(3, 3) == F(143, 50)

    def test_derived_value(self):
        # 1 + (2/3)(1/2) E(1,1)
        assert expected_rounds(1, 2) == F(4, 3)

    def test_boundaries(self):
        assert expected_rounds(0, 6) == 0
        assert expected_rounds(6, 0) == 0
        assert expected_rounds(0, 0) == 0

    def test_symmetry(self):
        table = build_table("expected_rounds", 10, 10)
        for m in range(11):
            for n in range(11):
                assert table.get(m, n) == table.get(n, m)

    def test_range_bound(self):
        table = build_table("expected_rounds", 10, 10)
        for m in range(1, 11):
            for n in range(1, 11):
                assert 1 <= table.get(m, n) <= m + n - 1


class TestSimpleVariant:
    def test_closed_form_probability(self):
        assert simple_win_probability(2, 3) == F(2, 5)
        assert simple_win_probability(4, 0) == 1
        assert simple_win_probability(0, 4) == 0
        table = build_table("simple_prob", 15, 15)
        for m in range(16):
            for n in range(16):
                if m or n:
                    assert table.get(m, n) == F(m, m + n)

    def test_undefined_at_origin(self):
        with pytest.raises(UrnDomainError):
            simple_win_probability(0, 0)

    def test_expected_rounds(self):
        assert simple_expected_rounds(1, 1) == 1
        assert simple_expected_rounds(3, 0) == 0
        assert simple_expected_rounds(0, 5) == 0


class TestSecondMoments:
    def test_deterministic_single_round(self):
        assert rounds_second_moment(1, 1, "returning") == 1
        assert rounds_second_moment(1, 1, "simple") == 1
        assert rounds_variance(1, 1, "returning") == 0
        assert rounds_variance(1, 1, "simple") == 0

    def test_variance_nonnegative(self):
        for variant in ("returning", "simple"):
            for m in range(1, 7):
                for n in range(1, 7):
                    assert rounds_variance(m, n, variant) >= 0

    def test_unknown_variant(self):
        with pytest.raises(UrnDomainError):
            rounds_second_moment(2, 2, "bogus")


class TestTrivialIdentity:
    def test_base_case(self):
        assert verify_trivial_identity(1, 1) is True

    def test_small_values(self):
        for m in range(1, 13):
            for n in range(1, 13):
                assert verify_trivial_identity(m, n)

    def test_domain_error(self):
        with pytest.raises(UrnDomainError):
            verify_trivial_identity(0, 3)


class TestValueTable:
    def test_completeness_and_boundaries(self):
        table = build_table("expected_rounds", 3, 3)
        assert set(table.values) == {(m, n) for m in range(4) for n in range(4)}
        assert table.get(1, 1) == 1
        for i in range(4):
            assert table.get(i, 0) == 0
            assert table.get(0, i) == 0

    def test_json_round_trip(self):
        table = build_table("expected_rounds", 4, 3)
        back = ValueTable.from_json(table.to_json())
        assert back.quantity == table.quantity
        assert back.values == table.values

    def test_csv(self):
        csv_text = build_table("win_prob", 1, 1).to_csv()
        lines = csv_text.strip().split("\n")
        assert lines[0] == "m,n,value"
        assert "1,1,1/2" in lines
        assert len(lines) == 5

    def test_cell_cap(self):
        with pytest.raises(TableSizeError):
            build_table("win_prob", 10_000, 10_000)

    def test_bad_quantity(self):
        with pytest.raises(UrnDomainError):
            build_table("nonsense", 2, 2)


class TestUrnState:
    def test_rejects_negative(self):
        with pytest.raises(UrnDomainError):
            UrnState(-1, 2)

    def test_total(self):
        assert UrnState(3, 4).total == 7
