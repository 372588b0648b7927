import math
from fractions import Fraction

import pytest

from palindist.numtheory.digits import count_exact_length, count_up_to
from palindist.numtheory.counting import (
    ResidueCountTable, class_counts_exact_length, class_counts_up_to, count_divisible_up_to,
    check_prop41, check_prop42, prop42_min_length, sweep_prop41, sweep_prop42,
    decay_branch, fit_decay, check_cumulative_decay, PRIME_BRANCH_XI,
)
from palindist.utils.errors import PreconditionError


@pytest.mark.parametrize("g, L, q, expected", [
    (10, 2, 11, (9,) + (0,) * 10),
    (10, 3, 3, (30, 30, 30)),
    (2, 1, 2, (0, 1)),
])
def test_class_counts_exact_length_examples(g, L, q, expected):
    table = class_counts_exact_length(g, L, q)
    assert table.counts == expected
    assert table.total == count_exact_length(g, L)


@pytest.mark.parametrize("g, Lmax", [(2, 12), (3, 9), (10, 5)])
def test_class_counts_exact_length_matches_enumeration(brute, g, Lmax):
    for L in range(1, Lmax + 1):
        palindromes = brute.exact_length(g, L)
        for q in (2, 3, 5, 7, 11, 16, 29, 30):
            assert class_counts_exact_length(g, L, q).counts == brute.class_counts(g, palindromes, q), (g, L, q)


@pytest.mark.slow
@pytest.mark.parametrize("g, L", [(g, L) for g in (2, 3, 10) for L in range(1, 13)])
def test_class_counts_exact_length_matches_enumeration_full(brute, g, L):
    palindromes = brute.exact_length(g, L)
    assert len(palindromes) == (g - 1) * g ** ((L + 1) // 2 - 1)
    for q in range(2, 31):
        assert class_counts_exact_length(g, L, q).counts == brute.class_counts(g, palindromes, q), q


@pytest.mark.parametrize("L", [8, 9])
def test_class_counts_exact_length_base_ten_long(brute, L):
    palindromes = brute.exact_length(10, L)
    for q in (7, 11, 13, 27):
        assert class_counts_exact_length(10, L, q).counts == brute.class_counts(10, palindromes, q)


def test_class_counts_big_lengths_sum_exactly():
    table = class_counts_exact_length(10, 401, 97)
    assert sum(table.counts) == 9 * 10 ** 200
    assert all(n >= 0 for n in table.counts)


def test_class_counts_up_to_single_digits():
    assert class_counts_up_to(10, 10, 3).counts == (3, 3, 3)


def test_class_counts_up_to_matches_enumeration(brute):
    assert class_counts_up_to(10, 200, 7).counts == brute.class_counts(10, brute.palindromes(10, 1, 200), 7)
    for g in (2, 3, 10):
        for x in range(1, 3000, 37):
            palindromes = brute.palindromes(g, 1, x)
            for q in (2, 7, 12):
                table = class_counts_up_to(g, x, q)
                assert table.counts == brute.class_counts(g, palindromes, q), (g, x, q)
                assert table.total == len(palindromes)


def test_class_counts_up_to_is_cumulative():
    for g, L, q in [(2, 20, 5), (10, 7, 13), (3, 11, 8)]:
        expected = [0] * q
        for ell in range(1, L + 1):
            for a, n in enumerate(class_counts_exact_length(g, ell, q).counts):
                expected[a] += n
        assert class_counts_up_to(g, g ** L - 1, q).counts == tuple(expected)


def test_count_divisible_up_to():
    assert count_divisible_up_to(10, 200, 1) == count_up_to(10, 200)
    assert count_divisible_up_to(10, 99, 11) == 9
    assert count_divisible_up_to(10, 0, 7) == 0


def test_max_discrepancy_is_exact():
    table = class_counts_exact_length(10, 2, 11)
    assert table.max_discrepancy == Fraction(90, 11)
    assert table.discrepancy_log == pytest.approx(math.log(90 / 11))
    assert class_counts_exact_length(10, 3, 3).discrepancy_log == -math.inf


def test_residue_count_table_validation():
    with pytest.raises(ValueError):
        ResidueCountTable(10, 3, "exact", (1, 1, 1), 4, L=1)
    with pytest.raises(ValueError):
        ResidueCountTable(10, 3, "exact", (1, 1), 2, L=1)
    with pytest.raises(ValueError):
        ResidueCountTable(10, 2, "sometimes", (1, 1), 2)


# ---------------------------- #
# --- Distribution checks --- #
# ---------------------------- #

def test_check_prop41():
    report = check_prop41(2, 11, 105)
    assert report.satisfied
    assert report.params == {"g": 2, "p": 11, "L": 105}
    assert report.rhs_log == pytest.approx(
        math.log(count_exact_length(2, 105) / 11) + 105 * math.log(PRIME_BRANCH_XI)
    )


def test_check_prop41_strict_inequality_exact():
    for L in range(105, 161):
        report = check_prop41(2, 11, L)
        counts = class_counts_exact_length(2, L, 11).counts
        total = sum(counts)
        discrepancy = max(abs(Fraction(n) - Fraction(total, 11)) for n in counts)
        assert discrepancy < Fraction(total, 11) * Fraction(99, 100) ** L
        assert report.extras["strict"] is True


@pytest.mark.parametrize("g, p, L, hypothesis", [
    (2, 11, 104, "L >= 10p - 5"),
    (2, 7, 200, "ord_p(g)"),
    (2, 15, 200, "p prime"),
    (10, 7, 200, "p > g"),
])
def test_check_prop41_preconditions(g, p, L, hypothesis):
    with pytest.raises(PreconditionError) as excinfo:
        check_prop41(g, p, L)
    assert hypothesis in str(excinfo.value)


@pytest.mark.parametrize("g, q, L", [(2, 5, 91), (10, 7, 201)])
def test_check_prop42(g, q, L):
    assert L >= prop42_min_length(q)
    report = check_prop42(g, q, L)
    assert report.satisfied
    assert report.extras["strict"]


def test_check_prop42_preconditions():
    with pytest.raises(PreconditionError):
        check_prop42(10, 11, 300)
    with pytest.raises(PreconditionError):
        check_prop42(2, 5, 90)


def test_prop_sweeps():
    assert all(r.satisfied for r in sweep_prop41(2, 11, range(105, 131)))
    assert all(r.satisfied for r in sweep_prop42(2, 5, range(91, 121), workers=2))


# ------------------ #
# --- Decay fits --- #
# ------------------ #

def test_decay_branch():
    assert decay_branch(2, 11) == ("prime", PRIME_BRANCH_XI)
    branch, xi = decay_branch(2, 5)
    assert branch == "coprime"
    assert xi == pytest.approx(math.exp(-1 / 50))
    with pytest.raises(PreconditionError):
        decay_branch(10, 3)


def test_fit_decay_coprime_branch():
    fit = fit_decay(2, 5, range(91, 151))
    assert fit.A >= 1
    assert fit.hypothesis_holds
    log_xi = math.log(fit.xi)
    for L, v in zip(fit.lengths, fit.normalized_log):
        assert v <= fit.log_A + L * log_xi + 1e-9
    assert all(row["satisfied"] for row in fit.to_rows())


def test_fit_decay_prime_branch_trend():
    fit = fit_decay(2, 11, range(105, 161))
    assert fit.branch == "prime"
    assert fit.decreasing_trend
    assert fit.hypothesis_holds


def test_check_cumulative_decay_bounded():
    reports = check_cumulative_decay(2, 5, [2 ** k for k in range(91, 121)])
    assert {r.bound_id for r in reports} == {"cor46"}
    assert all(r.satisfied for r in reports)
    reports = check_cumulative_decay(2, 11, [2 ** k for k in range(105, 141)])
    assert {r.bound_id for r in reports} == {"cor45"}
    assert all(r.satisfied for r in reports)


def test_check_cumulative_decay_never_exceeds_count():
    for r in check_cumulative_decay(2, 5, [10, 100, 1000]):
        assert r.lhs_log <= math.log(int(r.extras["palindromes"]))


def test_check_cumulative_decay_rejects_unsorted():
    with pytest.raises(ValueError):
        check_cumulative_decay(2, 5, [100, 10])
