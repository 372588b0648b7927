import math
import cmath

import pytest

from palindist.default_config import configure
from palindist.numtheory.digits import count_exact_length
from palindist.numtheory.counting import class_counts_exact_length, class_counts_via_fourier, parseval_identity
from palindist.numtheory.expsums import (
    LogComplex, BoundReport, e_q, power_pair_sum, check_lemma21, lemma21_worst_case, sweep_lemma21,
    geometric_digit_sum, check_lemma22, lemma22_worst_case, sweep_lemma22,
    palindrome_exp_sum_brute, palindrome_exp_sum_product, digit_weights, product_factors,
    theta_c, check_lemma31, check_lemma32, bad_positions, sweep_lemma31, sweep_lemma32,
)
from palindist.utils.errors import PreconditionError, ResourceCapError, UndefinedOrderError


# -------------------- #
# --- LogComplex --- #
# -------------------- #

def test_log_complex_multiplication_wraps_angle():
    i = LogComplex.from_complex(1j)
    minus_one = i * i
    assert minus_one.log_mag == pytest.approx(0.0)
    assert minus_one.arg == pytest.approx(math.pi)
    assert (minus_one * minus_one).arg == pytest.approx(0.0, abs=1e-12)


def test_log_complex_zero_absorbs():
    z = LogComplex.zero() * LogComplex(500.0, 1.0)
    assert z.is_zero and z.arg == 0.0 and z.to_complex() == 0


def test_log_complex_overflow_and_validation():
    with pytest.raises(OverflowError):
        LogComplex(1000.0).to_complex()
    with pytest.raises(ValueError):
        LogComplex(math.nan)


def test_bound_report_rejects_unknown_id():
    with pytest.raises(ValueError):
        BoundReport("lemma99", {}, 0.0, 1.0)


def test_bound_report_row():
    report = BoundReport("lemma21", {"q": 5}, 0.0, 1.0, extras={"ord": 4})
    row = report.to_row()
    assert list(row)[:3] == ["bound_id", "q", "ord"]
    assert row["satisfied"] is True
    assert report.slack_log == 1.0
    assert report.ratio == pytest.approx(math.exp(-1))


# --------------------------- #
# --- Power pair sums --- #
# --------------------------- #

@pytest.mark.parametrize("x, q, expected", [(1, 4, 1j), (1, 2, -1), (0, 7, 1)])
def test_e_q(x, q, expected):
    assert e_q(q, x) == pytest.approx(expected)


def test_power_pair_sum_trivial_coefficients():
    for q in (5, 7, 9, 21):
        assert power_pair_sum(q, 2, 0, 0) == pytest.approx(multiplicative_order_of_2(q))


def multiplicative_order_of_2(q):
    t, x = 1, 2 % q
    while x != 1:
        x, t = x * 2 % q, t + 1
    return t


def test_power_pair_sum_primitive_root():
    assert power_pair_sum(7, 10, 1, 0) == pytest.approx(-1)


def test_power_pair_sum_direct_terms():
    expected = sum(e_q(5, pow(2, k, 5) + pow(2, -k, 5)) for k in range(1, 5))
    assert power_pair_sum(5, 2, 1, 1) == pytest.approx(expected)


def test_power_pair_sum_undefined_order():
    with pytest.raises(UndefinedOrderError):
        power_pair_sum(10, 2, 1, 1)


@pytest.mark.parametrize("q, g, a, b", [(5, 2, 0, 0), (7, 10, 1, 0), (11, 2, 3, 5), (5, 2, 1, 1)])
def test_check_lemma21(q, g, a, b):
    report = check_lemma21(q, g, a, b)
    assert report.satisfied


def test_check_lemma21_values():
    report = check_lemma21(5, 2, 0, 0)
    assert report.lhs_log == pytest.approx(math.log(4))
    assert report.rhs_log == pytest.approx(math.log(10))


def test_lemma21_worst_case_agrees_with_direct_sum():
    report = lemma21_worst_case(2, 13)
    assert report.extras["pairs_checked"] == 169
    assert report.extras["violations"] == 0
    a, b = report.params["a"], report.params["b"]
    assert report.lhs_log == pytest.approx(math.log(abs(power_pair_sum(13, 2, a, b))), abs=1e-9)


def test_sweep_lemma21_small():
    reports = sweep_lemma21(10, 60)
    assert [r.params["q"] for r in reports] == [q for q in range(2, 61) if math.gcd(q, 10) == 1]
    assert all(r.satisfied and r.extras["violations"] == 0 for r in reports)


@pytest.mark.slow
@pytest.mark.parametrize("g", [2, 3, 10])
def test_sweep_lemma21_full(g):
    assert all(r.satisfied for r in sweep_lemma21(g, 300))


# ------------------------------ #
# --- Geometric digit sums --- #
# ------------------------------ #

@pytest.mark.parametrize("q, k, h, expected", [(2, 2, 1, 0.0), (9, 7, 0, 7.0), (4, 2, 2, 0.0), (3, 5, 1, 1.0)])
def test_geometric_digit_sum(q, k, h, expected):
    assert geometric_digit_sum(q, k, h) == pytest.approx(expected, abs=1e-12)


def test_geometric_digit_sum_complete_period_is_exact_zero():
    assert geometric_digit_sum(12, 24, 5) == 0.0


def test_check_lemma22_examples():
    assert check_lemma22(2, 2, 1).lhs_log == -math.inf
    report = check_lemma22(3, 5, 1)
    assert report.lhs_log == pytest.approx(0.0, abs=1e-12)
    assert math.exp(report.rhs_log) == pytest.approx(5 * math.exp(-4 / 9))
    assert report.satisfied
    assert check_lemma22(10, 10, 5).satisfied


def test_check_lemma22_errors():
    with pytest.raises(PreconditionError):
        check_lemma22(5, 3, 10)
    with pytest.raises(ValueError):
        check_lemma22(5, 1, 1)


def test_lemma22_worst_case_matches_direct():
    report = lemma22_worst_case(7)
    assert report.extras["violations"] == 0
    q, k, h = report.params["q"], report.params["k"], report.params["h"]
    assert report.lhs_log == pytest.approx(math.log(geometric_digit_sum(q, k, h)), abs=1e-9)


def test_sweep_lemma22_small():
    assert all(r.satisfied for r in sweep_lemma22(30))


@pytest.mark.slow
def test_sweep_lemma22_full():
    assert all(r.satisfied for r in sweep_lemma22(100))


# ----------------------------------- #
# --- Exponential sums over P_L --- #
# ----------------------------------- #

def test_digit_weights():
    assert digit_weights(10, 3, 1000) == [(0, 101, False), (1, 10, True)]
    assert digit_weights(10, 4, 1000) == [(0, 1, False), (1, 110, False)]


@pytest.mark.parametrize("g, L, q, c, expected", [(10, 2, 11, 1, 9), (2, 3, 3, 1, -1), (10, 3, 7, 0, 90)])
def test_palindrome_exp_sum_examples(g, L, q, c, expected):
    assert palindrome_exp_sum_brute(g, L, q, c) == pytest.approx(expected)
    assert palindrome_exp_sum_product(g, L, q, c).to_complex() == pytest.approx(expected)


def test_palindrome_exp_sum_product_polar_form():
    value = palindrome_exp_sum_product(2, 3, 3, 1)
    assert value.log_mag == pytest.approx(0.0, abs=1e-12)
    assert abs(value.arg) == pytest.approx(math.pi)
    trivial = palindrome_exp_sum_product(10, 7, 13, 0)
    assert trivial.log_mag == pytest.approx(math.log(count_exact_length(10, 7)))
    assert trivial.arg == 0.0


def test_exact_zero_factor():
    # base 3, length 4, mod 9: the factor of the inner pair is 1 + w + w^2
    assert 0j in product_factors(3, 4, 9, 1)
    assert palindrome_exp_sum_product(3, 4, 9, 1).is_zero
    assert abs(palindrome_exp_sum_brute(3, 4, 9, 1)) < 1e-9


@pytest.mark.parametrize("g, Lmax", [(2, 10), (3, 10), (10, 6)])
def test_product_matches_brute_force(g, Lmax):
    for L in range(1, Lmax + 1):
        for q in (2, 3, 7, 11, 12, 25):
            for c in range(q):
                brute = palindrome_exp_sum_brute(g, L, q, c)
                product = palindrome_exp_sum_product(g, L, q, c).to_complex()
                assert abs(brute - product) <= 1e-9 * max(abs(brute), 1.0), (g, L, q, c)


@pytest.mark.slow
def test_product_matches_brute_force_full_grid():
    for g in (2, 3, 10):
        for L in range(1, 11):
            for q in range(2, 51):
                for c in range(q):
                    brute = palindrome_exp_sum_brute(g, L, q, c)
                    product = palindrome_exp_sum_product(g, L, q, c).to_complex()
                    assert abs(brute - product) <= 1e-9 * max(abs(brute), 1.0), (g, L, q, c)


def test_brute_force_cap():
    configure(enumeration_cap=100)
    with pytest.raises(ResourceCapError):
        palindrome_exp_sum_brute(10, 5, 7, 1)


def test_product_handles_huge_lengths():
    value = palindrome_exp_sum_product(10, 2001, 7, 0)
    assert value.log_mag == pytest.approx(math.log(9) + 1000 * math.log(10))


@pytest.mark.parametrize("g", [2, 3, 10])
@pytest.mark.parametrize("L", range(1, 11))
def test_parseval_links_counts_and_sums(g, L):
    for q in range(2, 51):
        lhs, rhs = parseval_identity(g, L, q)
        assert lhs == pytest.approx(rhs, rel=1e-9), q


def test_fourier_inversion_recovers_counts():
    counts = class_counts_exact_length(10, 5, 7).counts
    assert class_counts_via_fourier(10, 5, 7) == pytest.approx(list(counts), abs=1e-6)


# ------------------------------- #
# --- Decay of S_L(c) bounds --- #
# ------------------------------- #

def test_theta_c():
    assert theta_c(2, 11, 1) == pytest.approx(0.5 + math.sqrt(11) / 10)
    assert theta_c(2, 11, 1) < 1


def test_check_lemma31_examples():
    report = check_lemma31(2, 11, 1, 200)
    assert report.satisfied and report.informative
    assert report.extras["ord"] == 10
    assert not check_lemma31(2, 11, 1, 15).informative


def test_check_lemma31_preconditions():
    with pytest.raises(PreconditionError, match="ord_q"):
        check_lemma31(2, 11, 11, 200)
    with pytest.raises(PreconditionError, match="p > g"):
        check_lemma31(10, 7, 1, 100)


@pytest.mark.parametrize("g, q, c, L", [(2, 5, 1, 100), (10, 7, 3, 50), (3, 7, 2, 41)])
def test_check_lemma32(g, q, c, L):
    report = check_lemma32(g, q, c, L)
    assert report.satisfied
    assert report.extras["bad_positions"] <= report.extras["bad_positions_bound"]


def test_check_lemma32_preconditions():
    with pytest.raises(PreconditionError, match="g\\(g\\^2-1\\)"):
        check_lemma32(10, 11, 1, 50)
    with pytest.raises(PreconditionError, match="does not divide c"):
        check_lemma32(2, 5, 10, 50)


def test_bad_positions():
    # q = 5 and g = 2: w_k = 2^k (1 + 2^(L-1-2k)) vanishes mod 5 when 2^(L-1-2k) = 4 mod 5
    bad = bad_positions(2, 12, 5, 1)
    for k in bad:
        assert (pow(2, k, 5) + pow(2, 11 - k, 5)) % 5 == 0
    assert all(1 <= k < 6 for k in bad)


def test_sweep_lemma31_small():
    reports = sweep_lemma31(2, 11, range(1, 11), range(1, 61))
    assert len(reports) == 600
    assert all(r.satisfied for r in reports)


def test_sweeps_do_not_depend_on_workers():
    serial = sweep_lemma32(2, 5, [1, 2, 3, 4], range(1, 21), workers=1)
    pooled = sweep_lemma32(2, 5, [4, 3, 2, 1], range(20, 0, -1), workers=2)
    assert [r.to_row() for r in serial] == [r.to_row() for r in pooled]


@pytest.mark.slow
def test_sweep_lemma31_full():
    assert all(r.satisfied for r in sweep_lemma31(2, 11, range(1, 11), range(1, 401)))


@pytest.mark.slow
def test_sweep_lemma32_full():
    for g, q in [(2, 5), (2, 7), (10, 7), (10, 13)]:
        assert all(r.satisfied for r in sweep_lemma32(g, q, range(1, q), range(1, 401)))


def test_lemma32_long_lengths_base_two_mod_five():
    reports = sweep_lemma32(2, 5, range(1, 5), range(301, 401))
    assert len(reports) == 400
    assert all(r.satisfied for r in reports)
    assert all(r.extras["bad_positions"] <= r.extras["bad_positions_bound"] for r in reports)
