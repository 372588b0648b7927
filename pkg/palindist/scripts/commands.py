"""Subcommand bodies: each takes its checked config and returns a :class:`ReportEnvelope`."""
import math
import logging

from palindist import LOGGER_NAME
from palindist.default_config import get_settings
from palindist.numtheory import counting, digits, expsums, primes
from palindist.numtheory.expsums import BoundReport
from palindist.utils.errors import ResourceCapError
from palindist.utils.report import ReportEnvelope
from palindist.utils.custom_logging import log_info_detailed
from palindist.scripts import config as cfg


def _bound_envelope(command: str, params: dict, reports: list[BoundReport]) -> ReportEnvelope:
    params = dict(params)
    params["checks"] = len(reports)
    params["all_satisfied"] = all(r.satisfied for r in reports)
    params["violations"] = sum(not r.satisfied for r in reports)
    if not params["all_satisfied"]:
        logging.getLogger(LOGGER_NAME).warning(f"{command}: {params['violations']} of {len(reports)} checks violated")
    return ReportEnvelope(command, params, [r.to_row() for r in reports])


def enumerate_command(config: cfg.EnumerateConfig) -> ReportEnvelope:
    g = config.base
    if config.length is not None:
        size = digits.count_exact_length(g, config.length)
        values = digits.iter_exact_length(g, config.length)
        params = {"base": g, "length": config.length}
    else:
        lo, hi = max(config.lo, 1), config.hi
        size = digits.count_up_to(g, hi) - digits.count_up_to(g, lo - 1) if hi >= lo else 0
        values = digits.iter_palindromes(g, lo, hi) if hi >= lo else iter(())
        params = {"base": g, "lo": config.lo, "hi": config.hi}
    cap = get_settings().enumeration_cap
    if size > cap:
        raise ResourceCapError("palindromes to list", size, cap, "narrow the range")
    params["count"] = size
    rows = [{"n": n, "length": digits.num_digits(n, g)} for n in values]
    return ReportEnvelope("enumerate", params, rows)


def count_command(config: cfg.CountConfig) -> ReportEnvelope:
    if config.length is not None:
        table = counting.class_counts_exact_length(config.base, config.length, config.mod)
        params = {"base": config.base, "mod": config.mod, "scope": "exact", "length": config.length}
    else:
        table = counting.class_counts_up_to(config.base, config.upto, config.mod)
        params = {"base": config.base, "mod": config.mod, "scope": "upto", "upto": config.upto}
    params.update({
        "total": str(table.total),
        "max_discrepancy": str(table.max_discrepancy),
        "discrepancy_log": table.discrepancy_log,
    })
    return ReportEnvelope("count", params, table.to_rows())


def expsum_command(config: cfg.ExpsumConfig) -> ReportEnvelope:
    g, L, q, c = config.base, config.length, config.mod, config.c
    params = {"base": g, "length": L, "mod": q, "c": c, "method": config.method}
    rows = []
    brute = product = None
    if config.method in ("brute", "both"):
        brute = expsums.palindrome_exp_sum_brute(g, L, q, c)
        rows.append({
            "method": "brute",
            "real": brute.real,
            "imag": brute.imag,
            "abs_log": math.log(abs(brute)) if brute != 0 else -math.inf,
            "arg": math.atan2(brute.imag, brute.real),
        })
    if config.method in ("product", "both"):
        product = expsums.palindrome_exp_sum_product(g, L, q, c)
        try:
            value = product.to_complex()
        except OverflowError:
            value = complex(math.nan, math.nan)
        rows.append({"method": "product", "real": value.real, "imag": value.imag, "abs_log": product.log_mag, "arg": product.arg})
    if brute is not None and product is not None:
        p_value = product.to_complex()
        scale = max(abs(brute), abs(p_value), 1.0)
        params["relative_difference"] = abs(brute - p_value) / scale
        params["agree"] = params["relative_difference"] <= get_settings().oracle_rel
    return ReportEnvelope("expsum", params, rows)


# -------------- #
# --- verify --- #
# -------------- #

def verify_lemma21(config: cfg.VerifyLemma21Config) -> ReportEnvelope:
    if config.qmax is not None:
        reports = expsums.sweep_lemma21(config.base, config.qmax, config.threads)
        params = {"base": config.base, "qmax": config.qmax}
    else:
        reports = [expsums.check_lemma21(config.q, config.base, config.a, config.b)]
        params = {"base": config.base, "q": config.q, "a": config.a, "b": config.b}
    return _bound_envelope("verify lemma21", params, reports)


def verify_lemma22(config: cfg.VerifyLemma22Config) -> ReportEnvelope:
    if config.qmax is not None:
        reports = expsums.sweep_lemma22(config.qmax, config.threads)
        params = {"qmax": config.qmax}
    else:
        reports = [expsums.check_lemma22(config.q, config.k, config.h)]
        params = {"q": config.q, "k": config.k, "h": config.h}
    return _bound_envelope("verify lemma22", params, reports)


def _grid_params(config) -> dict:
    return {
        "base": config.base,
        "mod": config.mod,
        "c_list": " ".join(str(c) for c in config.c_list),
        "length_min": config.length_min,
        "length_max": config.length_max,
    }


def verify_lemma31(config: cfg.VerifyLemma31Config) -> ReportEnvelope:
    Ls = range(config.length_min, config.length_max + 1)
    reports = expsums.sweep_lemma31(config.base, config.mod, config.c_list, Ls, config.threads)
    envelope = _bound_envelope("verify lemma31", _grid_params(config), reports)
    envelope.params["informative_checks"] = sum(r.informative for r in reports)
    return envelope


def verify_lemma32(config: cfg.VerifyLemma32Config) -> ReportEnvelope:
    Ls = range(config.length_min, config.length_max + 1)
    reports = expsums.sweep_lemma32(config.base, config.mod, config.c_list, Ls, config.threads)
    return _bound_envelope("verify lemma32", _grid_params(config), reports)


def verify_prop41(config: cfg.VerifyProp41Config) -> ReportEnvelope:
    Ls = range(config.length_min, config.length_max + 1)
    reports = counting.sweep_prop41(config.base, config.p, Ls, config.threads)
    params = {"base": config.base, "p": config.p, "length_min": config.length_min, "length_max": config.length_max}
    return _bound_envelope("verify prop41", params, reports)


def verify_prop42(config: cfg.VerifyProp42Config) -> ReportEnvelope:
    Ls = range(config.length_min, config.length_max + 1)
    reports = counting.sweep_prop42(config.base, config.mod, Ls, config.threads)
    params = {"base": config.base, "mod": config.mod, "length_min": config.length_min, "length_max": config.length_max}
    return _bound_envelope("verify prop42", params, reports)


def verify_decay(config: cfg.VerifyDecayConfig) -> ReportEnvelope:
    fit = counting.fit_decay(config.base, config.mod, range(config.length_min, config.length_max + 1), config.threads)
    params = {
        "base": config.base,
        "mod": config.mod,
        "branch": fit.branch,
        "xi": fit.xi,
        "log_A": fit.log_A,
        "theoretical_log_A": fit.theoretical_log_A,
        "hypothesis_holds": fit.hypothesis_holds,
        "empirical_slope": fit.empirical_slope,
        "empirical_rate": fit.empirical_rate,
        "rate_below_sqrt_two_thirds": fit.rate_below_sqrt_two_thirds,
        "decreasing_trend": fit.decreasing_trend,
        "cumulative_constant_log": fit.cumulative_constant_log,
    }
    rows = [{"kind": "length", **row} for row in fit.to_rows()]
    if config.x_list:
        cumulative = counting.check_cumulative_decay(config.base, config.mod, config.x_list)
        rows.extend({"kind": "cumulative", **r.to_row()} for r in cumulative)
        params["cumulative_all_satisfied"] = all(r.satisfied for r in cumulative)
    log_info_detailed(LOGGER_NAME, f"decay fit for g={config.base}, q={config.mod}: log A={fit.log_A:.6g}")
    return ReportEnvelope("verify decay", params, rows)


# ------------------------------ #
# --- census/sieve/density --- #
# ------------------------------ #

def census_command(config: cfg.CensusConfig) -> ReportEnvelope:
    report = primes.census(config.base, config.x, config.threads)
    params = {
        "base": config.base,
        "x": config.x,
        "palindrome_count": str(report.palindrome_count),
        "prime_palindrome_count": str(report.prime_palindrome_count),
        "density": report.density,
        "envelope": report.envelope,
        "probabilistic": report.probabilistic,
    }
    if config.per_length:
        rows = report.to_rows()
    else:
        rows = [{
            "x": str(report.x),
            "palindrome_count": str(report.palindrome_count),
            "prime_palindrome_count": str(report.prime_palindrome_count),
            "density": report.density,
            "envelope": report.envelope,
        }]
    return ReportEnvelope("census", params, rows)


def sieve_command(config: cfg.SieveConfig) -> ReportEnvelope:
    if config.y is None:
        y, h = primes.default_sieve_params(config.x)
    else:
        y, h = config.y, config.h
    evaluation = primes.brun_truncated_bound(config.base, config.x, y, h, primes=config.primes, workers=config.threads)
    params = {
        "base": config.base,
        "x": config.x,
        "y": y,
        "h": h,
        "Q": str(evaluation.Q.q),
        "omega_Q": evaluation.Q.omega,
        "terms": len(evaluation.terms),
        "truncated_sum": str(evaluation.truncated_sum),
        "upper_bound": evaluation.upper_bound,
        "full_sum": evaluation.full_sum,
        "mertens_product": evaluation.mertens_product,
        "mobius_sum": evaluation.mobius_sum,
        "mertens_consistent": evaluation.mertens_consistent,
        "tail_sum": evaluation.tail_sum,
        "tail_bound": evaluation.tail_bound,
    }
    if config.census:
        census = primes.census(config.base, config.x, config.threads)
        params["prime_palindrome_count"] = str(census.prime_palindrome_count)
        params["bound_holds"] = evaluation.bounds(census.prime_palindrome_count)
    return ReportEnvelope("sieve", params, evaluation.to_rows())


def density_command(config: cfg.DensityConfig) -> ReportEnvelope:
    series = primes.density_series(config.base, config.x_list, config.threads)
    params = {
        "base": config.base,
        "strictly_decreasing": series.strictly_decreasing,
        "ratio_bounded": series.ratio_bounded,
    }
    return ReportEnvelope("density", params, series.to_rows())


# name -> (config class, handler, one line description)
COMMANDS = {
    "enumerate": (cfg.EnumerateConfig, enumerate_command, "List palindromes in a range or of one length"),
    "count": (cfg.CountConfig, count_command, "Exact residue class counts of P_L or P(x)"),
    "expsum": (cfg.ExpsumConfig, expsum_command, "Exponential sum S_L(c) by enumeration and/or product formula"),
    "census": (cfg.CensusConfig, census_command, "Count prime palindromes <= x"),
    "sieve": (cfg.SieveConfig, sieve_command, "Truncated Brun sieve bound for prime palindromes <= x"),
    "density": (cfg.DensityConfig, density_command, "Prime palindrome density at several cut-offs"),
}

VERIFY_COMMANDS = {
    "lemma21": (cfg.VerifyLemma21Config, verify_lemma21, "Power pair sum bound d(q) sqrt(q gcd(a, b, q))"),
    "lemma22": (cfg.VerifyLemma22Config, verify_lemma22, "Geometric digit sum bound k exp(-4 gcd(h, q)^2 / q^2)"),
    "lemma31": (cfg.VerifyLemma31Config, verify_lemma31, "Theta_c decay of S_L(c)"),
    "lemma32": (cfg.VerifyLemma32Config, verify_lemma32, "exp(-(L-5) gcd(c, q)^2 / q^2) decay of S_L(c)"),
    "prop41": (cfg.VerifyProp41Config, verify_prop41, "Discrepancy of P_L mod a prime p"),
    "prop42": (cfg.VerifyProp42Config, verify_prop42, "Discrepancy of P_L mod q coprime to g(g^2-1)"),
    "decay": (cfg.VerifyDecayConfig, verify_decay, "Decay constant fit and cumulative decay check"),
}
