"""Exact residue class counts of palindromes and the distribution checks built on them.

Counts come from a digit DP over the half prefix: position k contributes
``a * w_k (mod q)`` for its digit a, with the symmetric weights of
:func:`palindist.numtheory.expsums.digit_weights`. The DP state is a sparse
map residue -> number of prefixes, so moduli far larger than the number of
reachable residues stay cheap.
"""
import math
import logging
from functools import lru_cache, partial
from fractions import Fraction
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import linregress

from palindist import LOGGER_NAME
from palindist.default_config import get_settings
from palindist.numtheory.digits import count_exact_length, count_up_to, num_digits, palindrome_from_prefix
from palindist.numtheory.modular import order
from palindist.numtheory._primality import is_prime
from palindist.numtheory.expsums import BoundReport, _report, digit_weights, palindrome_exp_sum_product
from palindist.utils.errors import PreconditionError
from palindist.utils.parallel import parallel_map
from palindist.utils.custom_logging import log_info_detailed
from palindist.utils.check_arguments import check_base, check_integer, check_modulus, check_positive

PRIME_BRANCH_XI = 0.99
SQRT_TWO_THIRDS = math.sqrt(2.0 / 3.0)


def _log_big(n: int) -> float:
    return math.log(n) if n > 0 else -math.inf


@dataclass(frozen=True)
class ResidueCountTable:
    """Exact counts of palindromes per residue class mod q.

    ``scope`` is ``"exact"`` (palindromes of length ``L``) or ``"upto"``
    (palindromes ``<= x``).
    """
    g:      int
    q:      int
    scope:  str
    counts: tuple[int, ...]
    total:  int
    L:      int | None = None
    x:      int | None = None

    def __post_init__(self):
        if self.scope not in ("exact", "upto"):
            raise ValueError(f"ERROR: scope must be 'exact' or 'upto', got {self.scope!r}")
        if len(self.counts) != self.q:
            raise ValueError(f"ERROR: expected {self.q} counts, got {len(self.counts)}")
        if any(n < 0 for n in self.counts):
            raise ValueError("ERROR: residue counts must be non-negative")
        if sum(self.counts) != self.total:
            raise ValueError(f"ERROR: counts sum to {sum(self.counts)}, expected total {self.total}")

    @property
    def max_discrepancy(self) -> Fraction:
        """max_a |N_a - total/q| as an exact rational."""
        return Fraction(max(abs(self.q * n - self.total) for n in self.counts), self.q)

    @property
    def discrepancy_log(self) -> float:
        d = self.max_discrepancy
        if d == 0:
            return -math.inf
        return math.log(d.numerator) - math.log(d.denominator)

    @property
    def normalized_discrepancy_log(self) -> float:
        """log(max_discrepancy / total)."""
        return self.discrepancy_log - _log_big(self.total)

    def to_rows(self) -> list[dict]:
        return [{"residue": a, "count": str(n)} for a, n in enumerate(self.counts)]


# ---------------- #
# --- Digit DP --- #
# ---------------- #

def _shift_multiset(g: int, q: int, w: int, start: int, stop: int | None = None) -> Counter:
    """Residues ``a * w mod q`` for ``start <= a < stop`` with multiplicity."""
    stop = g if stop is None else stop
    return Counter((a * w) % q for a in range(start, stop))


def _convolve(state: dict[int, int], shifts: Counter, q: int) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for r, n in state.items():
        for s, m in shifts.items():
            out[(r + s) % q] += n * m
    return out


def _as_tuple(state: dict[int, int], q: int) -> tuple[int, ...]:
    counts = [0] * q
    for r, n in state.items():
        counts[r] += n
    return tuple(counts)


@lru_cache(maxsize=4096)
def _exact_counts(g: int, L: int, q: int) -> tuple[int, ...]:
    state: dict[int, int] = {0: 1}
    for k, w, _ in digit_weights(g, L, q):
        state = _convolve(state, _shift_multiset(g, q, w, 1 if k == 0 else 0), q)
    return _as_tuple(state, q)


def class_counts_exact_length(g: int, L: int, q: int) -> ResidueCountTable:
    """Counts of palindromes of length ``L`` in each residue class mod ``q``.

    Examples
    --------
    >>> class_counts_exact_length(10, 3, 3).counts
    (30, 30, 30)
    """
    g = check_base(g)
    L = check_positive(L, "length L")
    q = check_modulus(q)
    counts = _exact_counts(g, L, q)
    return ResidueCountTable(g, q, "exact", counts, count_exact_length(g, L), L=L)


def _top_length_counts(g: int, x: int, q: int) -> tuple[int, ...]:
    """Counts of palindromes with exactly as many digits as ``x`` that are ``<= x``.

    Prefixes strictly below the prefix of ``x`` are counted with a tight flag
    DP; the palindrome built from the prefix of ``x`` is compared directly.
    """
    D = num_digits(x, g)
    h = (D + 1) // 2
    prefix = x // g ** (D - h)
    prefix_digits = [(prefix // g ** (h - 1 - i)) % g for i in range(h)]
    loose: dict[int, int] = {}
    tight = 0
    for (k, w, _), p_k in zip(digit_weights(g, D, q), prefix_digits):
        start = 1 if k == 0 else 0
        loose = _convolve(loose, _shift_multiset(g, q, w, start), q) if loose else {}
        for s, m in _shift_multiset(g, q, w, start, p_k).items():
            loose[(tight + s) % q] = loose.get((tight + s) % q, 0) + m
        tight = (tight + p_k * w) % q
    boundary = palindrome_from_prefix(prefix, g, D)
    if boundary <= x:
        loose[boundary % q] = loose.get(boundary % q, 0) + 1
    return _as_tuple(loose, q)


def class_counts_up_to(g: int, x: int, q: int) -> ResidueCountTable:
    """Counts of palindromes ``<= x`` in each residue class mod ``q``."""
    g = check_base(g)
    x = check_positive(x, "x")
    q = check_modulus(q)
    counts = [0] * q
    for ell in range(1, num_digits(x, g)):
        for a, n in enumerate(_exact_counts(g, ell, q)):
            counts[a] += n
    for a, n in enumerate(_top_length_counts(g, x, q)):
        counts[a] += n
    return ResidueCountTable(g, q, "upto", tuple(counts), count_up_to(g, x), x=x)


def count_divisible_up_to(g: int, x: int, q: int) -> int:
    """Number of palindromes ``<= x`` divisible by ``q`` (``q = 1`` counts all of them)."""
    if q == 1:
        return count_up_to(g, x)
    if x < 1:
        return 0
    return class_counts_up_to(g, x, q).counts[0]


# ------------------------------------ #
# --- Fourier side of the counts --- #
# ------------------------------------ #

def _exp_sums_over_c(g: int, L: int, q: int) -> np.ndarray:
    return np.array([palindrome_exp_sum_product(g, L, q, c).to_complex() for c in range(q)])


def class_counts_via_fourier(g: int, L: int, q: int) -> list[float]:
    """N_a = (1/q) sum_c e_q(-c a) S_L(c), from the product formula sums."""
    q = check_modulus(q)
    return list(np.fft.fft(_exp_sums_over_c(g, L, q)).real / q)


def parseval_identity(g: int, L: int, q: int) -> tuple[float, int]:
    """``(sum_c |S_L(c)|^2, q * sum_a N_a^2)``; the two agree up to rounding."""
    q = check_modulus(q)
    lhs = math.fsum(math.exp(2.0 * palindrome_exp_sum_product(g, L, q, c).log_mag) for c in range(q))
    rhs = q * sum(n * n for n in _exact_counts(check_base(g), check_positive(L, "length L"), q))
    return lhs, rhs


def _fourier_bound_log(g: int, L: int, q: int) -> float:
    """log((1/q) sum_{c=1}^{q-1} |S_L(c)|), the bound the discrepancy estimates start from."""
    logs = [palindrome_exp_sum_product(g, L, q, c).log_mag for c in range(1, q)]
    top = max(logs)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in logs)) - math.log(q)


# ---------------------------- #
# --- Distribution checks --- #
# ---------------------------- #

def check_prop41(g: int, p: int, L: int) -> BoundReport:
    """max_a |N_a - |P_L|/p| < (|P_L|/p) 0.99^L for a prime p > g with ord_p(g) >= 3 sqrt(p), L >= 10p - 5.

    ``satisfied`` compares in log scale with the configured slack; ``extras["strict"]``
    is the exact rational test of the strict inequality.
    """
    g = check_base(g)
    p = check_modulus(p)
    L = check_positive(L, "length L")
    if not is_prime(p):
        raise PreconditionError("p prime", f"p={p}")
    if p <= g:
        raise PreconditionError("p > g", f"p={p}, g={g}")
    t = order(g, p)
    if t * t < 9 * p:
        logging.warning(f"prop41: ord_{p}({g})={t} < 3*sqrt({p})")
        raise PreconditionError("ord_p(g) >= 3*sqrt(p)", f"ord={t}, 3*sqrt(p)={3 * math.sqrt(p):.6g}")
    if L < 10 * p - 5:
        raise PreconditionError("L >= 10p - 5", f"L={L}, 10p - 5={10 * p - 5}")
    table = class_counts_exact_length(g, L, p)
    log_size = _log_big(table.total)
    return _report(
        "prop41",
        {"g": g, "p": p, "L": L},
        table.discrepancy_log,
        log_size - math.log(p) + L * math.log(PRIME_BRANCH_XI),
        side_conditions=p >= 11,
        extras={
            "ord": t,
            "fourier_bound_log": _fourier_bound_log(g, L, p),
            "intermediate_bound_log": log_size - math.log(p) + math.log(p - 1) + (L / 5) * math.log(5 / 6),
            "total": str(table.total),
            "strict": table.max_discrepancy < Fraction(table.total, p) * Fraction(99, 100) ** L,
        },
    )


def prop42_min_length(q: int) -> float:
    return 10 + 2 * q * q * math.log(q)


def check_prop42(g: int, q: int, L: int) -> BoundReport:
    """max_a |N_a - |P_L|/q| < (|P_L|/q) exp(-L/(2q^2)) for gcd(q, g(g^2-1)) = 1 and L >= 10 + 2q^2 log q.

    ``extras["strict"]`` records the strict inequality without slack.
    """
    g = check_base(g)
    q = check_modulus(q)
    L = check_positive(L, "length L")
    if math.gcd(q, g * (g * g - 1)) != 1:
        raise PreconditionError("gcd(q, g(g^2-1)) = 1", f"q={q}, g={g}")
    if L < prop42_min_length(q):
        raise PreconditionError("L >= 10 + 2q^2*log(q)", f"L={L}, 10 + 2q^2*log(q)={prop42_min_length(q):.6g}")
    table = class_counts_exact_length(g, L, q)
    rhs_log = _log_big(table.total) - math.log(q) - L / (2 * q * q)
    return _report(
        "prop42",
        {"g": g, "q": q, "L": L},
        table.discrepancy_log,
        rhs_log,
        extras={
            "fourier_bound_log": _fourier_bound_log(g, L, q),
            "total": str(table.total),
            "strict": table.discrepancy_log < rhs_log,
        },
    )


def _prop_task(check, g: int, q: int, L: int) -> BoundReport:
    return check(g, q, L)


def sweep_prop41(g: int, p: int, Ls, workers: int | None = 1) -> list[BoundReport]:
    Ls = sorted(Ls)
    log_info_detailed(LOGGER_NAME, f"prop41 sweep: g={g}, p={p}, L in [{Ls[0]}, {Ls[-1]}]")
    return parallel_map(partial(_prop_task, check_prop41, g, p), Ls, workers)


def sweep_prop42(g: int, q: int, Ls, workers: int | None = 1) -> list[BoundReport]:
    Ls = sorted(Ls)
    log_info_detailed(LOGGER_NAME, f"prop42 sweep: g={g}, q={q}, L in [{Ls[0]}, {Ls[-1]}]")
    return parallel_map(partial(_prop_task, check_prop42, g, q), Ls, workers)


# ------------------------ #
# --- Decay of the DP --- #
# ------------------------ #

def decay_branch(g: int, q: int) -> tuple[str, float]:
    """``("prime", 0.99)`` when the prime estimate applies to q, else ``("coprime", exp(-1/(2q^2)))``."""
    g = check_base(g)
    q = check_modulus(q)
    if is_prime(q) and q > g:
        t = order(g, q)
        if t * t >= 9 * q:
            return "prime", PRIME_BRANCH_XI
    if math.gcd(q, g * (g * g - 1)) == 1:
        return "coprime", math.exp(-1.0 / (2 * q * q))
    raise PreconditionError(
        "q prime with ord_q(g) >= 3*sqrt(q), or gcd(q, g(g^2-1)) = 1", f"g={g}, q={q}"
    )


def theoretical_decay_constant_log(branch: str, q: int) -> float:
    """log A for which |P_L| A xi^L bounds the discrepancy at every L >= 1."""
    if branch == "prime":
        return (6 - 10 * q) * math.log(PRIME_BRANCH_XI)
    return prop42_min_length(q) / (2 * q * q)


@dataclass(frozen=True)
class DecayFit:
    """Measured discrepancy decay of one modulus over a range of lengths.

    ``normalized_log[i]`` is log(max_a |N_a - |P_L|/q| / |P_L|) at
    ``lengths[i]``; ``A = max(1, max_L ratio / xi^L)`` is the smallest
    constant that makes the measured series respect ``A xi^L``.
    """
    g:                      int
    q:                      int
    branch:                 str
    xi:                     float
    lengths:                tuple[int, ...]
    normalized_log:         tuple[float, ...]
    log_A:                  float
    theoretical_log_A:      float
    hypothesis_holds:       bool
    empirical_slope:        float
    cumulative_constant_log: float
    extras:                 dict = field(default_factory=dict)

    @property
    def A(self) -> float:
        return math.exp(min(self.log_A, 700.0))

    @property
    def empirical_rate(self) -> float:
        """exp of the fitted slope of the normalised log discrepancy against L."""
        return math.exp(self.empirical_slope) if math.isfinite(self.empirical_slope) else math.nan

    @property
    def rate_below_sqrt_two_thirds(self) -> bool:
        return self.empirical_rate < SQRT_TWO_THIRDS

    @property
    def decreasing_trend(self) -> bool:
        return self.empirical_slope < 0

    def to_rows(self) -> list[dict]:
        tol = get_settings().bound_log_slack
        log_xi = math.log(self.xi)
        return [
            {
                "L": L,
                "normalized_discrepancy_log": v,
                "fitted_bound_log": self.log_A + L * log_xi,
                "theoretical_bound_log": self.theoretical_log_A + L * log_xi,
                "satisfied": v <= self.theoretical_log_A + L * log_xi + tol,
            }
            for L, v in zip(self.lengths, self.normalized_log)
        ]


def _normalized_discrepancy_task(g: int, q: int, L: int) -> float:
    return class_counts_exact_length(g, L, q).normalized_discrepancy_log


def fit_decay(g: int, q: int, L_range, workers: int | None = 1) -> DecayFit:
    """Fit ``A`` in ``discrepancy_L <= |P_L| A xi^L`` with the branch's theoretical xi."""
    branch, xi = decay_branch(g, q)
    lengths = tuple(sorted(set(check_positive(L, "length L") for L in L_range)))
    if not lengths:
        raise ValueError("ERROR: L_range is empty")
    log_info_detailed(LOGGER_NAME, f"fit_decay: g={g}, q={q}, branch={branch}, {len(lengths)} lengths")
    values = tuple(parallel_map(partial(_normalized_discrepancy_task, g, q), lengths, workers))
    log_xi = math.log(xi)
    log_A = max(0.0, max(v - L * log_xi for L, v in zip(lengths, values)))
    theoretical_log_A = theoretical_decay_constant_log(branch, q)
    tol = get_settings().bound_log_slack
    hypothesis_holds = all(v <= theoretical_log_A + L * log_xi + tol for L, v in zip(lengths, values))

    finite = [(L, v) for L, v in zip(lengths, values) if math.isfinite(v)]
    slope, r_value = math.nan, math.nan
    if len(finite) >= 2:
        fit = linregress([L for L, _ in finite], [v for _, v in finite])
        slope, r_value = float(fit.slope), float(fit.rvalue)
    logging.debug(f"fit_decay g={g} q={q}: log A={log_A:.6g}, slope={slope:.6g}")

    # cumulative constant at x = g^L - 1, where P(x) is every length up to L
    cumulative = -math.inf
    counts = [0] * q
    total = 0
    for ell in range(1, lengths[-1] + 1):
        for a, n in enumerate(_exact_counts(g, ell, q)):
            counts[a] += n
        total += count_exact_length(g, ell)
        if ell in lengths:
            disc = Fraction(max(abs(q * n - total) for n in counts), q)
            if disc:
                c_log = math.log(disc.numerator) - math.log(disc.denominator) - math.log(total) - (ell / 2) * log_xi
                cumulative = max(cumulative, c_log)
    return DecayFit(
        g, q, branch, xi, lengths, values, log_A, theoretical_log_A, hypothesis_holds, slope, cumulative,
        extras={"rvalue": r_value},
    )


def cumulative_shape_log(branch: str, g: int, q: int, x: int) -> float:
    """log of the decay shape of the cumulative estimate at ``x``."""
    log_x = math.log(x)
    if branch == "prime":
        return (log_x / (2 * math.log(g)) - 10 * q) * math.log(PRIME_BRANCH_XI)
    return math.log(q) - log_x / (4 * q * q * math.log(g))


def check_cumulative_decay(g: int, q: int, x_list) -> list[BoundReport]:
    """Cumulative discrepancy D(x) against |P(x)| times the branch decay shape.

    The unspecified constant is estimated as ``D(x) / (|P(x)| shape(x))``; a
    row is satisfied while this estimate stays within ``blowup_factor`` of the
    first nonzero one.
    """
    branch, xi = decay_branch(g, q)
    xs = [check_positive(x, "x") for x in x_list]
    if not xs:
        raise ValueError("ERROR: x_list is empty")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError(f"ERROR: x_list must be strictly increasing, got {xs}")
    bound_id = "cor45" if branch == "prime" else "cor46"
    log_info_detailed(LOGGER_NAME, f"cumulative decay: g={g}, q={q}, branch={branch}, {len(xs)} values of x")

    measured = []
    for x in xs:
        table = class_counts_up_to(g, x, q)
        shape_log = cumulative_shape_log(branch, g, q, x)
        log_size = _log_big(table.total)
        constant_log = table.discrepancy_log - log_size - shape_log
        measured.append((x, table, shape_log, log_size, constant_log))

    first = next((c for *_, c in measured if math.isfinite(c)), 0.0)
    allowance_log = first + math.log(get_settings().blowup_factor)
    return [
        _report(
            bound_id,
            {"g": g, "q": q, "x": str(x)},
            table.discrepancy_log,
            log_size + shape_log + allowance_log,
            extras={
                "branch": branch,
                "xi": xi,
                "palindromes": str(table.total),
                "shape_log": shape_log,
                "empirical_constant_log": constant_log,
            },
        )
        for x, table, shape_log, log_size, constant_log in measured
    ]
