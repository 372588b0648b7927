"""Exponential sums over palindromes and power pairs, and checks of their bounds.

All sums use the additive character ``e_q(x) = exp(2*pi*i*x/q)``. The sum over
P_L factors exactly into one short digit sum per symmetric pair of positions,
which is evaluated in log-polar form so that lengths of several hundred digits
never overflow a double.
"""
import math
import cmath
import logging
from functools import partial
from dataclasses import dataclass, field

import numpy as np

from palindist import LOGGER_NAME, VALID_BOUND_IDS
from palindist.default_config import get_settings
from palindist.numtheory.digits import count_exact_length, iter_exact_length
from palindist.numtheory.modular import Modulus, mod_inverse, multiplicative_order
from palindist.utils.errors import PreconditionError, ResourceCapError
from palindist.utils.parallel import parallel_map
from palindist.utils.custom_logging import log_info_detailed
from palindist.utils.check_arguments import check_base, check_integer, check_modulus, check_positive

TWO_PI = 2.0 * math.pi


def _wrap_angle(theta: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    r = math.remainder(theta, TWO_PI)
    return math.pi if r <= -math.pi else r


def _log_or_neg_inf(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as ``(log|z|, arg z)``; ``log_mag = -inf`` is an exact zero."""
    log_mag:    float
    arg:        float = 0.0

    def __post_init__(self):
        if math.isnan(self.log_mag) or self.log_mag == math.inf:
            raise ValueError(f"ERROR: log magnitude must be finite or -inf, got {self.log_mag}")
        arg = 0.0 if self.log_mag == -math.inf else _wrap_angle(self.arg)
        object.__setattr__(self, "arg", arg)

    @classmethod
    def zero(cls) -> 'LogComplex':
        return cls(-math.inf, 0.0)

    @classmethod
    def one(cls) -> 'LogComplex':
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> 'LogComplex':
        if z == 0:
            return cls.zero()
        return cls(math.log(abs(z)), cmath.phase(z))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    def to_complex(self) -> complex:
        """Ordinary complex value; raises ``OverflowError`` when the magnitude exceeds double range."""
        if self.is_zero:
            return 0j
        return cmath.rect(math.exp(self.log_mag), self.arg)

    def __mul__(self, other: 'LogComplex') -> 'LogComplex':
        if not isinstance(other, LogComplex):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.arg + other.arg)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound check, with both sides in natural log scale.

    ``params`` holds the inputs of the check and ``extras`` the derived
    quantities (orders, Theta_c, exponents, ...). ``informative`` is False
    when the right hand side is no better than the trivial bound, and
    ``side_conditions`` is False when a structural claim checked alongside
    the inequality fails.
    """
    bound_id:       str
    params:         dict
    lhs_log:        float
    rhs_log:        float
    tolerance:      float = 1e-6
    informative:    bool = True
    side_conditions: bool = True
    extras:         dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_id not in VALID_BOUND_IDS:
            raise ValueError(f"ERROR: unknown bound id {self.bound_id!r}, valid ids are {VALID_BOUND_IDS}")

    @property
    def satisfied(self) -> bool:
        return self.side_conditions and self.lhs_log <= self.rhs_log + self.tolerance

    @property
    def slack_log(self) -> float:
        return self.rhs_log - self.lhs_log

    @property
    def ratio(self) -> float:
        """lhs / rhs (0 when the left hand side vanishes)."""
        if self.lhs_log == -math.inf:
            return 0.0
        return math.exp(min(self.lhs_log - self.rhs_log, 700.0))

    def to_row(self) -> dict:
        row = {"bound_id": self.bound_id}
        row.update(self.params)
        row.update(self.extras)
        row.update({
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "slack_log": self.slack_log,
            "satisfied": self.satisfied,
            "informative": self.informative,
        })
        return row


def _report(bound_id: str, params: dict, lhs_log: float, rhs_log: float, **kwargs) -> BoundReport:
    report = BoundReport(bound_id, params, lhs_log, rhs_log, tolerance=get_settings().bound_log_slack, **kwargs)
    if not report.satisfied:
        logging.warning(f"{bound_id} violated at {params}: lhs_log={lhs_log:.12g} > rhs_log={rhs_log:.12g}")
    return report


# ------------------------------ #
# --- Characters and orbits --- #
# ------------------------------ #

def e_q(q: int, x: int) -> complex:
    """exp(2*pi*i*x/q), with ``x`` reduced mod ``q`` first."""
    q = check_modulus(q)
    return cmath.exp(1j * TWO_PI * (check_integer(x, "x") % q) / q)


def _unit_roots(residues: np.ndarray, q: int) -> np.ndarray:
    return np.exp(1j * TWO_PI * residues / q)


def _power_orbit(g: int, q: int) -> tuple[int, np.ndarray, np.ndarray]:
    """ord_q(g) and the residues g^k, gbar^k for k = 1..ord_q(g)."""
    t = multiplicative_order(g, q)
    g_bar = mod_inverse(g, q)
    gk = np.empty(t, dtype=np.int64)
    gbk = np.empty(t, dtype=np.int64)
    x, y = 1, 1
    for k in range(t):
        x, y = x * g % q, y * g_bar % q
        gk[k], gbk[k] = x, y
    return t, gk, gbk


def power_pair_sum(q: int, g: int, a: int, b: int) -> complex:
    """Sum over k = 1..ord_q(g) of e_q(a*g^k + b*gbar^k), by direct summation."""
    q = check_modulus(q)
    _, gk, gbk = _power_orbit(g, q)
    a, b = check_integer(a, "a") % q, check_integer(b, "b") % q
    residues = (a * gk + b * gbk) % q
    return complex(_unit_roots(residues, q).sum())


def _lemma21_rhs_log(q: int, a: int, b: int) -> float:
    return math.log(Modulus.from_int(q).d) + 0.5 * math.log(q) + 0.5 * math.log(math.gcd(a, b, q))


def check_lemma21(q: int, g: int, a: int, b: int) -> BoundReport:
    """|power_pair_sum(q, g, a, b)| <= d(q) * sqrt(q) * sqrt(gcd(a, b, q))."""
    value = power_pair_sum(q, g, a, b)
    return _report(
        "lemma21",
        {"q": q, "g": g, "a": a, "b": b},
        _log_or_neg_inf(abs(value)),
        _lemma21_rhs_log(q, a % q, b % q),
        extras={"ord": multiplicative_order(g, q)},
    )


def lemma21_worst_case(g: int, q: int) -> BoundReport:
    """Largest lhs/rhs ratio of the power pair bound over all ``(a, b)`` in [0, q)^2.

    For fixed b the sums over all a form one discrete Fourier transform of
    the orbit weights, ``S[b, a] = q * ifft(C[b])[a]`` with
    ``C[b, g^k mod q] = e_q(b * gbar^k)``.
    """
    t, gk, gbk = _power_orbit(g, q)
    b = np.arange(q, dtype=np.int64)[:, None]
    C = np.zeros((q, q), dtype=complex)
    C[:, gk] = _unit_roots((b * gbk[None, :]) % q, q)    # g^k are distinct for k <= ord
    S = q * np.fft.ifft(C, axis=1)

    a_grid = np.arange(q, dtype=np.int64)[None, :]
    gcds = np.gcd(np.gcd(a_grid, b), q)
    d = Modulus.from_int(q).d
    with np.errstate(divide="ignore"):
        lhs_log = np.log(np.abs(S))
    rhs_log = math.log(d) + 0.5 * math.log(q) + 0.5 * np.log(gcds)
    slack = rhs_log - lhs_log
    tol = get_settings().bound_log_slack
    violations = int(np.count_nonzero(slack < -tol))
    b_worst, a_worst = np.unravel_index(np.argmin(slack), slack.shape)
    logging.debug(f"lemma21 q={q}: worst (a, b)=({a_worst}, {b_worst}), slack={slack[b_worst, a_worst]:.6g}")
    return _report(
        "lemma21",
        {"q": q, "g": g, "a": int(a_worst), "b": int(b_worst)},
        float(lhs_log[b_worst, a_worst]),
        float(rhs_log[b_worst, a_worst]),
        extras={"ord": t, "d": d, "pairs_checked": q * q, "violations": violations},
    )


def sweep_lemma21(g: int, qmax: int, workers: int | None = 1) -> list[BoundReport]:
    """Worst case report of the power pair bound for every ``2 <= q <= qmax`` coprime to ``g``."""
    g = check_base(g)
    qs = [q for q in range(2, check_positive(qmax, "qmax") + 1) if math.gcd(q, g) == 1]
    log_info_detailed(LOGGER_NAME, f"lemma21 sweep: g={g}, {len(qs)} moduli up to {qmax}")
    return parallel_map(partial(_lemma21_task, g), qs, workers)


def _lemma21_task(g: int, q: int) -> BoundReport:
    return lemma21_worst_case(g, q)


# ------------------------------ #
# --- Geometric digit sums --- #
# ------------------------------ #

def geometric_digit_sum(q: int, k: int, h: int) -> float:
    """s(q, k, h) = |sum_{a<k} e_q(h*a)|.

    Reduced to ``q/gcd(h, q)`` first; complete periods contribute exactly zero.
    """
    q = check_modulus(q)
    k = check_integer(k, "k")
    if k < 0:
        raise ValueError(f"ERROR: k must be >= 0, got {k}")
    h = check_integer(h, "h")
    d = math.gcd(h, q)
    q_red, h_red = q // d, (h // d) % (q // d)
    if q_red == 1:
        return float(k)
    k_rem = k % q_red
    if k_rem == 0:
        return 0.0
    residues = (h_red * np.arange(k_rem, dtype=np.int64)) % q_red
    return float(abs(_unit_roots(residues, q_red).sum()))


def _lemma22_rhs_log(q: int, k: int, h: int) -> float:
    return math.log(k) - 4.0 * math.gcd(h, q) ** 2 / q ** 2


def check_lemma22(q: int, k: int, h: int) -> BoundReport:
    """s(q, k, h) <= k * exp(-4 gcd(h, q)^2 / q^2), valid when q does not divide h."""
    q = check_modulus(q)
    k = check_integer(k, "k")
    if k < 2:
        raise ValueError(f"ERROR: k must be >= 2, got {k}")
    if h % q == 0:
        raise PreconditionError("q does not divide h", f"q={q}, h={h}")
    return _report(
        "lemma22",
        {"q": q, "k": k, "h": h},
        _log_or_neg_inf(geometric_digit_sum(q, k, h)),
        _lemma22_rhs_log(q, k, h),
    )


def lemma22_worst_case(q: int, kmax: int | None = None, hmax: int | None = None) -> BoundReport:
    """Worst case of the geometric digit sum bound over ``2 <= k <= kmax``, ``1 <= h <= hmax``, q not dividing h.

    Both ranges default to ``3q``. The sums for all k come from one cumulative
    sum per residue of h.
    """
    q = check_modulus(q)
    kmax = 3 * q if kmax is None else kmax
    hmax = 3 * q if hmax is None else hmax
    residues = np.arange(1, q, dtype=np.int64)[:, None]
    steps = np.arange(kmax, dtype=np.int64)[None, :]
    partial_sums = np.abs(np.cumsum(_unit_roots((residues * steps) % q, q), axis=1))
    ks = np.arange(1, kmax + 1)
    gcds = np.gcd(residues, q)
    with np.errstate(divide="ignore"):
        lhs_log = np.log(partial_sums)
    rhs_log = np.log(ks)[None, :] - 4.0 * gcds ** 2 / q ** 2
    slack = (rhs_log - lhs_log)[:, 1:]       # k >= 2

    present = [r for r in range(1, q) if r <= hmax]
    slack = slack[: len(present)]
    r_idx, k_idx = np.unravel_index(np.argmin(slack), slack.shape)
    r, k = present[r_idx], int(k_idx) + 2
    hs_per_residue = [len(range(r_, hmax + 1, q)) for r_ in present]
    tol = get_settings().bound_log_slack
    violations = int(sum(n * np.count_nonzero(row < -tol) for n, row in zip(hs_per_residue, slack)))
    return _report(
        "lemma22",
        {"q": q, "k": k, "h": r},
        float(lhs_log[r_idx, k - 1]),
        float(rhs_log[r_idx, k - 1]),
        extras={"cases_checked": sum(hs_per_residue) * (kmax - 1), "violations": violations},
    )


def sweep_lemma22(qmax: int, workers: int | None = 1) -> list[BoundReport]:
    """Worst case report of the digit sum bound for every ``2 <= q <= qmax``."""
    qs = list(range(2, check_positive(qmax, "qmax") + 1))
    log_info_detailed(LOGGER_NAME, f"lemma22 sweep: {len(qs)} moduli up to {qmax}")
    return parallel_map(lemma22_worst_case, qs, workers)


# ----------------------------------- #
# --- Exponential sums over P_L --- #
# ----------------------------------- #

def palindrome_exp_sum_brute(g: int, L: int, q: int, c: int) -> complex:
    """S_L(c) = sum over n in P_L of e_q(c*n), by enumeration."""
    q = check_modulus(q)
    size = count_exact_length(g, L)
    cap = get_settings().enumeration_cap
    if size > cap:
        raise ResourceCapError("|P_L| to enumerate", size, cap, "use palindrome_exp_sum_product or a smaller L")
    c = check_integer(c, "c") % q
    residues = np.fromiter(((c * n) % q for n in iter_exact_length(g, L)), dtype=np.int64, count=size)
    return complex(_unit_roots(residues, q).sum())


def digit_weights(g: int, L: int, q: int) -> list[tuple[int, int, bool]]:
    """``(k, w_k mod q, is_middle)`` for the positions k = 0..ceil(L/2)-1 of P_L.

    ``w_k = g^k + g^(L-1-k)`` pairs digit k with its mirror; the odd middle
    digit gets ``w = g^k`` alone. Position 0 carries the leading digit.
    """
    g = check_base(g)
    L = check_positive(L, "length L")
    out = []
    for k in range((L + 1) // 2):
        middle = (k == L - 1 - k)
        w = pow(g, k, q) if middle else (pow(g, k, q) + pow(g, L - 1 - k, q)) % q
        out.append((k, w, middle))
    return out


def _digit_factor(g: int, q: int, t: int, start: int) -> complex:
    """sum_{a=start}^{g-1} e_q(t*a), zero detected with integer arithmetic."""
    if t % q != 0:
        span = g if start == 0 else g - 1
        if (span * t) % q == 0:
            return 0j
    residues = np.array([(t * a) % q for a in range(start, g)], dtype=np.int64)
    return complex(_unit_roots(residues, q).sum())


def product_factors(g: int, L: int, q: int, c: int) -> list[complex]:
    """The digit factors whose product is S_L(c) exactly."""
    q = check_modulus(q)
    c = check_integer(c, "c") % q
    return [
        _digit_factor(g, q, (c * w) % q, 1 if k == 0 else 0)
        for k, w, _ in digit_weights(g, L, q)
    ]


def palindrome_exp_sum_product(g: int, L: int, q: int, c: int) -> LogComplex:
    """S_L(c) from its exact product factorisation, in log-polar form."""
    value = LogComplex.one()
    for factor in product_factors(g, L, q, c):
        value = value * LogComplex.from_complex(factor)
        if value.is_zero:
            break
    return value


def theta_c(g: int, q: int, c: int) -> float:
    """Theta_c = 1/g + (g-1) d(q) sqrt(q) sqrt(gcd(c, q)) / (g ord_q(g))."""
    g = check_base(g)
    q = check_modulus(q)
    t = multiplicative_order(g, q)
    d = Modulus.from_int(q).d
    return 1.0 / g + (g - 1) * d * math.sqrt(q) * math.sqrt(math.gcd(c, q)) / (g * t)


def check_lemma31(g: int, q: int, c: int, L: int) -> BoundReport:
    """|S_L(c)| <= |P_L| * Theta_c^((L - 2 ord_q(g) - 1)/4).

    Raises
    ------
    PreconditionError
        If some prime divisor of q is <= g, or ord_q(g) <= d(q) sqrt(q gcd(c, q)).
    """
    g = check_base(g)
    L = check_positive(L, "length L")
    m = Modulus.from_int(check_modulus(q))
    small = [p for p in m.primes if p <= g]
    if small:
        logging.warning(f"lemma31: q={q} has prime divisors {small} <= g={g}")
        raise PreconditionError("p > g for every prime divisor p of q", f"q={q} has prime divisor {small[0]}, g={g}")
    t = multiplicative_order(g, m)
    threshold = m.d * math.sqrt(q) * math.sqrt(math.gcd(c, q))
    if not t > threshold:
        logging.warning(f"lemma31: ord_{q}({g})={t} <= {threshold:.6g}")
        raise PreconditionError(
            "ord_q(g) > d(q)*sqrt(q)*sqrt(gcd(c, q))", f"ord={t}, d(q)*sqrt(q)*sqrt(gcd(c, q))={threshold:.6g}"
        )
    theta = theta_c(g, q, c)
    exponent = (L - 2 * t - 1) / 4
    return _report(
        "lemma31",
        {"g": g, "q": q, "c": c, "L": L},
        palindrome_exp_sum_product(g, L, q, c).log_mag,
        math.log(count_exact_length(g, L)) + exponent * math.log(theta),
        informative=exponent > 0,
        extras={"ord": t, "theta": theta, "exponent": exponent},
    )


def bad_positions(g: int, L: int, q: int, c: int) -> list[int]:
    """Paired positions ``1 <= k < L//2`` whose digit factor is trivial (q | c*w_k)."""
    c %= q
    return [k for k, w, middle in digit_weights(g, L, q) if 1 <= k < L // 2 and not middle and (c * w) % q == 0]


def check_lemma32(g: int, q: int, c: int, L: int) -> BoundReport:
    """|S_L(c)| <= |P_L| * exp(-(L - 5) gcd(c, q)^2 / q^2).

    The report also carries the number of bad positions and the bound
    ``floor(floor(L/2)/2)`` they must respect; both conditions must hold for
    the report to count as satisfied.
    """
    g = check_base(g)
    q = check_modulus(q)
    L = check_positive(L, "length L")
    if math.gcd(q, g * (g * g - 1)) != 1:
        logging.warning(f"lemma32: gcd({q}, g(g^2-1)) = {math.gcd(q, g * (g * g - 1))}")
        raise PreconditionError("gcd(q, g(g^2-1)) = 1", f"q={q}, g={g}")
    if c % q == 0:
        raise PreconditionError("q does not divide c", f"q={q}, c={c}")
    gcd_cq = math.gcd(c, q)
    n_bad = len(bad_positions(g, L, q, c))
    bad_bound = (L // 2) // 2
    lhs_log = palindrome_exp_sum_product(g, L, q, c).log_mag
    rhs_log = math.log(count_exact_length(g, L)) - (L - 5) * gcd_cq ** 2 / q ** 2
    if n_bad > bad_bound:
        logging.warning(f"lemma32: {n_bad} bad positions exceed {bad_bound} at g={g}, q={q}, c={c}, L={L}")
    return _report(
        "lemma32",
        {"g": g, "q": q, "c": c, "L": L},
        lhs_log,
        rhs_log,
        informative=L > 5,
        side_conditions=n_bad <= bad_bound,
        extras={"bad_positions": n_bad, "bad_positions_bound": bad_bound},
    )


def _grid_task(check, g: int, q: int, cL: tuple[int, int]) -> BoundReport:
    return check(g, q, cL[0], cL[1])


def _sweep_grid(check, g: int, q: int, cs, Ls, workers) -> list[BoundReport]:
    cs, Ls = list(cs), list(Ls)
    grid = sorted((c, L) for c in cs for L in Ls)
    return parallel_map(partial(_grid_task, check, g, q), grid, workers, chunksize=max(1, len(grid) // 64))


def sweep_lemma31(g: int, q: int, cs, Ls, workers: int | None = 1) -> list[BoundReport]:
    """:func:`check_lemma31` on the grid ``cs x Ls``, sorted by (c, L)."""
    cs, Ls = list(cs), list(Ls)
    log_info_detailed(LOGGER_NAME, f"lemma31 sweep: g={g}, q={q}, {len(cs)} values of c, {len(Ls)} lengths")
    return _sweep_grid(check_lemma31, g, q, cs, Ls, workers)


def sweep_lemma32(g: int, q: int, cs, Ls, workers: int | None = 1) -> list[BoundReport]:
    """:func:`check_lemma32` on the grid ``cs x Ls``, sorted by (c, L)."""
    cs, Ls = list(cs), list(Ls)
    log_info_detailed(LOGGER_NAME, f"lemma32 sweep: g={g}, q={q}, {len(cs)} values of c, {len(Ls)} lengths")
    return _sweep_grid(check_lemma32, g, q, cs, Ls, workers)
