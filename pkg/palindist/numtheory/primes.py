"""Prime palindrome census and the truncated Brun sieve bound on it."""
import math
import logging
from functools import partial
from fractions import Fraction
from itertools import combinations
from dataclasses import dataclass, field

from palindist import LOGGER_NAME
from palindist.default_config import get_settings
from palindist.numtheory.digits import count_up_to, num_digits, palindrome_from_prefix
from palindist.numtheory.modular import Modulus, mobius_reciprocal_sum, primes_up_to, sieve_primes
from palindist.numtheory.counting import count_divisible_up_to
from palindist.numtheory._primality import DETERMINISTIC_LIMIT, is_prime, primality_is_deterministic
from palindist.utils.errors import PreconditionError, ResourceCapError
from palindist.utils.parallel import parallel_map
from palindist.utils.custom_logging import log_info_detailed
from palindist.utils.check_arguments import check_base, check_integer

__all__ = [
    "is_prime", "primality_is_deterministic", "CensusReport", "census", "density_series",
    "default_sieve_params", "SieveEvaluation", "brun_truncated_bound",
]

# prefixes per census task
_CENSUS_CHUNK = 1 << 14
# smallest x with floor(e*logloglog x) >= 1
MIN_SIEVE_X = math.exp(math.exp(math.exp(1 / math.e)))


def envelope(x: int) -> float:
    """logloglog x / loglog x; nan when loglog x <= 1."""
    if x <= 1:
        return math.nan
    loglog = math.log(math.log(x))
    if not loglog > 1:
        return math.nan
    return math.log(loglog) / loglog


@dataclass(frozen=True)
class CensusReport:
    """Palindromes and prime palindromes ``<= x``, split by length.

    ``per_length`` holds ``(L, palindromes, primes)`` triples.
    """
    g:                      int
    x:                      int
    palindrome_count:       int
    prime_palindrome_count: int
    per_length:             tuple[tuple[int, int, int], ...]
    probabilistic:          bool = False

    def __post_init__(self):
        if self.prime_palindrome_count > self.palindrome_count:
            raise ValueError("ERROR: more prime palindromes than palindromes")
        if sum(p for _, _, p in self.per_length) != self.prime_palindrome_count:
            raise ValueError("ERROR: per length prime counts do not add up to the total")

    @property
    def density(self) -> float:
        if self.palindrome_count == 0:
            return math.nan
        return self.prime_palindrome_count / self.palindrome_count

    @property
    def envelope(self) -> float:
        return envelope(self.x)

    def to_rows(self) -> list[dict]:
        return [{"L": L, "palindromes": str(n), "primes": str(p)} for L, n, p in self.per_length]


def _census_task(g: int, x: int, task: tuple[int, int, int]) -> tuple[int, int, int, bool]:
    """Palindromes of length L with prefix in [lo, hi) that are <= x: ``(L, count, primes, probabilistic)``."""
    L, lo, hi = task
    count = primes = 0
    probabilistic = False
    for prefix in range(lo, hi):
        n = palindrome_from_prefix(prefix, g, L)
        if n > x:
            break
        count += 1
        if is_prime(n):
            primes += 1
            probabilistic |= n >= DETERMINISTIC_LIMIT
    return L, count, primes, probabilistic


def census(g: int, x: int, workers: int | None = 1) -> CensusReport:
    """Count the palindromes ``<= x`` and how many of them are prime, by enumeration.

    Raises
    ------
    ResourceCapError
        When |P(x)| exceeds ``census_cap``.
    """
    g = check_base(g)
    x = check_integer(x, "x")
    if x < 0:
        raise ValueError(f"ERROR: x must be >= 0, got {x}")
    total = count_up_to(g, x)
    cap = get_settings().census_cap
    if total > cap:
        raise ResourceCapError("|P(x)| to enumerate", total, cap, "choose a smaller x")
    if x < 1:
        return CensusReport(g, x, 0, 0, ())

    tasks = []
    for L in range(1, num_digits(x, g) + 1):
        h = (L + 1) // 2
        for lo in range(g ** (h - 1), g ** h, _CENSUS_CHUNK):
            tasks.append((L, lo, min(lo + _CENSUS_CHUNK, g ** h)))
    log_info_detailed(LOGGER_NAME, f"census: g={g}, x={x}, {total} palindromes in {len(tasks)} chunks")
    results = parallel_map(partial(_census_task, g, x), tasks, workers)

    per_length: dict[int, list[int]] = {}
    probabilistic = False
    for L, count, primes, prob in results:
        acc = per_length.setdefault(L, [0, 0])
        acc[0] += count
        acc[1] += primes
        probabilistic |= prob
    rows = tuple((L, n, p) for L, (n, p) in sorted(per_length.items()))
    counted = sum(n for _, n, _ in rows)
    if counted != total:
        raise AssertionError(f"census enumerated {counted} palindromes, expected {total}")
    if probabilistic:
        logging.warning(f"census: primality above 2^64 is probabilistic (Baillie-PSW) for x={x}")
    return CensusReport(g, x, total, sum(p for _, _, p in rows), rows, probabilistic)


@dataclass(frozen=True)
class DensitySeries:
    """Prime palindrome density at several cut-offs."""
    g:                  int
    reports:            tuple[CensusReport, ...]
    strictly_decreasing: bool
    ratio_bounded:      bool

    def to_rows(self) -> list[dict]:
        rows = []
        for r in self.reports:
            env = r.envelope
            rows.append({
                "x": str(r.x),
                "palindromes": str(r.palindrome_count),
                "primes": str(r.prime_palindrome_count),
                "density": r.density,
                "envelope": env,
                "ratio": r.density / env if math.isfinite(env) and env > 0 else math.nan,
                "density_log_x": r.density * math.log(r.x) if r.x > 1 else math.nan,
                "probabilistic": r.probabilistic,
            })
        return rows


def density_series(g: int, x_list, workers: int | None = 1) -> DensitySeries:
    """Census at each ``x`` in ``x_list`` with monotonicity and boundedness flags.

    ``ratio_bounded`` holds when density/envelope never grows past
    ``blowup_factor`` times its first finite value.
    """
    xs = sorted(check_integer(x, "x") for x in x_list)
    reports = tuple(census(g, x, workers) for x in xs)
    densities = [r.density for r in reports]
    strictly_decreasing = all(b < a for a, b in zip(densities, densities[1:]))
    if not strictly_decreasing:
        logging.warning(f"density_series: densities {densities} are not strictly decreasing")
    ratios = [r.density / r.envelope for r in reports if math.isfinite(r.envelope) and r.envelope > 0]
    ratio_bounded = not ratios or max(ratios) <= get_settings().blowup_factor * ratios[0]
    return DensitySeries(check_base(g), reports, strictly_decreasing, ratio_bounded)


# ---------------------- #
# --- Brun's sieve --- #
# ---------------------- #

def default_sieve_params(x: int) -> tuple[float, int]:
    """``(y, h)`` with h = floor(e logloglog x) and y = (log x)^(1/(4h)) / e."""
    x = check_integer(x, "x")
    if x < MIN_SIEVE_X:
        raise PreconditionError("floor(e*logloglog(x)) >= 1", f"x={x}, smallest usable x is {MIN_SIEVE_X:.6g}")
    log_x = math.log(x)
    h = math.floor(math.e * math.log(math.log(log_x)))
    if h < 1:
        raise PreconditionError("floor(e*logloglog(x)) >= 1", f"x={x}, smallest usable x is {MIN_SIEVE_X:.6g}")
    y = math.exp(-1) * log_x ** (1 / (4 * h))
    return y, h


@dataclass(frozen=True)
class SieveTerm:
    q:      int
    mu:     int
    omega:  int
    A_q:    int


@dataclass(frozen=True)
class SieveEvaluation:
    """The truncated inclusion-exclusion bound ``y + sum mu(q) A_q`` over q | Q with omega(q) <= 2h."""
    g:                  int
    x:                  int
    y:                  float
    h:                  int
    Q:                  Modulus
    terms:              tuple[SieveTerm, ...]
    truncated_sum:      int
    full_sum:           bool
    mertens_product:    float
    mobius_sum:         Fraction | None
    tail_sum:           float
    tail_bound:         float
    extras:             dict = field(default_factory=dict)

    @property
    def upper_bound(self) -> float:
        return self.y + self.truncated_sum

    def bounds(self, count: int) -> bool:
        """``count <= y + truncated_sum``, compared without rounding the integer part."""
        return count - self.truncated_sum <= self.y

    @property
    def mertens_consistent(self) -> bool | None:
        if self.mobius_sum is None:
            return None
        return abs(float(self.mobius_sum) - self.mertens_product) <= get_settings().mertens_abs

    def to_rows(self) -> list[dict]:
        return [{"q": str(t.q), "mu": t.mu, "omega": t.omega, "A_q": str(t.A_q)} for t in self.terms]


def _elementary_symmetric(values: list[float]) -> list[float]:
    """e_0..e_n of ``values``."""
    e = [1.0] + [0.0] * len(values)
    for v in values:
        for j in range(len(e) - 1, 0, -1):
            e[j] += v * e[j - 1]
    return e


def _divisible_task(g: int, x: int, q: int) -> int:
    return count_divisible_up_to(g, x, q)


def brun_truncated_bound(
    g: int,
    x: int,
    y: float,
    h: int,
    primes=None,
    workers: int | None = 1,
) -> SieveEvaluation:
    """Evaluate the truncated Brun sieve upper bound for prime palindromes ``<= x``.

    Parameters
    ----------
    g : int
        Base.
    x : int
        Cut-off.
    y : float
        Sieve level; Q is the product of the primes ``g^3 < p <= y``.
    h : int
        Truncation depth; divisors with at most ``2h`` prime factors are used.
    primes : iterable of int, optional
        Explicit primes for Q instead of the default range.
    workers : int, optional
        Processes used for the A_q counts.

    Returns
    -------
    SieveEvaluation
        Exact A_q for every divisor used, and the bound.
    """
    g = check_base(g)
    x = check_integer(x, "x")
    h = check_integer(h, "h")
    if y < 0:
        raise ValueError(f"ERROR: y must be >= 0, got {y}")
    if h < 1:
        raise ValueError(f"ERROR: h must be >= 1, got {h}")
    if primes is None:
        primes = sieve_primes(g, y)
    else:
        primes = sorted(set(int(p) for p in primes))
        not_prime = [p for p in primes if not is_prime(p)]
        if not_prime:
            raise ValueError(f"ERROR: sieve primes must be prime, got {not_prime}")
    Q = Modulus.from_primes(primes)
    omega = Q.omega
    depth = min(2 * h, omega)
    n_terms = sum(math.comb(omega, j) for j in range(depth + 1))
    cap = get_settings().divisor_cap
    if n_terms > cap:
        raise ResourceCapError("divisors of Q(y) with omega(q) <= 2h", n_terms, cap, "use a smaller y or h")

    divisors = sorted(
        (math.prod(combo), j) for j in range(depth + 1) for combo in combinations(primes, j)
    )
    log_info_detailed(LOGGER_NAME, f"brun sieve: g={g}, x={x}, y={y}, h={h}, omega(Q)={omega}, {n_terms} divisors")
    counts = parallel_map(partial(_divisible_task, g, x), [q for q, _ in divisors], workers)
    terms = tuple(SieveTerm(q, (-1) ** j, j, A) for (q, j), A in zip(divisors, counts))
    truncated_sum = sum(t.mu * t.A_q for t in terms)

    mobius_sum = mobius_reciprocal_sum(primes) if 2 ** omega <= cap else None
    esym = _elementary_symmetric([1.0 / p for p in primes])
    tail_sum = math.fsum(esym[2 * h + 1:])
    tail_bound = math.exp(-2 * h + math.e * math.fsum(1.0 / int(p) for p in primes_up_to(math.floor(y))))
    return SieveEvaluation(
        g, x, float(y), h, Q, terms, truncated_sum,
        full_sum=2 * h >= omega,
        mertens_product=math.prod(1.0 - 1.0 / p for p in primes),
        mobius_sum=mobius_sum,
        tail_sum=tail_sum,
        tail_bound=tail_bound,
    )
