"""Multiplicative orders, arithmetic functions and prime tables."""
import math
import logging
from functools import lru_cache, reduce
from fractions import Fraction
from itertools import combinations
from dataclasses import dataclass

import numpy as np
from sympy import factorint

from palindist.utils.errors import NoInverseError, UndefinedOrderError
from palindist.utils.check_arguments import check_base, check_integer, check_modulus, check_positive

# odd-only segments of this many candidates
_SEGMENT_ODD_COUNT = 1 << 20


# ---------------------- #
# --- Prime tables --- #
# ---------------------- #

@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """Primes ``<= limit`` from a plain sieve of Eratosthenes."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime_mask = np.ones(limit + 1, dtype=bool)
    is_prime_mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime_mask[p]:
            is_prime_mask[p * p::p] = False
    primes = np.flatnonzero(is_prime_mask).astype(np.int64)
    primes.setflags(write=False)
    return primes


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """Primes ``p`` with ``lo < p <= hi`` from an odd-only segmented sieve.

    Parameters
    ----------
    lo : int
        Exclusive lower end.
    hi : int
        Inclusive upper end.

    Returns
    -------
    np.ndarray
        int64 array of primes in increasing order.
    """
    lo, hi = max(int(lo), 1), int(hi)
    if hi <= lo or hi < 2:
        return np.array([], dtype=np.int64)
    base = _base_primes(math.isqrt(hi) + 1)
    chunks = []
    if lo < 2 <= hi:
        chunks.append(np.array([2], dtype=np.int64))
    low = max(lo + 1, 3)
    if low % 2 == 0:
        low += 1
    span = 2 * _SEGMENT_ODD_COUNT
    while low <= hi:
        high = min(low + span, hi + 1)   # exclusive
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in base[1:]:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2::p] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 else high + 1
    primes = np.concatenate(chunks) if chunks else np.array([], dtype=np.int64)
    return primes[primes <= hi]


def primes_up_to(n: int) -> np.ndarray:
    """Primes ``<= n``."""
    return primes_in_range(1, n)


# ----------------------- #
# --- Factorisation --- #
# ----------------------- #

def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``n >= 1`` as sorted ``(prime, exponent)`` pairs (``sympy.factorint``)."""
    n = check_positive(n, "n")
    factors = factorint(n)
    logging.debug(f"factorize: {n} = {factors}")
    return tuple(sorted((int(p), int(e)) for p, e in factors.items()))


# ------------------ #
# --- Modulus --- #
# ------------------ #

@dataclass(frozen=True)
class Modulus:
    """An integer ``q >= 1`` together with its prime factorisation."""
    q:              int
    factorization:  tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"ERROR: modulus must be >= 1, got {self.q}")
        primes = [p for p, _ in self.factorization]
        if primes != sorted(set(primes)):
            raise ValueError(f"ERROR: factorization primes must be strictly increasing, got {primes}")
        if math.prod(p ** e for p, e in self.factorization) != self.q:
            raise ValueError(f"ERROR: factorization {self.factorization} does not multiply to {self.q}")

    @classmethod
    def from_int(cls, q: 'int | Modulus') -> 'Modulus':
        if isinstance(q, Modulus):
            return q
        return cls(q, factorize(q))

    @classmethod
    def from_primes(cls, primes) -> 'Modulus':
        """Squarefree modulus from distinct primes."""
        ps = sorted(int(p) for p in primes)
        return cls(math.prod(ps), tuple((p, 1) for p in ps))

    def __int__(self) -> int:
        return self.q

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factorization)

    @property
    def d(self) -> int:
        return math.prod(e + 1 for _, e in self.factorization)

    @property
    def phi(self) -> int:
        return math.prod((p - 1) * p ** (e - 1) for p, e in self.factorization)

    @property
    def mu(self) -> int:
        if any(e > 1 for _, e in self.factorization):
            return 0
        return -1 if len(self.factorization) % 2 else 1

    @property
    def omega(self) -> int:
        return len(self.factorization)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factorization)

    def divisors(self) -> list[int]:
        """All positive divisors in increasing order."""
        divs = [1]
        for p, e in self.factorization:
            divs = [d * p ** k for d in divs for k in range(e + 1)]
        return sorted(divs)


@dataclass(frozen=True)
class ArithmeticFunctions:
    d:      int
    phi:    int
    mu:     int
    omega:  int


def arithmetic_functions(q: 'int | Modulus') -> ArithmeticFunctions:
    """Divisor count, Euler phi, Moebius and number of distinct prime factors of ``q``."""
    m = Modulus.from_int(q)
    return ArithmeticFunctions(d=m.d, phi=m.phi, mu=m.mu, omega=m.omega)


def mod_inverse(c: int, q: 'int | Modulus') -> int:
    """Inverse of ``c`` modulo ``q`` in ``[1, q)`` (0 when q = 1)."""
    q = int(q)
    c = check_integer(c, "c")
    if math.gcd(c, q) != 1:
        raise NoInverseError(c, q)
    return pow(c, -1, q)


def multiplicative_order(g: int, q: 'int | Modulus') -> int:
    """Least ``t >= 1`` with ``g^t = 1 (mod q)``.

    Starts from phi(q) and strips prime factors of phi(q) while the power
    stays congruent to 1.
    """
    g = check_integer(g, "g")
    m = Modulus.from_int(q)
    if math.gcd(g, m.q) != 1:
        raise UndefinedOrderError(g, m.q)
    if m.q == 1:
        return 1
    t = m.phi
    for p, _ in factorize(t):
        while t % p == 0 and pow(g, t // p, m.q) == 1:
            t //= p
    return t


@lru_cache(maxsize=4096)
def _order_cached(g: int, q: int) -> int:
    return multiplicative_order(g, q)


def order(g: int, q: int) -> int:
    """Cached :func:`multiplicative_order` for plain integers."""
    return _order_cached(int(g), int(q))


# --------------------------- #
# --- Sieve moduli Q(y) --- #
# --------------------------- #

def sieve_primes(g: int, y: float) -> list[int]:
    """Primes p with ``g^3 < p <= y``."""
    g = check_base(g)
    return [int(p) for p in primes_in_range(g ** 3, math.floor(y))]


def sieve_modulus_product(g: int, y: float) -> Modulus:
    """Q(y), the product of the primes ``g^3 < p <= y``; 1 when there are none."""
    primes = sieve_primes(g, y)
    Q = Modulus.from_primes(primes)
    if math.gcd(Q.q, g * (g * g - 1)) != 1:
        raise AssertionError(f"gcd(Q, g(g^2-1)) != 1 for g={g}, y={y}")
    return Q


def mertens_product(g: int, y: float) -> float:
    """prod over primes g^3 < p <= y of (1 - 1/p), in double precision."""
    return math.prod(1.0 - 1.0 / p for p in sieve_primes(g, y))


def mobius_reciprocal_sum(primes) -> Fraction:
    """Sum of mu(q)/q over all divisors q of the product of ``primes``, exactly."""
    primes = [int(p) for p in primes]
    total = Fraction(0)
    for k in range(len(primes) + 1):
        sign = -1 if k % 2 else 1
        for combo in combinations(primes, k):
            total += Fraction(sign, math.prod(combo))
    return total


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def check_coprime_to_g_g2m1(q: int, g: int) -> bool:
    """gcd(q, g(g^2 - 1)) = 1."""
    return math.gcd(check_modulus(q), g * (g * g - 1)) == 1
