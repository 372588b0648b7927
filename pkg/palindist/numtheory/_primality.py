"""Primality through gmpy2.

``gmpy2.is_prime`` runs a Baillie-PSW test followed by extra Miller-Rabin
rounds. Baillie-PSW has been checked exhaustively below 2^64, so answers there
are proofs; above that bound they are flagged as probabilistic.
"""
import gmpy2

DETERMINISTIC_LIMIT = 2 ** 64
MILLER_RABIN_ROUNDS = 25


def is_prime(n: int) -> bool:
    """Primality of ``n >= 0``: deterministic below 2^64, Baillie-PSW above."""
    if n < 2:
        return False
    return bool(gmpy2.is_prime(int(n), MILLER_RABIN_ROUNDS))


def primality_is_deterministic(n: int) -> bool:
    """True when :func:`is_prime` gives a proof for ``n`` rather than a probable answer."""
    return n < DETERMINISTIC_LIMIT
