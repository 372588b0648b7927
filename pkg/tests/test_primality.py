import pytest

from palindist.numtheory.primes import is_prime, primality_is_deterministic
from palindist.numtheory.modular import primes_up_to


def test_is_prime_matches_sieve():
    table = set(int(p) for p in primes_up_to(20000))
    assert [n for n in range(20001) if is_prime(n)] == sorted(table)


@pytest.mark.parametrize("n", [
    3215031751,                 # strong pseudoprime to bases 2, 3, 5, 7
    3825123056546413051,        # strong pseudoprime to the first nine prime bases
    561, 41041, 825265,         # Carmichael numbers
])
def test_is_prime_rejects_pseudoprimes(n):
    assert not is_prime(n)


@pytest.mark.parametrize("n", [2 ** 61 - 1, 2 ** 89 - 1, 2 ** 127 - 1, 10 ** 18 + 3])
def test_is_prime_large_primes(n):
    assert is_prime(n)


def test_is_prime_large_composites():
    assert not is_prime((2 ** 61 - 1) * (2 ** 89 - 1))
    assert not is_prime(2 ** 128 + 1)


def test_primality_is_deterministic():
    assert primality_is_deterministic(2 ** 64 - 1)
    assert not primality_is_deterministic(2 ** 64)
