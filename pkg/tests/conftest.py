"""Pytest configuration and setup of shared fixtures."""

import numpy as np
import pytest
from pathlib import Path
from typing import Generator
from tempfile import TemporaryDirectory

from palindist.default_config import configure
from palindist.numtheory.digits import iter_exact_length


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    with TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from the packaged settings."""
    settings = configure()
    yield settings
    configure()


def brute_palindromes(g: int, lo: int, hi: int) -> list[int]:
    """Palindromes in [lo, hi] by filtering every integer."""
    out = []
    for n in range(max(lo, 1), hi + 1):
        digits = []
        m = n
        while m:
            m, r = divmod(m, g)
            digits.append(r)
        if digits == digits[::-1]:
            out.append(n)
    return out


def brute_class_counts(g: int, palindromes: list[int], q: int) -> tuple[int, ...]:
    if palindromes and max(palindromes) < 2 ** 63:
        values = np.fromiter(palindromes, dtype=np.int64, count=len(palindromes))
        return tuple(int(n) for n in np.bincount(values % q, minlength=q))
    counts = [0] * q
    for n in palindromes:
        counts[n % q] += 1
    return tuple(counts)


@pytest.fixture
def brute():
    """Brute force oracles for palindromes and their residue counts."""
    class _Brute:
        palindromes = staticmethod(brute_palindromes)
        class_counts = staticmethod(brute_class_counts)

        @staticmethod
        def exact_length(g: int, L: int) -> list[int]:
            # integer filter up to 10^5, prefix generation above
            if g ** L <= 10 ** 5:
                return brute_palindromes(g, g ** (L - 1), g ** L - 1)
            return list(iter_exact_length(g, L))

    return _Brute


@pytest.fixture
def sample_settings_file(temp_dir: Path) -> Path:
    settings_content = """
    [tolerances]
    bound_log_slack = 1e-5

    [caps]
    enumeration_cap = 10^3
    census_cap = 2^10

    [decay]
    blowup_factor = 20
    """
    path = temp_dir / "settings.ini"
    path.write_text("\n".join(line.strip() for line in settings_content.splitlines()))
    return path
