"""Base-g digit strings, palindromes and their half-prefix indexing.

A palindrome of length L is determined by its half prefix, the first
``ceil(L/2)`` digits read from the most significant end. Prefixes are
enumerated in numeric order, which is also the numeric order of the
palindromes they generate, so indexing P_L is O(1) big integer arithmetic.
"""
import logging
from typing import Iterator, Sequence
from dataclasses import dataclass

from palindist.utils.errors import OutOfRangeError
from palindist.utils.check_arguments import check_base, check_integer, check_positive


@dataclass(frozen=True)
class DigitString:
    """Base-g digits of a positive integer, most significant digit first."""
    base:   int
    digits: tuple[int, ...]

    def __post_init__(self):
        check_base(self.base)
        if len(self.digits) >= 1 and self.digits[0] == 0:
            raise ValueError(f"ERROR: leading digit must be nonzero, got {self.digits}")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"ERROR: digit {d} is not in [0, {self.base})")

    def __len__(self) -> int:
        return len(self.digits)

    def to_int(self) -> int:
        return from_digits(self.digits, self.base)

    def is_palindrome(self) -> bool:
        return self.digits == self.digits[::-1]


def from_digits(digits: Sequence[int], g: int) -> int:
    """Integer with the given base-g digits (most significant first)."""
    n = 0
    for d in digits:
        n = n * g + d
    return n


def to_digits(n: int, g: int) -> DigitString:
    """Base-g expansion of ``n`` as a :class:`DigitString`.

    Parameters
    ----------
    n : int
        Positive integer to expand.
    g : int
        Base, at least 2.

    Returns
    -------
    DigitString
        Digits with nonzero leading digit.

    Examples
    --------
    >>> to_digits(5, 2).digits
    (1, 0, 1)
    """
    g = check_base(g)
    n = check_positive(n, "n")
    out = []
    while n:
        n, r = divmod(n, g)
        out.append(r)
    return DigitString(g, tuple(reversed(out)))


def num_digits(n: int, g: int) -> int:
    """Number of base-g digits of ``n >= 1``."""
    length = 0
    while n:
        n //= g
        length += 1
    return length


def is_palindrome(n: int, g: int) -> bool:
    """True iff the base-g digit string of ``n`` equals its reversal."""
    return to_digits(n, g).is_palindrome()


def _reverse_block(m: int, width: int, g: int) -> int:
    """Reverse the lowest ``width`` base-g digits of ``m`` (leading zeros included)."""
    r = 0
    for _ in range(width):
        m, d = divmod(m, g)
        r = r * g + d
    return r


def count_exact_length(g: int, L: int) -> int:
    """|P_L| = (g-1)*g^(ceil(L/2)-1)."""
    g = check_base(g)
    L = check_positive(L, "length L")
    return (g - 1) * g ** ((L + 1) // 2 - 1)


def palindrome_from_prefix(prefix: int, g: int, L: int) -> int:
    """Palindrome of length ``L`` whose first ``ceil(L/2)`` digits are ``prefix``."""
    half = L // 2
    mirrored = prefix // g if L % 2 else prefix
    return prefix * g ** half + _reverse_block(mirrored, half, g)


def count_up_to(g: int, x: int) -> int:
    """Exact |P(x)|, the number of base-g palindromes ``n <= x``.

    Full lengths below the length of ``x`` are counted by formula; at the top
    length the palindromes whose half prefix is below the prefix of ``x`` are
    counted directly and the palindrome built from the prefix of ``x`` itself
    is compared against ``x``.
    """
    g = check_base(g)
    x = check_integer(x, "x")
    if x < 1:
        return 0
    D = num_digits(x, g)
    total = sum(count_exact_length(g, ell) for ell in range(1, D))
    h = (D + 1) // 2
    prefix = x // g ** (D - h)
    total += prefix - g ** (h - 1)
    if palindrome_from_prefix(prefix, g, D) <= x:
        total += 1
    return total


def nth_palindrome(g: int, L: int, i: int) -> int:
    """The ``i``-th smallest palindrome of length ``L`` (0-based)."""
    size = count_exact_length(g, L)
    i = check_integer(i, "index i")
    if not 0 <= i < size:
        raise OutOfRangeError(f"ERROR: index {i} is not in [0, {size}) for length {L} in base {g}")
    h = (L + 1) // 2
    return palindrome_from_prefix(g ** (h - 1) + i, g, L)


def index_of(n: int, g: int) -> int:
    """Position of the palindrome ``n`` within P_L, inverse of :func:`nth_palindrome`."""
    g = check_base(g)
    if not is_palindrome(n, g):
        raise ValueError(f"ERROR: {n} is not a palindrome in base {g}")
    L = num_digits(n, g)
    h = (L + 1) // 2
    return n // g ** (L - h) - g ** (h - 1)


def iter_exact_length(g: int, L: int) -> Iterator[int]:
    """All palindromes of length ``L`` in increasing order."""
    g = check_base(g)
    L = check_positive(L, "length L")
    h = (L + 1) // 2
    for prefix in range(g ** (h - 1), g ** h):
        yield palindrome_from_prefix(prefix, g, L)


def iter_palindromes(g: int, lo: int, hi: int) -> Iterator[int]:
    """Palindromes in ``[lo, hi]`` in increasing order."""
    g = check_base(g)
    lo, hi = check_integer(lo, "lo"), check_integer(hi, "hi")
    if lo > hi:
        raise ValueError(f"ERROR: empty range, lo={lo} > hi={hi}")
    lo = max(lo, 1)
    if hi < lo:
        return
    for L in range(num_digits(lo, g), num_digits(hi, g) + 1):
        h = (L + 1) // 2
        start = g ** (h - 1)
        if L == num_digits(lo, g):
            start = lo // g ** (L - h)
        for prefix in range(start, g ** h):
            n = palindrome_from_prefix(prefix, g, L)
            if n > hi:
                return
            if n >= lo:
                yield n


# --------------------------- #
# --- K-signature blocks --- #
# --------------------------- #

@dataclass(frozen=True)
class SignatureDecomp:
    """Split of a palindrome of length 2M+delta into K-complement, middle and K-signature.

    ``n = n1 + g^(K+mu)*n2 + g^(K+2*L_half+delta)*n3`` when the middle block
    is nonzero, otherwise ``n = n1 + g^(K+2*L_half+delta)*n3`` with ``n2`` and
    ``mu`` both None.
    """
    base:   int
    K:      int
    n1:     int
    n2:     int | None
    mu:     int | None
    n3:     int
    delta:  int
    M:      int

    @property
    def L_half(self) -> int:
        return self.M - self.K

    def recompose(self) -> int:
        g, K = self.base, self.K
        n = self.n1 + g ** (K + 2 * self.L_half + self.delta) * self.n3
        if self.n2 is not None:
            n += g ** (K + self.mu) * self.n2
        return n


def k_complement(n3: int, K: int, g: int) -> int:
    """The unique ``1 <= n1 < g^K`` with ``n1 + g^K*n3`` a palindrome of length 2K."""
    g = check_base(g)
    K = check_positive(K, "K")
    n3 = check_integer(n3, "n3")
    if not g ** (K - 1) <= n3 < g ** K:
        raise OutOfRangeError(f"ERROR: K-signature {n3} is not in [{g ** (K - 1)}, {g ** K})")
    return _reverse_block(n3, K, g)


def k_signature(n: int, K: int, g: int) -> int:
    """Top ``K`` digits of ``n`` (s_K(n))."""
    return n // g ** (num_digits(n, g) - K)


def signature_decompose(n: int, K: int, g: int) -> SignatureDecomp:
    """Decompose the palindrome ``n`` with respect to its K-signature.

    Parameters
    ----------
    n : int
        Palindrome of length 2M+delta with M - K >= 1.
    K : int
        Width of the signature block, at least 1.
    g : int
        Base.

    Returns
    -------
    SignatureDecomp
        ``mu`` counts the symmetric zero digits stripped from each end of the
        middle block; an all zero middle block leaves ``n2`` and ``mu`` None.
    """
    g = check_base(g)
    K = check_positive(K, "K")
    if not is_palindrome(n, g):
        raise ValueError(f"ERROR: {n} is not a palindrome in base {g}")
    N = num_digits(n, g)
    M, delta = divmod(N, 2)
    L_half = M - K
    if L_half < 1:
        raise ValueError(f"ERROR: length {N} is too short for K={K}; need length >= {2 * K + 2}")
    width = 2 * L_half + delta
    n1 = n % g ** K
    n3 = n // g ** (K + width)
    middle = (n // g ** K) % g ** width
    if middle == 0:
        return SignatureDecomp(g, K, n1, None, None, n3, delta, M)
    mu = 0
    while middle % g == 0:
        middle //= g
        mu += 1
    logging.debug(f"signature_decompose({n}, K={K}): n1={n1}, n2={middle}, mu={mu}, n3={n3}")
    return SignatureDecomp(g, K, n1, middle, mu, n3, delta, M)


def signature_class_size(g: int, M: int, delta: int, K: int) -> int:
    """Number of palindromes of length 2M+delta sharing one K-signature, g^(M-K+delta)."""
    g = check_base(g)
    if delta not in (0, 1):
        raise ValueError(f"ERROR: delta must be 0 or 1, got {delta}")
    if M - K < 1:
        raise ValueError(f"ERROR: need M - K >= 1, got M={M}, K={K}")
    return g ** (M - K + delta)


def count_signature_at_most(g: int, M: int, delta: int, K: int, y3: int) -> int:
    """Palindromes of length 2M+delta whose K-signature lies in ``[g^(K-1), y3]``."""
    size = signature_class_size(g, M, delta, K)
    if not g ** (K - 1) <= y3 < g ** K:
        raise OutOfRangeError(f"ERROR: y3={y3} is not in [{g ** (K - 1)}, {g ** K})")
    return (y3 - g ** (K - 1) + 1) * size
