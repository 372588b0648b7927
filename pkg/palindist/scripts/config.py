"""One configuration dataclass per subcommand; every init field becomes a ``--flag``."""
import math
from dataclasses import dataclass, field

from palindist.utils.config_utils import BaseConfig
from palindist.utils.read_files import parse_big_int
from palindist.utils.check_arguments import check_base, check_modulus, check_positive

VALID_EXPSUM_METHODS = ['brute', 'product', 'both']


def _check_range(lo: int, hi: int, name: str):
    if lo > hi:
        raise ValueError(f"ERROR: {name} range is empty: {lo} > {hi}")


@dataclass(kw_only=True)
class EnumerateConfig(BaseConfig):
    """List palindromes in [lo, hi] or of one length."""
    base:   int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    lo:     int | None = field(default=None, metadata={"help": "Lower end of the range (accepts g^k)", "parse": parse_big_int})
    hi:     int | None = field(default=None, metadata={"help": "Upper end of the range (accepts g^k)", "parse": parse_big_int})
    length: int | None = field(default=None, metadata={"help": "List every palindrome with this many digits instead of a range", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        if self.length is None:
            if self.lo is None or self.hi is None:
                raise ValueError("ERROR: enumerate needs either --length or both --lo and --hi")
            _check_range(self.lo, self.hi, "enumeration")
        else:
            if self.lo is not None or self.hi is not None:
                raise ValueError("ERROR: --length cannot be combined with --lo/--hi")
            check_positive(self.length, "length")
        super().__post_init__()


@dataclass(kw_only=True)
class CountConfig(BaseConfig):
    """Exact residue class counts of P_L or P(x)."""
    base:   int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    mod:    int = field(metadata={"help": "Modulus q >= 2", "parse": parse_big_int})
    length: int | None = field(default=None, metadata={"help": "Count palindromes with exactly this many digits", "parse": parse_big_int})
    upto:   int | None = field(default=None, metadata={"help": "Count palindromes <= this value (accepts g^k)", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        check_modulus(self.mod)
        if (self.length is None) == (self.upto is None):
            raise ValueError("ERROR: count needs exactly one of --length and --upto")
        if self.length is not None:
            check_positive(self.length, "length")
        else:
            check_positive(self.upto, "upto")
        super().__post_init__()


@dataclass(kw_only=True)
class ExpsumConfig(BaseConfig):
    """The exponential sum S_L(c) over palindromes of length L."""
    base:   int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    length: int = field(metadata={"help": "Palindrome length L", "parse": parse_big_int})
    mod:    int = field(metadata={"help": "Modulus q >= 2", "parse": parse_big_int})
    c:      int = field(default=1, metadata={"help": "Frequency c", "parse": parse_big_int})
    method: str = field(default="both", metadata={"help": "brute (enumeration), product (factorisation) or both", "choices": VALID_EXPSUM_METHODS})

    def __post_init__(self):
        check_base(self.base)
        check_positive(self.length, "length")
        check_modulus(self.mod)
        super().__post_init__()


# -------------- #
# --- verify --- #
# -------------- #

@dataclass(kw_only=True)
class VerifyLemma21Config(BaseConfig):
    """Power pair sum bound: either one (q, a, b) or the worst case of every q <= qmax."""
    base:   int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    qmax:   int | None = field(default=None, metadata={"help": "Sweep every q <= qmax coprime to g over all (a, b)", "parse": parse_big_int})
    q:      int | None = field(default=None, metadata={"help": "Single modulus", "parse": parse_big_int})
    a:      int = field(default=0, metadata={"help": "Coefficient of g^k (single check)", "parse": parse_big_int})
    b:      int = field(default=0, metadata={"help": "Coefficient of the inverse power (single check)", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        if (self.qmax is None) == (self.q is None):
            raise ValueError("ERROR: verify lemma21 needs exactly one of --qmax and --q")
        if self.qmax is not None:
            check_positive(self.qmax, "qmax")
        else:
            check_modulus(self.q)
        super().__post_init__()


@dataclass(kw_only=True)
class VerifyLemma22Config(BaseConfig):
    """Geometric digit sum bound: either one (q, k, h) or the worst case of every q <= qmax."""
    qmax:   int | None = field(default=None, metadata={"help": "Sweep q <= qmax, 2 <= k <= 3q, 1 <= h <= 3q", "parse": parse_big_int})
    q:      int | None = field(default=None, metadata={"help": "Single modulus", "parse": parse_big_int})
    k:      int = field(default=2, metadata={"help": "Number of terms (single check)", "parse": parse_big_int})
    h:      int = field(default=1, metadata={"help": "Step (single check)", "parse": parse_big_int})

    def __post_init__(self):
        if (self.qmax is None) == (self.q is None):
            raise ValueError("ERROR: verify lemma22 needs exactly one of --qmax and --q")
        if self.qmax is not None:
            check_positive(self.qmax, "qmax")
        else:
            check_modulus(self.q)
        super().__post_init__()


@dataclass(kw_only=True)
class _LengthGridConfig(BaseConfig):
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    mod:        int = field(metadata={"help": "Modulus q >= 2", "parse": parse_big_int})
    c_list:     list[int] | None = field(default=None, metadata={"help": "Frequencies c (default: 1..q-1)", "parse": parse_big_int, "nargs": "+"})
    length_min: int = field(default=1, metadata={"help": "Smallest length L", "parse": parse_big_int})
    length_max: int = field(metadata={"help": "Largest length L", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        check_modulus(self.mod)
        check_positive(self.length_min, "length-min")
        _check_range(self.length_min, self.length_max, "length")
        if self.c_list is None:
            self.c_list = list(range(1, self.mod))
        super().__post_init__()


@dataclass(kw_only=True)
class VerifyLemma31Config(_LengthGridConfig):
    """Theta_c decay bound on S_L(c) over a grid of (c, L)."""


@dataclass(kw_only=True)
class VerifyLemma32Config(_LengthGridConfig):
    """Exponential decay bound on S_L(c) over a grid of (c, L)."""


@dataclass(kw_only=True)
class VerifyProp41Config(BaseConfig):
    """Prime modulus discrepancy bound over a range of lengths (default: the threshold 10p - 5 only)."""
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    p:          int = field(metadata={"help": "Prime modulus p > g", "parse": parse_big_int})
    length_min: int | None = field(default=None, metadata={"help": "Smallest length (default: 10p - 5)", "parse": parse_big_int})
    length_max: int | None = field(default=None, metadata={"help": "Largest length (default: length-min)", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        check_modulus(self.p)
        if self.length_min is None:
            self.length_min = max(10 * self.p - 5, 1)
        if self.length_max is None:
            self.length_max = self.length_min
        _check_range(self.length_min, self.length_max, "length")
        super().__post_init__()


@dataclass(kw_only=True)
class VerifyProp42Config(BaseConfig):
    """Coprime modulus discrepancy bound over a range of lengths (default: the threshold only)."""
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    mod:        int = field(metadata={"help": "Modulus q with gcd(q, g(g^2-1)) = 1", "parse": parse_big_int})
    length_min: int | None = field(default=None, metadata={"help": "Smallest length (default: ceil(10 + 2q^2 log q))", "parse": parse_big_int})
    length_max: int | None = field(default=None, metadata={"help": "Largest length (default: length-min)", "parse": parse_big_int})

    def __post_init__(self):
        check_base(self.base)
        check_modulus(self.mod)
        if self.length_min is None:
            self.length_min = math.ceil(10 + 2 * self.mod ** 2 * math.log(self.mod))
        if self.length_max is None:
            self.length_max = self.length_min
        _check_range(self.length_min, self.length_max, "length")
        super().__post_init__()


@dataclass(kw_only=True)
class VerifyDecayConfig(BaseConfig):
    """Fit the per-length decay constant, and optionally check the cumulative decay at --x-list."""
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    mod:        int = field(metadata={"help": "Modulus q", "parse": parse_big_int})
    length_min: int = field(default=1, metadata={"help": "Smallest length", "parse": parse_big_int})
    length_max: int = field(metadata={"help": "Largest length", "parse": parse_big_int})
    x_list:     list[int] | None = field(default=None, metadata={"help": "Increasing cut-offs x for the cumulative check (accepts g^k)", "parse": parse_big_int, "nargs": "+"})

    def __post_init__(self):
        check_base(self.base)
        check_modulus(self.mod)
        check_positive(self.length_min, "length-min")
        _check_range(self.length_min, self.length_max, "length")
        super().__post_init__()


# --------------------------- #
# --- census/sieve/density --- #
# --------------------------- #

@dataclass(kw_only=True)
class CensusConfig(BaseConfig):
    """Count prime palindromes <= x by enumeration."""
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    x:          int = field(metadata={"help": "Cut-off (accepts g^k)", "parse": parse_big_int})
    per_length: bool = field(default=False, metadata={"help": "Emit one row per length instead of one summary row"})

    def __post_init__(self):
        check_base(self.base)
        if self.x < 0:
            raise ValueError(f"ERROR: x must be >= 0, got {self.x}")
        super().__post_init__()


@dataclass(kw_only=True)
class SieveConfig(BaseConfig):
    """Truncated Brun sieve upper bound for prime palindromes <= x."""
    base:       int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    x:          int = field(metadata={"help": "Cut-off (accepts g^k)", "parse": parse_big_int})
    y:          float | None = field(default=None, metadata={"help": "Sieve level (default: from x)", "parse": float})
    h:          int | None = field(default=None, metadata={"help": "Truncation depth, divisors with <= 2h primes (default: from x)", "parse": parse_big_int})
    primes:     list[int] | None = field(default=None, metadata={"help": "Explicit sieve primes instead of those in (g^3, y]", "parse": parse_big_int, "nargs": "+"})
    census:     bool = field(default=False, metadata={"help": "Also run the census and report whether the bound holds"})

    def __post_init__(self):
        check_base(self.base)
        check_positive(self.x, "x")
        if (self.y is None) != (self.h is None):
            raise ValueError("ERROR: give both --y and --h, or neither")
        super().__post_init__()


@dataclass(kw_only=True)
class DensityConfig(BaseConfig):
    """Prime palindrome density at several cut-offs."""
    base:   int = field(metadata={"help": "Base g >= 2", "parse": parse_big_int})
    x_list: list[int] = field(metadata={"help": "Cut-offs (accepts g^k)", "parse": parse_big_int, "nargs": "+"})

    def __post_init__(self):
        check_base(self.base)
        if not self.x_list:
            raise ValueError("ERROR: --x-list needs at least one value")
        super().__post_init__()
