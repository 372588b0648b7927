"""Exception types shared by the number theory modules and the CLI.

The CLI maps these onto exit codes: :class:`PreconditionError` (and its
subclasses) exit with 2, :class:`ResourceCapError` with 3, and plain
``ValueError`` / :class:`UsageError` with 1.
"""


class UsageError(ValueError):
    """Raised by the command line parser instead of exiting on bad flags."""


class OutOfRangeError(ValueError, IndexError):
    """An index or block value lies outside its admissible range."""


class PreconditionError(ValueError):
    """A hypothesis of the bound being checked does not hold.

    Parameters
    ----------
    hypothesis : str
        Short human readable form of the failing condition, e.g.
        ``"ord_p(g) >= 3*sqrt(p)"``.
    detail : str, optional
        Extra context appended to the message.
    """

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        message = f"ERROR: {hypothesis} fails"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class UndefinedOrderError(PreconditionError):
    """The multiplicative order of g modulo q does not exist (gcd(g, q) > 1)."""

    def __init__(self, g: int, q: int):
        self.g, self.q = g, q
        super().__init__("gcd(g, q) = 1", f"g={g}, q={q}")


class NoInverseError(PreconditionError):
    """c has no inverse modulo q."""

    def __init__(self, c: int, q: int):
        self.c, self.q = c, q
        super().__init__("gcd(c, q) = 1", f"c={c}, q={q}")


class ResourceCapError(RuntimeError):
    """A computation would exceed one of the configured size caps.

    Parameters
    ----------
    what : str
        What is being capped (e.g. "palindromes to enumerate").
    requested : int
        The size the call would need.
    cap : int
        The configured limit.
    suggestion : str
        What the caller can do about it.
    """

    def __init__(self, what: str, requested: int, cap: int, suggestion: str = ""):
        self.what, self.requested, self.cap = what, requested, cap
        message = f"ERROR: {what} = {requested} exceeds the cap of {cap}"
        if suggestion:
            message = f"{message}; {suggestion}"
        super().__init__(message)
