"""Readers for ``.ini`` settings files and big-integer command line values."""
import configparser
from typing import Any, Union
from pathlib import Path

_EMPTY_VALUES = ("", "nan", "none", "null")


def read_config(config_file: Union[str, Path]) -> configparser.ConfigParser:
    """Parse an ``.ini`` file with case-sensitive option names.

    ``#`` and ``;`` start inline comments. The resolved path is kept on the
    parser as ``input_file``.
    """
    config_file = Path(config_file).resolve()
    config = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    config.optionxform = str
    with open(config_file) as f:
        config.read_file(f)
    config.input_file = config_file
    return config


def safe_get_param_value(config_section, option: str, fallback=None) -> Any:
    """Raw string value of ``option``, or ``fallback`` when it is missing or one of
    ``''``, ``nan``, ``none``, ``null`` (case-insensitive)."""
    if config_section is None:
        return fallback
    raw = config_section.get(option, fallback=None)
    if raw is None or (isinstance(raw, str) and raw.strip().lower() in _EMPTY_VALUES):
        return fallback
    return raw


def parse_big_int(text: Union[str, int]) -> int:
    """Parse an arbitrary size integer from a user supplied string.

    Accepts plain decimal strings (``"1000000"``, ``"1_000_000"``) and powers
    written as ``"g^k"`` or ``"g**k"`` (e.g. ``"2^40"``), optionally followed by
    ``"-1"`` / ``"+1"`` offsets such as ``"2^40-1"``.

    Parameters
    ----------
    text : str or int
        The value to parse. Integers are returned unchanged.

    Returns
    -------
    int
        The parsed integer.

    Examples
    --------
    >>> parse_big_int("2^10")
    1024
    >>> parse_big_int("10**3-1")
    999
    """
    if isinstance(text, bool):
        raise ValueError(f"ERROR: {text!r} is not an integer")
    if isinstance(text, int):
        return text
    s = str(text).strip().replace("_", "").replace("**", "^")
    if not s:
        raise ValueError("ERROR: empty integer value")
    offset = 0
    if "^" in s:
        for sign in ("+", "-"):
            head, sep, tail = s.rpartition(sign)
            if sep and "^" in head and tail.isdigit():
                offset = int(tail) if sign == "+" else -int(tail)
                s = head
                break
        base, _, exponent = s.partition("^")
        if not (base.lstrip("-").isdigit() and exponent.isdigit()):
            raise ValueError(f"ERROR: {text!r} is not of the form g^k")
        return int(base) ** int(exponent) + offset
    try:
        return int(s)
    except ValueError:
        raise ValueError(f"ERROR: {text!r} is not a decimal integer or g^k power") from None


def get_numeric_param(
    config_section,
    option: str,
    fallback: Union[int, float],
    cast: type = float,
) -> Union[int, float]:
    """Read a number from a config section, accepting ``g^k`` syntax for integers.

    Parameters
    ----------
    config_section : configparser.SectionProxy
        The config section to read from
    option : str
        The option name to get
    fallback : int or float
        Value used when the option is missing or empty
    cast : type
        ``int`` or ``float``

    Returns
    -------
    int or float
    """
    raw = safe_get_param_value(config_section, option, fallback=None)
    if raw is None:
        return fallback
    if cast is int:
        return parse_big_int(raw)
    return float(raw)
