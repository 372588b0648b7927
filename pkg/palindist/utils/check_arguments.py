"""Argument validators shared by the library entry points and the CLI configs.

All failures raise ``ValueError`` with an ``"ERROR: "`` prefixed message.
"""
import logging
from pathlib import Path

from palindist.utils.type_check_decorator import type_check_decorator


@type_check_decorator
def validate_file(
    file_path:          Path | str,
    expected_suffix:    str,
    description:        str,
    new_file:           bool
) -> Path:
    file_path = Path(file_path).resolve()
    if file_path.suffix != expected_suffix:
        raise ValueError(f"ERROR: {file_path} is not a valid {description} (expected suffix {expected_suffix})")
    if new_file:
        if file_path.exists():
            logging.getLogger('palindist_log').warning(f"{file_path} already exists and will be overwritten")
        if not file_path.parent.is_dir():
            raise ValueError(f"ERROR: parent directory of {description} {file_path} does not exist")
    elif not file_path.is_file():
        raise ValueError(f"ERROR: {description} {file_path} does not exist")
    return file_path


@type_check_decorator
def validate_directory(
    directory_path: Path | str,
    description: str
) -> Path:
    directory_path = Path(directory_path).resolve()
    if not directory_path.is_dir():
        raise ValueError(f"ERROR: {description} {directory_path} does not exist or is not a directory")
    return directory_path


def check_integer(value: object, name: str) -> int:
    """Reject bools and non-integers, return the value as ``int``."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"ERROR: {name} must be an integer, got {value!r}")
    return int(value)


def check_base(g: object) -> int:
    g = check_integer(g, "base g")
    if g < 2:
        raise ValueError(f"ERROR: base g must be >= 2, got {g}")
    return g


def check_positive(value: object, name: str) -> int:
    value = check_integer(value, name)
    if value < 1:
        raise ValueError(f"ERROR: {name} must be >= 1, got {value}")
    return value


def check_modulus(q: object) -> int:
    q = check_integer(q, "modulus q")
    if q < 2:
        raise ValueError(f"ERROR: modulus q must be >= 2, got {q}")
    return q
