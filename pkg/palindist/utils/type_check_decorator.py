import inspect
import functools
from types import NoneType, UnionType
from typing import Union, get_args, get_origin, get_type_hints


def _isinstance_targets(hint) -> tuple[type, ...] | None:
    """Plain classes a hint accepts, or None when the hint is not checkable with isinstance."""
    if get_origin(hint) in (Union, UnionType):
        members = tuple(arg for arg in get_args(hint) if arg is not NoneType)
        if all(isinstance(arg, type) and get_origin(arg) is None for arg in members):
            return members
        return None
    if isinstance(hint, type) and get_origin(hint) is None:
        return (hint,)
    return None


def type_check_decorator(func):
    """
    Runtime isinstance check of the arguments of ``func`` against its type hints.

    Only plain classes and unions of plain classes are checked; parameterised
    hints such as ``list[int]`` are skipped. ``None`` always passes, and
    ``bool`` passes an ``int`` hint.

    Parameters
    ----------
    func : Callable
        A function with type hints.

    Raises
    ------
    TypeError
        When an argument is not an instance of its hinted type.
    """
    signature = inspect.signature(func)
    targets = {
        name: checked
        for name, hint in get_type_hints(func).items()
        if name != 'return' and (checked := _isinstance_targets(hint)) is not None
    }

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        bound = signature.bind(*args, **kwargs)
        bound.apply_defaults()
        for name, value in bound.arguments.items():
            expected = targets.get(name)
            if expected is not None and value is not None and not isinstance(value, expected):
                raise TypeError(
                    f"Argument '{name}' of {func.__name__} must be one of "
                    f"{[t.__name__ for t in expected]}, got {type(value).__name__}"
                )
        return func(*args, **kwargs)

    return wrapper
