"""Logging setup for the package logger ``palindist_log`` and the root logger.

Everything goes to standard error so that reports written to standard output
stay machine readable.
"""
import logging
from pathlib import Path
from typing import Optional, Union

from palindist.utils.check_arguments import validate_file

INFO_DETAILED = 15
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# verbosity -> level of the package logger
_PACKAGE_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: INFO_DETAILED, 3: logging.DEBUG}
# the root logger has no INFO_DETAILED, so 2 stays at INFO
_ROOT_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.INFO, 3: logging.DEBUG}


def patch_info_detailed():
    """Register the INFO_DETAILED level and give ``logging.Logger`` an ``info_detailed`` method."""
    if hasattr(logging.Logger, "info_detailed"):
        return
    logging.addLevelName(INFO_DETAILED, "INFO_DETAILED")

    def info_detailed(self, message, *args, **kwargs):
        if self.isEnabledFor(INFO_DETAILED):
            self._log(INFO_DETAILED, message, args, **kwargs)
    logging.Logger.info_detailed = info_detailed


def log_info_detailed(logger_name: str, message: str):
    logging.getLogger(logger_name).log(INFO_DETAILED, message)


def _handlers(log_file: Optional[Path], log_mode: str, tag: str) -> list[logging.Handler]:
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file is not None:
        log_file = validate_file(log_file, ".log", "log file", new_file=True)
        handlers.append(logging.FileHandler(log_file, mode=log_mode))
    formatter = logging.Formatter(f"%(asctime)s [%(levelname)s/{tag}] %(message)s", datefmt=DATE_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
    return handlers


def _install(logger: logging.Logger, level: int, handlers: list[logging.Handler]) -> logging.Logger:
    for old in logger.handlers[:]:
        logger.removeHandler(old)
        old.close()
    for handler in handlers:
        logger.addHandler(handler)
    logger.setLevel(level)
    return logger


def setup_logging(
    verbosity: int,
    log_file: Optional[Union[str, Path]] = None,
    log_mode: str = "w",
    logger_name: str = "palindist_log",
) -> logging.Logger:
    """Configure the root logger and the package logger.

    Parameters
    ----------
    verbosity : int
        0 WARNING, 1 INFO, 2 INFO_DETAILED, 3 DEBUG. Values above 3 count as 3.
    log_file : str or Path, optional
        Log file of the package logger. The root logger then writes next to it,
        with ``.root`` inserted before the suffix (``run.log`` -> ``run.root.log``).
        Without a file both loggers only write to standard error.
    log_mode : str
        ``'w'`` to overwrite, ``'a'`` to append.
    logger_name : str
        Name of the package logger.

    Returns
    -------
    logging.Logger
        The package logger. It does not propagate to the root logger.
    """
    patch_info_detailed()
    verbosity = min(max(verbosity, 0), 3)
    log_file = Path(log_file).resolve() if log_file is not None else None
    root_file = log_file.with_name(f"{log_file.stem}.root{log_file.suffix}") if log_file is not None else None

    _install(logging.getLogger(), _ROOT_LEVELS[verbosity], _handlers(root_file, log_mode, "root"))
    logger = _install(
        logging.getLogger(logger_name),
        _PACKAGE_LEVELS[verbosity],
        _handlers(log_file, log_mode, logger_name.capitalize()),
    )
    logger.propagate = False
    return logger
