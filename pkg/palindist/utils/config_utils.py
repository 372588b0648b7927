import time
import logging
import argparse

from pathlib import Path
from typing import TypeVar, Type
from dataclasses import dataclass, fields, field, MISSING

from palindist import LOGGER_NAME
from palindist.default_config import configure
from palindist.utils.custom_logging import setup_logging
from palindist.utils.check_arguments import validate_directory, validate_file

from importlib import metadata
try:
    __version__ = metadata.version("palindist")
except metadata.PackageNotFoundError:
    __version__ = "0.0.0+unknown"

VALID_FORMATS = ["json", "csv", "netcdf"]

# --- Decorator to add config/CLI helper methods to dataclass ---
TypeVarT = TypeVar("TypeVarT")

def add_config_helpers(cls: Type[TypeVarT]) -> Type[TypeVarT]:
    """Give a config dataclass ``add_arguments``/``from_namespace`` classmethods and a ``describe`` method."""
    cls.add_arguments = classmethod(_add_arguments)  # type: ignore
    cls.from_namespace = classmethod(_from_namespace)  # type: ignore
    cls.describe = _describe  # type: ignore
    return cls


def _add_arguments(cls: Type[TypeVarT], parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    """Add one ``--flag`` per init field of the dataclass to ``parser``.

    ``metadata["parse"]`` overrides the argparse type (e.g. big integer
    parsing), ``metadata["nargs"]`` makes the flag take a list and
    ``metadata["choices"]`` restricts the accepted values.
    """
    for fld in fields(cls):  # type: ignore
        if not fld.init:
            continue
        arg_name = f"--{fld.name.replace('_', '-')}"
        help_text = fld.metadata.get("help", "")
        required = fld.default is MISSING and fld.default_factory is MISSING
        default = None if required else (fld.default if fld.default is not MISSING else fld.default_factory())

        if fld.type == bool or fld.type == 'bool':
            parser.add_argument(
                arg_name,
                help=help_text + " (default: False)",
                action="store_true" if default is not True else "store_false"
            )
            continue

        kwargs = {"help": help_text + ("" if required else f" (default: {default})"), "required": required, "default": default}
        if "choices" in fld.metadata:
            kwargs["choices"] = fld.metadata["choices"]
        if "nargs" in fld.metadata:
            kwargs["nargs"] = fld.metadata["nargs"]
        if "parse" in fld.metadata:
            kwargs["type"] = fld.metadata["parse"]
        elif fld.type in (int, float, str, Path, 'int', 'float', 'str'):
            kwargs["type"] = {'int': int, 'float': float, 'str': str}.get(fld.type, fld.type)
        else:
            # e.g. ``int | None``: parse as str and leave conversion to __post_init__
            kwargs["type"] = str
        parser.add_argument(arg_name, **kwargs)
    return parser

def _from_namespace(cls: Type[TypeVarT], namespace: argparse.Namespace) -> TypeVarT:
    """Build the dataclass from the parsed arguments that match its init fields."""
    values = vars(namespace)
    return cls(**{fld.name: values[fld.name] for fld in fields(cls) if fld.init and fld.name in values})  # type: ignore

def _describe(self, level: int = logging.DEBUG) -> str:
    """One ``name = value`` line per field; logged on the package logger at ``level`` and returned."""
    width = max(len(fld.name) for fld in fields(self))
    text = "\n".join(
        [f"{self.__class__.__name__}:"]
        + [f"  {fld.name.ljust(width)} = {getattr(self, fld.name)!r}" for fld in fields(self)]
    )
    logging.getLogger(LOGGER_NAME).log(level, text)
    return text


@dataclass
@add_config_helpers
class BaseConfig:
    """Flags shared by every palindist subcommand."""
    verbose:        int = field(default=0, metadata={"help": "Verbosity level (0: WARNING, 1: INFO, 2: INFO_DETAILED, 3: DEBUG)", "choices": [0, 1, 2, 3]})
    log_dir:        str = field(default="", metadata={"help": "Directory for log files. If not specified, logs only go to standard error."})
    log_mode:       str = field(default="w", metadata={"help": "Mode for opening the log file ('w' for write, 'a' for append, 'o' for standard error only)", "choices": ["w", "a", "o"]})
    settings_file:  str = field(default="", metadata={"help": "Settings .ini file overriding the default tolerances and caps"})
    format:         str = field(default="json", metadata={"help": "Report format", "choices": VALID_FORMATS})
    output:         str = field(default="", metadata={"help": "Write the report to this file instead of standard output (required for netcdf)"})
    threads:        int = field(default=1, metadata={"help": "Worker processes for sweeps; 0 uses every CPU. Output does not depend on it."})
    seed:           int = field(default=0, metadata={"help": "Reserved; every computation is deterministic"})

    def __post_init__(self):

        # check the arguments
        # verbose
        if self.verbose not in [0, 1, 2, 3]:
            raise ValueError(f"ERROR: Invalid verbosity level: {self.verbose}. Must be 0, 1, 2, or 3.")
        # log_dir
        if self.log_dir:
            self.log_dir = Path(self.log_dir).resolve()
            if not self.log_dir.exists():
                self.log_dir.mkdir(parents=True, exist_ok=True)
            validate_directory(self.log_dir, "Log directory")
        else:
            self.log_dir = None
        # log_mode
        if self.log_mode not in ["w", "a", "o"]:
            raise ValueError(f"ERROR: Invalid log mode: {self.log_mode}. Must be 'w', 'a', or 'o'.")
        # settings_file
        if self.settings_file:
            validate_file(self.settings_file, '.ini', "settings file in .ini format", new_file=False)
        # format / output
        if self.format not in VALID_FORMATS:
            raise ValueError(f"ERROR: Invalid format: {self.format}. Must be one of {VALID_FORMATS}.")
        if self.format == "netcdf" and not self.output:
            raise ValueError("ERROR: --format netcdf requires --output")
        # threads
        if self.threads < 0:
            raise ValueError(f"ERROR: threads must be >= 0, got {self.threads}")
        self.log_file = None

    def get_checked_and_derived_config(self) -> 'BaseConfig':
        """Sets up logging and loads the settings file; safe to call twice."""
        if getattr(self, "_checked", False): # Already run
            return self

        if self.log_dir is not None and self.log_mode != 'o':
            time_str = time.strftime("%Y%m%d-%H%M%S")
            self.log_file = Path(self.log_dir).joinpath(f'palindist_{time_str}.log')

        if not logging.getLogger(LOGGER_NAME).handlers:
            setup_logging(self.verbose, self.log_file, self.log_mode if self.log_mode != 'o' else 'w', LOGGER_NAME)

        settings = configure(self.settings_file or None)
        logging.debug(f"Using settings {settings}")

        self._checked = True
        return self
