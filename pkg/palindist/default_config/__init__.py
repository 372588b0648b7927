"""Numerical settings (tolerances, caps, factorisation policy) read from ``.ini`` files."""
import logging
from pathlib import Path
from dataclasses import dataclass, field, fields

from palindist import palindist_abspath
from palindist.utils.check_arguments import validate_file
from palindist.utils.read_files import read_config, get_numeric_param

default_settings_path = palindist_abspath.joinpath('default_config', 'default_settings.ini')


@dataclass(frozen=True)
class Settings:
    """Numerical policy shared by every module."""
    bound_log_slack:        float = field(default=1e-6, metadata={"section": "tolerances", "cast": float})
    oracle_rel:             float = field(default=1e-9, metadata={"section": "tolerances", "cast": float})
    mertens_abs:            float = field(default=1e-12, metadata={"section": "tolerances", "cast": float})
    enumeration_cap:        int = field(default=10**7, metadata={"section": "caps", "cast": int})
    census_cap:             int = field(default=10**8, metadata={"section": "caps", "cast": int})
    divisor_cap:            int = field(default=10**6, metadata={"section": "caps", "cast": int})
    blowup_factor:          float = field(default=10.0, metadata={"section": "decay", "cast": float})

    def __post_init__(self):
        for name in ("bound_log_slack", "oracle_rel", "mertens_abs"):
            if getattr(self, name) < 0:
                raise ValueError(f"ERROR: tolerance {name} must be non-negative, got {getattr(self, name)}")
        for name in ("enumeration_cap", "census_cap", "divisor_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"ERROR: {name} must be >= 1, got {getattr(self, name)}")
        if self.blowup_factor < 1:
            raise ValueError(f"ERROR: blowup_factor must be >= 1, got {self.blowup_factor}")

    @classmethod
    def from_ini(cls, path: Path | str) -> 'Settings':
        """Build settings from an ``.ini`` file; missing options keep their defaults."""
        validate_file(path, '.ini', "settings file in .ini format", new_file=False)
        config = read_config(path)
        values = {}
        for fld in fields(cls):
            section = fld.metadata["section"]
            if not config.has_section(section):
                continue
            values[fld.name] = get_numeric_param(config[section], fld.name, fld.default, fld.metadata["cast"])
        logging.debug(f"Settings read from {path}: {values}")
        return cls(**values)


_active_settings: Settings | None = None


def get_settings() -> Settings:
    """Return the active settings, reading the packaged defaults on first use."""
    global _active_settings
    if _active_settings is None:
        _active_settings = Settings.from_ini(default_settings_path)
    return _active_settings


def configure(path: Path | str | None = None, **overrides) -> Settings:
    """Replace the active settings.

    Parameters
    ----------
    path : Path or str, optional
        ``.ini`` file to read; None starts from the packaged defaults.
    **overrides
        Individual fields to override after reading the file.

    Returns
    -------
    Settings
        The new active settings.
    """
    global _active_settings
    base = Settings.from_ini(path if path is not None else default_settings_path)
    if overrides:
        base = Settings(**{**{f.name: getattr(base, f.name) for f in fields(Settings)}, **overrides})
    _active_settings = base
    return base


def set_settings(settings: Settings) -> Settings:
    """Install an already built :class:`Settings` instance (used by worker processes)."""
    global _active_settings
    _active_settings = settings
    return settings
