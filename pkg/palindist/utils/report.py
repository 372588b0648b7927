"""One report layout for every subcommand: ``command``, ``params`` and a list of ``rows``.

Integers beyond double precision and non finite floats are written as strings
so JSON and CSV carry the same scalar values.
"""
import io
import csv
import sys
import json
import math
import logging
from pathlib import Path
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np
import xarray as xr

from palindist.utils.check_arguments import validate_file

SCHEMA_VERSION = 1
_EXACT_FLOAT_INT = 2 ** 53


def to_scalar(value):
    """JSON compatible form of a report value."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value if abs(value) < _EXACT_FLOAT_INT else str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return str(value)


def _csv_cell(value) -> str:
    value = to_scalar(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ReportEnvelope:
    """Serializable result of one subcommand."""
    command:        str
    params:         dict = field(default_factory=dict)
    rows:           list[dict] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def columns(self) -> list[str]:
        """Row keys in order of first appearance."""
        cols: dict[str, None] = {}
        for row in self.rows:
            for key in row:
                cols.setdefault(key, None)
        return list(cols)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "schema_version": self.schema_version,
            "params": {k: to_scalar(v) for k, v in self.params.items()},
            "rows": [{k: to_scalar(v) for k, v in row.items()} for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """``# key: value`` lines for command and params, then a header and one line per row."""
        buffer = io.StringIO()
        buffer.write(f"# command: {self.command}\n")
        buffer.write(f"# schema_version: {self.schema_version}\n")
        for key, value in self.params.items():
            buffer.write(f"# {key}: {_csv_cell(value)}\n")
        columns = self.columns
        writer = csv.writer(buffer, lineterminator="\n")
        if columns:
            writer.writerow(columns)
            for row in self.rows:
                writer.writerow([_csv_cell(row.get(col)) for col in columns])
        return buffer.getvalue()

    def to_dataset(self) -> xr.Dataset:
        """Rows along dimension ``row``; params as attributes."""
        data_vars = {}
        n = len(self.rows)
        for col in self.columns:
            values = [to_scalar(row.get(col)) for row in self.rows]
            present = [v for v in values if v is not None]
            if present and all(isinstance(v, bool) for v in present):
                arr = np.array([int(bool(v)) for v in values], dtype=np.int8)
            elif present and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in present) and len(present) == n:
                arr = np.array(values, dtype=np.int64 if all(isinstance(v, int) for v in values) else np.float64)
            else:
                arr = np.array(["" if v is None else str(v) for v in values], dtype=object)
            data_vars[col] = ("row", arr)
        ds = xr.Dataset(data_vars, coords={"row": np.arange(n)})
        attrs = {"command": self.command, "schema_version": self.schema_version}
        for key, value in self.params.items():
            value = to_scalar(value)
            if isinstance(value, bool):
                value = int(value)
            elif value is None:
                value = ""
            attrs[key] = value if isinstance(value, (int, float, str)) else str(value)
        ds.attrs.update(attrs)
        return ds

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"ERROR: format {fmt!r} has no text rendering")

    def write(self, fmt: str = "json", output: Path | str | None = None) -> None:
        """Write to ``output`` or standard output; netcdf needs a file."""
        if fmt == "netcdf":
            if not output:
                raise ValueError("ERROR: --format netcdf requires --output")
            validate_file(output, ".nc", "netCDF report file", new_file=True)
            Path(output).parent.mkdir(parents=True, exist_ok=True)
            self.to_dataset().to_netcdf(output)
            logging.info(f"Report written to {output}")
            return
        text = self.render(fmt)
        if output:
            Path(output).parent.mkdir(parents=True, exist_ok=True)
            Path(output).write_text(text if text.endswith("\n") else text + "\n")
            logging.info(f"Report written to {output}")
        else:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
