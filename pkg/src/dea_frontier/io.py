"""CSV datasets, run configuration files and report tables."""

import csv
import io as _io
import re
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .data import Dataset
from .exceptions import DataError, InputError
from .improve import ImproveParams

_COLUMN = re.compile(r"^([xy])(\d+)$")
_TRUE = {"1", "true", "yes", "artificial"}
_FALSE = {"0", "false", "no", "original", ""}


def _parse_header(header):
    names = [h.strip() for h in header]
    if not names or names[0].lower() != "id":
        raise DataError("first header column must be 'id'", row=0)
    roles = {"x": {}, "y": {}}
    extra = {}
    for pos, name in enumerate(names[1:], start=1):
        match = _COLUMN.match(name.lower())
        if match:
            role, k = match.group(1), int(match.group(2))
            if k in roles[role]:
                raise DataError(f"duplicate column {name!r}", row=0, column=name)
            roles[role][k] = pos
        elif name.lower() in ("artificial", "provenance"):
            extra[name.lower()] = pos
        else:
            raise DataError(f"unknown column {name!r} (expected x<k>, y<i>, artificial, provenance)", row=0, column=name)
    for role in "xy":
        ks = sorted(roles[role])
        if ks != list(range(1, len(ks) + 1)):
            raise DataError(f"{role} columns must be numbered 1..{len(ks)} without gaps", row=0)
    return [roles["x"][k] for k in sorted(roles["x"])], [roles["y"][k] for k in sorted(roles["y"])], extra, names


def _cell(value, row, column):
    text = value.strip()
    if not text:
        raise DataError("missing value", row=row, column=column)
    try:
        v = float(text)
    except ValueError:
        raise DataError(f"not a number: {text!r}", row=row, column=column) from None
    if not np.isfinite(v):
        raise DataError(f"non-finite value {text!r}", row=row, column=column)
    if v < 0:
        raise DataError(f"negative value {text}", row=row, column=column)
    return v


def read_csv_text(text):
    """Parse dataset CSV text; returns ``(dataset, provenance)``.

    Row numbers in errors count the header as row 1, as a spreadsheet would.
    """
    reader = csv.reader(_io.StringIO(text))
    rows = [r for r in reader if any(c.strip() for c in r)]
    if not rows:
        raise DataError("empty file")
    xcols, ycols, extra, names = _parse_header(rows[0])
    if not xcols or not ycols:
        raise DataError("need at least one x column and one y column", row=1)
    ids, X, Y, art, prov = [], [], [], [], []
    seen = {}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(names):
            raise DataError(f"expected {len(names)} cells, found {len(row)}", row=line)
        uid = row[0].strip()
        if not uid:
            raise DataError("missing id", row=line, column="id")
        if uid in seen:
            raise DataError(f"duplicate id {uid!r} (first seen on row {seen[uid]})", row=line, column="id")
        seen[uid] = line
        ids.append(uid)
        X.append([_cell(row[p], line, names[p]) for p in xcols])
        Y.append([_cell(row[p], line, names[p]) for p in ycols])
        if "artificial" in extra:
            flag = row[extra["artificial"]].strip().lower()
            if flag not in _TRUE | _FALSE:
                raise DataError(f"bad artificial flag {flag!r}", row=line, column="artificial")
            art.append(flag in _TRUE)
        prov.append(row[extra["provenance"]].strip() if "provenance" in extra else "")
    if not ids:
        raise DataError("no data rows")
    X = np.array(X, dtype=float)
    Y = np.array(Y, dtype=float)
    for k in range(X.shape[1]):
        if not np.any(X[:, k] > 0):
            raise DataError("column has no positive entry", column=f"x{k + 1}")
    for i in range(Y.shape[1]):
        if not np.any(Y[:, i] > 0):
            raise DataError("column has no positive entry", column=f"y{i + 1}")
    dataset = Dataset(tuple(ids), X, Y, art if art else None)
    return dataset, tuple(prov)


def load_csv(path):
    """Load a dataset CSV (header ``id,x1..xm,y1..yr`` plus optional ``artificial``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    return read_csv_text(text)[0]


def dataset_to_csv(dataset, provenance=None):
    """CSV text for ``dataset``; values are written with ``repr`` so they reload exactly."""
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["id"] + [f"x{k + 1}" for k in range(dataset.m)] + [f"y{i + 1}" for i in range(dataset.r)]
    with_flags = bool(dataset.artificial.any()) or provenance is not None
    if with_flags:
        header += ["artificial", "provenance"]
    writer.writerow(header)
    for j in range(dataset.n):
        row = [dataset.ids[j]] + [repr(float(v)) for v in dataset.X[j]] + [repr(float(v)) for v in dataset.Y[j]]
        if with_flags:
            row += [int(dataset.artificial[j]), (provenance or {}).get(dataset.ids[j], "")]
        writer.writerow(row)
    return out.getvalue()


def write_csv(dataset, path, provenance=None):
    Path(path).write_text(dataset_to_csv(dataset, provenance))


def fmt(v):
    """Report number format: 9 significant digits; booleans as 0/1."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def table_text(header, rows):
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return out.getvalue()


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    params: ImproveParams = ImproveParams()
    orientation: str = "both"
    samples: int = 64
    seed: int = 1
    input: str = None
    output: str = None


_PARAM_TYPES = {f.name: f.type for f in fields(ImproveParams)}
_RUN_KEYS = {"orientation": str, "samples": int, "seed": int, "input": str, "output": str}


def _convert(key, text, kind):
    try:
        if kind in (bool, "bool"):
            low = text.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError
            return low in ("true", "1", "yes")
        if kind in (int, "int"):
            return int(text)
        if kind in (float, "float"):
            return float(text)
        return text
    except ValueError:
        raise InputError(f"config key {key!r}: cannot read {text!r}") from None


def parse_config(text):
    """``key = value`` lines with ``#`` comments; unknown keys are rejected."""
    params, run = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise InputError(f"config line {lineno}: expected 'key = value'")
        if key in _PARAM_TYPES:
            params[key] = _convert(key, value, _PARAM_TYPES[key])
        elif key in _RUN_KEYS:
            run[key] = _convert(key, value, _RUN_KEYS[key])
        else:
            raise InputError(f"config line {lineno}: unknown key {key!r}")
    if run.get("orientation", "both") not in ("both", "input", "output"):
        raise InputError("orientation must be one of both, input, output")
    if run.get("samples", 2) < 2:
        raise InputError("samples must be at least 2")
    return RunConfig(ImproveParams(**params), **run)


def load_config(path):
    try:
        return parse_config(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
