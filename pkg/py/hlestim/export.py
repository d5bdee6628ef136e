"""CSV / JSON writers shared by the CLI, the server and the batch runner.

Floats are written with repr (shortest round-trip form, '.' decimal),
integers in full decimal, missing cells as empty strings, LF line endings.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import sys
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

OutPath = Optional[Union[str, Path]]


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def jsonable(obj: Any) -> Any:
    """Plain-Python view of results: dataclasses, numpy scalars and arrays, enums, fractions."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj))
    if isinstance(obj, dict):
        return {str(k.value if isinstance(k, Enum) else k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    return obj


def format_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: OutPath) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    log.info("[EXPORT] wrote %s (%d bytes)", path, len(text))


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], out: OutPath = None) -> str:
    text = format_csv(header, rows)
    _emit(text, out)
    return text


def write_json(obj: Any, out: OutPath = None) -> str:
    text = format_json(obj)
    _emit(text, out)
    return text


def write_text(text: str, out: OutPath = None) -> str:
    _emit(text, out)
    return text
