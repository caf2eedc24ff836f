"""CSV and JSON writers shared by every command.

Floats are written with 17 significant digits so that a binary64 value
survives a round trip; lines end in ``\\n`` and files are UTF-8. JSON keys
keep the insertion order of the report that produced them.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

FLOAT_FORMAT = ".17g"


def format_float(value):
    if value is None:
        return ""
    return format(float(value), FLOAT_FORMAT)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if isinstance(row, dict):
            row = [row.get(name) for name in header]
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def _json_value(value, indent, level):
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no inf or nan
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, (complex, np.complexfloating)):
        return _json_value({"re": value.real, "im": value.imag}, indent, level)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, np.ndarray):
        value = value.tolist()

    pad = "\n" + " " * (indent * (level + 1))
    close = "\n" + " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            "{0}: {1}".format(json.dumps(str(key), ensure_ascii=False), _json_value(item, indent, level + 1))
            for key, item in value.items()
        ]
        return "{" + pad + ("," + pad).join(items) + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_json_value(item, indent, level + 1) for item in value]
        return "[" + pad + ("," + pad).join(items) + close + "]"
    raise TypeError("cannot serialize {0!r} to JSON".format(type(value).__name__))


def json_text(payload, indent=2):
    return _json_value(payload, indent, 0) + "\n"


def _write(text, path):
    if path is None:
        return text
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    return text


def write_csv(header, rows, path=None):
    """Render ``rows`` under ``header``; write to ``path`` when given and return the text."""
    return _write(csv_text(header, rows), path)


def write_json(payload, path=None):
    return _write(json_text(payload), path)
