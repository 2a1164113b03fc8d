"""CSV/JSON emission helpers with deterministic formatting.

Floats are written with repr() of the Python float (shortest round-trip
form, '.' decimal separator), so identical data produces byte-identical
files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

__all__ = ["format_cell", "write_csv", "write_json", "sha256_file"]


def format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
