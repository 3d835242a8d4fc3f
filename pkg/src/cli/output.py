"""JSON and CSV rendering of result models."""
import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel

Payload = Union[BaseModel, Sequence[BaseModel], Dict[str, Any]]


def _plain(payload: Payload) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, dict):
        return {k: _plain(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [_plain(item) for item in payload]
    return payload


def to_json(payload: Payload) -> str:
    return json.dumps(_plain(payload), ensure_ascii=False, indent=2) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, separators=(",", ":"))
    return str(value)


def to_csv(rows: Sequence[BaseModel], columns: Optional[List[str]] = None, model: Optional[type] = None) -> str:
    """
    One line per row under a header that is always written.

    Columns default to the fields of the first row, or of `model` when rows
    is empty. Nested values are written as compact JSON.
    """
    if columns is None:
        source = rows[0].__class__ if rows else model
        columns = list(source.model_fields) if source is not None else []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        data = row.model_dump(mode="json")
        writer.writerow([_cell(data.get(c)) for c in columns])
    return buffer.getvalue()


def emit(text: str, out: Optional[Path] = None) -> None:
    """Write to `out` when given, standard output otherwise."""
    if out is None:
        print(text, end="")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
