"""Reading and writing result files.

Two layouts carry the same content.

JSON, one block::

    {"params": {...}, "basis": "walk-positions", "entries": [[j1, j2, p], ...], "total": 1.0}

JSON, several blocks (phase sweeps)::

    {"params": {...}, "basis": ..., "blocks": [{"params": {...}, "entries": [...], "total": ...}, ...]}

CSV::

    # entwalk results v1
    # params: {...}
    # basis: walk-positions
    # block: {"params": {...}, "rows": 15, "total": 1.0}
    j1,j2,probability
    -4,-4,0.0078125
    ...
    # end

CSV probabilities are written with 17 significant digits, JSON numbers with
Python's shortest round-trip repr; both re-parse to the exact same floats.
Nothing time- or host-dependent is written, so a given configuration always
produces the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import SchemaError

__all__ = ["Block", "ResultDocument", "dumps", "loads", "write", "read", "FORMATS"]

FORMATS = ("json", "csv")
CSV_MAGIC = "# entwalk results v1"


@dataclass(frozen=True)
class Block:
    entries: tuple[tuple[tuple, float], ...]
    columns: tuple[str, ...]
    params: Mapping[str, Any] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return math.fsum(v for _, v in self.entries if isinstance(v, float))

    def as_dict(self) -> dict[tuple, float]:
        return {k: v for k, v in self.entries}


@dataclass(frozen=True)
class ResultDocument:
    params: Mapping[str, Any]
    basis: str
    blocks: tuple[Block, ...]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _key(value):
    return value if isinstance(value, str) else int(value)


def _json_block(block: Block) -> dict:
    return {
        "entries": [[*k, v] for k, v in block.entries],
        "total": block.total,
    }


def dumps(doc: ResultDocument, fmt: str) -> str:
    if fmt == "json":
        if len(doc.blocks) == 1:
            body = {"params": dict(doc.params), "basis": doc.basis, **_json_block(doc.blocks[0])}
            body["columns"] = list(doc.blocks[0].columns)
        else:
            body = {
                "params": dict(doc.params),
                "basis": doc.basis,
                "blocks": [
                    {"params": dict(b.params), "columns": list(b.columns), **_json_block(b)}
                    for b in doc.blocks
                ],
            }
        return json.dumps(body, indent=1, sort_keys=True, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(CSV_MAGIC + "\n")
        buf.write("# params: " + json.dumps(dict(doc.params), sort_keys=True) + "\n")
        buf.write("# basis: " + doc.basis + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        for b in doc.blocks:
            meta = {"params": dict(b.params), "rows": len(b.entries), "total": b.total}
            buf.write("# block: " + json.dumps(meta, sort_keys=True) + "\n")
            writer.writerow(b.columns)
            for k, v in b.entries:
                writer.writerow([*k, _fmt(v)])
        buf.write("# end\n")
        return buf.getvalue()
    raise SchemaError(f"unknown output format {fmt!r}; expected one of {FORMATS}")


def _parse_entries(raw, where: str, columns: Sequence[str] | None = None) -> tuple[tuple[tuple, float], ...]:
    if not isinstance(raw, list):
        raise SchemaError(f"{where}: 'entries' must be a list")
    out = []
    for n, row in enumerate(raw):
        if not isinstance(row, list) or len(row) < 2:
            raise SchemaError(f"{where}: entry {n} must be [index..., value]")
        if columns is not None and len(row) != len(columns):
            raise SchemaError(f"{where}: entry {n} has {len(row)} fields, expected {len(columns)}")
        *idx, value = row
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{where}: entry {n} value is not a number")
        out.append((tuple(_key(i) for i in idx), float(value)))
    return tuple(out)


def _json_loads(text: str) -> ResultDocument:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
    if not isinstance(body, dict):
        raise SchemaError("top level must be an object")
    for key in ("params", "basis"):
        if key not in body:
            raise SchemaError(f"missing field {key!r}")
    if "blocks" in body:
        raw_blocks = body["blocks"]
        if not isinstance(raw_blocks, list) or not raw_blocks:
            raise SchemaError("'blocks' must be a non-empty list")
    elif "entries" in body:
        raw_blocks = [{"params": {}, "entries": body["entries"], "total": body.get("total"),
                       "columns": body.get("columns")}]
    else:
        raise SchemaError("missing field 'entries'")
    blocks = []
    for n, rb in enumerate(raw_blocks):
        where = f"block {n}"
        if not isinstance(rb, dict) or "entries" not in rb or "total" not in rb:
            raise SchemaError(f"{where}: needs 'entries' and 'total'")
        columns = rb.get("columns")
        entries = _parse_entries(rb["entries"], where, columns)
        block = Block(entries, tuple(columns or ()), rb.get("params", {}))
        _check_total(block, rb["total"], where)
        blocks.append(block)
    return ResultDocument(body["params"], body["basis"], tuple(blocks))


def _check_total(block: Block, recorded, where: str) -> None:
    if recorded is None or not isinstance(recorded, (int, float)):
        raise SchemaError(f"{where}: 'total' missing or not a number")
    if block.total != float(recorded):
        raise SchemaError(f"{where}: entries sum to {block.total!r} but total says {recorded!r}")


def _csv_loads(text: str) -> ResultDocument:
    lines = text.splitlines()
    if not lines or lines[0] != CSV_MAGIC:
        raise SchemaError("not an entwalk CSV results file")
    if lines[-1] != "# end":
        raise SchemaError("file is truncated (no end marker)")
    params: dict | None = None
    basis: str | None = None
    blocks: list[Block] = []
    pending: dict | None = None
    columns: tuple[str, ...] | None = None
    rows: list = []

    def close() -> None:
        if pending is None:
            return
        if len(rows) != pending["rows"]:
            raise SchemaError(f"block {len(blocks)}: expected {pending['rows']} rows, found {len(rows)}")
        entries = tuple(rows)
        block = Block(entries, columns or (), pending.get("params", {}))
        _check_total(block, pending.get("total"), f"block {len(blocks)}")
        blocks.append(block)

    for lineno, line in enumerate(lines[1:-1], start=2):
        if line.startswith("# params: "):
            params = _load_json_field(line[10:], lineno)
        elif line.startswith("# basis: "):
            basis = line[9:]
        elif line.startswith("# block: "):
            close()
            pending = _load_json_field(line[9:], lineno)
            if not isinstance(pending.get("rows"), int):
                raise SchemaError(f"line {lineno}: block header lacks a row count")
            columns, rows = None, []
        elif line.startswith("#"):
            continue
        elif pending is None:
            raise SchemaError(f"line {lineno}: data before any block header")
        elif columns is None:
            columns = tuple(next(csv.reader([line])))
        else:
            fields = next(csv.reader([line]))
            if len(fields) != len(columns):
                raise SchemaError(f"line {lineno}: {len(fields)} fields, expected {len(columns)}")
            try:
                idx = tuple(_csv_key(f) for f in fields[:-1])
                rows.append((idx, float(fields[-1])))
            except ValueError:
                raise SchemaError(f"line {lineno}: unparseable row {line!r}") from None
    close()
    if params is None or basis is None:
        raise SchemaError("missing params or basis header")
    if not blocks:
        raise SchemaError("no data blocks")
    return ResultDocument(params, basis, tuple(blocks))


def _csv_key(field: str):
    try:
        return int(field)
    except ValueError:
        return field


def _load_json_field(text: str, lineno: int) -> dict:
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise SchemaError(f"line {lineno}: malformed header") from None
    if not isinstance(value, dict):
        raise SchemaError(f"line {lineno}: header must be a JSON object")
    return value


def loads(text: str) -> ResultDocument:
    if text.startswith(CSV_MAGIC):
        return _csv_loads(text)
    return _json_loads(text)


def write(doc: ResultDocument, path: str | Path, fmt: str) -> None:
    Path(path).write_text(dumps(doc, fmt), encoding="utf-8")


def read(path: str | Path) -> ResultDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads(text)
