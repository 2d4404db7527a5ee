"""Deterministic CSV/JSON emission.

Floats are rendered with ``repr`` (shortest round-trip form), so identical
inputs always produce identical bytes.  Metadata rides in ``#``-prefixed
comment lines ahead of the CSV header.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence, TextIO


def fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return f"{repr(value.real)}{'+' if value.imag >= 0 else '-'}{repr(abs(value.imag))}j"
    return str(value)


def write_csv(
    out: TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence],
    meta: dict | None = None,
) -> None:
    if meta:
        for key in meta:
            out.write(f"# {key}: {meta[key]}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def write_json(out: TextIO, payload: dict, meta: dict | None = None) -> None:
    doc = {"meta": meta or {}, **payload}
    json.dump(doc, out, sort_keys=True, indent=2)
    out.write("\n")
