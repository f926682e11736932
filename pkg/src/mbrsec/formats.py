"""On-disk formats: node-content files, symbol files, JSON reports, CSV profiles."""
from __future__ import annotations

import csv
import io
import json
import logging
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import FormatError

log = logging.getLogger(__name__)

MAGIC = b"DSSC"
VERSION = 1
_HEADER = struct.Struct("<4sBII")


def encode_content(q: int, values: Sequence[int]) -> bytes:
    body = struct.pack(f"<{len(values)}I", *(int(v) for v in values))
    return _HEADER.pack(MAGIC, VERSION, q, len(values)) + body


def decode_content(data: bytes, q: int | None = None) -> tuple[int, list[int]]:
    if len(data) < _HEADER.size:
        raise FormatError("truncated header")
    magic, version, fq, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if q is not None and fq != q:
        raise FormatError(f"file is over F_{fq}, expected F_{q}")
    if len(data) != _HEADER.size + 4 * count:
        raise FormatError(f"expected {count} elements, got {(len(data) - _HEADER.size) // 4}")
    values = list(struct.unpack_from(f"<{count}I", data, _HEADER.size))
    if any(v >= fq for v in values):
        raise FormatError(f"element out of range for F_{fq}")
    return fq, values


def write_content(path: Path, q: int, values: Sequence[int]) -> None:
    Path(path).write_bytes(encode_content(q, values))


def read_content(path: Path, q: int | None = None) -> tuple[int, list[int]]:
    return decode_content(Path(path).read_bytes(), q)


def parse_symbols(text: str, q: int) -> tuple[list[int], bool]:
    """One decimal integer per line; returns the values mod q and whether any were reduced."""
    out, reduced = [], False
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = int(line)
        except ValueError:
            raise FormatError(f"line {n}: not an integer: {line!r}") from None
        if not 0 <= v < q:
            reduced = True
        out.append(v % q)
    if reduced:
        log.warning("input symbols reduced mod %d", q)
    return out, reduced


def format_symbols(values: Sequence[int]) -> str:
    return "".join(f"{int(v)}\n" for v in values)


@dataclass
class ReportRecord:
    family: str
    n: int
    k: int
    d: int
    q: int
    kind: str
    ell: int
    min_distance: int | None
    block_level: int
    witness: dict | None = None
    subset: list[int] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return json.dumps(d, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> ReportRecord:
        d = json.loads(text)
        names = {f for f in cls.__dataclass_fields__ if f != "extra"}
        missing = names - {"witness", "subset"} - d.keys()
        if missing:
            raise FormatError(f"report lacks fields {sorted(missing)}")
        core = {k: d.pop(k) for k in list(d) if k in names}
        return cls(**core, extra=d)


def profile_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ell", "formula_b", "audited_b"])
    for r in rows:
        w.writerow([r.ell, r.formula_b, "" if r.audited_b is None else r.audited_b])
    return buf.getvalue()


def parse_profile_csv(text: str) -> list[tuple[int, int, int | None]]:
    rd = csv.DictReader(io.StringIO(text))
    if rd.fieldnames != ["ell", "formula_b", "audited_b"]:
        raise FormatError(f"unexpected header {rd.fieldnames}")
    return [
        (int(r["ell"]), int(r["formula_b"]), int(r["audited_b"]) if r["audited_b"] else None) for r in rd
    ]
