"""Format detection and format-agnostic record reading and writing for the CLI."""

import os
import sys
from typing import Iterable, Iterator, Optional

from config import WriteOptions
from container import read_file, write_file
from errors import FormatError
from geojson_io import read_geojson, write_geojson
from metadata import MAGIC
from wkt import read_wkt, write_wkt

FORMATS = ("geojson", "wkt", "spqf")
_EXTENSIONS = {".geojson": "geojson", ".json": "geojson", ".wkt": "wkt", ".txt": "wkt", ".spqf": "spqf"}


def detect_format(path: str, explicit: Optional[str] = None, sniff: bool = True) -> str:
    if explicit:
        return explicit
    ext = os.path.splitext(path)[1].lower()
    if ext in _EXTENSIONS:
        return _EXTENSIONS[ext]
    if sniff and os.path.isfile(path):
        with open(path, 'rb') as f:
            head = f.read(len(MAGIC))
        if head == MAGIC:
            return "spqf"
        if head.lstrip()[:1] in (b"{", b"["):
            return "geojson"
        return "wkt"
    raise FormatError(f"Cannot tell the format of {path}; pass --from/--to")


def read_records(path: str, fmt: str, with_ids: bool = False) -> Iterator:
    if fmt == "spqf":
        return read_file(path, with_ids=with_ids)
    records = read_geojson(path) if fmt == "geojson" else read_wkt(path)
    return enumerate(records) if with_ids else records


def write_records(records: Iterable, path: Optional[str], fmt: str, options: WriteOptions,
                  with_ids: bool = False) -> dict:
    """Write records in fmt; path None writes text formats to stdout"""
    if fmt == "spqf":
        if path is None:
            raise FormatError("Container output needs a file path")
        return write_file(records, path, options, ids=with_ids).to_dict()
    target = path if path is not None else sys.stdout
    if fmt == "geojson":
        count = write_geojson(records, target, ids=with_ids)
    else:
        count = write_wkt((g for _, g in records) if with_ids else records, target)
    summary = {"path": os.path.abspath(path) if path else "-", "records": count}
    if path:
        summary["bytes_written"] = os.path.getsize(path)
    return summary
