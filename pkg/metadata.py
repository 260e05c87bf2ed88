"""
Container metadata: pages, column chunks, row groups and the footer, with
their little-endian binary serialization. See FORMAT.md for the layout.
"""

import math
import struct
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Tuple

from errors import CorruptionError, FormatError

MAGIC = b"SPQF"
ROW_GROUP_MAGIC = b"SPRG"
FORMAT_VERSION = 1
ROW_GROUP_HEADER = struct.Struct('<4sIQ')  # magic, meta length, body length
TRAILER = struct.Struct('<I4s')  # footer length, magic


class ColumnId(IntEnum):
    TYPE = 0
    LEVELS = 1
    X = 2
    Y = 3
    ID = 4


class _Out:
    def __init__(self):
        self.parts: List[bytes] = []

    def pack(self, fmt: str, *values):
        self.parts.append(struct.pack('<' + fmt, *values))

    def text(self, value: str):
        raw = value.encode('utf-8')
        self.pack('I', len(raw))
        self.parts.append(raw)

    def blob(self, raw: bytes):
        self.pack('I', len(raw))
        self.parts.append(raw)

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class _In:
    def __init__(self, data: bytes, what: str):
        self.data = data
        self.pos = 0
        self.what = what

    def unpack(self, fmt: str):
        fmt = '<' + fmt
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise CorruptionError(f"{self.what} truncated at byte {self.pos}")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values if len(values) > 1 else values[0]

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise CorruptionError(f"{self.what} truncated at byte {self.pos}")
        raw = self.data[self.pos:self.pos + size]
        self.pos += size
        return raw

    def text(self) -> str:
        return self.take(self.unpack('I')).decode('utf-8')

    def blob(self) -> bytes:
        return self.take(self.unpack('I'))

    def done(self):
        if self.pos != len(self.data):
            raise CorruptionError(f"{self.what} has {len(self.data) - self.pos} trailing bytes")


@dataclass
class PageStats:
    min: Optional[float] = None
    max: Optional[float] = None
    value_count: int = 0
    null_count: int = 0

    @property
    def has_range(self) -> bool:
        return self.min is not None

    def overlaps(self, low: float, high: float) -> bool:
        """Whether any stored value may fall in [low, high]; NaN pages always may"""
        if self.null_count:
            return True
        if not self.has_range:
            return False
        return self.min <= high and low <= self.max

    def merge(self, other: "PageStats") -> "PageStats":
        lows = [v for v in (self.min, other.min) if v is not None]
        highs = [v for v in (self.max, other.max) if v is not None]
        return PageStats(min(lows) if lows else None, max(highs) if highs else None,
                         self.value_count + other.value_count, self.null_count + other.null_count)

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "value_count": self.value_count,
                "null_count": self.null_count}

    def write(self, out: _Out):
        has = self.min is not None
        out.pack('BddQQ', int(has), self.min if has else 0.0, self.max if has else 0.0,
                 self.value_count, self.null_count)

    @classmethod
    def read(cls, src: _In) -> "PageStats":
        has, low, high, count, nulls = src.unpack('BddQQ')
        return cls(low if has else None, high if has else None, count, nulls)


@dataclass
class Page:
    column: ColumnId
    offset: int  # relative to the row group body
    stored_size: int
    uncompressed_size: int
    value_count: int
    encoding: int
    compression: int
    first_record: int  # relative to the row group
    record_count: int
    rep_phase: int = 0
    delta_width: int = 0
    stats: PageStats = field(default_factory=PageStats)

    def write(self, out: _Out):
        out.pack('BQIIIBBQIBB', int(self.column), self.offset, self.stored_size, self.uncompressed_size,
                 self.value_count, self.encoding, self.compression, self.first_record,
                 self.record_count, self.rep_phase, self.delta_width)
        self.stats.write(out)

    @classmethod
    def read(cls, src: _In) -> "Page":
        (column, offset, stored, uncompressed, count, encoding, compression, first, records,
         phase, width) = src.unpack('BQIIIBBQIBB')
        try:
            column = ColumnId(column)
        except ValueError:
            raise FormatError(f"Unknown column id: {column}")
        return cls(column, offset, stored, uncompressed, count, encoding, compression, first, records,
                   phase, width, PageStats.read(src))


@dataclass
class ColumnChunk:
    column: ColumnId
    pages: List[Page] = field(default_factory=list)

    @property
    def stats(self) -> PageStats:
        total = PageStats()
        for page in self.pages:
            total = total.merge(page.stats)
        return total

    @property
    def stored_size(self) -> int:
        return sum(p.stored_size for p in self.pages)

    @property
    def uncompressed_size(self) -> int:
        return sum(p.uncompressed_size for p in self.pages)

    @property
    def value_count(self) -> int:
        return sum(p.value_count for p in self.pages)


@dataclass
class RowGroup:
    offset: int  # absolute offset of the row group header
    record_count: int
    meta_size: int = 0
    body_size: int = 0
    chunks: Dict[ColumnId, ColumnChunk] = field(default_factory=dict)

    @property
    def body_offset(self) -> int:
        return self.offset + ROW_GROUP_HEADER.size + self.meta_size

    @property
    def end_offset(self) -> int:
        return self.body_offset + self.body_size

    @property
    def page_groups(self) -> int:
        return len(self.chunks[ColumnId.LEVELS].pages) if ColumnId.LEVELS in self.chunks else 0

    def bbox(self) -> Optional[Tuple[float, float, float, float]]:
        if ColumnId.X not in self.chunks:
            return None
        xs, ys = self.chunks[ColumnId.X].stats, self.chunks[ColumnId.Y].stats
        if not xs.has_range or not ys.has_range:
            return None
        return (xs.min, ys.min, xs.max, ys.max)

    def meta_bytes(self) -> bytes:
        out = _Out()
        out.pack('QQB', self.offset, self.record_count, len(self.chunks))
        for column in sorted(self.chunks):
            chunk = self.chunks[column]
            out.pack('BI', int(column), len(chunk.pages))
            for page in chunk.pages:
                page.write(out)
        return out.getvalue()

    def header_bytes(self) -> bytes:
        meta = self.meta_bytes()
        return ROW_GROUP_HEADER.pack(ROW_GROUP_MAGIC, len(meta), self.body_size) + meta

    @classmethod
    def from_meta(cls, meta: bytes, body_size: int) -> "RowGroup":
        src = _In(meta, "Row group metadata")
        offset, records, nchunks = src.unpack('QQB')
        group = cls(offset, records, len(meta), body_size)
        for _ in range(nchunks):
            column, npages = src.unpack('BI')
            try:
                column = ColumnId(column)
            except ValueError:
                raise FormatError(f"Unknown column id: {column}")
            chunk = ColumnChunk(column, [Page.read(src) for _ in range(npages)])
            group.chunks[column] = chunk
        src.done()
        group.validate()
        return group

    def validate(self):
        if self.record_count <= 0:
            raise CorruptionError("Row group has no records")
        for chunk in self.chunks.values():
            for page in chunk.pages:
                if page.offset + page.stored_size > self.body_size:
                    raise CorruptionError(f"{chunk.column.name} page exceeds its row group body")
        if ColumnId.X in self.chunks:
            xs, ys = self.chunks[ColumnId.X], self.chunks[ColumnId.Y]
            if [p.value_count for p in xs.pages] != [p.value_count for p in ys.pages]:
                raise CorruptionError("X and Y chunks disagree on page value counts")
        typed = self.chunks.get(ColumnId.TYPE)
        if typed is None or typed.value_count != self.record_count:
            raise CorruptionError("TYPE chunk does not cover the row group")


@dataclass
class Footer:
    version: int = FORMAT_VERSION
    created_by: str = ""
    options: Dict[str, str] = field(default_factory=dict)
    record_count: int = 0
    has_ids: bool = False
    row_groups: List[RowGroup] = field(default_factory=list)

    def bbox(self) -> Optional[Tuple[float, float, float, float]]:
        boxes = [b for b in (rg.bbox() for rg in self.row_groups) if b is not None]
        if not boxes:
            return None
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    def to_bytes(self) -> bytes:
        out = _Out()
        out.pack('H', self.version)
        out.text(self.created_by)
        out.pack('I', len(self.options))
        for key in sorted(self.options):
            out.text(key)
            out.text(str(self.options[key]))
        box = self.bbox()
        out.pack('B', int(box is not None))
        out.pack('dddd', *(box or (math.nan,) * 4))
        out.pack('QBI', self.record_count, int(self.has_ids), len(self.row_groups))
        for group in self.row_groups:
            out.pack('Q', group.body_size)
            out.blob(group.meta_bytes())
        return out.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Footer":
        src = _In(data, "Footer")
        version = src.unpack('H')
        if version != FORMAT_VERSION:
            raise FormatError(f"Unsupported format version: {version}")
        footer = cls(version, src.text())
        for _ in range(src.unpack('I')):
            key = src.text()
            footer.options[key] = src.text()
        src.unpack('B')
        src.unpack('dddd')  # stored bounding box, recomputed from chunk stats
        footer.record_count, has_ids, ngroups = src.unpack('QBI')
        footer.has_ids = bool(has_ids)
        for _ in range(ngroups):
            body_size = src.unpack('Q')
            footer.row_groups.append(RowGroup.from_meta(src.blob(), body_size))
        src.done()
        if sum(rg.record_count for rg in footer.row_groups) != footer.record_count:
            raise CorruptionError("Row group record counts do not add up to the footer total")
        return footer
