"""
The columnar geometry container.

File layout: magic, row groups, footer, footer length, magic. Each row group
starts with a header carrying its own metadata, so a file cut at a row group
boundary can be given a new footer by recover_file(). Within a row group the
LEVELS, X, Y and ID pages share boundaries and always start at a record
boundary, so the statistics of one page cover every coordinate of the
records it holds.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, BinaryIO, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

import column_codecs
import fp_delta
from config import WriteOptions
from errors import CorruptionError, FormatError, GeoColumnError, GeometryError
from geometry import (DEF_EMPTY, DEF_PRESENT, REP_CONTINUE, REP_PART, REP_RECORD, BBox, Empty,
                      Geometry, GeometryCollection, GeometryType, Point, assemble, columnar_parts,
                      flatten_collection, mbr, mbr_intersects)
from metadata import (MAGIC, ROW_GROUP_HEADER, ROW_GROUP_MAGIC, TRAILER, ColumnChunk, ColumnId, Footer,
                      Page, PageStats, RowGroup)
from sfc_sort import sort_stream

logger = logging.getLogger(__name__)

CREATED_BY = "geocolumn 1.0"
# Fixed per-entry estimate used against row_group_bytes: x, y, half a level byte.
_BYTES_PER_ENTRY = 17


@dataclass
class WriteSummary:
    path: str
    records: int = 0
    skipped: int = 0
    row_groups: int = 0
    bytes_written: int = 0
    column_bytes: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"path": self.path, "records": self.records, "skipped": self.skipped,
                "row_groups": self.row_groups, "bytes_written": self.bytes_written,
                "column_bytes": dict(self.column_bytes)}


@dataclass
class QueryStats:
    pages_total: int = 0
    pages_selected: int = 0
    row_groups_total: int = 0
    row_groups_skipped: int = 0
    records_scanned: int = 0
    records_matched: int = 0
    bytes_read: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def page_stats(values: np.ndarray) -> PageStats:
    nan = np.isnan(values)
    nulls = int(nan.sum())
    if nulls == values.size:
        return PageStats(None, None, int(values.size), nulls)
    present = values[~nan]
    return PageStats(float(present.min()), float(present.max()), int(values.size), nulls)


def _check_stats(values: np.ndarray, stats: PageStats, where: str):
    actual = page_stats(values)
    same = (actual.null_count == stats.null_count and actual.value_count == stats.value_count
            and actual.has_range == stats.has_range
            and (not actual.has_range or (actual.min == stats.min and actual.max == stats.max)))
    if not same:
        raise CorruptionError(f"{where}: decoded values do not match the page statistics")


class GeoColumnWriter:
    """Streams geometries into a container file, one row group at a time"""

    def __init__(self, path: str, options: Optional[WriteOptions] = None):
        self.path = path
        self.options = options or WriteOptions()
        self.footer = Footer(created_by=CREATED_BY, has_ids=self.options.with_ids,
                             options=self._option_strings())
        self.summary = WriteSummary(path)
        self._file: Optional[BinaryIO] = open(path, 'wb')
        self._file.write(MAGIC)
        self._next_id = 0
        self._reset_buffers()

    def _option_strings(self) -> Dict[str, str]:
        o = self.options
        return {"page_size": str(o.page_size), "batch_size": str(o.batch_size), "compression": o.compression,
                "sort": o.sort, "coordinate_encoding": o.coordinate_encoding}

    def _reset_buffers(self):
        self._types: List[int] = []
        self._ids: List[int] = []
        self._entries: List[int] = []  # level entries per record
        self._reps: List[int] = []
        self._defs: List[int] = []
        self._xs: List[float] = []
        self._ys: List[float] = []

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.close()
        else:
            self.abort()

    def write(self, g: Geometry, record_id: Optional[int] = None):
        if isinstance(g, GeometryCollection):
            for member in flatten_collection(g):
                self.write(member, record_id)
            return
        if record_id is None:
            record_id = self._next_id
        self._next_id = max(self._next_id, record_id + 1)
        try:
            code, parts = columnar_parts(g)
        except GeometryError as e:
            if self.options.on_invalid == "skip":
                logger.warning("Skipping invalid record %d: %s", record_id, e)
                self.summary.skipped += 1
                return
            raise GeometryError(f"Record {record_id}: {e}")

        self._types.append(int(code))
        self._ids.append(record_id)
        if not parts:
            self._entries.append(1)
            self._reps.append(REP_RECORD)
            self._defs.append(DEF_EMPTY)
        else:
            count = 0
            for i, part in enumerate(parts):
                for j, (x, y) in enumerate(part):
                    self._reps.append(REP_CONTINUE if j else (REP_RECORD if i == 0 else REP_PART))
                    self._xs.append(x)
                    self._ys.append(y)
                count += len(part)
            self._defs.extend([DEF_PRESENT] * count)
            self._entries.append(count)
        self.summary.records += 1
        if (len(self._types) >= self.options.batch_size
                or len(self._reps) * _BYTES_PER_ENTRY >= self.options.row_group_bytes):
            self.flush_row_group()

    def write_all(self, records: Iterable[Geometry]):
        for g in records:
            self.write(g)

    def _page_bounds(self, entries: np.ndarray) -> List[Tuple[int, int]]:
        """Split records into pages of at most page_size/8 level entries each"""
        cap = max(1, self.options.page_size // 8)
        ends = np.cumsum(entries)
        bounds = []
        start = 0
        while start < entries.size:
            before = ends[start - 1] if start else 0
            stop = int(np.searchsorted(ends, before + cap, side='right'))
            stop = max(stop, start + 1)
            bounds.append((start, stop))
            start = stop
        return bounds

    def _encode(self, column: ColumnId, payload: bytes, count: int, first: int, records: int,
                encoding: int, width: Optional[int] = None, stats: Optional[PageStats] = None):
        stored, compression = column_codecs.compress_page(
            payload, column_codecs.COMPRESSION_CODES[self.options.compression])
        page = Page(column, 0, len(stored), len(payload), count, encoding, compression, first, records,
                    REP_RECORD, width or 0, stats or PageStats(value_count=count))
        return page, stored

    def _encode_coordinates(self, column: ColumnId, values: np.ndarray, first: int, records: int):
        payload, encoding, width = fp_delta.encode_coordinate_page(
            values, force_raw=self.options.coordinate_encoding == "raw")
        return self._encode(column, payload, int(values.size), first, records, encoding, width,
                            page_stats(values))

    def flush_row_group(self):
        if not self._types:
            return
        types = np.array(self._types, dtype=np.uint8)
        entries = np.array(self._entries, dtype=np.int64)
        reps = np.array(self._reps, dtype=np.uint8)
        defs = np.array(self._defs, dtype=np.uint8)
        xs = np.array(self._xs, dtype=np.float64)
        ys = np.array(self._ys, dtype=np.float64)
        ids = np.array(self._ids, dtype=np.int64)
        self._reset_buffers()

        entry_ends = np.concatenate(([0], np.cumsum(entries)))
        coord_ends = np.concatenate(([0], np.cumsum(defs == DEF_PRESENT)))
        jobs = [(ColumnId.TYPE, self._encode, (ColumnId.TYPE, column_codecs.encode_type_page(types),
                                               int(types.size), 0, int(types.size),
                                               column_codecs.ENCODING_RLE))]
        for first, stop in self._page_bounds(entries):
            lo, hi = int(entry_ends[first]), int(entry_ends[stop])
            clo, chi = int(coord_ends[lo]), int(coord_ends[hi])
            records = stop - first
            jobs.append((ColumnId.LEVELS, self._encode,
                         (ColumnId.LEVELS, column_codecs.encode_levels_page(reps[lo:hi], defs[lo:hi]),
                          hi - lo, first, records, column_codecs.ENCODING_PACKED_LEVELS)))
            jobs.append((ColumnId.X, self._encode_coordinates, (ColumnId.X, xs[clo:chi], first, records)))
            jobs.append((ColumnId.Y, self._encode_coordinates, (ColumnId.Y, ys[clo:chi], first, records)))
            if self.options.with_ids:
                jobs.append((ColumnId.ID, self._encode,
                             (ColumnId.ID, column_codecs.encode_id_page(ids[first:stop]), records, first,
                              records, column_codecs.ENCODING_PLAIN)))

        with ThreadPoolExecutor(max_workers=self.options.encode_workers) as executor:
            futures = [executor.submit(fn, *args) for _, fn, args in jobs]
            encoded = [future.result() for future in futures]

        group = RowGroup(self._file.tell(), int(types.size))
        body = []
        offset = 0
        for (column, _, _), (page, stored) in zip(jobs, encoded):
            page.offset = offset
            offset += len(stored)
            body.append(stored)
            group.chunks.setdefault(column, ColumnChunk(column)).pages.append(page)
        group.body_size = offset
        header = group.header_bytes()
        group.meta_size = len(header) - ROW_GROUP_HEADER.size

        self._file.write(header)
        for stored in body:
            self._file.write(stored)
        self._file.flush()
        self.footer.row_groups.append(group)
        self.footer.record_count += group.record_count
        for column, chunk in group.chunks.items():
            name = column.name.lower()
            self.summary.column_bytes[name] = self.summary.column_bytes.get(name, 0) + chunk.stored_size
        logger.info("Wrote row group %d: %d records, %d bytes", len(self.footer.row_groups) - 1,
                    group.record_count, len(header) + group.body_size)

    def close(self) -> WriteSummary:
        if self._file is None:
            return self.summary
        self.flush_row_group()
        footer = self.footer.to_bytes()
        self._file.write(footer)
        self._file.write(TRAILER.pack(len(footer), MAGIC))
        self.summary.bytes_written = self._file.tell()
        self.summary.row_groups = len(self.footer.row_groups)
        self._file.close()
        self._file = None
        return self.summary

    def abort(self):
        """Close without a footer; completed row groups stay recoverable"""
        if self._file is not None:
            self._file.close()
            self._file = None


def write_file(records: Iterable[Any], path: str, options: Optional[WriteOptions] = None,
               ids: bool = False) -> WriteSummary:
    """Sort (optionally), encode and write records; the target appears atomically.

    With ids=True the records are (record_id, geometry) pairs. An invalid
    geometry under on_invalid='abort' removes the partial file; any other
    failure leaves it at path + '.tmp' with its completed row groups, ready
    for recover_file().
    """
    options = options or WriteOptions()
    abs_path = os.path.abspath(path)
    parent_dir = os.path.dirname(abs_path)
    if parent_dir and not os.path.exists(parent_dir):
        os.makedirs(parent_dir, exist_ok=True)
    temp_path = abs_path + '.tmp'
    numbered = sort_stream(records if ids else enumerate(records), options.sort, options.batch_size,
                           geometry_of=lambda r: r[1])
    try:
        with GeoColumnWriter(temp_path, options) as writer:
            for record_id, g in numbered:
                writer.write(g, record_id)
        os.replace(temp_path, abs_path)
    except GeometryError:
        if os.path.exists(temp_path):
            try:
                os.remove(temp_path)
            except OSError:
                pass
        raise
    except Exception:
        if os.path.exists(temp_path):
            logger.warning("Write of %s failed; completed row groups kept in %s", abs_path, temp_path)
        raise
    writer.summary.path = abs_path
    return writer.summary


class GeoColumnReader:
    """Footer-driven access to a container file"""

    def __init__(self, path: str):
        self.path = path
        self.file_size = os.path.getsize(path)
        self.bytes_read = 0
        with open(path, 'rb') as f:
            self.footer, self.footer_size = self._read_footer(f)

    def _read_footer(self, f: BinaryIO) -> Tuple[Footer, int]:
        if self.file_size < len(MAGIC) + TRAILER.size:
            raise FormatError(f"{self.path} is too short to be a container file")
        head = f.read(len(MAGIC))
        f.seek(self.file_size - TRAILER.size)
        footer_size, tail = TRAILER.unpack(f.read(TRAILER.size))
        self.bytes_read += len(MAGIC) + TRAILER.size
        if head != MAGIC or tail != MAGIC:
            raise FormatError(f"{self.path} does not carry the container magic")
        start = self.file_size - TRAILER.size - footer_size
        if start < len(MAGIC):
            raise CorruptionError(f"Footer length {footer_size} exceeds the file")
        f.seek(start)
        raw = f.read(footer_size)
        self.bytes_read += len(raw)
        footer = Footer.from_bytes(raw)
        for group in footer.row_groups:
            if group.end_offset > start:
                raise CorruptionError("Row group extends into the footer")
        return footer, footer_size

    @property
    def has_ids(self) -> bool:
        return self.footer.has_ids

    def read_page(self, f: BinaryIO, group: RowGroup, page: Page) -> bytes:
        f.seek(group.body_offset + page.offset)
        stored = f.read(page.stored_size)
        if len(stored) != page.stored_size:
            raise CorruptionError(f"{page.column.name} page is truncated")
        self.bytes_read += len(stored)
        return column_codecs.decompress_page(stored, page.compression, page.uncompressed_size)

    def read_types(self, f: BinaryIO, group: RowGroup) -> np.ndarray:
        chunk = group.chunks[ColumnId.TYPE]
        parts = [column_codecs.decode_type_page(self.read_page(f, group, p), p.value_count) for p in chunk.pages]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)

    def read_coordinates(self, f: BinaryIO, group: RowGroup, column: ColumnId, index: int) -> np.ndarray:
        page = group.chunks[column].pages[index]
        values = fp_delta.decode_coordinate_page(self.read_page(f, group, page), page.value_count)
        _check_stats(values, page.stats, f"{column.name} page {index}")
        return values

    def read_page_group(self, f: BinaryIO, group: RowGroup, index: int,
                        types: np.ndarray) -> List[Tuple[int, Geometry]]:
        """Decode the records held by one page of every column"""
        levels = group.chunks[ColumnId.LEVELS].pages[index]
        reps, defs = column_codecs.decode_levels_page(self.read_page(f, group, levels), levels.value_count)
        xs = self.read_coordinates(f, group, ColumnId.X, index)
        ys = self.read_coordinates(f, group, ColumnId.Y, index)
        first, count = levels.first_record, levels.record_count
        if self.footer.has_ids:
            id_page = group.chunks[ColumnId.ID].pages[index]
            ids = column_codecs.decode_id_page(self.read_page(f, group, id_page), id_page.value_count)
        else:
            ids = np.arange(first, first + count, dtype=np.int64)
        return decode_records(types[first:first + count], reps, defs, xs, ys, ids)

    def read_row_group(self, index: int) -> List[Tuple[int, Geometry]]:
        """All records of one row group with their ids"""
        group = self.footer.row_groups[index]
        base = sum(rg.record_count for rg in self.footer.row_groups[:index])
        out = []
        with open(self.path, 'rb') as f:
            types = self.read_types(f, group)
            for page_index in range(group.page_groups):
                for record_id, g in self.read_page_group(f, group, page_index, types):
                    out.append((record_id if self.footer.has_ids else record_id + base, g))
        return out

    def iter_records(self, with_ids: bool = False) -> Iterator[Any]:
        with open(self.path, 'rb') as f:
            base = 0
            for group in self.footer.row_groups:
                types = self.read_types(f, group)
                for index in range(group.page_groups):
                    for record_id, g in self.read_page_group(f, group, index, types):
                        if not self.footer.has_ids:
                            record_id += base
                        yield (record_id, g) if with_ids else g
                base += group.record_count

    def __iter__(self):
        return self.iter_records()


def decode_records(types: np.ndarray, reps: np.ndarray, defs: np.ndarray, xs: np.ndarray,
                   ys: np.ndarray, ids: np.ndarray) -> List[Tuple[int, Geometry]]:
    starts = np.flatnonzero(reps == REP_RECORD)
    if starts.size != types.size or (reps.size and starts[0] != 0):
        raise CorruptionError(f"Levels describe {starts.size} records, TYPE column {types.size}")
    present = defs == DEF_PRESENT
    if int(present.sum()) != xs.size or xs.size != ys.size:
        raise CorruptionError("Coordinate count does not match the definition levels")
    if ids.size != types.size:
        raise CorruptionError("ID page does not match the record count")
    coord_index = np.concatenate(([0], np.cumsum(present)))
    bounds = np.append(starts, reps.size)
    xl, yl, rl = xs.tolist(), ys.tolist(), reps.tolist()
    out = []
    for r in range(types.size):
        code = int(types[r])
        lo, hi = int(bounds[r]), int(bounds[r + 1])
        clo, chi = int(coord_index[lo]), int(coord_index[hi])
        if code == GeometryType.EMPTY:
            if hi - lo != 1 or chi != clo:
                raise CorruptionError("Empty record must be a single undefined level entry")
            out.append((int(ids[r]), Empty()))
            continue
        if chi - clo != hi - lo:
            raise CorruptionError("Non-empty record contains undefined level entries")
        if code == GeometryType.POINT and hi - lo == 1:
            out.append((int(ids[r]), Point(xl[clo], yl[clo])))
            continue
        parts = []
        for k in range(hi - lo):
            if rl[lo + k] != REP_CONTINUE:
                parts.append([])
            parts[-1].append((xl[clo + k], yl[clo + k]))
        try:
            out.append((int(ids[r]), assemble(code, parts)))
        except GeometryError as e:
            raise CorruptionError(f"Stored record does not reassemble: {e}")
    return out


def read_file(path: str, with_ids: bool = False) -> Iterator[Any]:
    return GeoColumnReader(path).iter_records(with_ids=with_ids)


def prune_pages(footer: Footer, q: BBox) -> Dict[int, List[int]]:
    """Page groups per row group whose x and y ranges both meet the query"""
    xmin, ymin, xmax, ymax = q
    selection: Dict[int, List[int]] = {}
    for g, group in enumerate(footer.row_groups):
        if ColumnId.X not in group.chunks:
            continue
        xs, ys = group.chunks[ColumnId.X], group.chunks[ColumnId.Y]
        if not (xs.stats.overlaps(xmin, xmax) and ys.stats.overlaps(ymin, ymax)):
            continue
        chosen = [i for i, (xp, yp) in enumerate(zip(xs.pages, ys.pages))
                  if xp.value_count and xp.stats.overlaps(xmin, xmax) and yp.stats.overlaps(ymin, ymax)]
        if chosen:
            selection[g] = chosen
    return selection


def range_query(path: str, q: BBox, stats: Optional[QueryStats] = None,
                with_ids: bool = False) -> Iterator[Any]:
    """Records whose bounding box meets the closed rectangle q"""
    if q[0] > q[2] or q[1] > q[3]:
        raise ValueError(f"Query rectangle is inverted: {q}")
    stats = stats if stats is not None else QueryStats()
    reader = GeoColumnReader(path)
    footer = reader.footer
    selection = prune_pages(footer, q)
    stats.row_groups_total = len(footer.row_groups)
    stats.row_groups_skipped = stats.row_groups_total - len(selection)
    stats.pages_total = sum(len(rg.chunks[ColumnId.X].pages) for rg in footer.row_groups
                            if ColumnId.X in rg.chunks)
    stats.pages_selected = sum(len(v) for v in selection.values())
    stats.bytes_read = reader.bytes_read
    logger.debug("Selected %d of %d pages for %s", stats.pages_selected, stats.pages_total, q)

    base = 0
    bases = []
    for group in footer.row_groups:
        bases.append(base)
        base += group.record_count
    with open(path, 'rb') as f:
        for g, indexes in sorted(selection.items()):
            group = footer.row_groups[g]
            types = reader.read_types(f, group)
            for index in indexes:
                for record_id, geom in reader.read_page_group(f, group, index, types):
                    stats.records_scanned += 1
                    stats.bytes_read = reader.bytes_read
                    if mbr_intersects(mbr(geom), q):
                        stats.records_matched += 1
                        if not footer.has_ids:
                            record_id += bases[g]
                        yield (record_id, geom) if with_ids else geom
            stats.bytes_read = reader.bytes_read


def inspect(path: str, histograms: bool = True) -> Dict[str, Any]:
    """Sizes, page statistics, encodings and delta-bit histograms of a file"""
    reader = GeoColumnReader(path)
    footer = reader.footer
    report: Dict[str, Any] = {
        "path": os.path.abspath(path),
        "file_size": reader.file_size,
        "footer_size": reader.footer_size,
        "version": footer.version,
        "created_by": footer.created_by,
        "options": dict(footer.options),
        "record_count": footer.record_count,
        "has_ids": footer.has_ids,
        "bbox": list(footer.bbox()) if footer.bbox() else None,
        "row_groups": [],
        "columns": {},
    }
    totals: Dict[str, Dict[str, int]] = {}
    hist = {ColumnId.X: np.zeros(fp_delta.MAX_WIDTH + 1, dtype=np.int64),
            ColumnId.Y: np.zeros(fp_delta.MAX_WIDTH + 1, dtype=np.int64)}
    header_bytes = 0
    with open(path, 'rb') as f:
        for g, group in enumerate(footer.row_groups):
            header_bytes += ROW_GROUP_HEADER.size + group.meta_size
            entry = {"index": g, "offset": group.offset, "record_count": group.record_count,
                     "header_bytes": ROW_GROUP_HEADER.size + group.meta_size, "body_bytes": group.body_size,
                     "chunks": []}
            for column in sorted(group.chunks):
                chunk = group.chunks[column]
                name = column.name.lower()
                column_total = totals.setdefault(name, {"stored_bytes": 0, "uncompressed_bytes": 0,
                                                        "value_count": 0, "pages": 0})
                column_total["stored_bytes"] += chunk.stored_size
                column_total["uncompressed_bytes"] += chunk.uncompressed_size
                column_total["value_count"] += chunk.value_count
                column_total["pages"] += len(chunk.pages)
                pages = []
                for index, page in enumerate(chunk.pages):
                    pages.append({"offset": group.body_offset + page.offset, "stored_bytes": page.stored_size,
                                  "uncompressed_bytes": page.uncompressed_size, "value_count": page.value_count,
                                  "encoding": page.encoding, "compression": page.compression,
                                  "delta_width": page.delta_width, "first_record": page.first_record,
                                  "record_count": page.record_count, "stats": page.stats.to_dict()})
                    if histograms and column in hist and page.value_count >= 2:
                        try:
                            values = reader.read_coordinates(f, group, column, index)
                        except GeoColumnError as e:
                            raise CorruptionError(f"Row group {g}, {name} page {index}: {e}")
                        hist[column] += fp_delta.DeltaHistogram.from_values(values).counts
                entry["chunks"].append({"column": name, "stored_bytes": chunk.stored_size,
                                        "uncompressed_bytes": chunk.uncompressed_size,
                                        "value_count": chunk.value_count, "stats": chunk.stats.to_dict(),
                                        "pages": pages})
            report["row_groups"].append(entry)
    report["columns"] = totals
    data_bytes = sum(t["stored_bytes"] for t in totals.values())
    report["accounting"] = {"magic_bytes": len(MAGIC), "row_group_header_bytes": header_bytes,
                            "data_bytes": data_bytes, "trailer_bytes": TRAILER.size}
    if histograms:
        report["histograms"] = {}
        for column, counts in hist.items():
            histogram = fp_delta.DeltaHistogram(counts)
            report["histograms"][column.name.lower()] = {
                "exact_bits": counts.tolist(),
                "at_least_bits": histogram.at_least().tolist(),
                "mean_bits": histogram.mean_bits(),
                "deltas": histogram.total,
            }
    return report


def recover_file(path: str, out_path: str) -> Dict[str, Any]:
    """Write a valid file from the complete row groups at the start of a damaged one"""
    size = os.path.getsize(path)
    footer = Footer(created_by=CREATED_BY, options={"recovered": "true"})
    with open(path, 'rb') as f:
        if f.read(len(MAGIC)) != MAGIC:
            raise FormatError(f"{path} does not start with the container magic")
        pos = len(MAGIC)
        while pos + ROW_GROUP_HEADER.size <= size:
            f.seek(pos)
            magic, meta_size, body_size = ROW_GROUP_HEADER.unpack(f.read(ROW_GROUP_HEADER.size))
            end = pos + ROW_GROUP_HEADER.size + meta_size + body_size
            if magic != ROW_GROUP_MAGIC or end > size:
                break
            try:
                group = RowGroup.from_meta(f.read(meta_size), body_size)
            except GeoColumnError:
                break
            if group.offset != pos:
                break
            footer.row_groups.append(group)
            footer.record_count += group.record_count
            footer.has_ids = ColumnId.ID in group.chunks
            pos = end
        f.seek(0)
        prefix = f.read(pos)
    with open(out_path, 'wb') as out:
        out.write(prefix)
        raw = footer.to_bytes()
        out.write(raw)
        out.write(TRAILER.pack(len(raw), MAGIC))
    logger.info("Recovered %d row groups (%d records) from %s", len(footer.row_groups),
                footer.record_count, path)
    return {"row_groups": len(footer.row_groups), "records": footer.record_count, "bytes_kept": pos}
