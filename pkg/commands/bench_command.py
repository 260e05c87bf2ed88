import itertools
import logging
import os
import tempfile
import time

from config import COMPRESSIONS, COORDINATE_ENCODINGS, SORT_CURVES, WriteOptions
from container import GeoColumnReader, prune_pages, read_file, write_file
from errors import GeoColumnError
from geometry import mbr
from metadata import ColumnId
from synthetic import SyntheticSpec, generate_synthetic, random_rects, shuffled

from .base_command import BaseCommand
from .io_formats import detect_format, read_records

logger = logging.getLogger(__name__)


def _union_bbox(records):
    boxes = [b for b in (mbr(g) for g in records) if b is not None]
    if not boxes:
        return None
    return (min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes))


class BenchCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "bench"

    @property
    def description(self) -> str:
        return "Measure size, time and page pruning over encoding x sort x compression"

    @property
    def parameters(self) -> dict:
        return {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Benchmark this file instead of synthetic data"},
                "count": {"type": "integer", "description": "Synthetic record count"},
                "clusters": {"type": "integer", "description": "Synthetic cluster count"},
                "stddev": {"type": "number", "description": "Synthetic cluster standard deviation"},
                "resolution": {"type": "number", "description": "Snap synthetic coordinates to this grid"},
                "seed": {"type": "integer", "description": "Random seed for data and query rectangles"},
                "page_size": {"type": "integer", "description": "Target page size in bytes"},
                "repeat": {"type": "integer", "description": "Timed runs per configuration (fastest kept)"},
                "queries": {"type": "integer", "description": "Random query rectangles for pruning ratios"},
                "query_area": {"type": "number", "description": "Area of each rectangle as a fraction of the data"},
                "shuffle": {"type": "boolean", "description": "Shuffle records before writing"},
            },
            "required": []
        }

    def execute(self, input: str = None, count: int = None, clusters: int = None, stddev: float = None,
                resolution: float = None, seed: int = None, page_size: int = None, repeat: int = None,
                queries: int = None, query_area: float = None, shuffle: bool = False) -> dict:
        bench = self.config.get("bench", {})
        page_size = page_size or bench.get("page_size", 65536)
        repeat = max(1, repeat or bench.get("repeat", 1))
        queries = bench.get("queries", 20) if queries is None else queries
        query_area = query_area or bench.get("query_area", 0.0001)
        shuffle = shuffle or bench.get("shuffle", False)
        try:
            if input:
                if not os.path.isfile(input):
                    return {"error": f"File not found: {input}"}
                records = list(read_records(input, detect_format(input)))
                source = os.path.abspath(input)
            else:
                spec = SyntheticSpec.from_config(self.config, count=count, clusters=clusters, stddev=stddev,
                                                 resolution=resolution, seed=seed)
                records = list(generate_synthetic(spec))
                source = f"synthetic(count={spec.count}, clusters={spec.clusters}, stddev={spec.stddev}, " \
                         f"resolution={spec.resolution}, seed={spec.seed})"
            seed = seed if seed is not None else self.config.get("synthetic", {}).get("seed", 0)
            if shuffle:
                records = shuffled(records, seed)
            domain = _union_bbox(records)
            rects = random_rects(domain, queries, query_area, seed) if domain and queries > 0 else []
            rows = self._run_matrix(records, page_size, repeat, rects)
        except GeoColumnError as e:
            return {"error": str(e)}
        except OSError as e:
            return {"error": f"Benchmark failed: {e}"}
        return {"source": source, "records": len(records), "page_size": page_size, "repeat": repeat,
                "queries": len(rects), "query_area": query_area, "shuffled": shuffle, "rows": rows,
                "timings_note": "wall-clock seconds are informational", "success": True}

    def _run_matrix(self, records, page_size: int, repeat: int, rects) -> list:
        rows = []
        with tempfile.TemporaryDirectory() as tmp:
            for encoding, sort, compression in itertools.product(COORDINATE_ENCODINGS, SORT_CURVES,
                                                                 COMPRESSIONS):
                options = WriteOptions.from_config(self.config, page_size=page_size, sort=sort,
                                                   compression=compression, coordinate_encoding=encoding)
                path = os.path.join(tmp, f"{encoding}-{sort}-{compression}.spqf")
                write_seconds, read_seconds = [], []
                for _ in range(repeat):
                    start = time.perf_counter()
                    summary = write_file(records, path, options)
                    write_seconds.append(time.perf_counter() - start)
                    start = time.perf_counter()
                    for _ in read_file(path):
                        pass
                    read_seconds.append(time.perf_counter() - start)
                row = {"encoding": encoding, "sort": sort, "compression": compression,
                       "file_bytes": summary.bytes_written,
                       "coordinate_bytes": summary.column_bytes.get("x", 0) + summary.column_bytes.get("y", 0),
                       "write_seconds": min(write_seconds), "read_seconds": min(read_seconds)}
                if rects:
                    footer = GeoColumnReader(path).footer
                    total = sum(len(rg.chunks[ColumnId.X].pages) for rg in footer.row_groups
                                if ColumnId.X in rg.chunks)
                    ratios = [sum(len(v) for v in prune_pages(footer, q).values()) / total if total else 0.0
                              for q in rects]
                    row["mean_pages_ratio"] = sum(ratios) / len(ratios)
                logger.info("Bench %s/%s/%s: %d bytes", encoding, sort, compression, row["file_bytes"])
                rows.append(row)
        raw_times = {(r["sort"], r["compression"]): r["write_seconds"] for r in rows if r["encoding"] == "raw"}
        raw_sizes = {(r["sort"], r["compression"]): r["coordinate_bytes"] for r in rows if r["encoding"] == "raw"}
        for row in rows:
            key = (row["sort"], row["compression"])
            if row["encoding"] == "fp_delta" and raw_times.get(key):
                row["write_overhead"] = row["write_seconds"] / raw_times[key] - 1.0
            if raw_sizes.get(key):
                row["coordinate_ratio"] = row["coordinate_bytes"] / raw_sizes[key]
        return rows

    def format_text(self, result: dict) -> str:
        lines = [f"Source: {result['source']}",
                 f"Records: {result['records']}, page size {result['page_size']}, "
                 f"{result['queries']} queries of area {result['query_area']}",
                 "",
                 f"{'encoding':<9}{'sort':<8}{'compr':<8}{'file':>12}{'coords':>12}{'vs raw':>8}"
                 f"{'write s':>9}{'read s':>9}{'overhead':>10}{'pages':>8}"]
        for row in result["rows"]:
            overhead = f"{row['write_overhead']:+.0%}" if "write_overhead" in row else "-"
            pruning = f"{row['mean_pages_ratio']:.4f}" if "mean_pages_ratio" in row else "-"
            lines.append(f"{row['encoding']:<9}{row['sort']:<8}{row['compression']:<8}{row['file_bytes']:>12}"
                         f"{row['coordinate_bytes']:>12}{row.get('coordinate_ratio', 1.0):>8.3f}"
                         f"{row['write_seconds']:>9.3f}{row['read_seconds']:>9.3f}{overhead:>10}{pruning:>8}")
        lines.append("")
        lines.append("Times are wall-clock and informational only.")
        return "\n".join(lines)
