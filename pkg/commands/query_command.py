import math
import os
import sys

from container import QueryStats, range_query
from errors import GeoColumnError
from geojson_io import write_geojson
from wkt import format_wkt, write_wkt

from .base_command import BaseCommand


def parse_rect(text: str):
    """xmin,ymin,xmax,ymax as four finite floats with xmin <= xmax and ymin <= ymax"""
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"Rectangle must be four comma-separated numbers, got {text!r}")
    if len(values) != 4 or not all(math.isfinite(v) for v in values):
        raise ValueError(f"Rectangle must be four finite numbers, got {text!r}")
    if values[0] > values[2] or values[1] > values[3]:
        raise ValueError(f"Rectangle is inverted: {text!r}")
    return tuple(values)


class QueryCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "query"

    @property
    def description(self) -> str:
        return "Stream the records whose bounding box meets a rectangle, using page statistics to skip pages"

    @property
    def parameters(self) -> dict:
        return {
            "type": "object",
            "properties": {
                "file": {"type": "string", "description": "Container file"},
                "rect": {"type": "string", "description": "Query rectangle xmin,ymin,xmax,ymax"},
                "output": {"type": "string", "description": "Write results here instead of stdout"},
                "output_format": {"type": "string", "enum": ["wkt", "geojson"],
                                  "description": "Result format (default from config)"},
                "with_ids": {"type": "boolean", "description": "Include record ids in the results"},
                "count_only": {"type": "boolean", "description": "Only report counters"},
            },
            "required": ["file"]
        }

    def execute(self, file: str, rect: str = None, output: str = None, output_format: str = None,
                with_ids: bool = False, count_only: bool = False) -> dict:
        if rect is None:
            return {"error": "--rect is required", "usage": True}
        try:
            q = parse_rect(rect)
        except ValueError as e:
            return {"error": str(e), "usage": True}
        if not os.path.isfile(file):
            return {"error": f"File not found: {file}"}
        fmt = output_format or self.config.get("query", {}).get("output_format", "wkt")
        stats = QueryStats()
        try:
            results = range_query(file, q, stats, with_ids=with_ids)
            if count_only:
                count = sum(1 for _ in results)
            else:
                count = _emit(results, output, fmt, with_ids)
        except GeoColumnError as e:
            return {"error": str(e)}
        except OSError as e:
            return {"error": f"Query failed: {e}"}
        return {"file": os.path.abspath(file), "rect": list(q), "matched": count, **stats.to_dict(),
                "file_size": os.path.getsize(file), "results_on_stdout": not output and not count_only,
                "success": True}

    def format_text(self, result: dict) -> str:
        ratio = result["pages_selected"] / result["pages_total"] if result["pages_total"] else 0.0
        return "\n".join([
            f"Matched records: {result['matched']} (scanned {result['records_scanned']})",
            f"Pages selected: {result['pages_selected']}/{result['pages_total']} ({ratio:.4f})",
            f"Row groups skipped: {result['row_groups_skipped']}/{result['row_groups_total']}",
            f"Bytes read: {result['bytes_read']} of {result['file_size']}",
        ])


def _emit(results, output, fmt: str, with_ids: bool) -> int:
    target = output or sys.stdout
    if fmt == "geojson":
        return write_geojson(results, target, ids=with_ids)
    if not with_ids:
        return write_wkt(results, target)
    handle = open(output, 'w', encoding='utf-8') if output else sys.stdout
    count = 0
    try:
        for record_id, g in results:
            handle.write(f"{record_id}\t{format_wkt(g)}\n")
            count += 1
    finally:
        if output:
            handle.close()
    return count
