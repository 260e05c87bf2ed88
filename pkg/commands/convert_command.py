import logging
import os

from config import COMPRESSIONS, COORDINATE_ENCODINGS, SORT_CURVES, WriteOptions
from errors import GeoColumnError

from .base_command import BaseCommand
from .io_formats import FORMATS, detect_format, read_records, write_records

logger = logging.getLogger(__name__)


class ConvertCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "convert"

    @property
    def description(self) -> str:
        return "Convert between GeoJSON, WKT and the columnar container (.spqf)"

    @property
    def parameters(self) -> dict:
        return {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Input file"},
                "output": {"type": "string", "description": "Output file"},
                "from_format": {"type": "string", "enum": list(FORMATS), "flag": "--from",
                                "description": "Input format (default: from extension or content)"},
                "to_format": {"type": "string", "enum": list(FORMATS), "flag": "--to",
                              "description": "Output format (default: from extension)"},
                "sort": {"type": "string", "enum": list(SORT_CURVES),
                         "description": "Space-filling curve to sort by before writing a container"},
                "batch_size": {"type": "integer", "description": "Records per sort batch and row group"},
                "page_size": {"type": "integer", "description": "Target uncompressed page size in bytes"},
                "compression": {"type": "string", "enum": list(COMPRESSIONS),
                                "description": "Per-page compression"},
                "coordinate_encoding": {"type": "string", "enum": list(COORDINATE_ENCODINGS),
                                        "description": "Coordinate column encoding"},
                "on_invalid": {"type": "string", "enum": ["abort", "skip"],
                               "description": "What to do with structurally invalid geometries"},
                "with_ids": {"type": "boolean", "description": "Carry record ids through the conversion"},
            },
            "required": ["input", "output"]
        }

    def execute(self, input: str, output: str, from_format: str = None, to_format: str = None,
                sort: str = None, batch_size: int = None, page_size: int = None, compression: str = None,
                coordinate_encoding: str = None, on_invalid: str = None, with_ids: bool = False) -> dict:
        try:
            if not os.path.isfile(input):
                return {"error": f"File not found: {input}"}
            source = detect_format(input, from_format)
            target = detect_format(output, to_format, sniff=False)
            options = WriteOptions.from_config(
                self.config, sort=sort, batch_size=batch_size, page_size=page_size, compression=compression,
                coordinate_encoding=coordinate_encoding, on_invalid=on_invalid, with_ids=with_ids or None)
            logger.info("Converting %s (%s) to %s (%s)", input, source, output, target)
            records = read_records(input, source, with_ids=with_ids)
            summary = write_records(records, output, target, options, with_ids=with_ids)
            return {"input": os.path.abspath(input), "from": source, "to": target, **summary, "success": True}
        except GeoColumnError as e:
            return {"error": str(e)}
        except OSError as e:
            return {"error": f"Conversion failed: {e}"}

    def format_text(self, result: dict) -> str:
        lines = [f"Converted {result['input']} ({result['from']}) -> {result['path']} ({result['to']})",
                 f"Records: {result['records']}"]
        if result.get("skipped"):
            lines.append(f"Skipped invalid records: {result['skipped']}")
        if "bytes_written" in result:
            lines.append(f"Bytes written: {result['bytes_written']}")
        for column, size in result.get("column_bytes", {}).items():
            lines.append(f"  {column:<7} {size:>12} bytes")
        return "\n".join(lines)
