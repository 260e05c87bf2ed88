import os

from container import inspect
from errors import GeoColumnError

from .base_command import BaseCommand


class InspectCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "inspect"

    @property
    def description(self) -> str:
        return "Report sizes, page statistics, encodings and delta-bit histograms of a container file"

    @property
    def parameters(self) -> dict:
        return {
            "type": "object",
            "properties": {
                "file": {"type": "string", "description": "Container file"},
                "no_histograms": {"type": "boolean", "description": "Skip decoding pages for histograms"},
                "pages": {"type": "boolean", "description": "List every page in the text report"},
            },
            "required": ["file"]
        }

    def execute(self, file: str, no_histograms: bool = False, pages: bool = False) -> dict:
        if not os.path.isfile(file):
            return {"error": f"File not found: {file}"}
        try:
            report = inspect(file, histograms=not no_histograms)
        except GeoColumnError as e:
            return {"error": f"{file}: {e}"}
        except OSError as e:
            return {"error": f"Failed to read {file}: {e}"}
        self._list_pages = pages
        return {**report, "success": True}

    def format_text(self, result: dict) -> str:
        lines = [
            f"File: {result['path']} ({result['file_size']} bytes, footer {result['footer_size']} bytes)",
            f"Format version {result['version']}, written by {result['created_by']}",
            f"Records: {result['record_count']} in {len(result['row_groups'])} row groups"
            + (" (with ids)" if result['has_ids'] else ""),
            f"Bounding box: {result['bbox']}",
            "Options: " + ", ".join(f"{k}={v}" for k, v in sorted(result['options'].items())),
            "",
            f"{'column':<8}{'pages':>8}{'values':>12}{'stored':>14}{'uncompressed':>14}",
        ]
        for column, totals in result["columns"].items():
            lines.append(f"{column:<8}{totals['pages']:>8}{totals['value_count']:>12}"
                         f"{totals['stored_bytes']:>14}{totals['uncompressed_bytes']:>14}")
        if getattr(self, "_list_pages", False):
            for group in result["row_groups"]:
                lines.append("")
                lines.append(f"Row group {group['index']} @ {group['offset']}: {group['record_count']} records")
                for chunk in group["chunks"]:
                    for i, page in enumerate(chunk["pages"]):
                        stats = page["stats"]
                        lines.append(f"  {chunk['column']:<7}#{i:<4} {page['stored_bytes']:>10}B "
                                     f"enc={page['encoding']} n={page['delta_width']} "
                                     f"range=[{stats['min']}, {stats['max']}] nulls={stats['null_count']}")
        for column, hist in result.get("histograms", {}).items():
            lines.append("")
            lines.append(f"{column} deltas: {hist['deltas']}, mean significant bits {hist['mean_bits']:.2f}")
            lines.append("  bits   exactly   at least")
            for bits, (exact, at_least) in enumerate(zip(hist["exact_bits"], hist["at_least_bits"])):
                if exact:
                    lines.append(f"  {bits:>4} {exact:>9} {at_least:>10}")
        return "\n".join(lines)
