import os

from container import recover_file
from errors import GeoColumnError

from .base_command import BaseCommand


class RecoverCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "recover"

    @property
    def description(self) -> str:
        return "Rebuild a footer for a container whose write was cut short"

    @property
    def parameters(self) -> dict:
        return {
            "type": "object",
            "properties": {
                "file": {"type": "string", "description": "Damaged container file"},
                "output": {"type": "string", "description": "Where to write the recovered file"},
            },
            "required": ["file", "output"]
        }

    def execute(self, file: str, output: str) -> dict:
        if not os.path.isfile(file):
            return {"error": f"File not found: {file}"}
        if os.path.abspath(file) == os.path.abspath(output):
            return {"error": "Output must differ from the damaged input"}
        try:
            summary = recover_file(file, output)
        except GeoColumnError as e:
            return {"error": str(e)}
        except OSError as e:
            return {"error": f"Recovery failed: {e}"}
        return {"input": os.path.abspath(file), "output": os.path.abspath(output), **summary, "success": True}

    def format_text(self, result: dict) -> str:
        return (f"Recovered {result['records']} records in {result['row_groups']} row groups "
                f"({result['bytes_kept']} bytes kept) into {result['output']}")
