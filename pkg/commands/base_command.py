import argparse
import json
import math
from abc import ABC, abstractmethod
from typing import Any, Dict

_ARG_TYPES = {"string": str, "integer": int, "number": float}


class BaseCommand(ABC):
    """Base class for all CLI subcommands"""

    def __init__(self, config: dict):
        self.config = config

    @property
    @abstractmethod
    def name(self) -> str:
        """Subcommand name"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """One-line help text"""
        pass

    @property
    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Parameter schema; required properties become positional arguments"""
        pass

    @abstractmethod
    def execute(self, **kwargs) -> Dict[str, Any]:
        """Run the command; returns a dict with "success": True or an "error" message"""
        pass

    def add_arguments(self, parser: argparse.ArgumentParser):
        schema = self.parameters
        required = set(schema.get("required", []))
        for name, spec in schema.get("properties", {}).items():
            kwargs: Dict[str, Any] = {"help": spec.get("description")}
            if spec.get("type") == "boolean":
                parser.add_argument("--" + name.replace("_", "-"), dest=name, action="store_true", **kwargs)
                continue
            kwargs["type"] = _ARG_TYPES.get(spec.get("type"), str)
            if "enum" in spec:
                kwargs["choices"] = spec["enum"]
            if name in required:
                parser.add_argument(name, **kwargs)
            else:
                flag = spec.get("flag", "--" + name.replace("_", "-"))
                parser.add_argument(flag, dest=name, default=spec.get("default"), **kwargs)

    def format_text(self, result: Dict[str, Any]) -> str:
        return "\n".join(f"{key}: {value}" for key, value in result.items() if key != "success")


def json_safe(value: Any) -> Any:
    """Replace non-finite floats so the value serializes as strict JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def to_json(result: Dict[str, Any]) -> str:
    return json.dumps(json_safe({k: v for k, v in result.items() if k != "success"}), indent=2)
