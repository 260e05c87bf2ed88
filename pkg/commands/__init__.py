import importlib
import logging
import os
from typing import Dict

from .base_command import BaseCommand

logger = logging.getLogger(__name__)


def discover_commands(config: dict = None, silent: bool = False) -> Dict[str, BaseCommand]:
    """Load every *_command.py module in this package and instantiate its commands"""
    commands = {}
    commands_dir = os.path.dirname(__file__)

    for filename in sorted(os.listdir(commands_dir)):
        if filename.endswith('_command.py') and filename != 'base_command.py':
            module_name = filename[:-3]
            try:
                module = importlib.import_module(f'.{module_name}', package='commands')
                for item_name in dir(module):
                    item = getattr(module, item_name)
                    if isinstance(item, type) and issubclass(item, BaseCommand) and item is not BaseCommand:
                        command = item(config or {})
                        commands[command.name] = command
                        if not silent:
                            print(f"Loaded command: {command.name}")
            except ImportError as e:
                logger.warning("Could not load commands from %s: %s", filename, e)
                if not silent:
                    print(f"Warning: Could not load commands from {filename}: {e}")

    return commands
