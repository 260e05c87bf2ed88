import argparse
import sys

from commands import discover_commands
from commands.base_command import to_json
from config import configure_logging, load_config
from errors import ConfigError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def build_parser(commands: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geocolumn",
                                     description="Columnar storage for geometries with FP-delta coordinates")
    parser.add_argument("--config", help="Path to a config.yaml (default: the one next to main.py)")
    parser.add_argument("--format", dest="report_format", choices=["text", "json"], default="text",
                        help="Report format")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for name in sorted(commands):
        command = commands[name]
        sub = subparsers.add_parser(name, help=command.description, description=command.description)
        command.add_arguments(sub)
    return parser


def _config_path(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def main(argv=None) -> int:
    """Entry point; returns the process exit code"""
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = load_config(_config_path(argv))
        configure_logging(config)
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    commands = discover_commands(config, silent=True)
    parser = build_parser(commands)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    command = commands[args.command]
    kwargs = {k: v for k, v in vars(args).items() if k in command.parameters["properties"]}
    result = command.execute(**kwargs)

    if not result.get("success"):
        print(f"Error: {result.get('error', 'unknown failure')}", file=sys.stderr)
        return EXIT_USAGE if result.get("usage") else EXIT_ERROR

    # query results may already occupy stdout
    stream = sys.stderr if result.pop("results_on_stdout", False) else sys.stdout
    if args.report_format == "json":
        print(to_json(result), file=stream)
    else:
        print(command.format_text(result), file=stream)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
