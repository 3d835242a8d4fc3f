"""Command-line front end."""
from src.cli.output import emit, to_csv, to_json
from src.cli.parser import Command, OutputFormat, RunConfig, build_parser, parse_args

__all__ = [
    "emit",
    "to_csv",
    "to_json",
    "Command",
    "OutputFormat",
    "RunConfig",
    "build_parser",
    "parse_args",
]
