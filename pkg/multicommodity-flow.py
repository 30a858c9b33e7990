#!/usr/bin/env python3
"""multicommodity-flow entrypoint (thin wrapper).

The implementation lives in the `mcflow` package; this script is the CLI and
the module test harnesses load by path.

It also re-exports the symbols the tests in this repository reach for.
"""

from mcflow.cli import main, run
from mcflow.config import build_arg_parser, config_defaults_from, resolved_config_dict
from mcflow.constants import VERSION
from mcflow.document import load_document, parse_document, parse_network, serialize_document
from mcflow.logging import JsonLogger


__all__ = [
    "build_arg_parser",
    "config_defaults_from",
    "resolved_config_dict",
    "main",
    "run",
    "VERSION",
    "JsonLogger",
    "load_document",
    "parse_document",
    "parse_network",
    "serialize_document",
]


if __name__ == "__main__":
    raise SystemExit(main())
