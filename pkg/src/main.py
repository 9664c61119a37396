#!/usr/bin/env python3
"""
Moment Lab v1.0 - Main Entry Point

Control flow:
- configuration from defaults, .env and MOMENT_LAB_* variables
- logging configured once, here
- Workbench booted, then the CLI executes the command
"""

import logging
import os
import sys

# Add src directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.config import load_config
from core.errors import MomentLabError
from core.workbench import Workbench
from interfaces.cli import CLI


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv=None) -> int:
    """
    Main entry point for Moment Lab

    Returns:
        Process exit code (0 ok, 1 reproduce mismatch, 2 usage/input, 3 numeric)
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = load_config()
    except MomentLabError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    configure_logging('INFO' if '--verbose' in argv else config.log_level)

    workbench = Workbench(config)
    workbench.boot()
    cli = CLI(workbench)
    result = cli.execute(argv)
    if result:
        stream = sys.stdout if cli.last_exit_code in (0, 1) else sys.stderr
        print(result, file=stream)
    workbench.shutdown()
    return cli.last_exit_code


if __name__ == "__main__":
    sys.exit(main())
