#!/usr/bin/env python3
"""
ffzeta
Zeta functions of function fields over finite fields

Main entry point for the command-line tool.
"""
import sys
from typing import List, Optional

from loguru import logger
from rich.console import Console
from rich.panel import Panel

from src.config import settings
from src.cli.output import emit, to_json
from src.cli.parser import parse_args
from src.errors import FFZetaError
from src.orchestrator import EXIT_FAILURE, exit_code_for, run

console = Console(stderr=True)


def setup_logging():
    """Configure logging - stderr always, a rotating file when FFZETA_LOG_FILE is set."""
    # Remove default handler
    logger.remove()

    logger.add(
        sys.stderr,
        level=settings.log_level,
        format="{time:HH:mm:ss} | {level: <8} | {message}",
    )
    if settings.log_file:
        logger.add(
            settings.log_file,
            rotation="1 day",
            retention="7 days",
            level="INFO",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
        )
    logger.debug("Logging configured")


def _show_error(title: str, message: str) -> None:
    if console.is_terminal:
        console.print(Panel(message, title=title, border_style="red"))


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    setup_logging()

    try:
        config = parse_args(argv)
    except FFZetaError as e:
        _show_error(e.code, str(e))
        emit(to_json(e.to_dict()))
        return exit_code_for(e)

    try:
        return run(config)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        _show_error("INTERNAL_ERROR", str(e))
        emit(to_json({"error": "INTERNAL_ERROR", "message": str(e)}))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
