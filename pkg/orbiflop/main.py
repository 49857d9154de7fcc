"""Entry point: ``python -m orbiflop.main <command> [flags]``."""

import logging
import sys
from typing import List, Optional

from .cli.commands import run
from .config import get_settings


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr; stdout carries only the report."""
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
    )


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
