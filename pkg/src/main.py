"""Main entry point for planecover."""

import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

# Load environment variables from .env file (for local development)
load_dotenv()

from src.config import Config  # noqa: E402
from src.cli import build_parser, run  # noqa: E402


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point.

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    logger = logging.getLogger(__name__)
    args = build_parser().parse_args(argv)

    errors = Config.validate()
    if errors:
        logging.basicConfig(level=logging.ERROR)
        logger.error("Configuration validation failed:")
        for error in errors:
            logger.error(f"  - {error}")
        return 1

    configure_logging(Config.LOG_LEVEL)

    try:
        return run(args)
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except KeyboardInterrupt:
        logger.info("Received shutdown signal")
        return 0
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
