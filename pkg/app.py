"""Command-line entry point"""
import argparse
import logging
import sys
from config.config import get_config
from commands import compare, heatmap, solve, train
from utils.errors import AssignmentError, InfeasibleProblemError, OutputError, ValidationError

# Get configuration
config = get_config()
logger = logging.getLogger(__name__)

COMMANDS = (solve, train, compare, heatmap)
HANDLED_ERRORS = (ValidationError, AssignmentError, InfeasibleProblemError, OutputError)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='app.py',
        description='Downlink user-to-AP allocation for a VCSEL optical wireless network',
    )
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    # Register commands
    for command in COMMANDS:
        command.register(subparsers)

    return parser


def configure_logging():
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def main(argv=None):
    """
    Parse arguments, run the command and map errors to exit codes

    Returns:
        0 on success, the error's exit_code for known failures, 1 otherwise
    """
    args = build_parser().parse_args(argv)
    configure_logging()

    try:
        return args.handler(args)
    except HANDLED_ERRORS as e:
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure in %s", args.command)
        print(f"error: {str(e)}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
