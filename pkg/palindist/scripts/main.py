"""``palindist`` command line entry point."""
import sys
import argparse

from palindist.utils.errors import PreconditionError, ResourceCapError, UsageError
from palindist.utils.config_utils import __version__
from palindist.scripts.commands import COMMANDS, VERIFY_COMMANDS

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_RESOURCE_CAP = 3


class _Parser(argparse.ArgumentParser):
    """Raises :class:`UsageError` instead of exiting on bad flags."""

    def error(self, message):
        raise UsageError(f"ERROR: {message}\n{self.format_usage().rstrip()}")


def _add_leaf(subparsers, name: str, entry) -> None:
    config_cls, handler, description = entry
    sub = subparsers.add_parser(name, help=description, description=config_cls.__doc__, allow_abbrev=False)
    config_cls.add_arguments(sub)
    sub.set_defaults(config_cls=config_cls, handler=handler)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="palindist",
        description="Distribution of palindromes in residue classes, their exponential sums and prime palindromes.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", "-v", action="version", version=f"palindist version {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, entry in COMMANDS.items():
        _add_leaf(subparsers, name, entry)
    verify = subparsers.add_parser("verify", help="Check one of the bounds numerically", allow_abbrev=False)
    verify_sub = verify.add_subparsers(dest="bound", metavar="BOUND", required=True)
    for name, entry in VERIFY_COMMANDS.items():
        _add_leaf(verify_sub, name, entry)
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and write its report; returns the exit code."""
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exit_:
        # --help and --version
        return int(exit_.code or 0)

    try:
        config = namespace.config_cls.from_namespace(namespace).get_checked_and_derived_config()
        config.describe()
        report = namespace.handler(config)
        report.write(config.format, config.output or None)
    except PreconditionError as err:
        print(err, file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceCapError as err:
        print(err, file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except ValueError as err:
        message = str(err)
        print(message if message.startswith("ERROR") else f"ERROR: {message}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
