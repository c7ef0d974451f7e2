"""
Command-line entry point: dipolar-eit <subcommand> [options].

Exit codes: 0 on success, 1 on usage or validation errors, 2 when the
solver aborts.
"""
import argparse
import os
import sys

from dipolar_eit import create_app
from dipolar_eit.commands import RunContext
from dipolar_eit.errors import DipolarEitError, SolverAbort
from dipolar_eit.services.presets import preset_names


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage errors instead of exiting"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value} is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return number


def common_arguments():
    parser = ArgumentParser(add_help=False)
    parser.add_argument('--scenario', default=None, help='Scenario JSON file')
    parser.add_argument('--preset', choices=preset_names(), default=None, help='Reference parameter set')
    parser.add_argument('--out', default=None, help='Output directory (default $DIPOLAR_EIT_OUTPUT_DIR or ./output)')
    parser.add_argument('--grid-nz', type=_positive_int, default=None, help='Number of z intervals')
    parser.add_argument('--grid-nt', type=_positive_int, default=None, help='Number of time steps')
    parser.add_argument('--stride', type=_positive_int, default=None, help='Record every n-th time step')
    parser.add_argument('--threads', type=_positive_int, default=None, help='Worker threads for sweeps')
    return parser


def build_parser(app):
    parser = ArgumentParser(
        prog='dipolar-eit',
        description='Single-photon EIT propagation through dipole-dipole coupled atomic clouds'
    )
    subparsers = parser.add_subparsers(dest='command', metavar='{' + ','.join(app.commands) + '}',
                                       parser_class=ArgumentParser)
    parents = [common_arguments()]
    for command in app.commands.values():
        command.add_parser(subparsers, parents)
    return parser


def run(argv=None, app=None):
    """
    Parse arguments, run one subcommand and write its outputs.

    Returns:
        Process exit code
    """
    if app is None:
        app = create_app(os.getenv('DIPOLAR_EIT_ENV', 'development'))
    parser = build_parser(app)
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"dipolar-eit: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0

    if args.command is None:
        parser.print_usage(sys.stderr)
        print("dipolar-eit: error: a subcommand is required", file=sys.stderr)
        return 1

    command = app.commands[args.command]
    try:
        context = RunContext.open(app, command, args)
        command.run(context)
        context.finish()
    except SolverAbort as e:
        app.logger.error(f"{command.name} aborted: {e} (step {e.step}, t={e.time})")
        print(f"dipolar-eit: solver aborted: {e}", file=sys.stderr)
        return e.exit_code
    except DipolarEitError as e:
        app.logger.warning(f"{command.name} failed: {e}")
        print(f"dipolar-eit: error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
