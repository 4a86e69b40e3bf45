"""Command line entry point: `rumorsim <command> ...`."""
import argparse
import logging
import sys

from rumorsim.config import parse_overrides
from rumorsim.errors import RumorsimError
from rumorsim.rumorsim import Rumorsim

logger = logging.getLogger('rumorsim')

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for I/O errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f'{self.prog}: error: {message}')


def build_parser():
    parser = ArgumentParser(prog='rumorsim', description='Similarity-gated rumor diffusion on social graphs.')
    parser.add_argument('-v', '--verbose', action='store_true', help='log debug records')
    parser.add_argument('-q', '--quiet', action='store_true', help='log warnings and errors only')

    commands = parser.add_subparsers(dest='command', metavar='command', parser_class=ArgumentParser)
    commands.required = True

    for name, help_text in (
        ('simulate', 'run the configured trials and write trace.csv, curve.csv and summary.json'),
        ('evaluate', 'score the gated diffusion of each configured metric against the labels'),
        ('similarity', 'write the pairwise similarity table of every edge'),
        ('validate', 'check the dataset for missing profiles and isolated nodes'),
    ):
        command = commands.add_parser(name, help=help_text)
        command.add_argument('config', help='key = value config file')
        _add_overrides(command)

    export = commands.add_parser('export', help='render one DOT frame per step of a recorded trace')
    export.add_argument('trace', help='trace.csv written by simulate')
    export.add_argument('out_dir', help='directory receiving the frames')
    export.add_argument('--config', help='config used for the run (defaults to the summary.json next to the trace)')
    export.add_argument('--trial', type=int, default=0, help='trial to render (default: 0)')
    _add_overrides(export)

    return parser


def _add_overrides(command):
    command.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                         help='override a config key (repeatable)')
    command.add_argument('--output-dir', help='write outputs here instead of output_dir')


def configure_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)


def _dispatch(args):
    overrides = parse_overrides(args.overrides)
    if args.output_dir:
        overrides['output_dir'] = args.output_dir

    if args.command == 'export':
        project = Rumorsim.for_trace(args.trace, args.config, overrides)
        written = project.export(args.trace, args.out_dir, args.trial)
    else:
        project = Rumorsim.from_config_file(args.config, overrides)
        result = getattr(project, args.command)()
        written = result[1] if args.command == 'validate' else result

    for path in written:
        logger.debug('output %s', path)
    logger.info('%s: wrote %d file(s)', args.command, len(written))


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as e:
        # --help
        return e.code or EXIT_OK

    configure_logging(args.verbose, args.quiet)
    try:
        _dispatch(args)
    except RumorsimError as e:
        logger.error('%s', e)
        return EXIT_CONFIG
    except OSError as e:
        logger.error('%s', e)
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
