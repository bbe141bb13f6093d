"""Command line front end: bound, simulate, verify, exponent, report."""

import argparse
import logging
import os
import sys
import traceback
from typing import Optional, Sequence

from tailbound.configs.experiment_config import ExperimentConfig
from tailbound.converters.report_writer import ReportWriter
from tailbound.data_types.exceptions import TailBoundException, ConfigException, DontPrintStackTrace, ExitCode, \
    BoundViolationException, ValidationException
from tailbound.middleware import get_middleware, set_middleware, PythonLoggingWrapper
from tailbound.python_interface.python_interface import TailBoundWrapper
from tailbound.utils.time_collector import time_collector

threads_env_var = 'TAILBOUND_THREADS'
commands = ('bound', 'simulate', 'verify', 'exponent', 'report')


def _add_common_arguments(cmd: argparse.ArgumentParser, needs_config: bool = True):
    cmd.add_argument('--config', type=str, required=needs_config, default=None,
                     help='JSON experiment configuration')
    cmd.add_argument('--out', type=str, default='out', help='output directory')
    cmd.add_argument('--seed', type=int, default=None, help='overrides sim.seed')
    cmd.add_argument('--threads', type=int, default=None,
                     help=f'worker threads, falls back to ${threads_env_var}, then 1')
    cmd.add_argument('--verbose', action='store_true')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='tailbound',
                                     description='Modified Bernstein tail bounds and their Monte Carlo validation.')
    sub = parser.add_subparsers(dest='command', required=True)
    _add_common_arguments(sub.add_parser('bound', help='compute a bound curve'))
    _add_common_arguments(sub.add_parser('simulate', help='simulate the normalized sum and its empirical tail'))
    _add_common_arguments(sub.add_parser('verify', help='check a bound against simulation with a DKW band'))
    _add_common_arguments(sub.add_parser('exponent', help='estimate the tail exponent of a Weibull-type sum'))
    _add_common_arguments(sub.add_parser('report', help='summarize the JSON reports of an output directory'),
                          needs_config=False)
    return parser


def resolve_threads(threads: Optional[int]) -> int:
    if threads is not None:
        value = threads
    else:
        raw = os.environ.get(threads_env_var)
        if raw is None or raw == '':
            return 1
        try:
            value = int(raw)
        except ValueError:
            raise ConfigException(f'{threads_env_var} must be an integer, got {raw!r}')
    if value < 1:
        raise ConfigException(f'threads must be positive, got {value}')
    return value


def run(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_file(args.config) if args.config else None
    wrapper = TailBoundWrapper(config, args.out, threads=resolve_threads(args.threads), seed=args.seed)
    if args.command == 'bound':
        _, exit_code = wrapper.bound()
    elif args.command == 'simulate':
        _, exit_code = wrapper.simulate()
    elif args.command == 'verify':
        _, _, exit_code = wrapper.verify()
    elif args.command == 'exponent':
        _, exit_code = wrapper.exponent()
    else:
        df, exit_code = wrapper.report()
        if len(df) > 0:
            print(df.to_string(index=False))
        return exit_code
    if exit_code == ExitCode.BOUND_VIOLATION:
        raise BoundViolationException(f'{args.command}: see the reports in {args.out}')
    ReportWriter(args.out).clear_error()
    return exit_code


def _record_error(out_dir: str, e: TailBoundException):
    try:
        ReportWriter(out_dir).write_error(e)
    except OSError as os_error:
        get_middleware().logwarn(f'cannot record the error in {out_dir}: {os_error}')


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format='%(levelname)s %(message)s')
    set_middleware(PythonLoggingWrapper(context=args.command))
    try:
        exit_code = run(args)
    except TailBoundException as e:
        if isinstance(e, DontPrintStackTrace):
            get_middleware().logerr(f'{e.__class__.__name__}: {e.msg}')
        else:
            traceback.print_exc()
            get_middleware().logfatal(f'{e.__class__.__name__}: {e.msg}')
        _record_error(args.out, e)
        return e.error_code
    except Exception as e:
        # 1 is reserved for violated bounds
        traceback.print_exc()
        get_middleware().logfatal(f'unexpected {e.__class__.__name__}: {e}')
        _record_error(args.out, ValidationException(f'{e.__class__.__name__}: {e}'))
        return ExitCode.VALIDATION_ERROR
    if args.verbose:
        time_collector.pretty_print()
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
