"""
Command-line Application - Main Entry Point

    python main.py thresholds --config configs/fig1.json
    python main.py simulate   --config configs/fig1.json --seed 42 --svg
    python main.py ensemble   --config configs/fig2.json --paths 100 --svg
    python main.py ode        --config configs/fig1.json
    python main.py verify

Exit codes: 0 ok, 1 verify failure, 2 invalid config, 3 runtime failure.
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from backend.errors import ConfigError, DomainError, ExportError, SimulationError
from backend.experiments import ExperimentEngine, load_run_config
from backend.export import dumps_report
from config import Config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Path to run config JSON (verify defaults to configs/fig1.json)')
    common.add_argument('--seed', type=int, help='Seed override (unsigned 64-bit)')
    common.add_argument('--paths', type=int, help='Ensemble path count override')
    common.add_argument('--out', default=Config.OUTPUT_DIR, help='Output directory')
    common.add_argument('--dt', type=float, help='Step size override')
    common.add_argument('--t-end', dest='t_end', type=float, help='Horizon override')
    common.add_argument('--svg', action='store_true', help='Also write SVG plots')
    common.add_argument('--format', dest='fmt', choices=['csv', 'json'], default='csv',
                        help='Table format for trajectories and statistics')
    common.add_argument('--progress', action='store_true', help='Show a progress bar for ensembles')

    parser = argparse.ArgumentParser(description='Stochastic SICA model with Brownian and Levy jump noise')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('thresholds', parents=[common], help='Extinction / persistence criteria as JSON')
    sub.add_parser('simulate', parents=[common], help='One trajectory, CSV and optional SVG')
    sub.add_parser('ensemble', parents=[common], help='Per-time statistics and verdict rates')
    sub.add_parser('ode', parents=[common], help='Deterministic RK4 baseline')
    sub.add_parser('verify', parents=[common], help='Built-in invariant suite')
    return parser


def _config_path(args: argparse.Namespace) -> str:
    if args.config:
        return args.config
    if args.command == 'verify':
        return os.path.join(Config.CONFIG_DIR, 'fig1.json')
    raise ConfigError('--config', f'required for {args.command}')


def run(args: argparse.Namespace) -> int:
    config = load_run_config(_config_path(args)).with_overrides(
        seed=args.seed, path_count=args.paths, dt=args.dt, t_end=args.t_end,
    )
    engine = ExperimentEngine(config, output_dir=args.out, fmt=args.fmt, svg=args.svg)

    if args.command == 'thresholds':
        result = engine.run_thresholds()
        print(dumps_report(result['report']), end='')
    elif args.command == 'simulate':
        result = engine.run_simulate()
        print(dumps_report({k: v for k, v in result.items() if k != 'files'}), end='')
    elif args.command == 'ensemble':
        result = engine.run_ensemble(show_progress=args.progress)
        print(dumps_report(result['verdicts']), end='')
    elif args.command == 'ode':
        result = engine.run_ode()
        print(json.dumps(result['final_state'], sort_keys=True))
    else:
        result = engine.run_verify()
        print(result['table'])
        for path in result['files']:
            logger.info("wrote %s", path)
        return EXIT_OK if result['passed'] else EXIT_VERIFY_FAILED

    for path in result['files']:
        logger.info("wrote %s", path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        Config.validate()
        return run(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationError, ExportError, DomainError) as e:
        print(f"runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
