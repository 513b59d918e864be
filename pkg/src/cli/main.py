"""
Command-line entry point: ``transit-sim <verb> [options]``.

Verbs:
------
    toy-city    write a bundled grid city (roadway, GTFS, config.json)
    build       parse inputs and write one graph per scenario
    synthesize  write the synthetic population
    run         iterate one scenario to convergence
    compare     write the impact report of scenario B against A
    route       print free-flow plans between two nodes
    all         run the configured stages for every scenario

Exit codes: 0 ok, 1 user error, 2 internal error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from network.toycity import ToyCityGenerator
from scenario.spec import BASELINE
from utils.errors import SimulationDeadlock, TransitSimError
from utils.io import dumps_json, write_json
from utils.logger import setup_logging

from .config import RunConfig, Stage, load_run_config
from .pipeline import Pipeline
from .settings import get_settings

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2

logger = logging.getLogger('cli.main')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='transit-sim',
                                     description='Agent-based multimodal transportation scenario simulator')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='run config (JSON or YAML)')
    common.add_argument('--out', type=Path, help='output directory (overrides paths.output_dir)')
    common.add_argument('--workers', type=int, help='worker threads; never changes results')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--quiet', action='store_true', help='warnings and errors only')
    verbosity.add_argument('--verbose', action='store_true', help='debug output')
    common.add_argument('--log-format', choices=['text', 'json'], help='console log format')

    sub = parser.add_subparsers(dest='verb', required=True)

    toy = sub.add_parser('toy-city', parents=[common], help='write the bundled toy city')
    toy.add_argument('--size', type=int, default=23, help='grid nodes per side')
    toy.add_argument('--households', type=int, default=4000)
    toy.add_argument('--no-transit', action='store_true')
    toy.add_argument('--capacity-scale', type=float, default=None,
                     help='simulated share of real traffic (default: derived from --households)')

    sub.add_parser('build', parents=[common], help='build scenario graphs')
    sub.add_parser('synthesize', parents=[common], help='synthesize the population')

    run = sub.add_parser('run', parents=[common], help='run one scenario')
    run.add_argument('--scenario', default=BASELINE)
    run.add_argument('--max-iters', type=int, help='override equilibrium.max_iters')

    compare = sub.add_parser('compare', parents=[common], help='compare two completed runs')
    compare.add_argument('--scenario', nargs=2, metavar=('A', 'B'), default=None,
                         help='baseline and scenario names (default: baseline and the first other scenario)')

    route = sub.add_parser('route', parents=[common], help='free-flow plans between two nodes')
    route.add_argument('--scenario', default=BASELINE)
    route.add_argument('--from', dest='origin', type=int, required=True)
    route.add_argument('--to', dest='destination', type=int, required=True)
    route.add_argument('--depart', type=float, default=8 * 3600.0, help='seconds from midnight')
    route.add_argument('--mode', action='append', help='restrict to a mode (repeatable)')
    route.add_argument('--json', action='store_true', help='print the plans with their legs as JSON')

    everything = sub.add_parser('all', parents=[common], help='all configured stages')
    everything.add_argument('--max-iters', type=int)
    return parser


def _configure_logging(args) -> None:
    settings = get_settings()
    level = 'WARNING' if args.quiet else 'DEBUG' if args.verbose else settings.LOG_LEVEL
    setup_logging(level=level, fmt=args.log_format or settings.LOG_FORMAT)


def _load(args) -> RunConfig:
    if args.config is None:
        raise TransitSimError('--config is required for this verb')
    return load_run_config(args.config, args.out)


def _workers(args, cfg: Optional[RunConfig] = None) -> int:
    if args.workers is not None:
        return args.workers
    settings = get_settings()
    return cfg.workers if cfg is not None and cfg.workers != 1 else settings.WORKERS


def cmd_toy_city(args) -> int:
    root = (args.out or Path('toy_city')).resolve()
    generator = ToyCityGenerator(size=args.size, with_transit=not args.no_transit)
    city = generator.write(root)
    scale = args.capacity_scale if args.capacity_scale is not None else generator.capacity_scale(args.households)
    cfg = RunConfig.model_validate({
        'paths': {'network_dir': str(city.network_dir),
                  'gtfs_dir': str(city.gtfs_dir) if city.gtfs_dir.exists() else None,
                  'output_dir': str(root / 'output')},
        'network': {'capacity_scale': scale},
        'masks': {'city': city.city_zones},
        'population': {'households': args.households, 'zone_weights': city.zone_weights,
                       'job_weights': city.job_weights},
        'choice': {'zone_attraction': city.attraction},
        'economics': {'households': None},
    })
    raw = cfg.model_dump(mode='json')
    raw['paths'] = {'network_dir': 'network', 'gtfs_dir': 'gtfs' if raw['paths']['gtfs_dir'] else None,
                    'output_dir': 'output'}
    path = write_json(raw, root / 'config.json')
    logger.info(f"Toy city config written to {path}")
    return EXIT_OK


def cmd_build(args) -> int:
    cfg = _load(args)
    Pipeline(cfg, _workers(args, cfg)).build()
    return EXIT_OK


def cmd_synthesize(args) -> int:
    cfg = _load(args)
    Pipeline(cfg, _workers(args, cfg)).synthesize()
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _load(args)
    Pipeline(cfg, _workers(args, cfg)).run(args.scenario, args.max_iters)
    return EXIT_OK


def _default_pair(cfg: RunConfig) -> List[str]:
    others = [s.name for s in cfg.scenarios if s.name != BASELINE]
    if not others:
        raise TransitSimError('compare needs a second scenario')
    return [BASELINE, others[0]]


def cmd_compare(args) -> int:
    cfg = _load(args)
    a, b = args.scenario or _default_pair(cfg)
    Pipeline(cfg, _workers(args, cfg)).compare(a, b)
    return EXIT_OK


def cmd_route(args) -> int:
    cfg = _load(args)
    pipeline = Pipeline(cfg, _workers(args, cfg))
    if args.json:
        plans = pipeline.plans(args.scenario, args.origin, args.destination, args.depart, args.mode)
        print(dumps_json([plan.to_dict() for plan in plans]))
        return EXIT_OK if plans else EXIT_USER
    table = pipeline.route(args.scenario, args.origin, args.destination, args.depart, args.mode)
    if table.empty:
        print('no path for any mode')
        return EXIT_USER
    print(table.to_string(index=False))
    return EXIT_OK


def cmd_all(args) -> int:
    cfg = _load(args)
    pipeline = Pipeline(cfg, _workers(args, cfg))
    stages = set(cfg.stages)
    if Stage.BUILD in stages:
        pipeline.build()
    if Stage.SYNTHESIZE in stages:
        pipeline.synthesize()
    if Stage.RUN in stages:
        for spec in cfg.scenarios:
            pipeline.run(spec.name, args.max_iters)
    if Stage.COMPARE in stages:
        for spec in cfg.scenarios:
            if spec.name != BASELINE:
                pipeline.compare(BASELINE, spec.name)
    return EXIT_OK


COMMANDS = {
    'toy-city': cmd_toy_city,
    'build': cmd_build,
    'synthesize': cmd_synthesize,
    'run': cmd_run,
    'compare': cmd_compare,
    'route': cmd_route,
    'all': cmd_all,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        return COMMANDS[args.verb](args)
    except SimulationDeadlock as e:
        logger.error(f"Simulation deadlock: {e}")
        logger.debug(f"Deadlock dump: {json.dumps(e.dump, default=str)[:2000]}")
        return EXIT_INTERNAL
    except (TransitSimError, ValidationError, FileNotFoundError) as e:
        logger.error(str(e))
        return EXIT_USER
    except Exception:
        logger.exception('Internal error')
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
