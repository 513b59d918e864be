"""
Logger Module
=============

Logging setup and helpers for the simulator.

Purpose:
--------
- Configure logging from config/logging_config.yaml (dictConfig)
- Switch the console between text and JSON output
- Tag messages with stage/scenario/iteration context
- Time pipeline stages

Usage:
------
    from utils.logger import setup_logging, ContextLogger, PerformanceLogger

    setup_logging(level='INFO', fmt='json')

    log = ContextLogger('equilibrium.run', context={'scenario': 'baseline'})
    log.set_context(iteration=3)
    log.info("relative gap %.4f", 0.021)   # -> "[scenario=baseline iteration=3] relative gap 0.0210"

    perf = PerformanceLogger()
    with perf.measure('run_day'):
        ...

Key Features:
------------
- Hierarchical loggers named '<package>.<Class>'
- Context keys are also passed as ``extra`` so the JSON formatter emits them as fields
- Falls back to a plain console handler when the YAML is missing
"""

import logging
import logging.config
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import yaml

_CONFIG_PATH = Path(__file__).resolve().parent.parent.parent / 'config' / 'logging_config.yaml'

_PACKAGES = ('network', 'router', 'demand', 'scenario', 'simcore',
             'equilibrium', 'analytics', 'cli', 'utils', 'performance')


def setup_logging(level: str = 'INFO',
                  fmt: str = 'text',
                  log_file: Optional[str] = None,
                  config_path: Optional[Path] = None) -> None:
    """
    Configure logging for the whole process.

    Args:
        level (str): Console level ('DEBUG', 'INFO', 'WARNING', 'ERROR')
        fmt (str): Console formatter, 'text' or 'json'
        log_file (str, optional): Extra file handler (detailed format)
        config_path (Path, optional): Alternative dictConfig YAML
    """
    path = Path(config_path) if config_path else _CONFIG_PATH
    numeric = getattr(logging, level.upper(), logging.INFO)
    config: Optional[Dict[str, Any]] = None

    if path.exists():
        try:
            with open(path, 'r') as f:
                config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            logging.getLogger('utils.logger').warning(f"Could not load logging config: {e}")

    if config is None:
        logging.basicConfig(level=numeric,
                            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        return

    console = config.get('handlers', {}).get('console')
    if console is not None:
        console['level'] = logging.getLevelName(numeric)
        console['formatter'] = 'json' if fmt == 'json' else 'simple'

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        config.setdefault('handlers', {})['file'] = {
            'class': 'logging.FileHandler',
            'level': 'DEBUG',
            'formatter': 'detailed',
            'filename': str(log_file),
            'encoding': 'utf8',
        }
        for logger_cfg in config.get('loggers', {}).values():
            logger_cfg.setdefault('handlers', []).append('file')
        config.setdefault('root', {}).setdefault('handlers', []).append('file')

    for name in _PACKAGES:
        config.setdefault('loggers', {}).setdefault(name, {'handlers': ['console'], 'propagate': False})
        config['loggers'][name]['level'] = logging.getLevelName(numeric)

    logging.config.dictConfig(config)


class ContextLogger:
    """
    Context-aware logger that prefixes messages with ``[k=v ...]``.

    Usage:
        log = ContextLogger('cli.pipeline', context={'stage': 'run'})
        log.info("loaded %d households", 1000)
    """

    def __init__(self, name: str, context: Optional[Dict[str, Any]] = None):
        self.logger = logging.getLogger(name)
        self.context: Dict[str, Any] = dict(context or {})

    def _format_message(self, msg: str) -> str:
        if self.context:
            context_str = ' '.join(f"{k}={v}" for k, v in self.context.items())
            return f"[{context_str}] {msg}"
        return msg

    def _log(self, level: int, msg: str, *args, **kwargs) -> None:
        extra = dict(self.context)
        extra.update(kwargs.pop('extra', {}) or {})
        self.logger.log(level, self._format_message(msg), *args, extra=extra, **kwargs)

    def debug(self, msg: str, *args, **kwargs):
        self._log(logging.DEBUG, msg, *args, **kwargs)

    def info(self, msg: str, *args, **kwargs):
        self._log(logging.INFO, msg, *args, **kwargs)

    def warning(self, msg: str, *args, **kwargs):
        self._log(logging.WARNING, msg, *args, **kwargs)

    def error(self, msg: str, *args, **kwargs):
        self._log(logging.ERROR, msg, *args, **kwargs)

    def set_context(self, **kwargs) -> 'ContextLogger':
        """Update context dictionary; returns self for chaining."""
        self.context.update(kwargs)
        return self

    def child(self, **kwargs) -> 'ContextLogger':
        """New logger with this context plus ``kwargs``."""
        merged = dict(self.context)
        merged.update(kwargs)
        return ContextLogger(self.logger.name, merged)


class PerformanceLogger:
    """
    Wall-clock timing of pipeline stages.

    Usage:
        perf = PerformanceLogger()
        with perf.measure('build_graph'):
            ...
        perf.timings['build_graph']
    """

    def __init__(self, name: str = 'performance'):
        self.logger = logging.getLogger(name)
        self.timings: Dict[str, float] = {}

    @contextmanager
    def measure(self, operation: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.timings[operation] = self.timings.get(operation, 0.0) + elapsed
            self.logger.info(f"{operation} completed in {elapsed:.4f}s",
                             extra={'operation': operation, 'elapsed_s': round(elapsed, 6)})
