"""
Artifact I/O
============

Deterministic writers for the CSV/JSON artifacts of every stage. Each file
carries the hash of the configuration it was produced from:

- CSV: first line ``# config_hash=<hex>``
- JSON: top-level key ``config_hash``
- JSONL: first record ``{"config_hash": ...}``

Usage:
------
    from utils.io import config_hash, write_csv, read_csv, write_json

    h = config_hash(run_config.model_dump(mode='json'))
    write_csv(df, out / 'outcomes.csv', h)
    df = read_csv(out / 'outcomes.csv')
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
import pandas as pd

PathLike = Union[str, Path]

_HASH_PREFIX = '# config_hash='


def _default(obj: Any) -> Any:
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def canonical_json(obj: Any) -> str:
    """Key-sorted, whitespace-free JSON used for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(',', ':'), default=_default)


def dumps_json(obj: Any) -> str:
    """Key-sorted, indented JSON with the artifact encoders (numpy scalars, sets, paths)."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def config_hash(obj: Any) -> str:
    """SHA-256 of the canonical JSON form of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode('utf-8')).hexdigest()


def write_csv(df: pd.DataFrame, path: PathLike, cfg_hash: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(f"{_HASH_PREFIX}{cfg_hash}\n")
        df.to_csv(f, index=False, lineterminator='\n', float_format='%.6f')
    return path


def read_csv(path: PathLike, **kwargs) -> pd.DataFrame:
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        first = f.readline()
    skip = 1 if first.startswith(_HASH_PREFIX) else 0
    return pd.read_csv(path, skiprows=skip, **kwargs)


def write_json(obj: Dict[str, Any], path: PathLike, cfg_hash: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(obj)
    if cfg_hash is not None:
        payload['config_hash'] = cfg_hash
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(payload, f, sort_keys=True, indent=2, default=_default)
        f.write('\n')
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_jsonl(records: Iterable[Dict[str, Any]], path: PathLike, cfg_hash: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(canonical_json({'config_hash': cfg_hash}) + '\n')
        for record in records:
            f.write(canonical_json(record) + '\n')
    return path


def read_config_hash(path: PathLike) -> Optional[str]:
    """Hash declared by a CSV, JSON or JSONL artifact, or None."""
    path = Path(path)
    if not path.exists():
        return None
    if path.suffix == '.csv':
        with open(path, 'r', encoding='utf-8') as f:
            first = f.readline().strip()
        return first[len(_HASH_PREFIX):] if first.startswith(_HASH_PREFIX) else None
    if path.suffix == '.jsonl':
        with open(path, 'r', encoding='utf-8') as f:
            first = f.readline()
        return json.loads(first).get('config_hash') if first else None
    return read_json(path).get('config_hash')
