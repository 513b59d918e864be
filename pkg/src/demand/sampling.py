"""
Sampling helpers shared by the demand generators.
"""

from typing import Dict, List, Mapping, Sequence, TypeVar

import numpy as np

K = TypeVar('K')


def normalized(weights: Mapping[K, float]) -> Dict[K, float]:
    total = float(sum(weights.values()))
    if total <= 0:
        raise ValueError('weights must have a positive sum')
    return {k: float(v) / total for k, v in weights.items()}


def quota_counts(n: int, probs: Sequence[float]) -> List[int]:
    """Largest-remainder integer split of ``n`` (ties to the earlier category)."""
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    exact = p * n
    counts = np.floor(exact).astype(int)
    short = n - int(counts.sum())
    if short > 0:
        order = np.argsort(-(exact - counts), kind='stable')
        counts[order[:short]] += 1
    return counts.tolist()


def quota_sample(rng: np.random.Generator, n: int, weights: Mapping[K, float]) -> List[K]:
    """
    ``n`` labels whose counts match ``weights`` up to rounding, in random order.
    """
    keys = list(weights)
    counts = quota_counts(n, [weights[k] for k in keys])
    labels = [k for k, c in zip(keys, counts) for _ in range(c)]
    order = rng.permutation(n)
    return [labels[i] for i in order]


def weighted_choice(rng: np.random.Generator, weights: Mapping[K, float]) -> K:
    keys = list(weights)
    p = np.array([weights[k] for k in keys], dtype=float)
    return keys[int(rng.choice(len(keys), p=p / p.sum()))]
