"""Segmented, odd-only sieve of Eratosthenes with bounded memory.

Primes are produced per segment as ascending int64 numpy arrays; segments may
be sieved ahead by a small thread pool, but emission order is always ascending.
All primes are emitted — filtering to p ≡ 1 mod 4 happens downstream.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import ConfigError

MIN_SEGMENT = 1 << 10
MAX_LIMIT = 1 << 63


@dataclass(frozen=True)
class SieveConfig:
    limit: int
    segment_size: int = 1 << 22  # numbers (not odds) per segment

    def __post_init__(self) -> None:
        if self.limit < 2:
            raise ConfigError(f"limit must be >= 2, got {self.limit}")
        if self.limit > MAX_LIMIT:
            raise ConfigError(f"limit must be <= 2^63, got {self.limit}")
        if self.segment_size < MIN_SEGMENT:
            raise ConfigError(f"segment_size must be >= {MIN_SEGMENT}")


def base_primes(n: int) -> np.ndarray:
    """Plain sieve up to n; used for base primes and as a small-range helper."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_segment(lo: int, hi: int, odd_base: np.ndarray) -> np.ndarray:
    """Odd primes in [lo, hi) with lo odd; odd_base covers sqrt(hi)."""
    n_odd = (hi - lo + 1) // 2
    mask = np.ones(n_odd, dtype=bool)
    for p in odd_base:
        p = int(p)
        p2 = p * p
        if p2 >= hi:
            break
        start = max(p2, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            mask[(start - lo) // 2 :: p] = False
    return lo + 2 * np.flatnonzero(mask).astype(np.int64)


def iter_prime_segments(config: SieveConfig, workers: int = 1) -> Iterator[np.ndarray]:
    """Yield ascending arrays of primes covering [2, limit], one per segment."""
    limit = config.limit
    odd_base = base_primes(math.isqrt(limit))
    odd_base = odd_base[odd_base > 2]

    bounds = []
    lo = 3
    while lo <= limit:
        hi = min(lo + config.segment_size, limit + 1)
        if hi % 2 == 0:
            hi += 1  # keep segment starts odd
        hi = min(hi, limit + 1)
        bounds.append((lo, hi))
        lo = hi if hi % 2 == 1 else hi + 1

    def emit(first: bool, seg: np.ndarray) -> np.ndarray:
        if first:
            return np.concatenate((np.array([2], dtype=np.int64), seg))
        return seg

    if not bounds:  # limit == 2
        yield np.array([2], dtype=np.int64)
        return

    if workers <= 1:
        for i, (a, b) in enumerate(bounds):
            yield emit(i == 0, _sieve_segment(a, b, odd_base))
        return

    window = max(2, 2 * workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {}
        nxt = 0
        for i in range(min(window, len(bounds))):
            futures[i] = pool.submit(_sieve_segment, *bounds[i], odd_base)
            nxt = i + 1
        for i in range(len(bounds)):
            seg = futures.pop(i).result()
            if nxt < len(bounds):
                futures[nxt] = pool.submit(_sieve_segment, *bounds[nxt], odd_base)
                nxt += 1
            yield emit(i == 0, seg)


def stream_primes(config: SieveConfig, consumer: Callable[[int], None]) -> int:
    """Feed every prime <= limit to the consumer in ascending order; returns the count."""
    total = 0
    for seg in iter_prime_segments(config):
        total += len(seg)
        for p in seg.tolist():
            consumer(p)
    return total
