"""Limiting logarithmic distributions from externally supplied zero data.

Zeros of the family's L-functions (imaginary parts gamma > 0, keyed by the
character index m) are aggregated against a coefficient map into
ord(gamma) = sum_m c_m * ord(gamma, m); the truncated explicit-formula sum

    G(x) = mean - sum_gamma 2 Re( ord(gamma) * x^{i gamma} / (1/2 + i gamma) )

is then sampled on an equidistributed grid of y = log x to realize the
limiting logarithmic distribution, its variance, and its bias (the mass on
[0, infinity)).  Zero sets are keyed by gamma without multiplicity;
multiplicities only scale the aggregated order values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError

DROP_EPS = 1e-12  # aggregated orders below this are treated as cancelled
_WEYL = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ZeroDatum:
    m: int
    gamma: float
    mult: int = 1


def load_zeros(path) -> list[ZeroDatum]:
    """Parse and validate a zeros CSV with header m,gamma,mult, sorted by gamma."""
    out: list[ZeroDatum] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        if set(reader.fieldnames) != {"m", "gamma", "mult"}:
            raise ConfigError(f"{path}: expected header m,gamma,mult")
        for lineno, row in enumerate(reader, start=2):
            try:
                datum = ZeroDatum(int(row["m"]), float(row["gamma"]), int(row["mult"]))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}:{lineno}: malformed row {row}") from exc
            if not datum.gamma > 0:
                raise ConfigError(f"{path}:{lineno}: gamma must be positive")
            if datum.mult < 1:
                raise ConfigError(f"{path}:{lineno}: mult must be >= 1")
            out.append(datum)
    out.sort(key=lambda z: (z.gamma, z.m))
    for a, b in zip(out, out[1:]):
        if a.m == b.m and abs(a.gamma - b.gamma) <= 1e-9:
            raise ConfigError(f"{path}: duplicate zero (m={a.m}, gamma≈{a.gamma})")
    return out


def aggregate_ord(
    zeros: Sequence[ZeroDatum],
    coeffs: Mapping[int, float],
    merge_tol: float = 1e-9,
) -> dict[float, float]:
    """Aggregate sum_m c_m * ord(gamma, m) over gammas, merged within merge_tol.

    Gammas closer than merge_tol are unified (representative: the smallest of
    the cluster); aggregated values that cancel below 1e-12 are dropped.
    """
    if merge_tol < 0:
        raise ValueError("merge_tol must be >= 0")
    ordered = sorted(zeros, key=lambda z: z.gamma)
    out: dict[float, float] = {}
    i = 0
    while i < len(ordered):
        j = i + 1
        # chain-merge: consecutive gaps within tolerance stay in one cluster
        while j < len(ordered) and ordered[j].gamma - ordered[j - 1].gamma <= merge_tol:
            j += 1
        rep = ordered[i].gamma
        value = math.fsum(coeffs.get(z.m, 0.0) * z.mult for z in ordered[i:j])
        if abs(value) >= DROP_EPS:
            out[rep] = value
        i = j
    return out


def g_eval(x: float, agg: Mapping[float, float], mean: float) -> float:
    """Truncated explicit-formula value G(x) at one point, x > 0."""
    if x <= 0:
        raise ValueError("x must be positive")
    y = math.log(x)
    total = 0.0
    for gamma, value in agg.items():
        denom = 0.25 + gamma * gamma
        total += value * (math.cos(gamma * y) + 2.0 * gamma * math.sin(gamma * y)) / denom
    return mean - total


def variance_formula(agg: Mapping[float, float]) -> float:
    """Theoretical variance 2 sum |ord(gamma)|^2 / (1/4 + gamma^2)."""
    return 2.0 * math.fsum(v * v / (0.25 + g * g) for g, v in agg.items())


def weyl_sequence(n: int) -> np.ndarray:
    """First n points of the golden-ratio Weyl sequence in [0, 1)."""
    k = np.arange(1, n + 1, dtype=np.float64)
    return np.mod(k * _WEYL, 1.0)


@dataclass
class DistSummary:
    mean: float
    variance: float
    bias: float                    # sampled mass of [0, inf)
    bin_edges: np.ndarray          # len bins+1
    masses: np.ndarray             # len bins, sums to 1
    tail_grid: np.ndarray          # R values
    tail_masses: np.ndarray        # mass of |value| > R, aligned with tail_grid

    def tail_mass(self, r: float) -> float:
        idx = int(np.searchsorted(self.tail_grid, r))
        if idx >= len(self.tail_grid):
            return 0.0
        return float(self.tail_masses[idx])


def simulate_distribution(
    agg: Mapping[float, float],
    mean: float,
    y_max: float,
    samples: int,
    bins: int = 200,
) -> DistSummary:
    """Sample G(e^y) on a low-discrepancy y-grid over [0, y_max].

    Deterministic: y takes the golden-ratio Weyl sequence scaled to [0, y_max],
    so identical inputs reproduce identical summaries.
    """
    if samples < 1000:
        raise ValueError("samples must be >= 1000")
    ys = y_max * weyl_sequence(samples)
    values = np.full(samples, float(mean))
    gammas = np.fromiter(agg.keys(), dtype=np.float64, count=len(agg))
    ordvals = np.fromiter(agg.values(), dtype=np.float64, count=len(agg))
    if len(gammas):
        denom = 0.25 + gammas**2
        # chunk the (samples x zeros) evaluation to bound memory
        step = max(1, int(4e6) // max(1, len(gammas)))
        for lo in range(0, samples, step):
            yy = ys[lo : lo + step, None] * gammas[None, :]
            values[lo : lo + step] -= np.cos(yy) @ (ordvals / denom)
            values[lo : lo + step] -= np.sin(yy) @ (2.0 * gammas * ordvals / denom)

    sample_mean = float(values.mean())
    sample_var = float(values.var())
    bias = float(np.count_nonzero(values >= 0.0) / samples)
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    masses = counts / samples
    sigma = math.sqrt(sample_var) if sample_var > 0 else 1.0
    tail_grid = np.array([0.5 * k * sigma for k in range(1, 9)])
    absvals = np.abs(values)
    tail_masses = np.array([float(np.count_nonzero(absvals > r) / samples) for r in tail_grid])
    return DistSummary(
        mean=sample_mean,
        variance=sample_var,
        bias=bias,
        bin_edges=edges,
        masses=masses,
        tail_grid=tail_grid,
        tail_masses=tail_masses,
    )
