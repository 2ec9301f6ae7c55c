"""End-to-end segment pipeline: sieve → decompose → races and histograms.

One pass over the prime stream feeds everything the CLI commands need: the
two integer races with their checkpoints, sign changes and log measures, both
angle histograms, and (optionally) a per-segment callback for streaming the
decomposed angle data out.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .decomp import DecompBatch, decompose_batch
from .race import (
    HistogramAccumulator,
    HistogramResult,
    HistogramSpec,
    RaceSeries,
    geometric_checkpoints,
)
from .sieve import SieveConfig, iter_prime_segments


@dataclass(frozen=True)
class CheckpointRow:
    """Race values at one checkpoint (geometric grid point or sign change).

    d1/d2 are the exact integer races; the phi sums are accumulated
    independently from the float angles (step-function values at theta), so
    the E/F identities are a real cross-check rather than a tautology.
    """

    x: int
    d1: int
    d2: int
    sum_phi1: float       # sum of phi1(theta_p), p <= x
    sum_phi2_1mod8: float  # sum of phi2(theta_p) over p ≡ 1 mod 8
    sum_phi2_5mod8: float  # same over p ≡ 5 mod 8


@dataclass
class PipelineResult:
    limit: int
    n_primes: int
    n_split: int
    d1: RaceSeries
    d2: RaceSeries
    checkpoint_rows: list[CheckpointRow]  # ascending x
    hist_theta: HistogramResult
    hist_theta_tilde: HistogramResult
    d1_min: int
    d1_max: int
    d2_min: int
    wall_time: float


def run_pipeline(
    limit: int,
    segment_size: int = 1 << 22,
    bins: int = 200,
    checkpoint_ratio: float = 1.01,
    checkpoint_x0: int = 100,
    density_x0: float = 100.0,
    e_window: tuple[float, float] | None = None,
    workers: int = 1,
    on_batch: Callable[[DecompBatch], None] | None = None,
) -> PipelineResult:
    """Run the full race/histogram pass up to `limit`."""
    t0 = time.perf_counter()
    config = SieveConfig(limit=limit, segment_size=segment_size)
    if e_window is None:
        yhi = math.log(limit)
        e_window = (min(math.log(1e3), 0.5 * yhi), yhi)

    d1 = RaceSeries("D1", x0=density_x0, e_window=e_window)
    d2 = RaceSeries("D2", x0=density_x0)
    hist_t = HistogramAccumulator(HistogramSpec(bins=bins, angle="theta"))
    hist_tt = HistogramAccumulator(HistogramSpec(bins=bins, angle="theta_tilde"))
    ckpts = geometric_checkpoints(limit, x0=checkpoint_x0, ratio=checkpoint_ratio)
    ckpt_pos = 0
    rows: list[CheckpointRow] = []

    n_primes = 0
    n_split = 0
    d1_min, d1_max, d2_min = 0, 0, 0
    # float-angle partial sums (carried across segments)
    sum_phi1 = 0.0
    sum_s1 = 0.0
    sum_s5 = 0.0

    for seg in iter_prime_segments(config, workers=workers):
        n_primes += len(seg)
        split = seg[seg % 4 == 1]
        if len(split) == 0:
            continue
        n_split += len(split)
        batch = decompose_batch(split)
        if on_batch is not None:
            on_batch(batch)

        hist_t.add(batch.theta)
        hist_tt.add(batch.theta_tilde)

        inc1 = np.where(np.abs(batch.a) > batch.two_b, 1, -1)
        inc2 = np.where(np.abs(batch.a) % 4 == 1, 1, -1)
        base1, base2 = d1.current_value, d2.current_value
        traj1 = base1 + np.cumsum(inc1)
        traj2 = base2 + np.cumsum(inc2)
        d1_min = min(d1_min, int(traj1.min()))
        d1_max = max(d1_max, int(traj1.max()))
        d2_min = min(d2_min, int(traj2.min()))

        # step-function values straight from the float angles; theta is
        # provably bounded away from the jump points at any feasible limit
        phi1_vals = np.where(
            (batch.theta <= 0.25 * math.pi) | (batch.theta >= 0.75 * math.pi), 1.0, -1.0
        )
        phi2_vals = np.where(batch.theta <= 0.5 * math.pi, 1.0, -1.0)
        is1 = batch.class8 == 1
        traj_phi1 = sum_phi1 + np.cumsum(phi1_vals)
        traj_s1 = sum_s1 + np.cumsum(np.where(is1, phi2_vals, 0.0))
        traj_s5 = sum_s5 + np.cumsum(np.where(is1, 0.0, phi2_vals))
        base_phi1, base_s1, base_s5 = sum_phi1, sum_s1, sum_s5
        sum_phi1 = float(traj_phi1[-1])
        sum_s1 = float(traj_s1[-1])
        sum_s5 = float(traj_s5[-1])

        sc1_before = len(d1.sign_changes)
        sc2_before = len(d2.sign_changes)
        d1.absorb(split, traj1)
        d2.absorb(split, traj2)

        # checkpoint rows: geometric grid up to this segment's last prime,
        # plus the exact sign-change events found in it
        seg_last = int(split[-1])
        events = set(d1.sign_changes[sc1_before:]) | set(d2.sign_changes[sc2_before:])
        while ckpt_pos < len(ckpts) and ckpts[ckpt_pos] <= seg_last:
            events.add(int(ckpts[ckpt_pos]))
            ckpt_pos += 1
        for x in sorted(events):
            i = int(np.searchsorted(split, x, side="right")) - 1
            if i >= 0:
                row = CheckpointRow(x, int(traj1[i]), int(traj2[i]),
                                    float(traj_phi1[i]), float(traj_s1[i]), float(traj_s5[i]))
            else:
                row = CheckpointRow(x, base1, base2, base_phi1, base_s1, base_s5)
            rows.append(row)
            d1.record_checkpoint(x, row.d1)
            d2.record_checkpoint(x, row.d2)

    if d1.current_x is None:
        raise ValueError(f"no split primes at or below limit {limit}")
    # remaining geometric checkpoints sit past the last split prime
    for x in ckpts[ckpt_pos:]:
        row = CheckpointRow(int(x), d1.current_value, d2.current_value,
                            sum_phi1, sum_s1, sum_s5)
        rows.append(row)
        d1.record_checkpoint(row.x, row.d1)
        d2.record_checkpoint(row.x, row.d2)
    d1.finalize(limit)
    d2.finalize(limit)

    return PipelineResult(
        limit=limit,
        n_primes=n_primes,
        n_split=n_split,
        d1=d1,
        d2=d2,
        checkpoint_rows=rows,
        hist_theta=hist_t.result(),
        hist_theta_tilde=hist_tt.result(),
        d1_min=d1_min,
        d1_max=d1_max,
        d2_min=d2_min,
        wall_time=time.perf_counter() - t0,
    )
