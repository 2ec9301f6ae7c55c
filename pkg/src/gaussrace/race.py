"""Race bookkeeping along the ordered prime stream.

A RaceSeries tracks one step function of x (D1, D2, ...): its current value,
exact sign-change events, checkpointed values, and the logarithmic measure of
the stretches where it is positive / zero / negative.  Values change only at
split primes; the function is right-continuous (p <= x convention), so the
value recorded at x holds on [x, next_x).

D1 and D2 are exact integers driven by the integer fields of the decomposition
(never by the float angle).  The normalized race functions are derived:
E_phi1(x) = (log x/sqrt x) * D1(x) and F_phi2(x) = (log x/sqrt x) * D2(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expi

from .errors import ConsistencyError
from .fourier import FourierSpec


def li(x: float) -> float:
    """Logarithmic integral li(x) = li(2) + ∫_2^x dt/log t, for x >= 2."""
    if x < 2:
        raise ValueError(f"li requires x >= 2, got {x}")
    return float(expi(math.log(x)))


def e_phi(x: float, partial_sum: float, phi: FourierSpec) -> float:
    """Normalized race value (log x/sqrt x)(sum phi(theta_p) - c0/2 * Li(x))."""
    if x < 2:
        raise ValueError("x must be >= 2")
    c0 = phi.c0
    main = 0.0 if c0 == 0.0 else 0.5 * c0 * li(x)
    return math.log(x) / math.sqrt(x) * (partial_sum - main)


def f_phi(x: float, partial_sum_1mod8: float, partial_sum_5mod8: float,
          phi: FourierSpec) -> float:
    """Normalized class-8 race (log x/sqrt x)(sum_{1(8)} phi - sum_{5(8)} phi)."""
    if x < 2:
        raise ValueError("x must be >= 2")
    return math.log(x) / math.sqrt(x) * (partial_sum_1mod8 - partial_sum_5mod8)


def _e_antiderivative(y: float) -> float:
    # ∫ y e^{-y/2} dy = -2 e^{-y/2} (y + 2); used for log-averaging E(e^y) = y e^{-y/2} D
    return 2.0 * math.exp(-0.5 * y) * (y + 2.0)


@dataclass
class RaceSeries:
    """Step function of x with sign-change events and log-measure accounting.

    Log densities are integrated on [log x0, log X]; x0 defaults to 100 so the
    chaotic first few primes do not pollute the density estimate.  An optional
    e_window (y_lo, y_hi) additionally accumulates ∫ E(e^y) dy with
    E(e^y) = y e^{-y/2} * value, for the empirical bias direction check.
    """

    name: str
    x0: float = 100.0
    e_window: tuple[float, float] | None = None

    checkpoints: list[tuple[int, int]] = field(default_factory=list)
    sign_changes: list[int] = field(default_factory=list)
    logpos_measure: float = 0.0
    logzero_measure: float = 0.0
    logneg_measure: float = 0.0
    e_integral: float = 0.0
    current_value: int = 0
    current_x: float | None = None
    _last_nonzero_sign: int = 0

    # -- scalar path ---------------------------------------------------------

    def step(self, x: float, value: int) -> None:
        """Record that the function takes `value` from x onward."""
        if self.current_x is not None:
            if x <= self.current_x:
                raise ConsistencyError(
                    f"{self.name}: out-of-order event x={x} after {self.current_x}"
                )
            self._measure(self.current_x, x, self.current_value)
        s = (value > 0) - (value < 0)
        if s != 0:
            if self._last_nonzero_sign != 0 and s != self._last_nonzero_sign:
                self.sign_changes.append(int(x))
            self._last_nonzero_sign = s
        self.current_value = value
        self.current_x = x

    def finalize(self, x_end: float) -> None:
        if self.current_x is None:
            raise ConsistencyError(f"{self.name}: empty series")
        if x_end < self.current_x:
            raise ConsistencyError(f"{self.name}: finalize before last event")
        self._measure(self.current_x, x_end, self.current_value)
        self.current_x = x_end

    def _measure(self, x_from: float, x_to: float, value: int) -> None:
        lo = math.log(max(x_from, self.x0))
        hi = math.log(max(x_to, self.x0))
        if hi > lo:
            if value > 0:
                self.logpos_measure += hi - lo
            elif value < 0:
                self.logneg_measure += hi - lo
            else:
                self.logzero_measure += hi - lo
        if self.e_window is not None:
            ylo, yhi = self.e_window
            a = min(max(math.log(x_from), ylo), yhi)
            b = min(max(math.log(x_to), ylo), yhi)
            if b > a:
                self.e_integral += value * (_e_antiderivative(a) - _e_antiderivative(b))

    # -- vectorized path -----------------------------------------------------

    def absorb(self, xs: np.ndarray, values: np.ndarray) -> None:
        """Apply a batch of ascending step events; state matches step() loops."""
        if len(xs) == 0:
            return
        if self.current_x is not None and xs[0] <= self.current_x:
            raise ConsistencyError(f"{self.name}: out-of-order batch")
        logs = np.log(xs.astype(np.float64))
        if self.current_x is None:
            starts, ends = logs[:-1], logs[1:]
            vals = values[:-1]
        else:
            starts = np.concatenate(([math.log(self.current_x)], logs[:-1]))
            ends = logs
            vals = np.concatenate(([self.current_value], values[:-1]))
        logx0 = math.log(self.x0)
        eff = np.maximum(ends, logx0) - np.maximum(starts, logx0)
        eff = np.maximum(eff, 0.0)
        self.logpos_measure += float(eff[vals > 0].sum())
        self.logneg_measure += float(eff[vals < 0].sum())
        self.logzero_measure += float(eff[vals == 0].sum())
        if self.e_window is not None:
            ylo, yhi = self.e_window
            a = np.clip(starts, ylo, yhi)
            b = np.clip(ends, ylo, yhi)
            w = 2.0 * np.exp(-0.5 * a) * (a + 2.0) - 2.0 * np.exp(-0.5 * b) * (b + 2.0)
            self.e_integral += float(np.dot(vals.astype(np.float64), w))

        nz = np.flatnonzero(values)
        if len(nz):
            signs = np.sign(values[nz]).astype(np.int64)
            if self._last_nonzero_sign != 0:
                chain = np.concatenate(([self._last_nonzero_sign], signs))
                flips = np.flatnonzero(chain[1:] != chain[:-1])
                self.sign_changes.extend(int(v) for v in xs[nz[flips]])
            else:
                flips = np.flatnonzero(signs[1:] != signs[:-1])
                self.sign_changes.extend(int(v) for v in xs[nz[flips + 1]])
            self._last_nonzero_sign = int(signs[-1])
        self.current_value = int(values[-1])
        self.current_x = float(xs[-1])

    # -- summaries -----------------------------------------------------------

    def record_checkpoint(self, x: int, value: int) -> None:
        if self.checkpoints and x <= self.checkpoints[-1][0]:
            raise ConsistencyError(f"{self.name}: checkpoints must be strictly increasing")
        self.checkpoints.append((x, value))

    def total_log_measure(self) -> float:
        return self.logpos_measure + self.logzero_measure + self.logneg_measure

    def e_log_average(self) -> float:
        if self.e_window is None:
            raise ValueError("series was built without an e_window")
        ylo, yhi = self.e_window
        return self.e_integral / (yhi - ylo)


def log_density(series: RaceSeries, predicate: str) -> tuple[float, float]:
    """Log-measure fraction where the series satisfies the predicate.

    predicate is one of ">0", ">=0", "<0".  For the strict predicates the pair
    (lower, upper) brackets the zero-valued stretches, which belong to neither
    sign; ">=0" returns a single value twice.
    """
    total = series.total_log_measure()
    if series.current_x is None or total <= 0.0:
        raise ValueError(f"{series.name}: empty series or zero measure window")
    pos, zero, neg = series.logpos_measure, series.logzero_measure, series.logneg_measure
    if predicate == ">0":
        return pos / total, (pos + zero) / total
    if predicate == ">=0":
        v = (pos + zero) / total
        return v, v
    if predicate == "<0":
        return neg / total, (neg + zero) / total
    raise ValueError(f"unknown predicate {predicate!r}")


@dataclass(frozen=True)
class HistogramSpec:
    bins: int = 200
    angle: str = "theta"  # "theta" | "theta_tilde"

    def __post_init__(self) -> None:
        if self.bins < 2:
            raise ValueError("bins must be >= 2")
        if self.angle not in ("theta", "theta_tilde"):
            raise ValueError(f"unknown angle {self.angle!r}")


def secondary_term(angle: str, t):
    """Predicted deviation shape: cos t/cos 2t - 1/2 for theta, 1/cos t - 1/2 folded."""
    t = np.asarray(t, dtype=np.float64)
    if angle == "theta":
        out = np.cos(t) / np.cos(2 * t) - 0.5
    else:
        out = 1.0 / np.cos(t) - 0.5
    return float(out) if out.ndim == 0 else out


@dataclass
class HistogramResult:
    spec: HistogramSpec
    counts: np.ndarray  # int64 per bin

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def bin_centers(self) -> np.ndarray:
        return (np.arange(self.spec.bins) + 0.5) * math.pi / self.spec.bins

    @property
    def deviations(self) -> np.ndarray:
        return self.counts - self.counts.mean()

    @property
    def predictions(self) -> np.ndarray:
        return secondary_term(self.spec.angle, self.bin_centers)


class HistogramAccumulator:
    """Shardable binning of angles over [0, pi]; bin counts commute."""

    def __init__(self, spec: HistogramSpec):
        self.spec = spec
        self.counts = np.zeros(spec.bins, dtype=np.int64)

    def add(self, angles: np.ndarray) -> None:
        if len(angles) == 0:
            return
        idx = (np.asarray(angles) * (self.spec.bins / math.pi)).astype(np.int64)
        np.clip(idx, 0, self.spec.bins - 1, out=idx)
        self.counts += np.bincount(idx, minlength=self.spec.bins)

    def merge(self, other: "HistogramAccumulator") -> None:
        self.counts += other.counts

    def result(self) -> HistogramResult:
        return HistogramResult(self.spec, self.counts.copy())


def angle_histogram(angles, spec: HistogramSpec) -> HistogramResult:
    """One-shot histogram of an angle array (counts, deviations, prediction)."""
    acc = HistogramAccumulator(spec)
    acc.add(np.asarray(list(angles) if not isinstance(angles, np.ndarray) else angles))
    return acc.result()


def update_races(ap, d1: RaceSeries, d2: RaceSeries) -> None:
    """Scalar race update for one AnglePrime (primes must arrive ascending).

    D1 moves by sign(|a| - |2b|), never zero since a is odd; D2 moves by +1
    when |a| ≡ 1 mod 4 and -1 when |a| ≡ 3 mod 4.
    """
    inc1 = 1 if abs(ap.a) > ap.two_b else -1
    inc2 = 1 if abs(ap.a) % 4 == 1 else -1
    d1.step(ap.p, d1.current_value + inc1)
    d2.step(ap.p, d2.current_value + inc2)


def geometric_checkpoints(limit: int, x0: int = 100, ratio: float = 1.01) -> np.ndarray:
    """Ascending unique checkpoint grid ceil(x0 * ratio^k) <= limit."""
    if ratio <= 1.0:
        raise ValueError("ratio must be > 1")
    out = []
    x = float(x0)
    while True:
        c = math.ceil(x)
        if c > limit:
            break
        if not out or c > out[-1]:
            out.append(c)
        x *= ratio
    return np.array(out, dtype=np.int64)
