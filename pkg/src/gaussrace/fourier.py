"""Cosine-series toolbox for the race test functions.

Covers the two built-in step functions

    phi1 = 1 on [0, pi/4] ∪ [3pi/4, pi], -1 on (pi/4, 3pi/4)
    phi2 = 1 on [0, pi/2], -1 on (pi/2, pi]

(extended even and 2pi-periodic), numeric cosine coefficients for arbitrary
test functions, the closed-form block exponential sums, and Cauchy principal
values of the two singular secondary-term kernels.

Closed-form coefficients are kept as exact rationals times 1/pi; floats only
appear at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np
from scipy.integrate import quad


class PoleError(ValueError):
    """The closed-form block sum was evaluated at one of its poles."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class DivergentIntegral(ArithmeticError):
    """The excised integrals fail to stabilize as the excision shrinks."""

    def __init__(self, message: str, direction: int):
        super().__init__(message)
        self.direction = direction  # +1 for +inf, -1 for -inf, 0 undetermined


def coeff_phi1(m: int) -> Fraction:
    """Cosine coefficient of phi1 as an exact multiple of 1/pi.

    c_m(phi1) = 8/(m*pi) for m ≡ 2 mod 8, -8/(m*pi) for m ≡ 6 mod 8, else 0;
    the returned Fraction r means c_m = r/pi.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m % 8 == 2:
        return Fraction(8, m)
    if m % 8 == 6:
        return Fraction(-8, m)
    return Fraction(0)


def coeff_phi2(m: int) -> Fraction:
    """Cosine coefficient of phi2 as an exact multiple of 1/pi (c_m = r/pi)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m % 4 == 1:
        return Fraction(4, m)
    if m % 4 == 3:
        return Fraction(-4, m)
    return Fraction(0)


def _phi1_step(t: float) -> float:
    return 1.0 if t <= math.pi / 4 or t >= 3 * math.pi / 4 else -1.0


def _phi2_step(t: float) -> float:
    return 1.0 if t <= math.pi / 2 else -1.0


@dataclass
class FourierSpec:
    """An even 2pi-periodic test function given by its cosine coefficients.

    kind is "phi1", "phi2" (closed-form step families) or "custom" (explicit
    coefficient map).  truncation bounds the modes used by series evaluation
    and by the mean-value sums.
    """

    kind: str
    truncation: int
    coeffs: dict[int, float] = field(default_factory=dict)  # custom only

    @classmethod
    def phi1(cls, truncation: int) -> "FourierSpec":
        return cls("phi1", truncation)

    @classmethod
    def phi2(cls, truncation: int) -> "FourierSpec":
        return cls("phi2", truncation)

    @classmethod
    def custom(cls, coeffs: Mapping[int, float], truncation: int | None = None) -> "FourierSpec":
        coeffs = {int(m): float(c) for m, c in coeffs.items() if c != 0.0}
        if any(m < 0 for m in coeffs):
            raise ValueError("cosine modes must be >= 0")
        if truncation is None:
            truncation = max(coeffs, default=0)
        return cls("custom", truncation, coeffs)

    def coeff_fraction(self, m: int) -> Fraction | None:
        """Exact coefficient times pi, when a closed form exists."""
        if self.kind == "phi1":
            return coeff_phi1(m)
        if self.kind == "phi2":
            return coeff_phi2(m)
        return None

    def coeff(self, m: int) -> float:
        frac = self.coeff_fraction(m)
        if frac is not None:
            return float(frac) / math.pi if frac else 0.0
        return self.coeffs.get(m, 0.0)

    @property
    def c0(self) -> float:
        return self.coeff(0)

    def nonzero_modes(self) -> Iterator[int]:
        """Modes m <= truncation with c_m != 0, ascending."""
        n = self.truncation
        if self.kind == "phi1":
            yield from sorted(list(range(2, n + 1, 8)) + list(range(6, n + 1, 8)))
        elif self.kind == "phi2":
            yield from range(1, n + 1, 2)
        else:
            yield from sorted(m for m in self.coeffs if m <= n)

    def evaluate(self, t, truncation: int | None = None):
        """Truncated series value sum_{m<=N} c_m cos(mt); accepts arrays."""
        n = self.truncation if truncation is None else min(truncation, self.truncation)
        t = np.asarray(t, dtype=np.float64)
        modes = np.array([m for m in self.nonzero_modes() if m <= n], dtype=np.float64)
        if len(modes) == 0:
            out = np.zeros_like(t)
        else:
            cs = np.array([self.coeff(int(m)) for m in modes])
            out = np.cos(np.multiply.outer(t, modes)) @ cs
        return float(out) if out.ndim == 0 else out

    def step_value(self, t: float) -> float:
        """Exact value for the step families; truncated series for customs."""
        t = abs(math.remainder(t, 2 * math.pi))
        if self.kind == "phi1":
            return _phi1_step(t)
        if self.kind == "phi2":
            return _phi2_step(t)
        return self.evaluate(t)

    def value_at_zero(self) -> float:
        if self.kind in ("phi1", "phi2"):
            return 1.0
        return math.fsum(self.coeffs[m] for m in self.nonzero_modes())

    def value_at_pi(self) -> float:
        if self.kind == "phi1":
            return 1.0
        if self.kind == "phi2":
            return -1.0
        return math.fsum(self.coeffs[m] * (-1.0) ** (m % 2) for m in self.nonzero_modes())

    def breakpoints(self) -> tuple[float, ...]:
        """Jump locations inside (0, pi) for the step families."""
        if self.kind == "phi1":
            return (math.pi / 4, 3 * math.pi / 4)
        if self.kind == "phi2":
            return (math.pi / 2,)
        return ()


def coeff_numeric(
    phi: Callable[[float], float],
    m: int,
    breakpoints: Sequence[float] = (),
    tol: float = 1e-9,
) -> float:
    """Cosine coefficient of an even test function by adaptive quadrature.

    c_m = (2/pi) ∫_0^pi phi(t) cos(mt) dt for m >= 1 and half that for m = 0,
    to absolute error <= tol.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    pts = sorted(b for b in breakpoints if 0.0 < b < math.pi)
    edges = [0.0, *pts, math.pi]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = quad(lambda t: phi(t) * math.cos(m * t), lo, hi,
                    epsabs=tol / 10, epsrel=0.0, limit=400)
        total += v
        err += e
    scale = 2.0 / math.pi if m >= 1 else 1.0 / math.pi
    if err * scale > tol:
        raise QuadratureError(f"coefficient quadrature error {err * scale:.2e} > {tol:.0e}")
    return scale * total


def dirichlet_block_sum(q: int, a: int, t: float, n: int) -> float:
    """Closed form of sum_{m=0}^{n} (e^{i(qm+a)t} + e^{-i(qm+a)t}).

    Valid off the poles t ∈ (2pi/q)Z, where the geometric series degenerates;
    those t must be handled separately by the caller.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    if n < 0:
        raise ValueError("n must be >= 0")
    # pole when qt/2 is a multiple of pi
    k = t * q / (2 * math.pi)
    if abs(k - round(k)) < 1e-12:
        raise PoleError(f"t={t} lies in (2*pi/{q})*Z")
    num = math.sin((q * (2 * n + 1) / 2 + a) * t) - math.sin((a - q / 2) * t)
    return num / math.sin(q * t / 2)


# singular kernels of the two secondary-term integrals; each entry maps to
# (vectorized kernel, pole locations in (0, pi))
PV_KERNELS: dict[str, tuple[Callable, tuple[float, ...]]] = {
    "cos_over_cos2": (lambda t: np.cos(t) / np.cos(2 * t), (math.pi / 4, 3 * math.pi / 4)),
    "half_sec": (lambda t: 0.5 / np.cos(t), (math.pi / 2,)),
}


def _excised_integral(phi, kernel: str, eps: float, breakpoints: Sequence[float]) -> float:
    """(1/pi) ∫ over [0, pi] minus the eps-neighbourhoods of the kernel poles."""
    kfun, poles = PV_KERNELS[kernel]
    cuts = [0.0]
    for p in sorted(poles):
        cuts += [p - eps, p + eps]
    cuts.append(math.pi)
    integrand = lambda t: phi(t) * float(kfun(t))
    total = 0.0
    for lo, hi in zip(cuts[::2], cuts[1::2]):
        inner = sorted(b for b in breakpoints if lo < b < hi)
        for a, b in zip([lo, *inner], [*inner, hi]):
            v, _ = quad(integrand, a, b, epsabs=1e-12, epsrel=1e-12, limit=300)
            total += v
    return total / math.pi


def pv_secondary_integral(
    phi,
    kernel: str,
    eps0: float = 1e-2,
    levels: int = 7,
    breakpoints: Sequence[float] | None = None,
    tol: float = 1e-7,
) -> float:
    """Cauchy principal value (1/2pi) ∫_{-pi}^{pi} phi(t) K(t) dt.

    K is cos(t)/cos(2t) (poles pi/4, 3pi/4) or 1/(2cos(t)) (pole pi/2); the
    integrand is even, so the value is (1/pi) ∫_0^pi.  All poles are excised
    with one common epsilon and the limit eps → 0 is taken by Richardson
    extrapolation over eps0, eps0/2, ...  Raises DivergentIntegral when the
    excised values fail to stabilize (constant increments per halving signal a
    logarithmic divergence, e.g. phi2 against 1/(2cos t)).
    """
    if kernel not in PV_KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}")
    if isinstance(phi, FourierSpec):
        spec = phi
        phi = spec.step_value
        if breakpoints is None:
            breakpoints = spec.breakpoints()
    breakpoints = tuple(breakpoints or ())

    vals = [_excised_integral(phi, kernel, eps0 / 2**j, breakpoints) for j in range(levels)]
    diffs = [vals[i + 1] - vals[i] for i in range(levels - 1)]
    scale = max(1.0, max(abs(v) for v in vals))

    if abs(diffs[-1]) > 1e-12 * scale:
        ratios = [abs(diffs[i + 1]) / abs(diffs[i]) for i in range(len(diffs) - 1)
                  if abs(diffs[i]) > 1e-14 * scale]
        if ratios and min(ratios[-3:]) > 0.8:
            direction = int(math.copysign(1, diffs[-1]))
            raise DivergentIntegral(
                f"excised integrals do not stabilize for kernel {kernel!r} "
                f"(last increments {diffs[-2]:.3e}, {diffs[-1]:.3e})",
                direction,
            )

    # Neville table for an expansion in powers of eps
    tab = list(vals)
    for k in range(1, levels):
        tab = [(2**k * tab[i + 1] - tab[i]) / (2**k - 1) for i in range(len(tab) - 1)]
    prev = list(vals)
    for k in range(1, levels - 1):
        prev = [(2**k * prev[i + 1] - prev[i]) / (2**k - 1) for i in range(len(prev) - 1)]
    estimate = tab[0]
    if abs(estimate - prev[-1]) > tol:
        raise DivergentIntegral(
            f"extrapolation drift {abs(estimate - prev[-1]):.2e} exceeds {tol:.0e}",
            int(math.copysign(1, diffs[-1])) if diffs[-1] else 0,
        )
    return estimate
