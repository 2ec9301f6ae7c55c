import math
from fractions import Fraction

import numpy as np
import pytest

from gaussrace.fourier import (
    DivergentIntegral,
    FourierSpec,
    PoleError,
    coeff_numeric,
    coeff_phi1,
    coeff_phi2,
    dirichlet_block_sum,
    pv_secondary_integral,
)

PI = math.pi


def test_coeff_phi1_closed_form():
    assert coeff_phi1(2) == Fraction(4)       # 8/(2*pi) = (4)/pi
    assert coeff_phi1(6) == Fraction(-4, 3)   # -8/(6*pi)
    assert coeff_phi1(0) == 0                 # mean zero over the period
    assert coeff_phi1(10) == Fraction(8, 10)
    for m in range(60):
        if m % 8 not in (2, 6):
            assert coeff_phi1(m) == 0


def test_coeff_phi2_closed_form():
    assert coeff_phi2(1) == Fraction(4)
    assert coeff_phi2(3) == Fraction(-4, 3)
    assert coeff_phi2(2) == 0
    for m in range(60):
        if m % 2 == 0:
            assert coeff_phi2(m) == 0


def test_coeff_numeric_orthogonality():
    assert coeff_numeric(lambda t: math.cos(3 * t), 3) == pytest.approx(1.0, abs=1e-9)
    assert coeff_numeric(lambda t: math.cos(3 * t), 2) == pytest.approx(0.0, abs=1e-9)


def test_coeff_numeric_matches_step_closed_forms():
    phi1 = FourierSpec.phi1(10)
    phi2 = FourierSpec.phi2(10)
    for m in range(0, 51):
        got1 = coeff_numeric(phi1.step_value, m, breakpoints=phi1.breakpoints())
        got2 = coeff_numeric(phi2.step_value, m, breakpoints=phi2.breakpoints())
        assert got1 == pytest.approx(float(coeff_phi1(m)) / PI, abs=1e-8)
        assert got2 == pytest.approx(float(coeff_phi2(m)) / PI, abs=1e-8)


def test_spec_coeff_access():
    spec = FourierSpec.phi1(100)
    assert spec.coeff(2) == pytest.approx(4 / PI)
    assert spec.c0 == 0.0
    assert list(spec.nonzero_modes())[:4] == [2, 6, 10, 14]
    spec2 = FourierSpec.custom({0: 0.5, 3: -1.0})
    assert spec2.coeff(0) == 0.5 and spec2.coeff(3) == -1.0 and spec2.coeff(5) == 0.0
    assert spec2.value_at_pi() == pytest.approx(0.5 + 1.0)
    assert spec2.value_at_zero() == pytest.approx(-0.5)


def test_truncated_series_converges_to_step():
    # pointwise convergence away from the jumps: max error <= 0.05 at N = 1e4
    spec = FourierSpec.phi1(10_000)
    grid = np.linspace(0.0, PI, 1201)
    keep = np.ones_like(grid, dtype=bool)
    for jump in (PI / 4, 3 * PI / 4):
        keep &= np.abs(grid - jump) > 0.05
    vals = spec.evaluate(grid[keep])
    target = np.array([spec.step_value(t) for t in grid[keep]])
    assert np.max(np.abs(vals - target)) <= 0.05


def test_block_sum_single_term():
    for q, a, t in [(8, 5, 1.0), (3, 2, 0.7), (5, 0, 2.2)]:
        assert dirichlet_block_sum(q, a, t, 0) == pytest.approx(2 * math.cos(a * t), abs=1e-12)


def _direct_block_sum(q, a, t, n):
    m = np.arange(n + 1)
    return float(np.sum(2 * np.cos((q * m + a) * t)))


def test_block_sum_examples():
    assert dirichlet_block_sum(8, 5, 1.0, 17) == pytest.approx(
        _direct_block_sum(8, 5, 1.0, 17), abs=1e-10)
    assert dirichlet_block_sum(4, 3, PI / 3, 50) == pytest.approx(
        _direct_block_sum(4, 3, PI / 3, 50), abs=1e-10)


def test_block_sum_random_property():
    rng = np.random.default_rng(42)
    done = 0
    while done < 100:
        q = int(rng.integers(1, 13))
        a = int(rng.integers(-12, 13))
        n = int(rng.integers(0, 1001))
        t = float(rng.uniform(-2 * PI, 2 * PI))
        # keep t at distance >= 1e-3 from the poles (2*pi/q)Z
        k = t * q / (2 * PI)
        if abs(k - round(k)) * 2 * PI / q < 1e-3:
            continue
        got = dirichlet_block_sum(q, a, t, n)
        want = _direct_block_sum(q, a, t, n)
        assert abs(got - want) <= 1e-9 * (n + 1), (q, a, t, n)
        done += 1


def test_block_sum_pole_error():
    with pytest.raises(PoleError):
        dirichlet_block_sum(8, 5, 2 * PI / 8, 10)
    with pytest.raises(PoleError):
        dirichlet_block_sum(4, 1, PI, 3)


def test_pv_zero_function():
    for kernel in ("cos_over_cos2", "half_sec"):
        assert pv_secondary_integral(lambda t: 0.0, kernel) == pytest.approx(0.0, abs=1e-12)


def test_pv_phi1_vanishes_by_symmetry():
    # integrand odd under t -> pi - t
    assert pv_secondary_integral(FourierSpec.phi1(10), "cos_over_cos2") == pytest.approx(
        0.0, abs=1e-7)


def test_pv_smooth_values():
    # PV (1/2pi) ∫ cos(t)·cos(t)/cos(2t) dt = 1/2:  cos^2/cos2t = 1/2 + sec(2t)/2,
    # and the sec part cancels by symmetry; same value for cos t against 1/(2cos t).
    assert pv_secondary_integral(math.cos, "cos_over_cos2") == pytest.approx(0.5, abs=1e-7)
    assert pv_secondary_integral(math.cos, "half_sec") == pytest.approx(0.5, abs=1e-7)
    # cos(2t)·cos(t)/cos(2t) = cos(t), which integrates to zero on [0, pi]
    assert pv_secondary_integral(lambda t: math.cos(2 * t), "cos_over_cos2") == pytest.approx(
        0.0, abs=1e-7)


def test_pv_divergence_phi2_half_sec():
    with pytest.raises(DivergentIntegral) as err:
        pv_secondary_integral(FourierSpec.phi2(10), "half_sec")
    assert err.value.direction == +1


def test_pv_stable_under_halving_eps0():
    a = pv_secondary_integral(FourierSpec.phi2(10), "cos_over_cos2")
    b = pv_secondary_integral(FourierSpec.phi2(10), "cos_over_cos2", eps0=5e-3)
    assert abs(a - b) <= 1e-7


def test_pv_rejects_unknown_kernel():
    with pytest.raises(ValueError):
        pv_secondary_integral(math.cos, "sec_squared")
