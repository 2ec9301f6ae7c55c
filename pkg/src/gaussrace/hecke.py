"""Character metadata for the two families behind the angle races.

Family "xi": powers of the frequency-1 character modulo (2+2i) whose value at
a prime ideal is exp(i*theta).  Family "psi": the frequency-m characters
modulo (4) that separate p mod 8.  For each member this module knows the
conductor norm, the functional-equation sign W (closed form *and* the finite
Gauss-sum oracle it was derived from), the order at s = 1/2 under the rank
hypothesis, the order at s = 1 of the second-moment L-function, and the
resulting mean value of the limiting distribution.

Order convention everywhere: zeros count positive, poles negative.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigError
from .fourier import DivergentIntegral, FourierSpec, pv_secondary_integral

FAMILIES = ("xi", "psi")

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)  # exact powers of i, indexed mod 4


def _ipow(k: int) -> complex:
    return _I_POW[k % 4]


def _e(q: float) -> complex:
    """exp(2*pi*i*q)"""
    return cmath.exp(2j * math.pi * q)


def _tr(z: complex) -> float:
    return 2.0 * z.real


def sign_xi(m: int) -> int:
    """W(xi_m): +1 for m ≡ 0,1,2,3,4,6 mod 8 and -1 for m ≡ 5,7 mod 8."""
    if m < 1:
        raise ValueError("m must be >= 1 for the xi family")
    return -1 if m % 8 in (5, 7) else 1


def sign_psi(m: int) -> int:
    """W(psi_m): +1 for m even or m ≡ 1 mod 4, -1 for m ≡ 3 mod 4."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return -1 if m % 4 == 3 else 1


def conductor_norm(family: str, m: int) -> int:
    if family == "xi":
        if m % 2 == 1:
            return 8   # conductor (2+2i)
        if m % 4 == 2:
            return 4   # conductor (2)
        return 1       # conductor (1)
    if family == "psi":
        return 16      # conductor (4) for every m
    raise ValueError(f"unknown family {family!r}")


def gauss_sum_sign(family: str, m: int) -> complex:
    """Functional-equation sign from the finite Gauss sum, term by term.

    Evaluates W = i^{-m} N(f)^{-1/2} xi_inf(gamma) sum_x xi_fin(x) e(tr(x/gamma))
    over the hard-coded invertible residues, with (gamma) = 2*(conductor).
    Complex double arithmetic; unit powers are table-exact.
    """
    if family == "xi":
        if m < 1:
            raise ValueError("m must be >= 1 for the xi family")
        if m % 2 == 1:
            # conductor (2+2i), gamma = 4+4i, infinite part e^{i pi m/4}
            gamma = 4 + 4j
            total = sum(_ipow(-j * m) * _e(_tr(_ipow(j) / gamma)) for j in range(4))
            return _ipow(-m) * 8**-0.5 * cmath.exp(1j * math.pi * m / 4) * total
        if m % 4 == 2:
            # conductor (2), gamma = 4, residues {1, i}, trivial infinite part
            total = sum(_ipow(-j * m) * _e(_tr(_ipow(j) / 4)) for j in range(2))
            return _ipow(-m) * 4**-0.5 * total
        # conductor (1), gamma = 2, the sum degenerates to the single residue 1
        return _ipow(-m) * _e(_tr(1 / 2))
    if family == "psi":
        if m < 0:
            raise ValueError("m must be >= 0")
        # conductor (4), gamma = 8; classes are units u and u*(3+2i) with
        # finite part u^{-m} resp. -u^{-m}
        w = 3 + 2j
        total = 0j
        for j in range(4):
            u = _ipow(j)
            total += _ipow(-j * m) * (_e(_tr(u / 8)) - _e(_tr(u * w / 8)))
        return _ipow(-m) / 4 * total
    raise ValueError(f"unknown family {family!r}")


def ord_one_second_moment(family: str, m: int) -> int:
    """Order at s=1 of the second-moment L-function (poles negative).

    Both families: pole of order 2 at m = 0, pole of order 1 for even m >= 2,
    zero of order 1 for odd m.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return -2
    return 1 if m % 2 == 1 else -1


def _w(family: str, m: int) -> int:
    if m == 0:
        return 1  # trivial / Dirichlet-type member, sign +1 in both families
    return sign_xi(m) if family == "xi" else sign_psi(m)


def ord_half(family: str, m: int, overrides: Mapping[tuple[str, int], int] | None = None) -> int:
    """Order of vanishing at s = 1/2: (1 - W)/2 under the rank hypothesis.

    An override map (e.g. LMFDB analytic ranks) replaces individual entries
    when the hypothesis flag is off.
    """
    if overrides is not None and (family, m) in overrides:
        return overrides[(family, m)]
    return (1 - _w(family, m)) // 2


@dataclass(frozen=True)
class CharacterInfo:
    family: str
    m: int
    conductor_norm: int
    w: int
    ord_half: int
    ord_one_second_moment: int


def character_info(
    family: str, m: int, overrides: Mapping[tuple[str, int], int] | None = None
) -> CharacterInfo:
    return CharacterInfo(
        family=family,
        m=m,
        conductor_norm=conductor_norm(family, m),
        w=_w(family, m),
        ord_half=ord_half(family, m, overrides),
        ord_one_second_moment=ord_one_second_moment(family, m),
    )


def load_rank_overrides(path) -> dict[tuple[str, int], int]:
    """Read a family,m,ord_half CSV into an override map."""
    out: dict[tuple[str, int], int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"family", "m", "ord_half"}:
            raise ConfigError(f"{path}: expected header family,m,ord_half")
        for row in reader:
            fam = row["family"].strip()
            if fam not in FAMILIES:
                raise ConfigError(f"{path}: unknown family {fam!r}")
            out[(fam, int(row["m"]))] = int(row["ord_half"])
    return out


@dataclass(frozen=True)
class MeanValue:
    """Mean of the limiting distribution in the angle-race normalization.

    value is the coefficient-sum form truncated at phi's cutoff;
    integral_value is the cross-check from the closed identity (discrete
    terms plus the principal-value integral), ±inf with integral_diverges
    set when the PV integral diverges, as it does for phi2 against
    1/(2cos t).
    """

    value: float
    integral_value: float | None = None
    integral_diverges: bool = False


def mean_value(
    family: str,
    phi: FourierSpec,
    overrides: Mapping[tuple[str, int], int] | None = None,
    cross_check: bool = True,
) -> MeanValue:
    """Mean value (1/2) sum c_m (ord_{s=1} - 2 ord_{s=1/2}) for the family.

    The order-at-1 series converges and telescopes to -c0 - phi(pi); for the
    built-in step functions that limit is taken exactly (phi(pi) = ±1), so the
    truncation only affects the rank part -sum_{W=-1} c_m, which is the
    divergent piece for phi2.  Custom coefficient maps use their truncated
    series value at pi instead.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    c0 = phi.c0
    # exact step value for the built-ins, truncated series value for customs
    order_one_part = 0.5 * (-c0 - phi.value_at_pi())
    rank_part = math.fsum(
        phi.coeff(m) * ord_half(family, m, overrides)
        for m in phi.nonzero_modes()
    )
    value = order_one_part - rank_part

    integral_value = None
    diverges = False
    if cross_check:
        kernel = "cos_over_cos2" if family == "xi" else "half_sec"
        discrete = -c0 / 2 - (phi.value_at_zero() + phi.value_at_pi()) / 4
        try:
            integral_value = discrete + pv_secondary_integral(phi, kernel)
        except DivergentIntegral as exc:
            integral_value = math.inf * exc.direction if exc.direction else math.nan
            diverges = True
    return MeanValue(value, integral_value, diverges)


def analytic_conductor_bound(family: str, m: int) -> float:
    """Crude analytic-conductor bound ~ m^2 used by the variance surrogate."""
    base = 4.0 * conductor_norm(family, max(m, 1))
    return base * (m / 2 + 3) * (m / 2 + 4)


def log_conductor_cubed(family: str, m: int) -> float:
    """(log max(q_m, 3))^3 zero-sum surrogate with unit constant."""
    return math.log(max(analytic_conductor_bound(family, m), 3.0)) ** 3


def variance_upper_heuristic(
    family: str,
    phi: FourierSpec,
    zero_sums: Mapping[int, float] | None = None,
    b: float = 1.0,
) -> float:
    """Bounded-multiplicity variance bound B^2 sum_m |c_m|^2 * S_m.

    S_m is the per-character zero sum sum_gamma |ord|^2/(1/4+gamma^2), taken
    from the supplied map or from the (log conductor)^3 surrogate.
    """
    def s_m(m: int) -> float:
        if zero_sums is not None and m in zero_sums:
            return zero_sums[m]
        return log_conductor_cubed(family, m)

    return b * b * math.fsum(phi.coeff(m) ** 2 * s_m(m) for m in phi.nonzero_modes())
