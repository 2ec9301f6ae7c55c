"""Exact Gaussian-integer arithmetic and generator normalization modulo (2+2i).

Only the fixed modulus (2+2i) of Z[i] is supported; the normalization picks,
among the associates of a + 2bi and its conjugate, the unique generator that is
congruent to 1 mod (2+2i) and has positive imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError

# Operand bound under which products and norms are guaranteed exact in any
# 128-bit intermediate; Python ints never overflow, the guard keeps the contract.
MAX_COMPONENT = 1 << 31


@dataclass(frozen=True)
class GaussInt:
    re: int
    im: int

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def __mul__(self, other: "GaussInt") -> "GaussInt":
        return gauss_mul(self, other)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, GaussInt(-1, 0), I, GaussInt(0, -1))
TWO_PLUS_TWO_I = GaussInt(2, 2)


def gauss_mul(x: GaussInt, y: GaussInt) -> GaussInt:
    """Exact product of two Gaussian integers."""
    for z in (x, y):
        if abs(z.re) > MAX_COMPONENT or abs(z.im) > MAX_COMPONENT:
            raise OverflowError(f"operand exceeds magnitude bound 2**31: {z}")
    return GaussInt(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re)


def divisible_by_two_plus_two_i(z: GaussInt) -> bool:
    """True iff (2+2i) divides z: both parts even and re ≡ im mod 4."""
    return z.re % 2 == 0 and z.im % 2 == 0 and (z.re - z.im) % 4 == 0


def _congruent_one(z: GaussInt) -> bool:
    return divisible_by_two_plus_two_i(GaussInt(z.re - 1, z.im))


def normalize_generator(a: int, b: int) -> GaussInt:
    """Normalized generator of a prime ideal above p = a^2 + 4b^2.

    Given the positive decomposition (a odd, b >= 1), returns the unique
    g = u*(a ± 2bi), u a unit, with g ≡ 1 mod (2+2i) and im(g) > 0.
    Exactly two of the eight candidates satisfy the congruence and they are
    conjugates; anything else is reported as malformed input.
    """
    if a <= 0 or a % 2 == 0:
        raise ValueError(f"a must be positive and odd, got {a}")
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    candidates = [
        gauss_mul(u, z) for u in UNITS for z in (GaussInt(a, 2 * b), GaussInt(a, -2 * b))
    ]
    hits = [z for z in candidates if _congruent_one(z)]
    if len(hits) != 2:
        raise ConsistencyError(
            f"({a},{b}): {len(hits)} candidates ≡ 1 mod (2+2i), expected exactly 2"
        )
    if hits[0] != hits[1].conjugate():
        raise ConsistencyError(f"({a},{b}): congruent candidates are not conjugate")
    g = hits[0] if hits[0].im > 0 else hits[1]
    if g.im <= 0:
        # b >= 1 rules out a real generator; reaching this is a bug upstream
        raise ConsistencyError(f"({a},{b}): no candidate with positive imaginary part")
    return g
