"""Decomposition p = a^2 + 4b^2 for split primes and the normalized angle data.

Every prime p ≡ 1 mod 4 has a unique decomposition with a, b > 0.  The angle
attached to p is the argument of the normalized ideal generator (gint module):
theta = atan2(2b, ±a) in (0, pi).  The folded angle flips theta to pi - theta
for p ≡ 5 mod 8.

Scalar entry points do one prime exactly; decompose_batch is the vectorized
path used by the pipeline and verifies a^2 + (2b)^2 == p by re-multiplication
on every prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .gint import normalize_generator

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Trial non-residues for the vectorized path.  The least quadratic non-residue
# mod p is always prime and tiny on average (< 3); this list covers every
# p < 2^32 with a wide margin.
_NONRESIDUE_CANDIDATES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
)


def is_prime(n: int) -> bool:
    """Deterministic Miller–Rabin, valid far beyond 2^64 with these bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod an odd prime p."""
    g = 2
    while pow(g, (p - 1) // 2, p) != p - 1:
        g += 1
    return g


def sqrt_minus_one(p: int, check_prime: bool = False) -> int:
    """Smaller square root of -1 mod p, for p prime ≡ 1 mod 4.

    Deterministic: uses g^((p-1)/4) with g the smallest quadratic non-residue.
    """
    if p % 4 != 1:
        raise ValueError(f"p must be ≡ 1 mod 4, got {p}")
    if check_prime and not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    r = pow(smallest_nonresidue(p), (p - 1) // 4, p)
    return min(r, p - r)


def two_squares(p: int) -> tuple[int, int]:
    """Unique (a0, b0) with a0^2 + 4*b0^2 = p, both positive, for p ≡ 1 mod 4.

    Half-Euclid descent from a square root of -1 mod p; the result is verified
    by exact re-multiplication before returning.
    """
    r = sqrt_minus_one(p)
    u, v = p, r
    while v * v > p:
        u, v = v, u % v
    x = v
    y = math.isqrt(p - x * x)
    if x % 2 == 1:
        a0, b0 = x, y // 2
    else:
        a0, b0 = y, x // 2
    if a0 * a0 + 4 * b0 * b0 != p or a0 <= 0 or b0 <= 0:
        raise ConsistencyError(f"two-squares verification failed for p={p}")
    return a0, b0


@dataclass(frozen=True)
class AnglePrime:
    p: int
    a: int          # signed real part of the normalized generator, odd
    two_b: int      # imaginary part, even and positive
    theta: float        # atan2(two_b, a) in (0, pi)
    theta_tilde: float  # theta, folded to pi - theta when p ≡ 5 mod 8
    class8: int         # p mod 8, either 1 or 5


def angle_prime(p: int) -> AnglePrime:
    """Full angle data for one split prime."""
    a0, b0 = two_squares(p)
    g = normalize_generator(a0, b0)
    # same ufunc as the batch path so both produce bit-identical angles
    theta = float(np.arctan2(float(g.im), float(g.re)))
    class8 = p % 8
    theta_tilde = theta if class8 == 1 else math.pi - theta
    if (class8 == 1) != (g.re % 4 == 1):
        raise ConsistencyError(f"class-8 sign law violated at p={p}")
    return AnglePrime(p, g.re, g.im, theta, theta_tilde, class8)


@dataclass
class DecompBatch:
    """Column-wise angle data for an ascending batch of split primes."""

    p: np.ndarray        # int64
    a: np.ndarray        # int64, signed, odd
    two_b: np.ndarray    # int64, even, positive
    theta: np.ndarray    # float64 in (0, pi)
    theta_tilde: np.ndarray
    class8: np.ndarray   # uint8, values 1 and 5

    def __len__(self) -> int:
        return len(self.p)


def _modpow(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    # all uint64 with mod < 2^32, so products stay below 2^64
    result = np.ones_like(mod)
    b = base % mod
    e = exp.copy()
    while True:
        odd = (e & 1) == 1
        if odd.any():
            result[odd] = result[odd] * b[odd] % mod[odd]
        e >>= 1
        if not e.any():
            return result
        b = b * b % mod


def _batch_roots(p: np.ndarray) -> np.ndarray:
    """Vectorized sqrt(-1) mod p (smaller root) for arrays of split primes."""
    n = len(p)
    g = np.zeros(n, dtype=np.uint64)
    half = (p - 1) >> 1
    pending = np.arange(n)
    for cand in _NONRESIDUE_CANDIDATES:
        if not len(pending):
            break
        sub = p[pending]
        t = _modpow(np.full(len(pending), cand, dtype=np.uint64), half[pending], sub)
        hit = t == sub - 1
        g[pending[hit]] = cand
        pending = pending[~hit]
    for i in pending:  # pragma: no cover - unreachable below 2^32
        g[i] = smallest_nonresidue(int(p[i]))
    r = _modpow(g, (p - 1) >> 2, p)
    return np.minimum(r, p - r)


def decompose_batch(primes: np.ndarray) -> DecompBatch:
    """Decompose an ascending array of primes ≡ 1 mod 4 (vectorized).

    Falls back to the exact scalar path when any prime is ≥ 2^32 (the uint64
    modular products would overflow there).
    """
    primes = np.asarray(primes, dtype=np.int64)
    if len(primes) == 0:
        f = np.empty(0, dtype=np.float64)
        i = np.empty(0, dtype=np.int64)
        return DecompBatch(i, i.copy(), i.copy(), f, f.copy(), np.empty(0, dtype=np.uint8))
    if np.any(primes % 4 != 1):
        raise ValueError("decompose_batch expects primes ≡ 1 mod 4 only")
    if int(primes[-1]) >= 1 << 32:
        return _decompose_scalar(primes)

    p = primes.astype(np.uint64)
    r = _batch_roots(p)

    # half-Euclid: iterate remainders until the first one below sqrt(p)
    u, v = p.copy(), r
    active = np.flatnonzero(v * v > p)
    while len(active):
        uu, vv = u[active], v[active]
        u[active] = vv
        v[active] = uu % vv
        active = active[v[active] * v[active] > p[active]]
    x = v.astype(np.int64)
    y2 = primes - x * x
    y = np.sqrt(y2.astype(np.float64)).astype(np.int64)
    y = np.where((y + 1) * (y + 1) == y2, y + 1, y)
    y = np.where(y * y > y2, y - 1, y)

    odd = (x & 1) == 1
    a0 = np.where(odd, x, y)
    two_b = np.where(odd, y, x)
    if not np.all(a0 * a0 + two_b * two_b == primes):
        raise ConsistencyError("two-squares re-multiplication failed in batch")
    if np.any(two_b <= 0) or np.any(two_b & 1) or np.any(a0 == np.abs(two_b)):
        raise ConsistencyError("degenerate decomposition in batch")

    # sign normalization: g ≡ 1 mod (2+2i) picks a0 or -a0 (gint module rule)
    a = np.where((a0 - 1 - two_b) % 4 == 0, a0, -a0)
    theta = np.arctan2(two_b.astype(np.float64), a.astype(np.float64))
    class8 = (primes % 8).astype(np.uint8)
    if not np.all((class8 == 1) == (a % 4 == 1)):
        raise ConsistencyError("class-8 sign law violated in batch")
    theta_tilde = np.where(class8 == 5, math.pi - theta, theta)
    return DecompBatch(primes, a, two_b, theta, theta_tilde, class8)


def _decompose_scalar(primes: np.ndarray) -> DecompBatch:
    rows = [angle_prime(int(q)) for q in primes]
    return DecompBatch(
        p=np.array([r.p for r in rows], dtype=np.int64),
        a=np.array([r.a for r in rows], dtype=np.int64),
        two_b=np.array([r.two_b for r in rows], dtype=np.int64),
        theta=np.array([r.theta for r in rows], dtype=np.float64),
        theta_tilde=np.array([r.theta_tilde for r in rows], dtype=np.float64),
        class8=np.array([r.class8 for r in rows], dtype=np.uint8),
    )
