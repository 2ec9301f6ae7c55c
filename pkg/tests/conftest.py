import numpy as np
import pytest

from gaussrace.pipeline import run_pipeline


def naive_primes(limit: int) -> list[int]:
    """Independent pure-Python sieve used as the oracle for the segmented one."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    p = 2
    while p * p <= limit:
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
        p += 1
    return [i for i in range(limit + 1) if flags[i]]


def enumeration_decompositions(limit: int, primes) -> dict[int, tuple[int, int]]:
    """p = a0^2 + 4*b0^2 for every prime p <= limit, by plain enumeration.

    Completely independent of the package's Gaussian machinery: a meshgrid of
    all candidate pairs (a0 odd, b0 >= 1), restricted to the given primes and
    checked for uniqueness of the representation.
    """
    prime_set = set(primes)
    amax = int(limit**0.5) + 1
    bmax = int((limit / 4) ** 0.5) + 1
    a0 = np.arange(1, amax + 1, 2, dtype=np.int64)
    b0 = np.arange(1, bmax + 1, dtype=np.int64)
    vals = a0[:, None] ** 2 + 4 * b0[None, :] ** 2
    ai, bi = np.nonzero(vals <= limit)
    out: dict[int, tuple[int, int]] = {}
    for n, a, b in zip(vals[ai, bi].tolist(), a0[ai].tolist(), b0[bi].tolist()):
        if n in prime_set:
            assert n not in out, f"non-unique decomposition for prime {n}"
            out[n] = (a, b)
    return out


@pytest.fixture(scope="session")
def primes_1e6():
    return naive_primes(10**6)


@pytest.fixture(scope="session")
def decomp_oracle_1e6(primes_1e6):
    return enumeration_decompositions(10**6, primes_1e6)


@pytest.fixture(scope="session")
def pipeline_1e6():
    return run_pipeline(10**6)
