"""Elementary arithmetic: prime sieve, factorization, Kronecker symbols,
odd square-free enumeration, the weight A(d) and Mertens-type prime sums.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

DEFAULT_SIEVE_LIMIT = 10**7


class PrimeSieve:
    """Sieve of Eratosthenes up to ``limit`` (inclusive).

    Attributes
    ----------
    limit : int
    is_prime : numpy.ndarray of bool, length ``limit + 1``
    primes : numpy.ndarray of int64, ascending
    """

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError(f"sieve limit must be >= 2, got {limit}")
        self.limit = int(limit)
        flags = np.ones(self.limit + 1, dtype=bool)
        flags[:2] = False
        flags[4::2] = False
        for p in range(3, math.isqrt(self.limit) + 1, 2):
            if flags[p]:
                flags[p * p :: 2 * p] = False
        flags.setflags(write=False)
        self.is_prime = flags
        self.primes = np.flatnonzero(flags).astype(np.int64)
        self.primes.setflags(write=False)

    def __repr__(self):
        return f"PrimeSieve(limit={self.limit})"

    def primes_upto(self, x: float) -> np.ndarray:
        """Primes ``p <= x`` as a view of the sieve's prime list."""
        if x > self.limit:
            raise ValueError(f"x = {x} exceeds sieve limit {self.limit}")
        return self.primes[: np.searchsorted(self.primes, math.floor(x), side="right")]

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Factor ``n`` by trial division over the sieve primes.

        Returns a list of ``(p, e)`` pairs in ascending ``p``.  Raises
        ``ValueError`` if ``n`` has a prime factor that cannot be certified
        with the primes in the sieve (i.e. ``n > limit**2`` territory).
        """
        n = int(n)
        if n < 1:
            raise ValueError(f"cannot factor {n}")
        out = []
        if n <= self.limit and self.is_prime[n]:
            return [(n, 1)]
        for p in self.primes:
            p = int(p)
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        if n > 1:
            last = int(self.primes[-1])
            if last * last < n:
                raise ValueError(f"cofactor {n} is beyond the reach of a sieve of limit {self.limit}")
            out.append((n, 1))
        return out


@lru_cache(maxsize=4)
def _sieve_cached(limit: int) -> PrimeSieve:
    return PrimeSieve(limit)


def set_sieve_limit(limit: int):
    """Change the largest sieve ``get_sieve`` may build (``sieve_limit`` config key)."""
    global DEFAULT_SIEVE_LIMIT
    if limit < 10**4:
        raise ValueError(f"sieve limit must be at least 10^4, got {limit}")
    DEFAULT_SIEVE_LIMIT = int(limit)


def get_sieve(limit: int = 10**6) -> PrimeSieve:
    """Shared sieve covering at least ``limit``.

    Sieves are rounded up to powers of two times 10**4 so that callers asking
    for nearby limits reuse one table.
    """
    if limit > DEFAULT_SIEVE_LIMIT:
        raise ValueError(f"requested sieve limit {limit} exceeds the configured maximum {DEFAULT_SIEVE_LIMIT}")
    size = 10**4
    while size < limit:
        size *= 2
    return _sieve_cached(min(size, DEFAULT_SIEVE_LIMIT))


def factorize(n: int) -> list[tuple[int, int]]:
    return get_sieve(max(100, math.isqrt(int(n)) + 1)).factorize(n)


def prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisor_count(n: int) -> int:
    """Number of positive divisors of ``n``."""
    if n < 1:
        raise ValueError(f"divisor_count needs n >= 1, got {n}")
    return math.prod(e + 1 for _, e in factorize(n))


def divisor_counts(N: int) -> np.ndarray:
    """Array ``d`` with ``d[n]`` the divisor count of n for ``0 < n <= N`` (``d[0] = 0``)."""
    d = np.zeros(N + 1, dtype=np.int64)
    for k in range(1, N + 1):
        d[k::k] += 1
    return d


def smallest_prime_factors(N: int) -> np.ndarray:
    """``spf[n]`` = least prime factor of n for n >= 2; ``spf[0] = spf[1] = 0``."""
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in get_sieve(max(N, 2)).primes_upto(math.isqrt(N)):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    spf[2:][spf[2:] == 0] = np.arange(2, N + 1)[spf[2:] == 0]
    return spf


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def odd_squarefree(limit: int) -> np.ndarray:
    """Odd, positive, square-free integers ``d <= limit`` in ascending order."""
    limit = int(limit)
    if limit < 1:
        return np.zeros(0, dtype=np.int64)
    ok = np.zeros(limit + 1, dtype=bool)
    ok[1::2] = True
    for p in get_sieve(max(math.isqrt(limit), 2)).primes_upto(math.isqrt(limit)):
        p = int(p)
        ok[p * p :: p * p] = False
    return np.flatnonzero(ok).astype(np.int64)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers a and n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
        n >>= v
    if n == 1:
        return result
    return result * jacobi(a, n)


def euler_weight_A(d: int) -> Fraction:
    """Exact value of prod_{p | d} (1 - 1/p); equals 1 for d = 1."""
    if d < 1:
        raise ValueError(f"A(d) needs d >= 1, got {d}")
    out = Fraction(1)
    for p in prime_factors(d):
        out *= Fraction(p - 1, p)
    return out


def euler_weight_table(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact numerators and denominators of A(d) for 0 <= d <= N.

    ``num[d] = prod_{p|d} (p - 1)`` and ``den[d] = rad(d)``; both int64, so
    ``A(d) = num[d] / den[d]`` and the float view is taken by the caller.
    """
    num = np.ones(N + 1, dtype=np.int64)
    den = np.ones(N + 1, dtype=np.int64)
    for p in get_sieve(max(N, 2)).primes_upto(N):
        p = int(p)
        num[p::p] *= p - 1
        den[p::p] *= p
    return num, den


MERTENS_VARIANTS = ("reciprocal", "log_weighted", "lambda_squared")


def mertens_sum(x: float, variant: str = "reciprocal", table=None, sieve: PrimeSieve | None = None) -> float:
    """Sum over primes p <= x of 1/p, (log p)/p or lambda_f(p)^2/p.

    Terms are added in ascending prime order with ``math.fsum``.
    """
    if x < 2:
        raise ValueError(f"mertens_sum needs x >= 2, got {x}")
    if variant not in MERTENS_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    sieve = sieve or get_sieve(int(x))
    p = sieve.primes_upto(x).astype(np.float64)
    if variant == "reciprocal":
        terms = 1.0 / p
    elif variant == "log_weighted":
        terms = np.log(p) / p
    else:
        if table is None:
            raise ValueError("lambda_squared variant needs an eigenform table")
        if x > table.N:
            raise ValueError(f"eigenform table (N = {table.N}) does not cover x = {x}")
        lam = table.lam[sieve.primes_upto(x)]
        terms = lam * lam / p
    return math.fsum(terms)
