"""Exact Fourier coefficients of the weight-12 discriminant form.

Delta(q) = q * prod_{n>=1} (1 - q^n)^24 = sum tau(n) q^n.  The product is
built as (eta^3)^8 where eta^3 = prod (1 - q^n)^3 has Jacobi's sparse
expansion sum_k (-1)^k (2k + 1) q^{k(k+1)/2}; three exact squarings then
give eta^24.  Squarings use Kronecker substitution: the coefficient list is
packed into one big integer, squared, and unpacked with signed digits.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import divisor_counts, get_sieve, smallest_prime_factors

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover - plain ints are fine, only slower
    _mpz = int

log = logging.getLogger(__name__)

WEIGHT = 12
DEFAULT_N = 20_000
FORMAT_VERSION = 1
# Largest n with 2 n^6 < 2^127, i.e. the Deligne-type bound on |tau(n)|
# still fits a signed 128-bit integer.
HARD_CAP = 2**21 - 1


def jacobi_eta_cubed(n_terms: int) -> list[int]:
    """Coefficients of prod (1 - q^n)^3 up to q^(n_terms - 1)."""
    c = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        c[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return c


def _pack(coeffs: list[int], width: int):
    pos = bytearray(width * len(coeffs))
    neg = bytearray(width * len(coeffs))
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * width : (i + 1) * width] = c.to_bytes(width, "little")
        elif c < 0:
            neg[i * width : (i + 1) * width] = (-c).to_bytes(width, "little")
    return _mpz(int.from_bytes(pos, "little")) - _mpz(int.from_bytes(neg, "little"))


def _unpack_signed(value, n_terms: int, width: int) -> list[int]:
    raw = int(value).to_bytes(width * n_terms + 1, "little", signed=False)
    half = 1 << (8 * width - 1)
    full = 1 << (8 * width)
    out = []
    carry = 0
    for i in range(n_terms):
        v = int.from_bytes(raw[i * width : (i + 1) * width], "little") + carry
        if v >= half:
            out.append(v - full)
            carry = 1
        else:
            out.append(v)
            carry = 0
    return out


def square_series(coeffs: list[int], n_terms: int | None = None) -> list[int]:
    """Exact square of an integer power series, truncated to ``n_terms``."""
    n_terms = len(coeffs) if n_terms is None else n_terms
    coeffs = coeffs[:n_terms]
    bound = max((abs(c) for c in coeffs), default=0) ** 2 * n_terms
    width = (bound.bit_length() + 2 + 7) // 8
    packed = _pack(coeffs, width)
    sq = (packed * packed) % (_mpz(1) << (8 * width * n_terms))
    return _unpack_signed(sq, n_terms, width)


def compute_tau(N: int) -> list[int]:
    """Exact tau(n) for 0 <= n <= N as Python ints (``tau[0] = 0``)."""
    series = jacobi_eta_cubed(N)
    for _ in range(3):
        series = square_series(series, N)
    return [0] + series[:N]


def _check_cap(N: int, max_n: int):
    if N < 1:
        raise ValueError(f"eigenform table size must be positive, got {N}")
    if N > max_n:
        raise ValueError(f"N = {N} exceeds the configured maximum {max_n}")
    if N > HARD_CAP:
        raise OverflowError(
            f"n = {HARD_CAP + 1}: bound 2 n^6 on |tau(n)| no longer fits a signed 128-bit integer"
        )


@dataclass(frozen=True, eq=False)
class SatakePair:
    alpha: complex
    beta: complex


def satake_from_lambda(lam_p: float) -> SatakePair:
    """Roots of z^2 - lam_p z + 1, alpha taken with non-negative imaginary part."""
    if abs(lam_p) > 2 + 1e-12:
        raise ValueError(f"|lambda(p)| = {abs(lam_p)} violates the Deligne bound")
    re = lam_p / 2
    im = math.sqrt(max(0.0, 1.0 - re * re))
    return SatakePair(complex(re, im), complex(re, -im))


@dataclass(eq=False)
class EigenformTable:
    """tau(n) and lambda_f(n) = tau(n) / n^(11/2) for n <= N.

    Index 0 is a placeholder (``tau[0] = 0``, ``lam[0] = 0``) so that
    ``table.lam[n]`` is lambda_f(n).
    """

    N: int
    tau: list[int]
    lam: np.ndarray = field(repr=False)
    weight: int = WEIGHT

    @classmethod
    def from_tau(cls, tau: list[int]) -> "EigenformTable":
        N = len(tau) - 1
        n = np.arange(N + 1, dtype=np.float64)
        lam = np.zeros(N + 1)
        lam[1:] = np.array(tau[1:], dtype=np.float64) / n[1:] ** ((WEIGHT - 1) / 2)
        lam.setflags(write=False)
        return cls(N=N, tau=tau, lam=lam)

    def _check_prime(self, p: int):
        if p < 2 or p > self.N:
            raise ValueError(f"p = {p} outside the table range [2, {self.N}]")
        if not get_sieve(max(p, 2)).is_prime[p]:
            raise ValueError(f"{p} is not prime")

    def satake(self, p: int) -> SatakePair:
        self._check_prime(p)
        return satake_from_lambda(float(self.lam[p]))

    def lambda_square(self, n: int) -> float:
        """lambda_f(n^2) read from the table."""
        if n < 1 or n * n > self.N:
            raise ValueError(f"n^2 = {n * n} outside the table range [1, {self.N}]")
        return float(self.lam[n * n])

    def validate(self, full: bool = True):
        """Re-check the table: tau(1) = 1, the exact Deligne bound and (with
        ``full``) every Hecke relation.  Raises ``ValueError`` on failure."""
        validate_table(self, full=full)


def satake(p: int, table: EigenformTable) -> SatakePair:
    return table.satake(p)


def lambda_square_free_part(n: int, table: EigenformTable) -> float:
    return table.lambda_square(n)


def lambda_squares(K: int, table: EigenformTable) -> np.ndarray:
    """lambda_f(k^2) for 0 <= k <= K, built multiplicatively from lambda_f(p).

    Only primes up to K are needed, so this reaches K = table.N instead of
    sqrt(table.N).  Entry 0 is 0.
    """
    if K > table.N:
        raise ValueError(f"K = {K} exceeds table size {table.N}")
    spf = smallest_prime_factors(K)
    out = np.zeros(K + 1)
    if K >= 1:
        out[1] = 1.0
    lam = table.lam
    for k in range(2, K + 1):
        p = int(spf[k])
        r, e = k, 0
        while r % p == 0:
            r //= p
            e += 1
        # lambda(p^{2e}) via lambda(p^{j+1}) = lambda(p) lambda(p^j) - lambda(p^{j-1})
        lp = lam[p]
        prev, cur = 1.0, lp
        for _ in range(2 * e - 1):
            prev, cur = cur, lp * cur - prev
        out[k] = cur * out[r]
    return out


def validate_table(table: EigenformTable, full: bool = True):
    tau, N = table.tau, table.N
    if len(tau) != N + 1 or tau[0] != 0:
        raise ValueError("malformed tau list")
    if tau[1] != 1:
        raise ValueError(f"tau(1) = {tau[1]}, expected 1")
    if N >= 2 and tau[2] != -24:
        raise ValueError(f"tau(2) = {tau[2]}, expected -24")
    if full:
        bad = hecke_violations(table)
        if bad:
            raise ValueError(f"Hecke relation fails at n = {bad[0]}")
    bad = deligne_violations(table)
    if bad:
        raise ValueError(f"Deligne bound fails at n = {bad[0]}")


def hecke_violations(table: EigenformTable) -> list[int]:
    """Indices n breaking an exact Hecke relation.

    Writing n = p^e r with p the least prime factor and p !| r, checks
    tau(n) = tau(p^e) tau(r) when r > 1 and
    tau(p^e) = tau(p) tau(p^(e-1)) - p^11 tau(p^(e-2)) when n = p^e, e >= 2.
    """
    tau, N = table.tau, table.N
    spf = smallest_prime_factors(N)
    bad = []
    for n in range(4, N + 1):
        p = int(spf[n])
        if p == n:
            continue
        pe, r = 1, n
        while r % p == 0:
            r //= p
            pe *= p
        if r > 1:
            ok = tau[n] == tau[pe] * tau[r]
        else:
            ok = tau[n] == tau[p] * tau[n // p] - p**11 * tau[n // (p * p)]
        if not ok:
            bad.append(n)
    return bad


def deligne_violations(table: EigenformTable) -> list[int]:
    """Indices n with tau(n)^2 > d(n)^2 n^11 (exact integer comparison)."""
    d = divisor_counts(table.N)
    tau = table.tau
    return [n for n in range(1, table.N + 1) if tau[n] * tau[n] > int(d[n]) ** 2 * n**11]


def default_cache_dir() -> Path:
    env = os.environ.get("HECKE_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "heckelab"


def _cache_path(cache_dir: Path, N: int) -> Path:
    return cache_dir / f"tau_N{N}_v{FORMAT_VERSION}.csv"


def save_tau_csv(path: Path, tau: list[int]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", newline="") as fh:
        fh.write("n,tau\n")
        fh.writelines(f"{n},{tau[n]}\n" for n in range(1, len(tau)))
    tmp.replace(path)


def load_tau_csv(path: Path, N: int | None = None) -> list[int]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["n", "tau"]:
            raise ValueError(f"{path}: unexpected header {header}")
        tau = [0]
        for row in reader:
            n, t = int(row[0]), int(row[1])
            if n != len(tau):
                raise ValueError(f"{path}: row for n = {n} out of sequence")
            tau.append(t)
            if N is not None and n == N:
                break
    if N is not None and len(tau) - 1 < N:
        raise ValueError(f"{path}: holds {len(tau) - 1} coefficients, need {N}")
    return tau


def _find_cached(cache_dir: Path, N: int) -> Path | None:
    exact = _cache_path(cache_dir, N)
    if exact.exists():
        return exact
    best = None
    for cand in cache_dir.glob(f"tau_N*_v{FORMAT_VERSION}.csv"):
        try:
            size = int(cand.name.split("_")[1][1:])
        except ValueError:
            continue
        if size >= N and (best is None or size < best[0]):
            best = (size, cand)
    return best[1] if best else None


def build_table(
    N: int = DEFAULT_N,
    cache_dir: str | Path | None = None,
    use_cache: bool = True,
    max_n: int = HARD_CAP,
) -> EigenformTable:
    """Build (or load from cache) the table of tau(n), lambda_f(n) for n <= N."""
    _check_cap(N, max_n)
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    if use_cache:
        path = _find_cached(cache_dir, N) if cache_dir.exists() else None
        if path is not None:
            try:
                table = EigenformTable.from_tau(load_tau_csv(path, N))
                validate_table(table)
                log.debug("loaded tau table N=%d from %s", N, path)
                return table
            except (ValueError, OSError) as exc:
                log.warning("discarding cache %s: %s", path, exc)
    tau = compute_tau(N)
    table = EigenformTable.from_tau(tau)
    validate_table(table)
    if use_cache:
        try:
            save_tau_csv(_cache_path(cache_dir, N), tau)
        except OSError as exc:
            log.warning("could not write tau cache: %s", exc)
    return table


_TABLES: dict[int, EigenformTable] = {}


def shared_table(N: int = DEFAULT_N, cache_dir=None) -> EigenformTable:
    """Process-wide memo of ``build_table``; a larger table serves smaller N."""
    for size, table in sorted(_TABLES.items()):
        if size >= N:
            if size != N:
                table = _TABLES[N] = EigenformTable.from_tau(table.tau[: N + 1])
            return table
    table = build_table(N, cache_dir=cache_dir)
    _TABLES[N] = table
    return table
