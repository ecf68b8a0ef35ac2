"""Empirical moments of twisted L-function partial sums.

S_m(q, Y) = sum over primitive chi mod q of |sum_{n<=Y} chi(n) lambda_f(n)|^(2m)
T_m(X, Y) = sum over odd square-free d <= X of |sum_{n<=Y} (8d|n) lambda_f(n)|^(2m)

both optionally smoothed by a bump Phi_U(n / Y), together with envelope
ratios, a verifier for the smoothed quadratic character sum weighted by
A(d)^(-k), a prime-sum cancellation checker and log-log exponent fits.

Work is split into fixed-size chunks (independent of the thread count) and
reduced in chunk order with ``math.fsum``, so results are bit-identical for
any ``threads``.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .arith import euler_weight_table, get_sieve, jacobi, odd_squarefree, prime_factors, smallest_prime_factors
from .dirichlet import CharacterGroup, DirichletCharacter
from .eigenform import EigenformTable

CHUNK = 64


# -- smoothing kernel -----------------------------------------------------------


def _rise(u):
    """C^infinity step from 0 (u <= 0) to 1 (u >= 1)."""
    u = np.asarray(u, dtype=np.float64)
    out = np.where(u >= 1, 1.0, 0.0)
    mid = (u > 0) & (u < 1)
    um = u[mid]
    out[mid] = special.expit(1 / (1 - um) - 1 / um)
    return out


class SmoothingKernel:
    """Phi_U: support (0, 1), equal to 1 on [1/U, 1 - 1/U], 0 <= Phi_U <= 1.

    The transitions are the standard exp(-1/x) step rescaled to windows of
    width 1/U, so Phi_U^(j) << U^j.
    """

    def __init__(self, U: float):
        if not U >= 4:
            raise ValueError(f"U must be >= 4, got {U}")
        self.U = float(U)

    def __repr__(self):
        return f"SmoothingKernel(U={self.U!r})"

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        U = self.U
        out = np.minimum(_rise(U * t), _rise(U * (1 - t)))
        return out if out.ndim else float(out)

    def mellin(self, s: complex, epsabs: float = 1e-12) -> complex:
        """Phi_hat(s) = int_0^1 Phi_U(t) t^(s-1) dt, Re s > 0.

        The plateau is integrated in closed form, the two transition windows
        by adaptive quadrature.
        """
        s = complex(s)
        if s.real <= 0:
            raise ValueError(f"Mellin transform needs Re s > 0, got {s}")
        U = self.U
        a, b = 1 / U, 1 - 1 / U
        plateau = (b**s - a**s) / s

        def piece(lo, hi):
            re = integrate.quad(
                lambda t: float(self(t)) * (t ** (s - 1)).real, lo, hi, epsabs=epsabs, epsrel=1e-12, limit=400
            )[0]
            im = integrate.quad(
                lambda t: float(self(t)) * (t ** (s - 1)).imag, lo, hi, epsabs=epsabs, epsrel=1e-12, limit=400
            )[0]
            return complex(re, im)

        return plateau + piece(0.0, a) + piece(b, 1.0)

    def mellin_at_one(self) -> float:
        """Phi_hat(1) = 1 - 1/U exactly (the two transitions are mirror images)."""
        return 1 - 1 / self.U

    def transition_mask(self, t) -> np.ndarray:
        """True where Phi_U(t) may differ from 1 inside (0, 1]."""
        t = np.asarray(t, dtype=np.float64)
        return (t < 1 / self.U) | (t > 1 - 1 / self.U)


def make_kernel(U: float) -> SmoothingKernel:
    return SmoothingKernel(U)


def default_kernel(modulus: float) -> SmoothingKernel:
    """U = modulus^0.2 clipped to [4, 100]."""
    return SmoothingKernel(min(100.0, max(4.0, float(modulus) ** 0.2)))


# -- reports --------------------------------------------------------------------

CSV_COLUMNS = ("family", "q_or_X", "Y", "m", "U", "count", "measured", "envelope", "ratio")


@dataclass(frozen=True)
class MomentReport:
    family: str  # "fixed_mod" or "quadratic"
    modulus: int
    Y: int
    m: float
    U: float | None
    count: int
    measured: float
    envelope: float
    ratio: float
    exponent: float  # power of log(modulus) in the envelope
    mode: str = "primitive"  # or "all" (diagnostic, fixed_mod only)
    k: int = 1
    eps: float = 0.0
    runtime: float = field(default=0.0, compare=False)

    def csv_row(self) -> list:
        return [
            self.family,
            self.modulus,
            self.Y,
            self.m,
            "" if self.U is None else self.U,
            self.count,
            self.measured,
            self.envelope,
            self.ratio,
        ]

    def as_dict(self) -> dict:
        return asdict(self)


def E_exponent(m: float, k: int = 1, eps: float = 0.0) -> float:
    """max(2m^2 - 3m + k + 1, (m-k)^2 + 2k^2 - k + eps, (m-k)^2 + 2k^2 - m + eps)."""
    return max(
        2 * m * m - 3 * m + k + 1,
        (m - k) ** 2 + 2 * k * k - k + eps,
        (m - k) ** 2 + 2 * k * k - m + eps,
    )


def _weights(Y: int, table: EigenformTable, kernel: SmoothingKernel | None) -> np.ndarray:
    """a_n = lambda_f(n) (times Phi_U(n/Y)) for n = 0..Y, a_0 = 0."""
    if Y > table.N:
        raise ValueError(f"Y = {Y} exceeds the eigenform table (N = {table.N})")
    a = np.array(table.lam[: Y + 1], dtype=np.float64)
    if kernel is not None:
        a = a * kernel(np.arange(Y + 1) / Y)
    a[0] = 0.0
    return a


def _run_chunks(fn, chunks, threads: int) -> list:
    if threads <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def _power_sum(abs_values: np.ndarray, m: float) -> float:
    return math.fsum(abs_values ** (2 * m))


# -- fixed modulus --------------------------------------------------------------


def character_exponents(group: CharacterGroup, primitive: bool = True) -> np.ndarray:
    """Exponent vectors (lexicographic), restricted to primitive characters if asked."""
    chars = group.primitive_characters() if primitive else list(group.characters())
    if not chars:
        return np.zeros((0, len(group.orders)), dtype=np.int64)
    return np.array([c.exponents for c in chars], dtype=np.int64)


def fixed_mod_inner_sums(
    q: int,
    Y: int,
    table: EigenformTable,
    kernel: SmoothingKernel | None = None,
    primitive: bool = True,
    threads: int = 1,
    weights: np.ndarray | None = None,
) -> np.ndarray:
    """sum_{n<=Y} chi(n) a_n for every character in canonical order.

    For each character the weights are first binned by the exponent k of
    chi(n) = e(k/L) (ascending n within each bin), then the L bins are
    combined with the roots of unity.
    """
    group = CharacterGroup(q)
    if not 1 <= Y <= q:
        raise ValueError(f"need 1 <= Y <= q, got Y = {Y}, q = {q}")
    a = _weights(Y, table, kernel) if weights is None else np.asarray(weights, dtype=np.float64)
    exps = character_exponents(group, primitive)
    L = group.exponent
    roots = group._roots
    n = np.arange(1, Y + 1)
    units = n[group.is_unit[n % q]]
    w = a[units]

    def work(block):
        k = group.exponent_table(block)[:, units % q]
        r = k.shape[0]
        idx = (np.arange(r)[:, None] * L + k).ravel()
        bins = np.bincount(idx, weights=np.broadcast_to(w, k.shape).ravel(), minlength=r * L).reshape(r, L)
        return bins @ roots

    chunks = [exps[i : i + CHUNK] for i in range(0, len(exps), CHUNK)]
    parts = _run_chunks(work, chunks, threads)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)


def _phi(q: int) -> int:
    return CharacterGroup(q).order if q >= 3 else 1


def moment_fixed_mod(
    q: int,
    Y: int,
    m: float,
    table: EigenformTable,
    kernel: SmoothingKernel | None = None,
    primitive: bool = True,
    threads: int = 1,
    inner: np.ndarray | None = None,
) -> MomentReport:
    """S_m(q, Y) with envelope phi(q) Y^m (log q)^((m-1)^2).

    ``primitive=False`` sums over every character mod q (diagnostic mode
    with an exact orthogonality identity at m = 1).  Precomputed ``inner``
    sums can be passed to reuse them across several m.
    """
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if Y > q:
        raise ValueError(f"Y = {Y} exceeds q = {q}")
    t0 = time.perf_counter()
    if inner is None:
        inner = fixed_mod_inner_sums(q, Y, table, kernel, primitive, threads)
    measured = _power_sum(np.abs(inner), m)
    exponent = (m - 1) ** 2
    envelope = _phi(q) * float(Y) ** m * math.log(q) ** exponent
    return MomentReport(
        family="fixed_mod",
        modulus=q,
        Y=Y,
        m=m,
        U=None if kernel is None else kernel.U,
        count=len(inner),
        measured=measured,
        envelope=envelope,
        ratio=measured / envelope,
        exponent=exponent,
        mode="primitive" if primitive else "all",
        runtime=time.perf_counter() - t0,
    )


def moments_fixed_mod(q, Y, ms, table, kernel=None, primitive=True, threads=1) -> list[MomentReport]:
    """Several m from one pass of inner sums."""
    inner = fixed_mod_inner_sums(q, Y, table, kernel, primitive, threads)
    return [moment_fixed_mod(q, Y, m, table, kernel, primitive, threads, inner=inner) for m in ms]


# -- quadratic family -----------------------------------------------------------


@lru_cache(maxsize=4096)
def _legendre_table(p: int) -> np.ndarray:
    leg = -np.ones(p, dtype=np.int8)
    leg[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    leg[0] = 0
    leg.setflags(write=False)
    return leg


def jacobi_table(d: int, spf: np.ndarray | None = None) -> np.ndarray:
    """(r | d) for r = 0..d-1, d odd square-free, as int8."""
    if d == 1:
        return np.ones(1, dtype=np.int8)
    out = np.ones(d, dtype=np.int8)
    r = d
    while r > 1:
        p = int(spf[r]) if spf is not None else prime_factors(r)[0]
        out *= np.tile(_legendre_table(p), d // p)
        r //= p
    return out


def _signed_weights(a: np.ndarray):
    """a_n (2|n) on odd n, and the same twisted by (-1)^((n-1)/2).

    (8d|n) = (2|n) (d|n), and by reciprocity (d|n) = (n|d) for d = 1 mod 4,
    (n|d) (-1)^((n-1)/2) for d = 3 mod 4.
    """
    n = np.arange(len(a))
    r8 = n % 8
    s8 = np.where((r8 == 1) | (r8 == 7), 1.0, np.where((r8 == 3) | (r8 == 5), -1.0, 0.0))
    w1 = a * s8
    w3 = w1 * np.where(n % 4 == 3, -1.0, 1.0)
    return w1, w3


def _fold(w: np.ndarray, d: int) -> np.ndarray:
    pad = (-len(w)) % d
    if pad:
        w = np.concatenate([w, np.zeros(pad)])
    return w.reshape(-1, d).sum(axis=0)


def quadratic_inner_sums(
    X: int,
    Y: int,
    table: EigenformTable,
    kernel: SmoothingKernel | None = None,
    threads: int = 1,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(d, sum_{n<=Y} (8d|n) a_n) over odd square-free d <= X, ascending d."""
    if not 1 <= Y <= X:
        raise ValueError(f"need 1 <= Y <= X, got Y = {Y}, X = {X}")
    a = _weights(Y, table, kernel) if weights is None else np.asarray(weights, dtype=np.float64)
    w1, w3 = _signed_weights(a)
    ds = odd_squarefree(X)
    spf = smallest_prime_factors(int(X))

    def work(block):
        out = np.empty(len(block))
        for i, d in enumerate(block):
            d = int(d)
            folded = _fold(w1 if d % 4 == 1 else w3, d)
            out[i] = float(folded @ jacobi_table(d, spf))
        return out

    chunks = [ds[i : i + CHUNK] for i in range(0, len(ds), CHUNK)]
    parts = _run_chunks(work, chunks, threads)
    return ds, (np.concatenate(parts) if parts else np.zeros(0))


def moment_quadratic(
    X: int,
    Y: int,
    m: float,
    table: EigenformTable,
    kernel: SmoothingKernel | None = None,
    k: int = 1,
    eps: float = 0.0,
    threads: int = 1,
    inner: np.ndarray | None = None,
) -> MomentReport:
    """T_m(X, Y) with envelope X Y^m (log X)^E(m, k, eps).

    The envelope vanishes at X = 1 (log X = 0); the ratio is then NaN.
    """
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if Y > X:
        raise ValueError(f"Y = {Y} exceeds X = {X}")
    t0 = time.perf_counter()
    if inner is None:
        _, inner = quadratic_inner_sums(X, Y, table, kernel, threads)
    measured = _power_sum(np.abs(inner), m)
    exponent = E_exponent(m, k, eps)
    envelope = float(X) * float(Y) ** m * math.log(X) ** exponent
    return MomentReport(
        family="quadratic",
        modulus=X,
        Y=Y,
        m=m,
        U=None if kernel is None else kernel.U,
        count=len(inner),
        measured=measured,
        envelope=envelope,
        ratio=measured / envelope if envelope > 0 else math.nan,
        exponent=exponent,
        k=k,
        eps=eps,
        runtime=time.perf_counter() - t0,
    )


def moments_quadratic(X, Y, ms, table, kernel=None, k=1, eps=0.0, threads=1) -> list[MomentReport]:
    _, inner = quadratic_inner_sums(X, Y, table, kernel, threads)
    return [moment_quadratic(X, Y, m, table, kernel, k, eps, threads, inner=inner) for m in ms]


# -- smoothed quadratic character sum ---------------------------------------------


@dataclass(frozen=True)
class PrsumRecord:
    X: float
    n: int
    k: float
    lhs: float
    main_term: float
    error: float
    product_tail: float  # estimated relative truncation error of the Euler product


def _odd_part_is_square(n: int) -> bool:
    return n % 2 == 1 and math.isqrt(n) ** 2 == n


def euler_constant_product(k: float, prime_limit: int = 10**6) -> tuple[float, float]:
    """prod over odd p <= P of (1 - 1/p)(1 + A(p)^-k / p) and a tail estimate.

    Each factor is 1 + (k - 1)/p^2 + O(k^2/p^3), so the tail beyond P is
    about |k - 1| / (P log P) + k^2 / P^2 in relative terms.
    """
    p = get_sieve(prime_limit).primes_upto(prime_limit)[1:].astype(np.float64)
    logs = np.log1p(-1 / p) + np.log1p((p / (p - 1)) ** k / p)
    P = float(prime_limit)
    tail = abs(k - 1) / (P * math.log(P)) + (k * k + 1) / P**2
    return math.exp(math.fsum(logs)), tail


def verify_lemma_prsum(
    X: float, n: int, k: float, kernel: SmoothingKernel, prime_limit: int = 10**6
) -> PrsumRecord:
    """Smoothed sum of A(d)^(-k) (8d|n) Phi(d/X) over odd square-free d vs its main term.

    main term: 0 unless n is an odd square, then
    Phi_hat(1) X/2 prod_{p|n} (1 + A(p)^-k/p)^-1 prod_{p odd} (1 - 1/p)(1 + A(p)^-k/p).
    """
    if not 1 <= X <= 10**5:
        raise ValueError(f"X must lie in [1, 1e5], got {X}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if n % 2 == 0:
        # (8d|n) = 0 for every d
        main = 0.0
        return PrsumRecord(X, n, k, 0.0, main, 0.0, 0.0)
    ds = odd_squarefree(math.floor(X))
    num, den = euler_weight_table(max(int(ds[-1]) if len(ds) else 1, 1))
    weight = (den[ds] / num[ds]) ** k
    jac = np.array([jacobi(r, n) for r in range(n)], dtype=np.float64) if n > 1 else np.ones(1)
    s8 = {1: 1.0, 7: 1.0, 3: -1.0, 5: -1.0}[n % 8]  # (8|n) = (2|n)
    terms = s8 * weight * jac[ds % n] * kernel(ds / X)
    lhs = math.fsum(terms)
    if _odd_part_is_square(n):
        prod, tail = euler_constant_product(k, prime_limit)
        local = 1.0
        for p in prime_factors(n):
            local /= 1 + (p / (p - 1)) ** k / p
        main = kernel.mellin_at_one() * X / 2 * local * prod
    else:
        main, tail = 0.0, 0.0
    return PrsumRecord(X, n, k, lhs, main, lhs - main, tail)


# -- prime sum cancellation ----------------------------------------------------


@dataclass(frozen=True)
class CancellationRecord:
    q: int
    t0: float
    x: float
    variant: str
    sum: complex
    envelope_sqrt_x: float

    @property
    def ratio(self) -> float:
        return abs(self.sum) / self.envelope_sqrt_x


def verify_prime_cancellation(
    q: int,
    chi: DirichletCharacter,
    t0: float,
    x: float,
    table: EigenformTable | None = None,
    variant: str = "plain",
) -> CancellationRecord:
    """sum_{p<=x} chi(p) (lambda_f(p^2)) p^(-i t0) log p against sqrt(x) (log 2q(x + |t0|))^2."""
    if variant not in ("plain", "sym_square"):
        raise ValueError(f"unknown variant {variant!r}")
    if chi.modulus != q:
        raise ValueError(f"character modulus {chi.modulus} differs from q = {q}")
    if variant == "plain" and chi.is_principal:
        raise ValueError("principal character: the plain prime sum has no cancellation")
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    p = get_sieve(int(x)).primes_upto(x)
    lp = np.log(p.astype(np.float64))
    terms = chi.values()[p % q] * np.exp(-1j * t0 * lp) * lp
    if variant == "sym_square":
        if table is None or x > table.N:
            raise ValueError("sym_square variant needs an eigenform table covering x")
        terms = terms * (table.lam[p] ** 2 - 1)
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    env = math.sqrt(x) * math.log(2 * q * (x + abs(t0))) ** 2
    return CancellationRecord(q, t0, x, variant, total, env)


# -- exponent fits ------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    points: int


def fit_exponent(reports: list[MomentReport], axis: str | None = None) -> FitResult:
    """Least squares of log(measured / (count Y^m)) against exponent * log log(modulus).

    A slope near or below 1 is consistent with the envelope's power of log.
    """
    if len(reports) < 3:
        raise ValueError(f"need at least 3 reports, got {len(reports)}")
    if len({r.m for r in reports}) != 1 or len({r.family for r in reports}) != 1:
        raise ValueError("reports must share family and m")
    if axis is not None:
        expected = "log_q" if reports[0].family == "fixed_mod" else "log_X"
        if axis != expected:
            raise ValueError(f"axis {axis!r} does not match family {reports[0].family!r}")
    x = np.array([r.exponent * math.log(math.log(r.modulus)) for r in reports])
    y = np.array([math.log(r.measured / (r.count * float(r.Y) ** r.m)) for r in reports])
    if np.ptp(x) == 0:
        raise ValueError("moduli do not vary")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1 - float(np.sum(resid**2)) / ss_tot
    return FitResult(float(slope), float(intercept), r2, len(reports))
