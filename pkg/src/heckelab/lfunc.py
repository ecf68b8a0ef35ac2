"""L-function evaluators, GRH-conditional majorants and moment envelopes.

Evaluators
----------
``zeta``            Euler-Maclaurin summation.
``l_twisted``       L(s, f x chi), either as a Gaussian-smoothed Dirichlet
                    series (valid where it converges fast, checked against
                    a doubled cutoff) or through the exact approximate
                    functional equation with incomplete gamma weights.
``l_sym_square``    zeta(2s) * sum lambda_f(n^2) n^-s for Re s > 1.

Majorants and envelopes return the constant-free expressions; the
unspecified O(1) terms are left to the caller to fit or bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy import special

from .arith import get_sieve
from .dirichlet import DirichletCharacter, gauss_sum
from .eigenform import EigenformTable, lambda_squares, satake_from_lambda

# B_2, B_4, ..., B_20
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]
_EM_COEFFS = [float(b / math.factorial(2 * k + 2)) for k, b in enumerate(_BERNOULLI)]


def _csum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def zeta(s: complex, cutoff: int | None = None, terms: int = 10) -> complex:
    """Riemann zeta via Euler-Maclaurin summation (Re s > 0, s != 1)."""
    s = complex(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise ValueError(f"Euler-Maclaurin evaluator needs Re s > 0, got {s}")
    N = cutoff or math.ceil(10 + 2 * abs(s.imag))
    n = np.arange(1, N, dtype=np.float64)
    head = _csum(np.exp(-s * np.log(n)))
    logN = math.log(N)
    Ns = cmath.exp(-s * logN)
    total = head + N * Ns / (s - 1) + Ns / 2
    rising = s  # s (s+1) ... (s + 2k - 2)
    power = Ns / N
    for k, coeff in enumerate(_EM_COEFFS[:terms]):
        total += coeff * rising * power
        rising *= (s + 2 * k + 1) * (s + 2 * k + 2)
        power /= N * N
    return total


@dataclass(frozen=True)
class LValue:
    """A numerically evaluated L-value with its self-consistency error estimate."""

    value: complex
    error: float
    cutoff: float
    method: str
    converged: bool = True

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def _twist_coefficients(chi: DirichletCharacter | None, table: EigenformTable, n_max: int) -> np.ndarray:
    """lambda_f(n) chi(n) for n = 0..n_max."""
    if n_max > table.N:
        raise ValueError(f"cutoff {n_max} exceeds the eigenform table (N = {table.N})")
    lam = table.lam[: n_max + 1].astype(np.complex128)
    if chi is None:
        return lam
    vals = chi.values()
    return lam * vals[np.arange(n_max + 1) % chi.modulus]


def _modulus(chi):
    return 1 if chi is None else chi.modulus


def root_number(chi: DirichletCharacter | None, weight: int = 12) -> complex:
    """i^k tau(chi)^2 / q; equals i^k for the trivial twist."""
    ik = 1j**weight
    if chi is None:
        return ik
    return ik * gauss_sum(chi) ** 2 / chi.modulus


def _smoothed_sum(s: complex, coeffs: np.ndarray, M: float, n_max: int) -> complex:
    n = np.arange(1, n_max + 1, dtype=np.float64)
    terms = coeffs[1 : n_max + 1] * np.exp(-s * np.log(n) - (n / M) ** 2)
    return _csum(terms)


def l_twisted(
    s: complex,
    chi: DirichletCharacter | None,
    table: EigenformTable,
    cutoff: float | None = None,
    method: str = "smoothed",
    tol: float = 1e-8,
    split: float = 1.0,
) -> LValue:
    """L(s, f x chi).  ``chi=None`` is the trivial twist (modulus 1).

    ``method="smoothed"``: sum lambda(n) chi(n) n^-s exp(-(n/M)^2), default
    M = 30 q (1 + |t|) capped so that 6M fits the table; the value is taken
    at M.  The smoothing bias is about -L(s - 2) / M^2, so the distance d to
    the value at 2M is 3/4 of the bias and the estimate is 2d; against M/2
    the distance is 3 times the bias and d itself is used.

    ``method="afe"``: exact approximate functional equation split at
    ``split`` (the value is independent of it), requires primitive chi.
    """
    s = complex(s)
    if method == "afe":
        return _l_twisted_afe(s, chi, table, split=split)
    if method != "smoothed":
        raise ValueError(f"unknown method {method!r}")
    q = _modulus(chi)
    if cutoff is None:
        cutoff = min(30.0 * q * (1 + abs(s.imag)), table.N / 6.0)
    M = float(cutoff)
    if M > table.N:
        raise ValueError(f"cutoff {M} exceeds the eigenform table (N = {table.N})")
    coeffs = _twist_coefficients(chi, table, table.N)
    value = _smoothed_sum(s, coeffs, M, min(table.N, math.ceil(6.5 * M)))
    # compare against 2M when the table allows it, otherwise against M/2
    M2 = 2 * M if math.ceil(13 * M) <= table.N else M / 2
    other = _smoothed_sum(s, coeffs, M2, min(table.N, math.ceil(6.5 * M2)))
    error = abs(value - other) * (2.0 if M2 > M else 1.0)
    Mx = max(M, M2)
    if math.ceil(6.5 * Mx) > table.N:
        # weight left beyond the table, bounded with |lambda(n)| <= d(n) <= 2 sqrt(n)
        x = table.N
        error += 2 * x ** (1.5 - s.real) * math.exp(-((x / Mx) ** 2)) * Mx
    converged = error <= tol * max(1.0, abs(value))
    return LValue(value, error, M, "smoothed", converged)


def _upper_gamma(a: complex, x: np.ndarray) -> np.ndarray:
    """Gamma(a, x) for a vector of x > 0."""
    if abs(complex(a).imag) < 1e-300 and complex(a).real > 0:
        a = complex(a).real
        return special.gammaincc(a, x) * special.gamma(a)
    return np.array([complex(mpmath.gammainc(a, float(xi))) for xi in x])


def _afe_terms_needed(q: float, split: float, size: float) -> int:
    # Gamma(a, x) / Gamma(a) decays like e^-x once x >> |a|; x = 60 + 2|a| is ample
    x_max = 60.0 + 2.0 * max(size, 1.0)
    return math.ceil(x_max * q * max(split, 1.0 / split) / (2 * math.pi))


def _l_twisted_afe(s: complex, chi, table: EigenformTable, split: float = 1.0) -> LValue:
    if chi is not None and not chi.is_primitive:
        raise ValueError(f"{chi} is not primitive; the functional equation needs a primitive twist")
    q = _modulus(chi)
    c = (table.weight - 1) / 2
    eps = root_number(chi, table.weight)
    n_max = _afe_terms_needed(q, split, max(abs(s + c), abs(1 - s + c)))
    if n_max > table.N:
        raise ValueError(f"approximate functional equation needs {n_max} coefficients, table has {table.N}")
    a = _twist_coefficients(chi, table, n_max)[1:]
    n = np.arange(1, n_max + 1, dtype=np.float64)
    x = 2 * np.pi * n / q
    lq = math.log(q / (2 * math.pi))
    first = a * np.exp(s * (lq - np.log(n))) * _upper_gamma(s + c, x * split)
    second = np.conj(a) * np.exp((1 - s) * (lq - np.log(n))) * _upper_gamma(1 - s + c, x / split)
    completed = _csum(first) + eps * _csum(second)
    factor = cmath.exp(s * lq + special.loggamma(s + c))
    value = completed / factor
    # tail beyond n_max, with |lambda(n)| <= d(n) <= 2 sqrt(n)
    n_tail = np.arange(n_max + 1, 2 * n_max + 1, dtype=np.float64)
    xt = 2 * np.pi * n_tail / q
    tail = 2 * np.sqrt(n_tail) * (
        np.exp(s.real * (lq - np.log(n_tail))) * special.gammaincc(s.real + c, xt * split) * special.gamma(s.real + c)
        + np.exp((1 - s.real) * (lq - np.log(n_tail)))
        * special.gammaincc(1 - s.real + c, xt / split)
        * special.gamma(1 - s.real + c)
    )
    error = float(tail.sum()) / abs(factor) + 1e-14 * (abs(_csum(np.abs(first))) + abs(_csum(np.abs(second)))) / abs(factor)
    return LValue(value, error, n_max, "afe", True)


def completed_l(s: complex, chi, table: EigenformTable, lvalue: complex) -> complex:
    """Lambda(s) = (q / 2 pi)^s Gamma(s + (k-1)/2) L(s)."""
    q = _modulus(chi)
    c = (table.weight - 1) / 2
    return cmath.exp(complex(s) * math.log(q / (2 * math.pi)) + special.loggamma(complex(s) + c)) * lvalue


def l_twisted_euler(s: complex, chi, table: EigenformTable, prime_limit: int) -> complex:
    """Truncated Euler product prod_{p <= P, p !| q} (1 - lambda(p) chi(p) p^-s + chi(p)^2 p^-2s)^-1."""
    s = complex(s)
    primes = get_sieve(prime_limit).primes_upto(min(prime_limit, table.N))
    lam = table.lam[primes]
    if chi is None:
        cp = np.ones(len(primes), dtype=np.complex128)
    else:
        cp = chi.values()[primes % chi.modulus]
    ps = np.exp(-s * np.log(primes.astype(np.float64)))
    local = 1 - lam * cp * ps + cp * cp * ps * ps
    return cmath.exp(-_csum(np.log(local)))


def _lambda_squares_cached(table: EigenformTable, K: int) -> np.ndarray:
    cache = table.__dict__.setdefault("_lambda_squares", {})
    for size, arr in cache.items():
        if size >= K:
            return arr[: K + 1]
    arr = lambda_squares(K, table)
    cache[K] = arr
    return arr


def l_sym_square(s: complex, table: EigenformTable, terms: int | None = None) -> LValue:
    """L(s, sym^2 f) = zeta(2s) sum_{n <= K} lambda_f(n^2) n^-s, Re s > 1.

    lambda_f(n^2) comes from Hecke multiplicativity over the primes in the
    table, so K defaults to ``table.N``.  The error estimate is the change
    between truncations at K/2 and K.
    """
    s = complex(s)
    if s.real <= 1:
        raise ValueError(f"no analytic continuation implemented: Re s = {s.real} <= 1")
    K = terms or table.N
    b = _lambda_squares_cached(table, K)
    n = np.arange(1, K + 1, dtype=np.float64)
    terms_ = b[1:] * np.exp(-s * np.log(n))
    full = _csum(terms_)
    half = _csum(terms_[: K // 2])
    z2 = zeta(2 * s)
    return LValue(z2 * full, abs(z2) * abs(full - half), K, "dirichlet")


def l_sym_square_euler(s: complex, table: EigenformTable, prime_limit: int) -> complex:
    """prod_{p <= P} (1 - alpha_p^2 p^-s)^-1 (1 - p^-s)^-1 (1 - beta_p^2 p^-s)^-1."""
    s = complex(s)
    log_total = 0j
    parts_re, parts_im = [], []
    for p in get_sieve(prime_limit).primes_upto(min(prime_limit, table.N)):
        sp = satake_from_lambda(float(table.lam[p]))
        ps = cmath.exp(-s * math.log(p))
        z = -(cmath.log(1 - sp.alpha**2 * ps) + cmath.log(1 - ps) + cmath.log(1 - sp.beta**2 * ps))
        parts_re.append(z.real)
        parts_im.append(z.imag)
    log_total = complex(math.fsum(parts_re), math.fsum(parts_im))
    return cmath.exp(log_total)


def prime_cos_sums(x: float, alpha: float, table: EigenformTable | None = None) -> tuple[float, float | None]:
    """(sum_{p<=x} cos(alpha log p)/p, sum_{p<=x} cos(alpha log p) lambda(p^2)/p).

    lambda(p^2) = lambda(p)^2 - 1, so the second sum needs the table to cover x.
    The second entry is None without a table.
    """
    primes = get_sieve(int(x)).primes_upto(x)
    pf = primes.astype(np.float64)
    base = np.cos(alpha * np.log(pf)) / pf
    plain = math.fsum(base)
    if table is None:
        return plain, None
    if x > table.N:
        raise ValueError(f"table (N = {table.N}) does not cover x = {x}")
    lam = table.lam[primes]
    return plain, math.fsum(base * (lam * lam - 1))


def mertens_zeta_gap(x: float, alpha: float) -> float:
    """sum_{p<=x} cos(alpha log p)/p - log|zeta(1 + 1/log x + i alpha)|."""
    plain, _ = prime_cos_sums(x, alpha)
    return plain - math.log(abs(zeta(complex(1 + 1 / math.log(x), alpha))))


def mertens_sym2_gap(x: float, alpha: float, table: EigenformTable) -> float:
    """sum_{p<=x} cos(alpha log p) lambda(p^2)/p - log|L(1 + 1/log x + i alpha, sym^2 f)|."""
    _, sym = prime_cos_sums(x, alpha, table)
    return sym - math.log(abs(l_sym_square(complex(1 + 1 / math.log(x), alpha), table).value))


# -- envelope functions -------------------------------------------------------


def _loglog_bound(x: float, logq: float) -> bool:
    """x >= e^q where q = exp(logq), compared in log space."""
    return x > 0 and math.log(x) >= math.exp(logq) if logq < 700 else False


def g1(x: float, logq: float) -> float:
    """Piecewise majorant for |zeta(1 + ix + 1/log q)|; min of both branches at shared endpoints."""
    if x < 0:
        raise ValueError(f"g1 needs x >= 0, got {x}")
    if logq <= 1:
        raise ValueError(f"g1 needs log q > 1, got {logq}")
    values = []
    ge_eq = _loglog_bound(x, logq)
    le_eq = not ge_eq or math.log(x) == math.exp(logq)
    if x <= 1 / logq or ge_eq:
        values.append(logq)
    if 1 / logq <= x <= 10:
        values.append(1 / x)
    if x >= 10 and le_eq:
        values.append(math.log(math.log(x)))
    return min(values)


def g2(x: float, logq: float) -> float:
    """Piecewise majorant for |L(1 + ix + 1/log q, sym^2 f)|; min at shared endpoints."""
    if x < 0:
        raise ValueError(f"g2 needs x >= 0, got {x}")
    if logq <= 1:
        raise ValueError(f"g2 needs log q > 1, got {logq}")
    values = []
    ge_eq = _loglog_bound(x, logq)
    le_eq = not ge_eq or math.log(x) == math.exp(logq)
    if x <= math.e**math.e:
        values.append(1.0)
    if x >= math.e**math.e and le_eq:
        values.append(math.log(math.log(x)))
    if ge_eq:
        values.append(logq)
    return min(values)


# -- majorants -----------------------------------------------------------------


@dataclass(frozen=True)
class MajorantValue:
    total: float
    prime_sum: float
    square_sum: float
    log_term: float


MAJORANT_VARIANTS = ("general", "nonquadratic", "quadratic")


def log_l_majorant(
    chi: DirichletCharacter,
    t: float,
    x: float,
    table: EigenformTable,
    variant: str = "general",
    A: float = 1.0,
    modulus: float | None = None,
) -> MajorantValue:
    """Upper bound for log|L(1/2 + it, f x chi)| without its O(1) term.

    ``general``/``nonquadratic``:
        Re sum_{p<=x} chi(p) lambda(p) p^(-1/2 - it - 1/log x) log(x/p)/log x
        + 1/2 Re sum_{p<=P} chi(p^2) (lambda(p^2) - 1) p^(-1 - 2it)
        + 2 (A + 1) log q / log x,
    with P = sqrt(x), or min(log q, sqrt(x)) for non-quadratic chi.  The
    square sum carries the sign of the l = 2 terms of log L, as produced by
    the derivation of the bound (a minus sign there breaks the bound's
    correlation with |L|).
    ``quadratic`` bounds log|A(d) L(1/2 + it, f x chi^(8d))|: the square sum
    drops chi(p^2), runs over p <= sqrt(x), and ``modulus`` is X.
    """
    if variant not in MAJORANT_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    q = chi.modulus
    big = float(modulus if modulus is not None else q)
    if not 2 <= x <= big:
        raise ValueError(f"x = {x} outside [2, {big}]")
    if abs(t) > big**A:
        raise ValueError(f"|t| = {abs(t)} exceeds modulus^A")
    if x > table.N:
        raise ValueError(f"table (N = {table.N}) does not cover x = {x}")
    if variant == "nonquadratic" and chi.is_quadratic:
        raise ValueError("nonquadratic variant needs chi^2 != chi_0")
    sieve = get_sieve(int(x))
    vals = chi.values()
    lx = math.log(x)

    p = sieve.primes_upto(x)
    pf = p.astype(np.float64)
    w = np.log(x / pf) / lx
    terms = vals[p % q] * table.lam[p] * np.exp(-(0.5 + 1j * t + 1 / lx) * np.log(pf)) * w
    prime_sum = math.fsum(terms.real)

    P = math.sqrt(x)
    if variant == "nonquadratic":
        P = min(math.log(big), P)
    p2 = sieve.primes_upto(P) if P >= 2 else p[:0]
    pf2 = p2.astype(np.float64)
    lam2m1 = table.lam[p2] ** 2 - 2  # lambda(p^2) - 1
    sq = lam2m1 * np.exp(-(1 + 2j * t) * np.log(pf2))
    if variant != "quadratic":
        sq = sq * vals[p2 % q] ** 2
    square_sum = 0.5 * math.fsum(sq.real)

    log_term = 2 * (A + 1) * math.log(big) / lx
    return MajorantValue(prime_sum + square_sum + log_term, prime_sum, square_sum, log_term)


def log_lambda0(tol: float = 1e-15) -> float:
    """Positive root of e^-x = x + x^2/2, by bisection on [0.4, 0.6]."""
    lo, hi = 0.4, 0.6
    f = lambda v: math.exp(-v) - v - v * v / 2  # noqa: E731
    if f(lo) * f(hi) >= 0:
        raise ArithmeticError("bisection bracket does not change sign")  # pragma: no cover
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


# -- shifted moments -----------------------------------------------------------


@dataclass(frozen=True)
class ShiftConfig:
    """Exponents a_1..a_k > 0, shifts t_1..t_k and the growth parameter A."""

    a: tuple[float, ...]
    t: tuple[float, ...]
    A: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "t", tuple(float(v) for v in self.t))
        if len(self.a) != len(self.t) or not self.a:
            raise ValueError("need equally many exponents and shifts (k >= 1)")
        if any(v <= 0 for v in self.a):
            raise ValueError("exponents a_j must be positive")
        if self.A <= 0:
            raise ValueError("A must be positive")

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def a_sum(self) -> float:
        return sum(self.a)

    def check_shifts(self, modulus: float):
        bound = float(modulus) ** self.A
        for tj in self.t:
            if abs(tj) > bound:
                raise ValueError(f"|t| = {abs(tj)} exceeds modulus^A = {bound}")


def shift_weight_h(n: int, cfg: ShiftConfig) -> complex:
    """h(n) = (1/2) sum_m a_m n^(-i t_m)."""
    if n < 1:
        raise ValueError(f"h(n) needs n >= 1, got {n}")
    ln = math.log(n)
    return 0.5 * sum(a * cmath.exp(-1j * t * ln) for a, t in zip(cfg.a, cfg.t))


def h_abs_squared_expansion(p: int, cfg: ShiftConfig) -> float:
    """sum a_j^2/4 + sum_{i<j} (a_i a_j / 2) cos(|t_i - t_j| log p)."""
    lp = math.log(p)
    out = sum(a * a for a in cfg.a) / 4
    for i in range(cfg.k):
        for j in range(i + 1, cfg.k):
            out += cfg.a[i] * cfg.a[j] / 2 * math.cos(abs(cfg.t[i] - cfg.t[j]) * lp)
    return out


@dataclass(frozen=True)
class EnvelopeFactor:
    kind: str
    argument: complex | float
    exponent: float
    value: float


@dataclass
class EnvelopeValue:
    log_envelope: float
    factors: list[EnvelopeFactor] = field(default_factory=list)

    @property
    def value(self) -> float:
        return math.exp(self.log_envelope)

    def reassembled(self) -> float:
        return math.fsum(f.exponent * math.log(f.value) for f in self.factors)


def _envelope(factors: list[EnvelopeFactor]) -> EnvelopeValue:
    return EnvelopeValue(math.fsum(f.exponent * math.log(f.value) for f in factors), factors)


def _zeta_factor(u: float, logm: float, exponent: float, mode: str, table) -> list[EnvelopeFactor]:
    """|zeta(1 + iu + 1/log m)| and |L(1 + iu + 1/log m, sym^2 f)| (or g1/g2) at a shift u."""
    out = []
    if mode == "exact":
        s = complex(1 + 1 / logm, u)
        out.append(EnvelopeFactor("zeta", s, exponent, abs(zeta(s))))
    else:
        out.append(EnvelopeFactor("g1", abs(u), exponent, g1(abs(u), logm)))
    return out


def _sym_factor(u: float, logm: float, exponent: float, mode: str, table) -> list[EnvelopeFactor]:
    if mode == "exact":
        s = complex(1 + 1 / logm, u)
        return [EnvelopeFactor("sym2", s, exponent, abs(l_sym_square(s, table).value))]
    return [EnvelopeFactor("g2", abs(u), exponent, g2(abs(u), logm))]


def envelope_fixed_mod(cfg: ShiftConfig, q: int, table: EigenformTable, mode: str = "exact") -> EnvelopeValue:
    """phi(q) (log q)^(sum a_j^2/4) prod_{j<l} |zeta(1 + i(t_j - t_l) + 1/log q)
    L(1 + i(t_j - t_l) + 1/log q, sym^2 f)|^(a_j a_l / 2), or its g1/g2 form."""
    from .arith import factorize

    if mode not in ("exact", "g"):
        raise ValueError(f"unknown mode {mode!r}")
    cfg.check_shifts(q)
    logq = math.log(q)
    if math.log(logq) <= 0:
        raise ValueError(f"q = {q} too small: log log q must be positive")
    phi = q
    for p, _ in factorize(q):
        phi = phi // p * (p - 1)
    factors = [
        EnvelopeFactor("phi", q, 1.0, float(phi)),
        EnvelopeFactor("log", q, sum(a * a for a in cfg.a) / 4, logq),
    ]
    for j in range(cfg.k):
        for l in range(j + 1, cfg.k):
            e = cfg.a[j] * cfg.a[l] / 2
            u = cfg.t[j] - cfg.t[l]
            factors += _zeta_factor(u, logq, e, mode, table)
            factors += _sym_factor(u, logq, e, mode, table)
    return _envelope(factors)


def envelope_quadratic(cfg: ShiftConfig, X: float, table: EigenformTable, mode: str = "exact") -> EnvelopeValue:
    """X (log X)^(sum a_j^2/4) times zeta and sym^2 factors at t_j - t_l, t_j + t_l
    (exponent a_j a_l / 2) and at 2 t_j (exponents a_j^2/4 -/+ a_j/2)."""
    if mode not in ("exact", "g"):
        raise ValueError(f"unknown mode {mode!r}")
    cfg.check_shifts(X)
    logX = math.log(X)
    if math.log(logX) <= 0:
        raise ValueError(f"X = {X} too small: log log X must be positive")
    factors = [
        EnvelopeFactor("X", X, 1.0, float(X)),
        EnvelopeFactor("log", X, sum(a * a for a in cfg.a) / 4, logX),
    ]
    for j in range(cfg.k):
        for l in range(j + 1, cfg.k):
            e = cfg.a[j] * cfg.a[l] / 2
            for u in (cfg.t[j] - cfg.t[l], cfg.t[j] + cfg.t[l]):
                factors += _zeta_factor(u, logX, e, mode, table)
                factors += _sym_factor(u, logX, e, mode, table)
    for j in range(cfg.k):
        aj = cfg.a[j]
        factors += _zeta_factor(2 * cfg.t[j], logX, aj * aj / 4 - aj / 2, mode, table)
        factors += _sym_factor(2 * cfg.t[j], logX, aj * aj / 4 + aj / 2, mode, table)
    return _envelope(factors)
