"""Dirichlet characters mod q in exact exponent form.

The unit group (Z/q)^* is split by CRT into prime-power factors; odd factors
are cyclic with a primitive-root generator, 2^a (a >= 3) uses the pair
(-1, 5).  A character is an exponent vector ``c`` on these generators, and
chi(n) = e(sum_j c_j log_j(n) / ord_j), kept as an integer exponent modulo
the group exponent ``L`` until a float value is requested.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .arith import factorize, get_sieve


def primitive_root(p: int) -> int:
    """Least primitive root modulo an odd prime p."""
    if p == 2:
        return 1
    factors = [r for r, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")  # pragma: no cover


@dataclass(frozen=True)
class _Generator:
    prime: int
    prime_power: int
    residue: int  # generator modulo prime_power
    order: int


def _component_generators(p: int, e: int) -> list[_Generator]:
    pe = p**e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [_Generator(2, 4, 3, 2)]
        return [_Generator(2, pe, pe - 1, 2), _Generator(2, pe, 5, 2 ** (e - 2))]
    g = primitive_root(p)
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return [_Generator(p, pe, g, pe // p * (p - 1))]


def _component_logs(p: int, e: int, gens: list[_Generator]) -> np.ndarray:
    """Discrete logs of every residue mod p^e; -1 on non-units.  Shape (p^e, len(gens))."""
    pe = p**e
    logs = np.full((pe, len(gens)), -1, dtype=np.int64)
    if not gens:
        logs[1 % pe, :] = 0
        return logs
    if p == 2 and e >= 3:
        x = 1
        for b in range(gens[1].order):
            logs[x] = (0, b)
            logs[pe - x] = (1, b)
            x = x * 5 % pe
        return logs
    g = gens[0].residue
    x = 1
    for k in range(gens[0].order):
        logs[x, 0] = k
        x = x * g % pe
    return logs


class CharacterGroup:
    """The group of Dirichlet characters modulo q (q >= 3)."""

    def __init__(self, q: int):
        q = int(q)
        if q < 3:
            raise ValueError(f"modulus must be >= 3, got {q}")
        self.q = q
        self.factorization = factorize(q)
        gens: list[_Generator] = []
        blocks = []
        for p, e in self.factorization:
            comp = _component_generators(p, e)
            blocks.append((p, e, comp, _component_logs(p, e, comp)))
            gens.extend(comp)
        self._gens = gens
        self.orders = np.array([g.order for g in gens], dtype=np.int64)
        self.exponent = math.lcm(*self.orders.tolist()) if gens else 1
        self.order = int(np.prod(self.orders)) if gens else 1

        residues = np.arange(q)
        logs = np.zeros((q, len(gens)), dtype=np.int64)
        unit = np.ones(q, dtype=bool)
        col = 0
        for p, e, comp, table in blocks:
            local = table[residues % p**e]
            unit &= (local >= 0).all(axis=1) if comp else (residues % p**e) % p != 0
            logs[:, col : col + len(comp)] = local
            col += len(comp)
        logs[~unit] = 0
        self.is_unit = unit
        self.logs = logs
        # generator elements lifted by CRT to residues mod q
        self.generators = [self._lift(g) for g in gens]
        self._roots = np.exp(2j * np.pi * np.arange(self.exponent) / self.exponent)

    def _lift(self, g: _Generator) -> int:
        m = self.q // g.prime_power
        # x = g.residue mod prime_power, x = 1 mod the cofactor
        inv = pow(m, -1, g.prime_power)
        return (1 + m * ((g.residue - 1) * inv % g.prime_power)) % self.q

    def __repr__(self):
        return f"CharacterGroup(q={self.q}, order={self.order})"

    def __len__(self):
        return self.order

    def __iter__(self):
        return self.characters()

    def characters(self):
        """All characters in lexicographic order of exponent vectors."""
        for c in itertools.product(*(range(int(o)) for o in self.orders)):
            yield DirichletCharacter(self, c)

    def primitive_characters(self) -> list["DirichletCharacter"]:
        return [chi for chi in self.characters() if chi.is_primitive]

    def principal(self) -> "DirichletCharacter":
        return DirichletCharacter(self, (0,) * len(self.orders))

    def character(self, exponents) -> "DirichletCharacter":
        return DirichletCharacter(self, tuple(int(c) for c in exponents))

    def exponent_table(self, exponents: np.ndarray) -> np.ndarray:
        """Value exponents k with chi(n) = e(k / L), for a batch of characters.

        ``exponents`` has shape (r, number of generators); the result has
        shape (r, q) with -1 at non-units.
        """
        exponents = np.atleast_2d(np.asarray(exponents, dtype=np.int64))
        scale = self.exponent // self.orders
        k = (self.logs @ (exponents * scale).T).T % self.exponent
        k[:, ~self.is_unit] = -1
        return k

    def value_table(self, exponents: np.ndarray) -> np.ndarray:
        """Complex values chi(n), n = 0..q-1, for a batch of characters."""
        k = self.exponent_table(exponents)
        vals = self._roots[np.maximum(k, 0)]
        vals[k < 0] = 0
        return vals

    def character_from_function(self, f) -> "DirichletCharacter":
        """The character agreeing with ``f`` on units; ``ValueError`` if none does."""
        c = []
        for g, order in zip(self.generators, self.orders):
            z = complex(f(g))
            c.append(round(cmath.phase(z) / (2 * math.pi) * int(order)) % int(order))
        chi = self.character(c)
        vals = chi.values()
        for n in np.flatnonzero(self.is_unit):
            if abs(vals[n] - complex(f(int(n)))) > 1e-9:
                raise ValueError(f"function is not a character mod {self.q} (fails at n = {n})")
        return chi


def orthogonality_sum(q: int, n: int, group: CharacterGroup | None = None) -> int:
    """Sum of chi(n) over all characters mod q, evaluated exactly.

    Each generator contributes a full geometric sum of roots of unity, which
    is ord_j when log_j(n) = 0 and 0 otherwise.
    """
    group = group or CharacterGroup(q)
    r = n % q
    if not group.is_unit[r]:
        return 0
    out = 1
    for log_j, ord_j in zip(group.logs[r], group.orders):
        out *= int(ord_j) if log_j % ord_j == 0 else 0
    return out


def enumerate_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


class DirichletCharacter:
    """A character mod q given by its exponent vector on the group generators."""

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]):
        if len(exponents) != len(group.orders):
            raise ValueError("exponent vector has the wrong length")
        self.group = group
        self.exponents = tuple(int(c) % int(o) for c, o in zip(exponents, group.orders))

    @property
    def modulus(self) -> int:
        return self.group.q

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and other.modulus == self.modulus
            and other.exponents == self.exponents
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    @property
    def label(self) -> str:
        """External identifier: ``q:c1.c2...`` (exponent vector on the generators)."""
        return f"{self.modulus}:" + ".".join(map(str, self.exponents))

    @cached_property
    def _exponents_mod_q(self) -> np.ndarray:
        return self.group.exponent_table(np.array([self.exponents]))[0]

    def value_exponent(self, n: int) -> int | None:
        """k with chi(n) = e(k / L), or None when gcd(n, q) > 1."""
        k = int(self._exponents_mod_q[n % self.modulus])
        return None if k < 0 else k

    def __call__(self, n: int) -> complex:
        k = self.value_exponent(n)
        return 0j if k is None else complex(self.group._roots[k])

    def values(self) -> np.ndarray:
        """chi(n) for n = 0..q-1."""
        return self.group.value_table(np.array([self.exponents]))[0]

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, tuple(-c for c in self.exponents))

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def is_quadratic(self) -> bool:
        """chi^2 principal (includes the principal character itself)."""
        return all((2 * c) % int(o) == 0 for c, o in zip(self.exponents, self.group.orders))

    @property
    def is_real(self) -> bool:
        return self.is_quadratic

    @property
    def order(self) -> int:
        return math.lcm(*(int(o) // math.gcd(c, int(o)) for c, o in zip(self.exponents, self.group.orders)))

    @property
    def parity(self) -> int:
        """chi(-1), i.e. +1 for even characters and -1 for odd ones."""
        return round(self(-1).real)

    @cached_property
    def conductor(self) -> int:
        out = 1
        col = 0
        for p, e in self.group.factorization:
            ngen = len(_component_generators(p, e))
            c = self.exponents[col : col + ngen]
            orders = [int(o) for o in self.group.orders[col : col + ngen]]
            col += ngen
            out *= _component_conductor(p, e, c, orders)
        return out

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus


def _component_conductor(p: int, e: int, c, orders) -> int:
    if not any(c):
        return 1
    if p == 2:
        if e == 2:
            return 4
        c_minus, c_five = c
        if c_five == 0:
            return 4
        ord5 = orders[1] // math.gcd(c_five, orders[1])
        return 2 ** (ord5.bit_length() - 1 + 2)
    order = orders[0] // math.gcd(c[0], orders[0])
    j = 0
    while order % p == 0:
        order //= p
        j += 1
    return p ** (j + 1)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def gauss_sum(chi: DirichletCharacter, n: int = 1, check_primitive: bool = True) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a n / q)."""
    if check_primitive and not chi.is_primitive:
        raise ValueError(f"{chi} is not primitive")
    q = chi.modulus
    a = np.arange(q)
    terms = chi.values() * np.exp(2j * np.pi * ((a * n) % q) / q)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def quadratic_character(d: int) -> DirichletCharacter:
    """The character kronecker(8d, .) for odd square-free d, as an element of
    the group mod 8d."""
    from .arith import kronecker

    if d < 1 or d % 2 == 0:
        raise ValueError(f"d must be odd and positive, got {d}")
    group = CharacterGroup(8 * d)
    return group.character_from_function(lambda n: kronecker(8 * d, n))


def is_prime_modulus(q: int) -> bool:
    return bool(get_sieve(max(q, 2)).is_prime[q])
