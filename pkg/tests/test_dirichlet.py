import math

import numpy as np
import pytest

from heckelab.arith import kronecker, odd_squarefree
from heckelab.dirichlet import (
    CharacterGroup,
    conductor,
    enumerate_group,
    gauss_sum,
    orthogonality_sum,
    primitive_root,
    quadratic_character,
)

from .oracles import brute_conductor, gauss_sum_naive


def phi(q):
    return sum(1 for n in range(1, q + 1) if math.gcd(n, q) == 1)


@pytest.mark.parametrize("q,order,ngens", [(5, 4, 1), (8, 4, 2), (45, 24, 2), (16, 8, 2), (24, 8, 3)])
def test_group_orders(q, order, ngens):
    g = enumerate_group(q)
    assert g.order == order == phi(q)
    assert len(g.orders) == ngens
    assert len(list(g.characters())) == order


def test_group_rejects_small():
    with pytest.raises(ValueError):
        CharacterGroup(2)


def test_primitive_roots():
    for p in [3, 5, 7, 11, 13, 23, 101, 9973]:
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_characters_distinct_and_multiplicative():
    for q in [7, 8, 9, 12, 20, 45, 64]:
        g = CharacterGroup(q)
        tables = [tuple(np.round(chi.values(), 12)) for chi in g.characters()]
        assert len(set(tables)) == g.order
        for chi in g.characters():
            for m in range(q):
                for n in range(q):
                    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12


def test_values_zero_off_units_and_unit_modulus():
    for q in [9, 15, 32, 100]:
        g = CharacterGroup(q)
        for chi in g.characters():
            vals = chi.values()
            for n in range(q):
                if math.gcd(n, q) > 1:
                    assert vals[n] == 0 and chi.value_exponent(n) is None
                else:
                    assert abs(abs(vals[n]) - 1) < 1e-14
            assert chi(n + 5 * q) == chi(n)


def test_quadratic_flag_matches_values():
    for q in [15, 16, 24, 40, 63]:
        for chi in CharacterGroup(q).characters():
            real = np.allclose(chi.values().imag, 0, atol=1e-12)
            assert chi.is_quadratic == real


def test_conductor_examples():
    g5 = CharacterGroup(5)
    assert conductor(g5.principal()) == 1
    assert all(chi.conductor == 5 for chi in g5.characters() if not chi.is_principal)
    g9 = CharacterGroup(9)
    induced = [chi for chi in g9.characters() if chi.is_quadratic and not chi.is_principal]
    assert len(induced) == 1 and induced[0].conductor == 3


def test_conductor_brute_force():
    for q in list(range(3, 65)) + [72, 96, 100, 128, 135]:
        for chi in CharacterGroup(q).characters():
            assert chi.conductor == brute_conductor(chi), (q, chi.exponents)


def test_orthogonality_examples():
    assert orthogonality_sum(5, 1) == 4
    assert orthogonality_sum(5, 2) == 0
    assert orthogonality_sum(7, 8) == 6
    assert orthogonality_sum(12, 6) == 0


def test_orthogonality_against_float_sum():
    for q in [8, 21, 36]:
        g = CharacterGroup(q)
        for n in range(2 * q):
            total = sum(chi(n) for chi in g.characters())
            assert abs(total - orthogonality_sum(q, n, g)) < 1e-9


def test_gauss_sum_examples():
    g5 = CharacterGroup(5)
    quad = next(c for c in g5.characters() if c.is_quadratic and not c.is_principal)
    tau = gauss_sum(quad)
    assert abs(tau - math.sqrt(5)) < 1e-12
    g3 = CharacterGroup(3)
    tau3 = gauss_sum(next(c for c in g3.characters() if not c.is_principal))
    assert abs(tau3 - 1j * math.sqrt(3)) < 1e-12
    with pytest.raises(ValueError):
        gauss_sum(CharacterGroup(9).principal())


def test_gauss_sum_twisted_identity():
    for q in range(3, 51):
        for chi in CharacterGroup(q).primitive_characters():
            tau = gauss_sum(chi)
            assert abs(tau - gauss_sum_naive(chi)) < 1e-9
            for n in range(1, q):
                if math.gcd(n, q) == 1:
                    assert abs(gauss_sum(chi, n) - chi(n).conjugate() * tau) < 1e-9


def test_quadratic_character_family():
    for d in odd_squarefree(30):
        d = int(d)
        chi = quadratic_character(d)
        assert chi.modulus == 8 * d
        assert chi.is_primitive and chi.conductor == 8 * d
        assert chi.is_quadratic
        for n in range(1, 8 * d):
            assert abs(chi(n) - kronecker(8 * d, n)) < 1e-12


def test_quadratic_character_rejects_even():
    with pytest.raises(ValueError):
        quadratic_character(4)


def test_character_from_function_rejects_non_characters():
    g = CharacterGroup(7)
    with pytest.raises(ValueError):
        g.character_from_function(lambda n: 1 if n % 7 == 1 else -1)


def test_label_and_parity():
    g = CharacterGroup(8)
    labels = [chi.label for chi in g.characters()]
    assert labels == ["8:0.0", "8:0.1", "8:1.0", "8:1.1"]
    for chi in g.characters():
        assert chi.parity == round(chi(-1).real)
    assert g.character((1, 0)).conj() == g.character((1, 0))
