import itertools
from math import gcd

import pytest

from etaforge.arith import euler_phi, moebius
from etaforge.characters import (
    CharacterError,
    char_from_spec,
    conductor,
    enumerate_characters,
    enumerate_primitive_chars,
    eta_chi_level,
    gauss_sum,
    primitive_core,
    principal,
)
from etaforge.exactfield import CycNum

z = CycNum.zeta


def test_descriptors():
    k3 = char_from_spec("kronecker:3")
    assert k3(1) == 1 and k3(2) == -1 and k3(3) == 0
    psi = char_from_spec("psi4")
    assert psi(1) == 1 and psi(3) == -1 and psi(2) == 0
    c1 = char_from_spec({"modulus": 5, "order": 4, "gens": [[2, 1]]})
    assert c1(2) == z(4) and c1(4) == -1 and c1(3) == -z(4)
    assert char_from_spec("chi5:1") == c1
    assert char_from_spec(c1.descriptor) == c1


@pytest.mark.parametrize("bad", ["kronecker:9", "kronecker:2", "chi5:3", "nope", "mod:5:4:3=x", 7])
def test_bad_descriptors(bad):
    with pytest.raises(CharacterError):
        char_from_spec(bad)


def test_inconsistent_generator_assignment():
    # 2 has order 4 mod 5, so chi(2) = zeta_3 is impossible
    with pytest.raises(CharacterError):
        char_from_spec({"modulus": 5, "order": 3, "gens": [[2, 1]]})


def test_conductor_examples():
    k3 = char_from_spec("kronecker:3")
    assert conductor(principal(6)) == 1
    assert conductor(k3.induce(6)) == 3
    assert conductor(char_from_spec("kronecker:5")) == 5


def test_primitive_core_examples():
    k3 = char_from_spec("kronecker:3")
    dec = primitive_core(k3.induce(6))
    assert dec.core == k3 and dec.induced_modulus == 6
    assert primitive_core(k3).core is k3
    assert primitive_core(principal(12)).core == principal(1)


def test_core_is_primitive_and_agrees_on_units():
    for N in range(2, 41):
        for chi in enumerate_characters(N):
            core = primitive_core(chi).core
            assert core.conductor == core.modulus
            for a in range(1, N):
                if gcd(a, N) == 1:
                    assert core(a) == chi(a)


def test_gauss_sum_examples():
    assert gauss_sum(char_from_spec("kronecker:3")) == z(3) - z(3, 2)
    assert gauss_sum(char_from_spec("psi4")) == z(4) - z(4, 3)
    assert gauss_sum(principal(1)) == 1
    # both argument orders
    assert gauss_sum(2, "kronecker:3") == gauss_sum("kronecker:3", 2)


def test_gauss_sum_is_separable_mod_5():
    chi = char_from_spec("kronecker:5")
    cc = chi.conj()
    g = gauss_sum(cc)
    for n in range(10):
        assert gauss_sum(n, cc) == chi(n) * g


@pytest.mark.parametrize("u", [3, 4, 5, 7, 8, 9])
def test_gauss_sum_norm_and_conjugate(u):
    prims = enumerate_primitive_chars(u)
    assert prims
    for chi in prims:
        g = gauss_sum(chi)
        assert g * g.conj() == u
        assert gauss_sum(chi.conj()) == chi.parity * g.conj()


def test_multiplicativity_up_to_50():
    for N in range(1, 51):
        chars = enumerate_characters(N)
        assert len(chars) == euler_phi(N)
        units = [a for a in range(1, N + 1) if gcd(a, N) == 1]
        for chi in chars:
            assert chi(1) == 1
            for a, b in itertools.product(units, repeat=2):
                assert chi(a * b) == chi(a) * chi(b)


def _count_primitive(u):
    # number of primitive characters mod u, by Moebius inversion of phi
    return sum(moebius(u // d) * euler_phi(d) for d in range(1, u + 1) if u % d == 0)


def test_primitive_counts():
    assert enumerate_primitive_chars(2) == ()
    assert enumerate_primitive_chars(1) == (principal(1),)
    assert enumerate_primitive_chars(3) == (char_from_spec("kronecker:3"),)
    assert enumerate_primitive_chars(4) == (char_from_spec("psi4"),)
    five = enumerate_primitive_chars(5)
    assert five == tuple(char_from_spec(s) for s in ("kronecker:5", "chi5:1", "chi5:2"))
    for u in range(1, 40):
        assert len(enumerate_primitive_chars(u)) == _count_primitive(u)


def test_moebius_values():
    assert [moebius(n) for n in (1, 2, 4, 6, 30, 12)] == [1, -1, 0, 1, -1, 0]


def test_level():
    k3 = char_from_spec("kronecker:3")
    assert eta_chi_level(k3) == 9
    assert eta_chi_level(k3.induce(18)) == 18
    assert eta_chi_level(char_from_spec("psi4")) == 16
    with pytest.warns(UserWarning):
        eta_chi_level(char_from_spec("chi5:1"))


def test_parity_and_conj():
    assert char_from_spec("kronecker:3").parity == -1
    assert char_from_spec("kronecker:5").parity == 1
    c1 = char_from_spec("chi5:1")
    assert c1.conj() == char_from_spec("chi5:2")
    assert not c1.is_real
