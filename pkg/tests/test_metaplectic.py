import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mp2newforms.characters import MultCharacter, UnitCharacter, unit_characters
from mp2newforms.exact import ALL_CLASSES, hilbert, smallest_nonresidue
from mp2newforms.metaplectic import (
    IDENTITY,
    W,
    MpElem,
    SL2Elem,
    coset_oracle,
    coset_reps,
    cocycle_check,
    hom_condition,
    hom_condition_oracle,
    kubota_cocycle,
    kubota_x,
    minus_one_psi,
    mp_inv,
    mp_mul,
    n,
    nop,
    random_K,
    splitting_check,
    splitting_s,
    t,
)


def test_kubota_x_examples():
    assert kubota_x(IDENTITY) == 1
    assert kubota_x(W) == -1
    assert kubota_x(t(Fraction(5, 3))) == Fraction(3, 5)


def test_cocycle_examples(p):
    g = SL2Elem(2, 3, 5, 8)
    assert kubota_cocycle(IDENTITY, g, p) == 1
    assert kubota_cocycle(W, W, p) == 1
    for a in ALL_CLASSES:
        for b in ALL_CLASSES:
            ra, rb = a.representative(p).to_rational_mod(), b.representative(p).to_rational_mod()
            assert kubota_cocycle(t(ra), t(rb), p) == hilbert(rb, ra, p)


def test_group_law(p):
    g = MpElem(SL2Elem(1, 2, p, 1 + 2 * p), -1)
    assert mp_mul(g, mp_inv(g, p), p) == MpElem(IDENTITY, 1)
    z = minus_one_psi(p)
    assert mp_mul(z, z, p) == MpElem(IDENTITY, 1)
    # central
    for h in (W, t(Fraction(p)), n(Fraction(1, p)), nop(p)):
        x = MpElem(h, 1)
        assert mp_mul(z, x, p) == mp_mul(x, z, p)


@pytest.mark.parametrize("p", [3, 5])
def test_cocycle_associativity(p):
    assert cocycle_check(p, 1000, seed=7) == 0


def test_splitting_generator_values(p):
    xi = smallest_nonresidue(p)
    for b in (0, 1, Fraction(p + 1, 1), -7):
        assert splitting_s(n(b), p, 0) == 1
    for a in (1, xi, p + 1, -1):
        assert splitting_s(t(a), p, 0) == 1
        assert splitting_s(t(a), p, 1) == hilbert(a, p, p)
    assert splitting_s(W @ t(p), p, 1) == 1


@pytest.mark.parametrize("p,eps", [(3, 0), (5, 1), (3, 1), (5, 0)])
def test_splitting_is_a_homomorphism(p, eps):
    rep = splitting_check(p, eps, 500, seed=11)
    assert rep.passed
    assert rep.homomorphism_failures == 0


@given(st.sampled_from([3, 5]), st.sampled_from([0, 1]), st.integers(0, 10**6))
def test_splitting_multiplicative_on_random_pairs(p, eps, seed):
    rng = random.Random(seed)
    k1, k2 = random_K(rng, p, eps), random_K(rng, p, eps)
    assert splitting_s(k1 @ k2, p, eps) == splitting_s(k1, p, eps) * splitting_s(k2, p, eps) * kubota_cocycle(k1, k2, p)


def test_splitting_rejects_elements_outside_K():
    with pytest.raises(ValueError):
        splitting_s(n(Fraction(1, 9)), 3, 1)


def test_coset_reps_examples():
    assert coset_reps(0, 0, 3) == [IDENTITY]
    assert coset_reps(0, 2, 3) == [IDENTITY, W, nop(3), nop(6)]
    assert coset_reps(1, 2, 3) == [IDENTITY, W, nop(9), nop(18)]


@pytest.mark.parametrize("p,m,count", [(3, 0, 1), (3, 1, 2), (3, 2, 4), (5, 2, 4), (3, 3, 6)])
def test_coset_counts(p, m, count):
    rep = coset_oracle(p, m)
    assert rep.count == count
    assert rep.verified


def test_coset_resource_limit():
    with pytest.raises(MemoryError):
        coset_oracle(7, 4)


def mu_grid(p):
    for unit in unit_characters(p, 2):
        for k, nn in ((0, 1), (1, 2)):
            yield MultCharacter(unit, k, nn)


def test_hom_condition_examples(p):
    mu = MultCharacter(UnitCharacter(p, 1, 1))
    assert hom_condition(IDENTITY, 0, 2, mu.unit.inverse(), mu)
    other = UnitCharacter(p, 2, 1)
    assert other.sign() == mu.sign() and other != mu.unit
    assert not hom_condition(W, 0, 2, other, mu)
    assert hom_condition(W, 0, 2, mu.unit, mu)
    triv = MultCharacter(UnitCharacter.trivial(p))
    for rep in coset_reps(0, 2, p)[2:]:
        assert hom_condition(rep, 0, 2, UnitCharacter.trivial(p), triv)


def test_hom_condition_sign_mismatch():
    with pytest.raises(ValueError):
        hom_condition(IDENTITY, 0, 1, UnitCharacter.legendre(3), MultCharacter(UnitCharacter.trivial(3)))
    with pytest.raises(ValueError):
        hom_condition_oracle(IDENTITY, 0, 1, UnitCharacter.legendre(3), MultCharacter(UnitCharacter.trivial(3)))


@pytest.mark.parametrize("eps", [0, 1])
def test_hom_condition_matches_oracle(eps):
    p = 3
    for mu in mu_grid(p):
        for eta in unit_characters(p, 2):
            if eta.sign() != mu.sign():
                continue
            for m in range(4):
                for g in coset_reps(eps, m, p):
                    assert hom_condition(g, eps, m, eta, mu) == hom_condition_oracle(g, eps, m, eta, mu), (mu, eta, m, g)
