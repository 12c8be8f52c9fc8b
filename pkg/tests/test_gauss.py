from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mp2newforms.characters import UnitCharacter, additive_with_conductor, psi_eps, unit_characters
from mp2newforms.cyclotomic import CycNumber
from mp2newforms.exact import ALL_CLASSES, ScaledPAdic, SquareClass, hilbert, smallest_nonresidue
from mp2newforms.gauss import (
    gauss_g_closed,
    gauss_g_oracle,
    gauss_h_oracle,
    gauss_h_pair_magsq,
    h_pair_oracle,
    h_twist_report,
    weil_index,
    weil_index_identities_check,
)


def naive_g(chi, psi, K):
    """Direct residue sum with per-term evaluation, independent of the vectorized oracle."""
    p = chi.p
    total = CycNumber.zero()
    for x in range(1, p**K):
        if x % p:
            total = total + chi(x) * psi(Fraction(x))
    return total * CycNumber.rational(Fraction(1, p**K))


def test_unramified_values(p):
    triv = UnitCharacter.trivial(p)
    assert gauss_g_oracle(triv, additive_with_conductor(p, 0)) == 1 - Fraction(1, p)
    assert gauss_g_oracle(triv, additive_with_conductor(p, -2)) == 1 - Fraction(1, p)
    assert gauss_g_oracle(triv, additive_with_conductor(p, 1)) == Fraction(-1, p)
    assert gauss_g_closed(triv, additive_with_conductor(p, 2)).kind == "zero"


def test_closed_form_kinds():
    chi2 = UnitCharacter(3, 2, 1)
    v = gauss_g_closed(chi2, additive_with_conductor(3, 2))
    assert v.kind == "magsq" and v.mag_sq == Fraction(1, 9)
    assert gauss_g_closed(UnitCharacter(3, 1, 1), additive_with_conductor(3, 0)).is_zero


def test_legendre_gauss_sum_p3():
    g = gauss_g_oracle(UnitCharacter.legendre(3), additive_with_conductor(3, 1))
    z = CycNumber.root(1, 3)
    assert g == (z - z * z) * Fraction(1, 3)
    assert g.mag_sq() == Fraction(1, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_oracle_matches_naive_sum(p):
    for chi in unit_characters(p, 2):
        for c in range(-1, 3):
            psi = additive_with_conductor(p, c)
            K = max(1, c, chi.conductor())
            assert gauss_g_oracle(chi, psi) == naive_g(chi, psi, K)


@given(st.sampled_from([3, 5, 7]), st.integers(0, 3), st.integers(0, 400), st.integers(-1, 3), st.integers(1, 30))
def test_closed_form_agrees_with_oracle(p, level, e, c, unit):
    if unit % p == 0:
        unit += 1
    chi = UnitCharacter(p, level, e)
    psi = additive_with_conductor(p, c, unit)
    closed, oracle = gauss_g_closed(chi, psi), gauss_g_oracle(chi, psi)
    assert closed.is_zero == oracle.is_zero()
    assert closed.mag_sq == oracle.mag_sq().to_fraction()
    if closed.kind == "exact":
        assert closed.value == oracle


@given(st.sampled_from([3, 5, 7]), st.integers(0, 3), st.integers(0, 400), st.integers(-1, 3))
def test_gauss_sum_is_unit_equivariant(p, level, e, c):
    chi = UnitCharacter(p, level, e)
    psi = additive_with_conductor(p, c)
    a = smallest_nonresidue(p)
    # substituting x -> a^-1 x
    assert gauss_g_oracle(chi, psi.twist(a)) == chi(pow(a, -1, p**4)) * gauss_g_oracle(chi, psi)


def test_h_vanishes_for_odd_characters(p):
    for chi in unit_characters(p, 2):
        if chi.sign() == -1:
            for c in range(-1, 3):
                assert gauss_h_oracle(chi, additive_with_conductor(p, c)).is_zero()
            with pytest.raises(ValueError, match="odd character"):
                gauss_h_pair_magsq(chi, additive_with_conductor(p, 1))


def test_h_examples():
    triv = UnitCharacter.trivial(3)
    assert gauss_h_oracle(triv, additive_with_conductor(3, 0)) == Fraction(2, 3)
    assert h_pair_oracle(triv, additive_with_conductor(3, 1)) == Fraction(2, 3) + Fraction(2, 9)
    assert gauss_h_pair_magsq(UnitCharacter.legendre(5), additive_with_conductor(5, 1)) == Fraction(4, 5)
    assert gauss_h_pair_magsq(UnitCharacter(5, 2, 2), additive_with_conductor(5, 1)) == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_h_pair_closed_form(p):
    for chi in unit_characters(p, 3):
        if chi.sign() == 1:
            for c in range(-1, 4):
                psi = additive_with_conductor(p, c)
                assert gauss_h_pair_magsq(chi, psi) == h_pair_oracle(chi, psi)


def test_h_twist_report_finds_a_single_twist():
    seen = set()
    for p in (3, 5):
        for chi in unit_characters(p, 3):
            for c in (2, 3):
                r = h_twist_report(chi, additive_with_conductor(p, c))
                if r is not None:
                    assert r in ("psi", "psi_xi")
                    seen.add(r)
    assert seen == {"psi", "psi_xi"}


def test_weil_index_examples(p):
    psi0 = psi_eps(p, 0)
    for u in (1, 2, p + 1):
        if u % p:
            assert weil_index(u, psi0) == 1
    g = weil_index(p, psi0)
    assert (g.value**2) == hilbert(-1, p, p) * weil_index(-1, psi0).value
    assert g.value**8 == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_weil_index_identities(p):
    assert weil_index_identities_check(p) == dict.fromkeys(
        ["square_invariance", "multiplicativity", "twist", "minus_one", "parity"], True)


@given(st.sampled_from([3, 5]), st.sampled_from(ALL_CLASSES), st.sampled_from(ALL_CLASSES), st.integers(-2, 2))
def test_weil_index_multiplicativity(p, a, b, c):
    psi = additive_with_conductor(p, c)
    ra, rb = a.representative(p), b.representative(p)
    assert weil_index(ra * rb, psi) == weil_index(ra, psi) * weil_index(rb, psi) * hilbert(ra, rb)


def test_weil_index_at_minus_one_is_a_sign(p):
    for eps in (0, 1):
        v = weil_index(ScaledPAdic.from_rational(-1, p), psi_eps(p, eps)).value
        assert v in (CycNumber.one(), -CycNumber.one(), CycNumber.root(1, 4), CycNumber.root(3, 4))
        assert v**2 == hilbert(-1, -1, p) * weil_index(1, psi_eps(p, eps)).value
