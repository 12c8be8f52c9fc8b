from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mp2newforms.cyclotomic import CycNumber, format_fraction
from mp2newforms.exact import (
    ALL_CLASSES,
    FieldConfig,
    PrecisionError,
    ResidueInt,
    ScaledPAdic,
    SquareClass,
    hilbert,
    hilbert_oracle,
    legendre,
    square_class,
)

primes = st.sampled_from([3, 5, 7, 11])


@pytest.mark.parametrize("p,u,expected", [(3, 1, 1), (3, 2, -1), (5, 4, 1)])
def test_legendre_examples(p, u, expected):
    assert legendre(ResidueInt(u, p, 1)) == expected


def test_legendre_rejects_non_unit():
    with pytest.raises(ValueError, match="not a unit"):
        legendre(ResidueInt(3, 3, 2))


def test_square_class_examples():
    assert square_class(ScaledPAdic(3, 2, 1)) is SquareClass.ONE
    assert square_class(ScaledPAdic(3, 0, 2)) is SquareClass.XI
    assert square_class(ScaledPAdic(3, 1, 2)) is SquareClass.XI_VARPI


def test_zero_has_no_class():
    with pytest.raises(ValueError):
        ScaledPAdic.from_rational(0, 3)


def test_field_config_invariants():
    cfg = FieldConfig(5, 3)
    assert cfg.xi == 2
    assert cfg.M % 8 == 0 and cfg.M % 125 == 0 and cfg.M % (4 * 25) == 0
    with pytest.raises(ValueError):
        FieldConfig(9)
    with pytest.raises(ValueError):
        FieldConfig(2)
    with pytest.raises(ValueError):
        FieldConfig(5, xi=4)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hilbert_matches_solvability_search(p):
    for a in ALL_CLASSES:
        for b in ALL_CLASSES:
            assert hilbert(a, b, p) == hilbert_oracle(a, b, p=p)


def test_hilbert_examples():
    assert hilbert(SquareClass.VARPI, SquareClass.XI, 3) == -1
    assert hilbert_oracle(SquareClass.VARPI, SquareClass.VARPI, p=3) == -1
    assert hilbert_oracle(SquareClass.VARPI, SquareClass.VARPI, p=5) == 1
    assert hilbert_oracle(1, 1, p=3) == 1


@given(primes, st.integers(-4, 4), st.integers(1, 200))
def test_hilbert_a_minus_a(p, v, u):
    if u % p == 0:
        u += 1
    a = ScaledPAdic(p, v, u)
    assert hilbert(a, -a) == 1


@given(primes, st.integers(1, 500), st.integers(1, 500))
def test_hilbert_of_units_is_trivial(p, u, v):
    u, v = u * p + 1, v * p + 2 if p != 2 else v
    assert hilbert(ScaledPAdic(p, 0, u), ScaledPAdic(p, 0, v)) == 1


@given(primes, st.sampled_from(ALL_CLASSES), st.sampled_from(ALL_CLASSES), st.sampled_from(ALL_CLASSES))
def test_hilbert_bimultiplicative(p, a, b, c):
    assert hilbert(a * b, c, p) == hilbert(a, c, p) * hilbert(b, c, p)
    assert hilbert(a, b, p) == hilbert(b, a, p)


@given(primes, st.integers(-6, 6), st.integers(1, 10**6), st.integers(-6, 6), st.integers(1, 10**6))
def test_scaled_padic_multiplication(p, v1, u1, v2, u2):
    u1 += u1 % p == 0
    u2 += u2 % p == 0
    x, y = ScaledPAdic(p, v1, u1), ScaledPAdic(p, v2, u2)
    prod = x * y
    assert prod.val == v1 + v2
    assert (prod * y.inverse()).unit == x.unit
    assert square_class(prod) == square_class(x) * square_class(y)


def test_sum_that_cancels_raises():
    x = ScaledPAdic(3, 0, 1, prec=3)
    with pytest.raises(PrecisionError):
        x + ScaledPAdic(3, 0, -1, prec=3)


@given(primes, st.fractions().filter(lambda f: f != 0))
def test_from_rational_round_trip(p, x):
    y = ScaledPAdic.from_rational(x, p, prec=10)
    r = x / (Fraction(p) ** y.val)
    mod = p**10
    assert (r.numerator - y.unit * r.denominator) % mod == 0


# ---- cyclotomic numbers ----

roots = st.tuples(st.integers(0, 35), st.sampled_from([1, 2, 3, 4, 8, 9, 12, 36]))
cyc = st.lists(st.tuples(st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12)), roots), max_size=4).map(
    lambda terms: sum((CycNumber.rational(c) * CycNumber.root(k, n) for c, (k, n) in terms), CycNumber.zero()))


def test_cyclotomic_examples():
    z3 = CycNumber.root(1, 3)
    assert CycNumber.root(5, 12) * CycNumber.root(7, 12) == 1
    assert (z3 - z3 * z3).mag_sq() == 3
    assert format_fraction(Fraction(-3, 4)) == "-3/4"
    with pytest.raises(ZeroDivisionError):
        CycNumber.zero().inverse()


@given(cyc, cyc, cyc)
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(cyc, cyc)
def test_conjugation_is_an_involutive_automorphism(x, y):
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()
    m = x.mag_sq()
    assert m.conj() == m


@given(cyc)
def test_inverse(x):
    if not x.is_zero():
        assert x * x.inverse() == 1
