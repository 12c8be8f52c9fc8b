import pytest
from hypothesis import given
from hypothesis import strategies as st

from mp2newforms.characters import MultCharacter, UnitCharacter
from mp2newforms.exact import ALL_CLASSES
from mp2newforms.newforms import UNKNOWN, EvenWeil, OddWeil, PrincipalSeries, Steinberg, Supercuspidal, conductor_min
from mp2newforms.suites import GRIDS, theta_grid
from mp2newforms.theta import PGL2, QUATERNION, theta_conductor_check, theta_lift

ONE, XI, VARPI, XI_VARPI = ALL_CLASSES


def test_lift_examples():
    ps = PrincipalSeries(MultCharacter(UnitCharacter.legendre(5), 1, 3))
    lift = theta_lift(ps, 0)
    assert (lift.target, lift.shape, lift.conductor) == (PGL2, "PrincipalSeriesGL", 2)
    assert theta_lift(Steinberg(5, VARPI), 0).conductor == 2
    assert theta_lift(Steinberg(5, XI), 1).conductor == 1
    sc = Supercuspidal(5, 1, 2, 1, 1, generic_classes=(ONE, XI_VARPI))
    assert theta_lift(sc, 0).conductor == 3
    ew = theta_lift(EvenWeil(3, ONE), 0)
    assert (ew.shape, ew.conductor, ew.convention) == ("OneDimensional", 0, True)
    assert theta_lift(OddWeil(3, ONE), 1).shape == "TwistedSteinbergGL"


def test_non_generic_lifts_to_quaternions():
    lift = theta_lift(Steinberg(3, ONE), 0)
    assert (lift.target, lift.conductor) == (QUATERNION, "n/a")
    assert theta_lift(OddWeil(3, XI), 0).target == QUATERNION
    with pytest.raises(ValueError, match="undetermined"):
        theta_lift(Supercuspidal(3, 1, 1, 1, 1), 0)


def test_conductor_check_examples():
    ps = PrincipalSeries(MultCharacter(UnitCharacter.legendre(5), 1, 3))
    chk = theta_conductor_check(ps, 0)
    assert chk.match and (chk.c_eps_1, chk.theta_conductor) == (2, 2)
    chk = theta_conductor_check(EvenWeil(5, ONE), 1)
    assert chk.match and chk.c_eps_1 == 0


def test_odd_weil_documented_mismatch():
    for p in (3, 5):
        for eps in (0, 1):
            chk = theta_conductor_check(OddWeil(p, ONE), eps)
            assert chk.exception and not chk.match and chk.passed
            assert (chk.c_eps_1, chk.theta_conductor) == (2, 1)


def test_check_preconditions():
    with pytest.raises(ValueError, match="not psi-generic"):
        theta_conductor_check(Steinberg(3, ONE), 0)
    with pytest.raises(ValueError, match="central sign"):
        theta_conductor_check(Supercuspidal(3, 0, 2, 0, -1), 0)


@given(st.sampled_from([3, 5]), st.sampled_from([0, 1]))
def test_every_admitted_descriptor_matches(p, eps):
    admitted, _ = theta_grid(p, GRIDS["default"], eps)
    for pi in admitted:
        chk = theta_conductor_check(pi, eps)
        assert chk.passed
        if isinstance(pi, Supercuspidal) and not pi.is_odd_weil:
            m = conductor_min(pi, eps)
            assert m is not UNKNOWN and chk.theta_conductor == m == chk.c_eps_1
