"""Theta lifts to PGL2 or the quaternion side, and the conductor-matching check."""

from __future__ import annotations

from dataclasses import dataclass

from .characters import UnitCharacter, chi_from_squareclass
from .exact import SquareClass
from .newforms import (
    UNKNOWN,
    EvenWeil,
    OddWeil,
    PrincipalSeries,
    ReprDescriptor,
    Steinberg,
    Supercuspidal,
    central_sign,
    conductor,
    conductor_min,
    is_generic,
)

PGL2 = "PGL2"
QUATERNION = "PDx"


@dataclass(frozen=True)
class ThetaDescriptor:
    target: str
    shape: str
    character: str | None
    conductor: object  # int, "n/a" or UNKNOWN
    convention: bool = False


@dataclass(frozen=True)
class ThetaCheck:
    representation: ReprDescriptor
    eps: int
    c_eps_1: object
    theta_conductor: object
    match: bool
    exception: bool = False

    @property
    def passed(self) -> bool:
        # the odd Weil case is a documented failure and counts as passing when it fails
        return (not self.match) if self.exception else self.match


def _chi_label(cls: SquareClass) -> str:
    return cls.value


def theta_lift(pi: ReprDescriptor, eps: int) -> ThetaDescriptor:
    generic = is_generic(pi, SquareClass.ONE, eps)
    if generic is UNKNOWN:
        raise ValueError("undetermined: genericity for psi is not known")
    if isinstance(pi, PrincipalSeries):
        return ThetaDescriptor(PGL2, "PrincipalSeriesGL", str(pi.mu), 2 * pi.mu.conductor())
    if isinstance(pi, EvenWeil):
        # one-dimensional chi o det; its conductor 2 c(chi) is a convention
        c = chi_from_squareclass(pi.p, pi.chi).conductor()
        return ThetaDescriptor(PGL2, "OneDimensional", _chi_label(pi.chi), 2 * c, convention=True)
    if not generic:
        return ThetaDescriptor(QUATERNION, _quaternion_shape(pi), None, "n/a")
    if isinstance(pi, Steinberg):
        c = chi_from_squareclass(pi.p, pi.chi).conductor()
        return ThetaDescriptor(PGL2, "TwistedSteinbergGL", _chi_label(pi.chi), 1 if c == 0 else 2)
    if isinstance(pi, OddWeil) or (isinstance(pi, Supercuspidal) and pi.is_odd_weil):
        return ThetaDescriptor(PGL2, "TwistedSteinbergGL", _chi_label(SquareClass.ONE), 1)
    return ThetaDescriptor(PGL2, "SupercuspidalGL", None, conductor_min(pi, eps))


def _quaternion_shape(pi: ReprDescriptor) -> str:
    if isinstance(pi, Steinberg):
        return "OneDimensional"
    return "Supercuspidal"


def _odd_weil_test_character(p: int) -> UnitCharacter:
    return UnitCharacter(p, 1, 1)


def theta_conductor_check(pi: ReprDescriptor, eps: int) -> ThetaCheck:
    generic = is_generic(pi, SquareClass.ONE, eps)
    if generic is UNKNOWN:
        raise ValueError("undetermined: genericity for psi is not known")
    if not generic:
        raise ValueError("representation is not psi-generic")
    lift = theta_lift(pi, eps)
    odd_weil = isinstance(pi, OddWeil) or (isinstance(pi, Supercuspidal) and pi.is_odd_weil)
    if central_sign(pi, eps) != 1:
        if not odd_weil:
            raise ValueError("central sign is not +1")
        # no eta with eta(-1) = +1 exists here; any odd eta of conductor 1 gives the level 2
        level = conductor(pi, eps, _odd_weil_test_character(pi.p))
        return ThetaCheck(pi, eps, level, lift.conductor, level == lift.conductor, exception=True)
    c1 = conductor(pi, eps, UnitCharacter.trivial(pi.p))
    if c1 is UNKNOWN or lift.conductor is UNKNOWN:
        raise ValueError("undetermined: conductor outside the known range")
    return ThetaCheck(pi, eps, c1, lift.conductor, c1 == lift.conductor)
