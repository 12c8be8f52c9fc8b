"""Closed dimension, conductor and newform formulas for genuine representations of the double cover."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .characters import (
    MultCharacter,
    UnitCharacter,
    chi_from_squareclass,
    psi_eps,
    unit_characters,
)
from .exact import ALL_CLASSES, ScaledPAdic, SquareClass, smallest_nonresidue
from .gauss import gauss_h_oracle
from .metaplectic import IDENTITY, W, coset_reps, hom_condition, hom_condition_oracle, nop

INFINITY = float("inf")


class _Unknown:
    """Sentinel for quantities the closed formulas do not determine; deliberately not usable as a bool."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "unknown"

    __str__ = __repr__

    def __bool__(self):
        raise TypeError("unknown has no truth value")

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()


class ReducibleError(ValueError):
    pass


# ---------------- descriptors ----------------


@dataclass(frozen=True)
class PrincipalSeries:
    mu: MultCharacter

    def __post_init__(self):
        if self.mu.is_exceptional():
            raise ReducibleError("reducible: use Steinberg/EvenWeil")

    @property
    def p(self) -> int:
        return self.mu.p


@dataclass(frozen=True)
class EvenWeil:
    p: int
    chi: SquareClass


@dataclass(frozen=True)
class Steinberg:
    p: int
    chi: SquareClass


@dataclass(frozen=True)
class Supercuspidal:
    p: int
    delta: int
    c_sigma: int
    defect: int
    central_sign: int
    is_odd_weil: bool = False
    # absolute classes a with pi generic for psi^0_a, when known
    generic_classes: tuple[SquareClass, ...] | None = field(default=None)

    def __post_init__(self):
        if self.delta not in (0, 1) or self.defect not in (0, 1):
            raise ValueError("delta and defect must be 0 or 1")
        if self.c_sigma < 1:
            raise ValueError("conductor of sigma must be at least 1")
        if self.central_sign not in (1, -1):
            raise ValueError("central sign must be +1 or -1")
        if self.defect == 1 and self.delta != 1:
            raise ValueError("defect 1 forces delta = 1")
        if self.is_odd_weil and (self.c_sigma != 1 or self.defect != 0):
            raise ValueError("odd Weil representations have conductor 1 and defect 0")
        if self.generic_classes is not None:
            gc = tuple(sorted(set(self.generic_classes), key=ALL_CLASSES.index))
            object.__setattr__(self, "generic_classes", gc)
            odd = [c.odd_valuation for c in gc]
            if self.is_odd_weil:
                # the odd Weil rep of psi' has c(psi') = delta + 1 mod 2
                ok = len(gc) == 1 and odd[0] == bool((self.delta + 1) % 2)
            elif self.defect == 0:
                ok = len(gc) == 2 and all(o == bool(self.delta) for o in odd)
            else:
                ok = len(gc) == 2 and sorted(odd) == [False, True]
            if not ok:
                raise ValueError(f"generic classes {gc} incompatible with the descriptor")

    def hypothesis_holds(self, eta: UnitCharacter) -> bool:
        return eta.conductor() <= self.c_sigma - self.defect


@dataclass(frozen=True)
class OddWeil:
    p: int
    chi: SquareClass

    def as_supercuspidal(self, eps: int) -> Supercuspidal:
        """Same representation as a compact induction; the class is relative to psi^eps."""
        absolute = absolute_class(self.chi, eps)
        delta = (1 + int(absolute.odd_valuation)) % 2
        sign = -chi_from_squareclass(self.p, self.chi).sign()
        return Supercuspidal(self.p, delta, 1, 0, sign, True, (absolute,))


ReprDescriptor = Union[PrincipalSeries, EvenWeil, OddWeil, Steinberg, Supercuspidal]


@dataclass(frozen=True)
class LevelQuery:
    eps: int
    eta: UnitCharacter
    m: int

    def __post_init__(self):
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        if self.m < 0:
            raise ValueError("level must be nonnegative")


@dataclass(frozen=True)
class NewformProfile:
    first_level: int | float
    dims_new: dict
    window: int

    @property
    def total(self) -> int:
        return sum(self.dims_new.values())


def absolute_class(relative: SquareClass, eps: int) -> SquareClass:
    """psi^eps_b = psi^0_{varpi^eps b}."""
    return relative * SquareClass.VARPI if eps else relative


def _psi_conductor_parity(relative: SquareClass, eps: int) -> int:
    # c(psi^eps_b) = -eps - ord(b)
    return (eps + int(relative.odd_valuation)) % 2


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _kd(s: int) -> int:
    return 1 if s == 0 else 0


def _ceil_half(x: int) -> int:
    return -((-x) // 2)


def _chi_unit(p: int, cls: SquareClass) -> UnitCharacter:
    return chi_from_squareclass(p, cls).unit_part()


# ---------------- central sign, genericity ----------------


def central_sign(pi: ReprDescriptor, eps: int = 0) -> int:
    if isinstance(pi, PrincipalSeries):
        return pi.mu.sign()
    if isinstance(pi, (EvenWeil, Steinberg)):
        return chi_from_squareclass(pi.p, pi.chi).sign()
    if isinstance(pi, OddWeil):
        return -chi_from_squareclass(pi.p, pi.chi).sign()
    if isinstance(pi, Supercuspidal):
        return pi.central_sign
    raise TypeError(f"not a descriptor: {pi!r}")


def generic_count(pi: ReprDescriptor) -> int:
    if isinstance(pi, PrincipalSeries):
        return 4
    if isinstance(pi, Steinberg):
        return 3
    if isinstance(pi, (EvenWeil, OddWeil)):
        return 1
    if isinstance(pi, Supercuspidal):
        return 1 if pi.is_odd_weil else 2
    raise TypeError(f"not a descriptor: {pi!r}")


def is_generic(pi: ReprDescriptor, psi_class: SquareClass, eps: int = 0):
    """Is pi generic for psi^eps_b, b in psi_class?  True, False or UNKNOWN."""
    if isinstance(pi, PrincipalSeries):
        return True
    if isinstance(pi, (EvenWeil, OddWeil)):
        return pi.chi == psi_class
    if isinstance(pi, Steinberg):
        if psi_class == SquareClass.ONE:
            return pi.chi != SquareClass.ONE
        return UNKNOWN
    if isinstance(pi, Supercuspidal):
        if pi.generic_classes is not None:
            return absolute_class(psi_class, eps) in pi.generic_classes
        if pi.defect == 0 and not pi.is_odd_weil:
            return (_psi_conductor_parity(psi_class, eps) + pi.delta) % 2 == 0
        return UNKNOWN
    raise TypeError(f"not a descriptor: {pi!r}")


# ---------------- dimension formulas ----------------


def ps_dim_formula(mu: MultCharacter, eta: UnitCharacter, m: int, allow_reducible: bool = False) -> int:
    if mu.is_exceptional() and not allow_reducible:
        raise ReducibleError("reducible: use Steinberg/EvenWeil")
    if eta.sign() != mu.sign() or m < eta.conductor():
        return 0
    c = mu.conductor()
    c_plus = (eta * mu.unit).conductor()
    c_minus = (eta * mu.unit.inverse()).conductor()
    if c == 0 and eta.conductor() == 0 and m == 0:
        return 1
    if m < c:
        return 0
    if m < 2 * c:
        return 2 * (_pos(m - c - c_plus + 1) + _pos(m - c - c_minus + 1)) - _kd(c_plus) - _kd(c_minus)
    return 2 * _pos(m - c_plus - c_minus + 1) - _kd(c_plus) - _kd(c_minus)


def even_weil_dim_formula(p: int, chi: SquareClass, eta: UnitCharacter, m: int) -> int:
    chi_u = _chi_unit(p, chi)
    if eta.sign() != chi_from_squareclass(p, chi).sign() or m < eta.conductor():
        return 0
    return _pos((m - 2 * (eta * chi_u).conductor() - chi_u.conductor()) // 2 + 1)


def steinberg_dim_formula(p: int, chi: SquareClass, eta: UnitCharacter, m: int) -> int:
    chi_u = _chi_unit(p, chi)
    if eta.sign() != chi_from_squareclass(p, chi).sign() or m < eta.conductor():
        return 0
    if chi_u.is_trivial():
        c = eta.conductor()
        return _pos(_ceil_half(3 * (m - 2 * c)) + 1 - 2 * _kd(c))
    c = (eta * chi_u).conductor()
    return _pos(_ceil_half(3 * (m - 2 * c) - 1) + 2 - 2 * _kd(c))


def supercuspidal_dim_formula(pi: Supercuspidal, eps: int, eta: UnitCharacter, m: int):
    if eta.sign() != pi.central_sign or m < eta.conductor():
        return 0
    c = pi.c_sigma
    if m <= 2 * c - 1 - pi.defect:
        return 0
    if not pi.hypothesis_holds(eta):
        return UNKNOWN
    if pi.defect == 1:
        return m - 2 * c + 2
    if pi.is_odd_weil:
        if (eps + pi.delta) % 2 == 0:
            return (m - 1) // 2
        return _ceil_half(m - 1)
    if (c + eps + pi.delta) % 2 == 1:
        return 2 * ((m - 2 * c + 1) // 2)
    return 2 * _ceil_half(m - 2 * c + 1)


def dim_fixed(pi: ReprDescriptor, query: LevelQuery):
    eps, eta, m = query.eps, query.eta, query.m
    if isinstance(pi, PrincipalSeries):
        return ps_dim_formula(pi.mu, eta, m)
    if isinstance(pi, EvenWeil):
        return even_weil_dim_formula(pi.p, pi.chi, eta, m)
    if isinstance(pi, Steinberg):
        return steinberg_dim_formula(pi.p, pi.chi, eta, m)
    if isinstance(pi, OddWeil):
        return supercuspidal_dim_formula(pi.as_supercuspidal(eps), eps, eta, m)
    if isinstance(pi, Supercuspidal):
        return supercuspidal_dim_formula(pi, eps, eta, m)
    raise TypeError(f"not a descriptor: {pi!r}")


def steinberg_identity_holds(p: int, chi: SquareClass, eta: UnitCharacter, eps: int, m_max: int = 20) -> bool:
    """dim St = dim PS(chi |.|^(1/2)) - dim even Weil, level by level."""
    mu = chi_from_squareclass(p, chi).as_mult() * MultCharacter.abs_power(p, Fraction(1, 2))
    for m in range(m_max + 1):
        ps = ps_dim_formula(mu, eta, m, allow_reducible=True)
        if steinberg_dim_formula(p, chi, eta, m) != ps - even_weil_dim_formula(p, chi, eta, m):
            return False
    return True


# ---------------- conductors ----------------


def _scan_bound(pi: ReprDescriptor, eta: UnitCharacter) -> int:
    if isinstance(pi, PrincipalSeries):
        base = pi.mu.conductor()
    elif isinstance(pi, Supercuspidal):
        base = pi.c_sigma
    else:
        base = 1
    return 2 * (base + eta.conductor()) + 6


def conductor(pi: ReprDescriptor, eps: int, eta: UnitCharacter):
    """First level with a nonzero eta-isotypic fixed space; INFINITY on a sign mismatch."""
    if central_sign(pi, eps) != eta.sign():
        return INFINITY
    for m in range(_scan_bound(pi, eta) + 1):
        d = dim_fixed(pi, LevelQuery(eps, eta, m))
        if d is UNKNOWN:
            return UNKNOWN
        if d > 0:
            return m
    raise ArithmeticError("no nonzero fixed space within the scan bound")


def conductor_min(pi: ReprDescriptor, eps: int):
    if isinstance(pi, PrincipalSeries):
        return pi.mu.conductor()
    if isinstance(pi, EvenWeil):
        return _chi_unit(pi.p, pi.chi).conductor()
    if isinstance(pi, Steinberg):
        return 1
    if isinstance(pi, OddWeil):
        return conductor_min(pi.as_supercuspidal(eps), eps)
    if isinstance(pi, Supercuspidal):
        c = pi.c_sigma
        if c == pi.defect and pi.central_sign == -1:
            # only trivial eta meets the hypothesis, and it has the wrong sign
            return UNKNOWN
        if pi.defect == 1:
            return 2 * c - 1
        if pi.is_odd_weil:
            return 2 if (eps + pi.delta) % 2 else 3
        return 2 * c if (c + eps + pi.delta) % 2 == 0 else 2 * c + 1
    raise TypeError(f"not a descriptor: {pi!r}")


def conductor_min_scan(pi: ReprDescriptor, eps: int, max_eta_conductor: int):
    """Minimum of conductor over all eta up to the given conductor; UNKNOWN values are skipped."""
    best = INFINITY
    for eta in unit_characters(pi.p, max_eta_conductor):
        c = conductor(pi, eps, eta)
        if c is not UNKNOWN and c < best:
            best = c
    return best


# ---------------- newforms ----------------


def newform_profile(pi: ReprDescriptor, eps: int, eta: UnitCharacter):
    if central_sign(pi, eps) != eta.sign():
        raise ValueError("central sign mismatch")
    M = conductor(pi, eps, eta)
    if M is UNKNOWN:
        return UNKNOWN
    if isinstance(pi, PrincipalSeries):
        mu_u = pi.mu.unit
        if mu_u.is_trivial() and eta.is_trivial():
            shape = (1, 1, 1, 1)
        elif (eta == mu_u) != (eta == mu_u.inverse()):
            shape = (1, 2, 1)
        else:
            shape = (2, 2)
    elif isinstance(pi, EvenWeil):
        shape = (1,)
    elif isinstance(pi, Steinberg):
        c_chi = _chi_unit(pi.p, pi.chi).conductor()
        c_twist = (eta * _chi_unit(pi.p, pi.chi)).conductor()
        if c_chi == 0 and eta.conductor() == 0:
            shape = (1, 1, 1)
        elif (c_chi == 0) != (c_twist == 0):
            shape = (1, 2)
        else:
            shape = (2, 1)
    else:
        sc = pi.as_supercuspidal(eps) if isinstance(pi, OddWeil) else pi
        if sc.defect == 1:
            shape = (1, 1)
        else:
            shape = (1,) if sc.is_odd_weil else (2,)
    dims = {M + k: v for k, v in enumerate(shape)}
    return NewformProfile(M, dims, len(shape) - 1)


def rs_sum_check(pi: ReprDescriptor, eps: int, eta: UnitCharacter):
    prof = newform_profile(pi, eps, eta)
    if prof is UNKNOWN:
        return UNKNOWN
    return prof.total == generic_count(pi)


def oldform_bounds_check(pi: ReprDescriptor, eps: int, eta: UnitCharacter, m_max: int = 6):
    """Newform counts must fit between the level-to-level growth and that growth minus the alpha_2 image."""
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    prof = newform_profile(pi, eps, eta)
    if prof is UNKNOWN:
        return UNKNOWN
    dims = [dim_fixed(pi, LevelQuery(eps, eta, m)) for m in range(m_max + 1)]
    if any(d is UNKNOWN for d in dims):
        return UNKNOWN
    new = [prof.dims_new.get(m, 0) for m in range(m_max + 1)]
    if new[0] != dims[0] or new[1] != dims[1] - dims[0]:
        return False
    for m in range(2, m_max + 1):
        upper = dims[m] - dims[m - 1]
        lower = upper - dims[m - 2]
        if not lower <= new[m] <= upper:
            return False
    return True


# ---------------- Whittaker functionals ----------------


def _ps_basis(mu: MultCharacter, eps: int, eta: UnitCharacter, m: int) -> list:
    """Coset labels of the support vectors spanning the fixed space at level m."""
    p = mu.p
    xi = smallest_nonresidue(p)
    labels = []
    if m == 0:
        # the single coset; its vector is the one called f_w at level 0
        return ["w"] if hom_condition(IDENTITY, eps, 0, eta, mu) else []
    if hom_condition(W, eps, m, eta, mu):
        labels.append("w")
    if hom_condition(IDENTITY, eps, m, eta, mu):
        labels.append("1")
    for j in range(1, m):
        for kind, unit in (("2", 1), ("xi", xi)):
            if hom_condition(nop(Fraction(unit * p ** (j + eps))), eps, m, eta, mu):
                labels.append((kind, j))
    return labels


def _ps_vector_whittaker(mu: MultCharacter, eps: int, eta: UnitCharacter, psi_class: SquareClass, label):
    p = mu.p
    twist = eta * mu.unit.inverse()
    nonsquare = psi_class.nonsquare_unit
    if label == "w":
        return True if not psi_class.odd_valuation else UNKNOWN
    if label == "1":
        quadratic_case = (mu.unit**2).is_trivial() and eta == mu.unit
        return True if quadratic_case and not psi_class.odd_valuation else UNKNOWN
    kind, j = label
    i = j - twist.conductor()
    if i not in (0, 1) or int(psi_class.odd_valuation) != i:
        return UNKNOWN
    # the functional reduces to h(eta mu^-1, psi_{-xi^t varpi^(-c-eps)})
    t = (kind == "xi") != nonsquare
    xi = smallest_nonresidue(p)
    shift = ScaledPAdic(p, -twist.conductor() - eps, -(xi if t else 1), psi_eps(p, 0).shift.prec)
    value = gauss_h_oracle(twist, psi_eps(p, eps).twist(shift))
    return not value.is_zero()


def whittaker_nonvanishing(pi: ReprDescriptor, eps: int, eta: UnitCharacter, psi_class: SquareClass,
                           level: int | None = None, vector=None):
    """Does the psi^eps_b-Whittaker functional vanish on the fixed space (or on a named PS vector)?"""
    gen = is_generic(pi, psi_class, eps)
    if gen is UNKNOWN:
        return UNKNOWN
    if not gen:
        raise ValueError("representation is not generic for this character")
    if central_sign(pi, eps) != eta.sign():
        raise ValueError("central sign mismatch")
    M = conductor(pi, eps, eta)
    if M is UNKNOWN:
        return UNKNOWN
    level = M if level is None else level
    if vector is not None and not isinstance(pi, PrincipalSeries):
        raise ValueError("named vectors exist only for principal series")
    if level < M:
        return False
    if isinstance(pi, EvenWeil):
        return True
    if isinstance(pi, Steinberg):
        return True if level >= M + int(psi_class.odd_valuation) else UNKNOWN
    if isinstance(pi, (Supercuspidal, OddWeil)):
        sc = pi.as_supercuspidal(eps) if isinstance(pi, OddWeil) else pi
        if sc.defect == 0:
            return True
        return True if level >= M + int(psi_class.odd_valuation) else UNKNOWN
    basis = _ps_basis(pi.mu, eps, eta, level)
    if vector is not None:
        if vector not in basis:
            raise ValueError(f"no vector {vector!r} in the fixed space at level {level}")
        return _ps_vector_whittaker(pi.mu, eps, eta, psi_class, vector)
    verdicts = [_ps_vector_whittaker(pi.mu, eps, eta, psi_class, v) for v in basis]
    if any(v is True for v in verdicts):
        return True
    if all(v is False for v in verdicts):
        return False
    return UNKNOWN


# ---------------- coset-counting oracle ----------------


def dim_fixed_ps_oracle(mu: MultCharacter, eps: int, eta: UnitCharacter, m: int) -> int:
    """Count double-coset representatives whose Borel stabilizer condition holds, by enumeration."""
    if eta.sign() != mu.sign() or m < eta.conductor():
        return 0
    return sum(hom_condition_oracle(g, eps, m, eta, mu) for g in coset_reps(eps, m, mu.p))


# ---------------- text form ----------------


def describe(pi: ReprDescriptor) -> str:
    """Compact text form, inverse to parse_descriptor."""
    if isinstance(pi, PrincipalSeries):
        mu = pi.mu
        text = f"ps:{mu.unit.level}:{mu.unit.exponent}:{mu.root_k}/{mu.root_n}"
        return text if mu.q_exp == 0 else f"{text}:{mu.q_exp}"
    if isinstance(pi, EvenWeil):
        return f"even:{pi.chi.value}"
    if isinstance(pi, OddWeil):
        return f"odd:{pi.chi.value}"
    if isinstance(pi, Steinberg):
        return f"st:{pi.chi.value}"
    text = f"sc:{pi.delta}:{pi.c_sigma}:{pi.defect}:{pi.central_sign:+d}"
    if pi.is_odd_weil:
        text += ":oddweil"
    if pi.generic_classes is not None:
        text += ":gen=" + ",".join(c.value for c in pi.generic_classes)
    return text


def parse_descriptor(text: str, p: int) -> ReprDescriptor:
    parts = [s.strip() for s in text.strip().split(":")]
    kind, args = parts[0].lower(), parts[1:]
    try:
        if kind == "ps":
            if len(args) not in (2, 3, 4):
                raise ValueError("expected ps:LEVEL:EXP[:K/N[:QEXP]]")
            unit = UnitCharacter(p, int(args[0]), int(args[1]))
            k, n = (int(x) for x in args[2].split("/")) if len(args) > 2 else (0, 1)
            q_exp = Fraction(args[3]) if len(args) > 3 else Fraction(0)
            return PrincipalSeries(MultCharacter(unit, k, n, q_exp))
        if kind in ("even", "odd", "st"):
            if len(args) != 1:
                raise ValueError(f"expected {kind}:CLASS")
            cls = SquareClass.parse(args[0])
            return {"even": EvenWeil, "odd": OddWeil, "st": Steinberg}[kind](p, cls)
        if kind == "sc":
            if len(args) < 4:
                raise ValueError("expected sc:DELTA:C:DEFECT:SIGN[:oddweil][:gen=CLASSES]")
            odd_weil, gen = False, None
            for extra in args[4:]:
                if extra == "oddweil":
                    odd_weil = True
                elif extra.startswith("gen="):
                    gen = tuple(SquareClass.parse(c) for c in extra[4:].split(","))
                else:
                    raise ValueError(f"unknown option {extra!r}")
            return Supercuspidal(p, int(args[0]), int(args[1]), int(args[2]), int(args[3]), odd_weil, gen)
    except (IndexError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed descriptor {text!r}") from exc
    raise ValueError(f"unknown descriptor kind {kind!r}")
