"""Additive characters of Q_p, characters of Z_p^x and Q_p^x, quadratic characters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .cyclotomic import CycNumber, format_fraction
from .exact import (
    DEFAULT_PRECISION,
    ScaledPAdic,
    SquareClass,
    as_padic,
    hilbert,
    smallest_nonresidue,
)


def totient_pp(p: int, n: int) -> int:
    return 1 if n == 0 else (p - 1) * p ** (n - 1)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root mod p^2; it generates (Z/p^n)^x for every n."""
    phi = p * (p - 1)
    factors = {f for f in range(2, phi + 1) if phi % f == 0 and all(f % d for d in range(2, f))}
    for g in range(2, p * p):
        if g % p and all(pow(g, phi // f, p * p) != 1 for f in factors):
            return g
    raise ValueError(f"no primitive root mod {p}^2")


@lru_cache(maxsize=None)
def dlog_table(p: int, n: int) -> np.ndarray:
    """dlog[u] for u mod p^n with respect to the fixed generator; -1 on non-units."""
    mod = p**n
    table = np.full(mod, -1, dtype=np.int64)
    if n == 0:
        table[0] = 0
        return table
    g = primitive_root(p)
    x = 1
    for k in range(totient_pp(p, n)):
        table[x] = k
        x = x * g % mod
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class UnitCharacter:
    """eta(g^k) = zeta_{phi(p^level)}^(exponent * k) on (Z/p^level)^x; level 0 is trivial."""

    p: int
    level: int
    exponent: int

    def __post_init__(self):
        p, n, e = self.p, self.level, self.exponent
        if n < 0:
            raise ValueError("level must be nonnegative")
        e %= totient_pp(p, n)
        while n >= 2 and e % p == 0:
            n, e = n - 1, e // p
        if n == 1 and e % (p - 1) == 0:
            n, e = 0, 0
        object.__setattr__(self, "level", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def trivial(cls, p: int) -> "UnitCharacter":
        return cls(p, 0, 0)

    @classmethod
    def legendre(cls, p: int) -> "UnitCharacter":
        return cls(p, 1, (p - 1) // 2)

    @property
    def order(self) -> int:
        """phi(p^level): the cyclotomic order in which values live."""
        return totient_pp(self.p, self.level)

    def conductor(self) -> int:
        return self.level

    def is_trivial(self) -> bool:
        return self.level == 0

    def exponents(self, units, level: int | None = None) -> np.ndarray:
        """Value exponents (mod self.order) on integer units."""
        if self.level == 0:
            return np.zeros(np.shape(units), dtype=np.int64)
        mod = self.p**self.level
        u = np.asarray(units, dtype=np.int64) % mod
        d = dlog_table(self.p, self.level)[u]
        if np.any(d < 0):
            raise ValueError("not a unit")
        return (d * self.exponent) % self.order

    def __call__(self, u) -> CycNumber:
        if isinstance(u, ScaledPAdic):
            if u.val != 0:
                raise ValueError("not a unit")
            if u.prec < self.level:
                raise ValueError("insufficient precision")
            u = u.unit
        u = int(u)
        if u % self.p == 0:
            raise ValueError("not a unit")
        if self.level == 0:
            return CycNumber.one()
        return CycNumber.root(int(self.exponents([u])[0]), self.order)

    def sign(self) -> int:
        """eta(-1) as +-1."""
        return 1 if self.exponent % 2 == 0 or self.level == 0 else -1

    def lifted_exponent(self, level: int) -> int:
        if level < self.level:
            raise ValueError("cannot lift to a lower level")
        if self.level == 0:
            return 0
        return self.exponent * self.p ** (level - self.level)

    def __mul__(self, other: "UnitCharacter") -> "UnitCharacter":
        L = max(self.level, other.level)
        return UnitCharacter(self.p, L, self.lifted_exponent(L) + other.lifted_exponent(L))

    def inverse(self) -> "UnitCharacter":
        return UnitCharacter(self.p, self.level, -self.exponent)

    def __pow__(self, k: int) -> "UnitCharacter":
        return UnitCharacter(self.p, self.level, self.exponent * k)

    def __str__(self) -> str:
        return f"eta[p={self.p},c={self.level},e={self.exponent}]"


def unit_characters(p: int, max_conductor: int) -> list[UnitCharacter]:
    """Every character of Z_p^x with conductor at most max_conductor, sorted by (conductor, exponent)."""
    out = [UnitCharacter.trivial(p)]
    for n in range(1, max_conductor + 1):
        for e in range(totient_pp(p, n)):
            chi = UnitCharacter(p, n, e)
            if chi.level == n:
                out.append(chi)
    return out


def _norm_root(k: int, n: int) -> tuple[int, int]:
    k %= n
    g = gcd(k, n)
    return (k // g, n // g) if k else (0, 1)


@dataclass(frozen=True)
class MultCharacter:
    """mu on Q_p^x: unit part on Z_p^x and mu(varpi) = zeta_{root_n}^{root_k} * q^(-q_exp)."""

    unit: UnitCharacter
    root_k: int = 0
    root_n: int = 1
    q_exp: Fraction = Fraction(0)

    def __post_init__(self):
        k, n = _norm_root(self.root_k, self.root_n)
        object.__setattr__(self, "root_k", k)
        object.__setattr__(self, "root_n", n)
        object.__setattr__(self, "q_exp", Fraction(self.q_exp))

    @property
    def p(self) -> int:
        return self.unit.p

    def conductor(self) -> int:
        return self.unit.conductor()

    def is_unramified(self) -> bool:
        return self.unit.is_trivial()

    def sign(self) -> int:
        return self.unit.sign()

    def __mul__(self, other: "MultCharacter") -> "MultCharacter":
        n = self.root_n * other.root_n
        k = self.root_k * other.root_n + other.root_k * self.root_n
        return MultCharacter(self.unit * other.unit, k, n, self.q_exp + other.q_exp)

    def inverse(self) -> "MultCharacter":
        return MultCharacter(self.unit.inverse(), -self.root_k, self.root_n, -self.q_exp)

    def __pow__(self, k: int) -> "MultCharacter":
        return MultCharacter(self.unit**k, self.root_k * k, self.root_n, self.q_exp * k)

    def is_exceptional(self) -> bool:
        """mu^2 = |.|^(+-1)."""
        sq = self**2
        return sq.unit.is_trivial() and sq.root_k == 0 and abs(sq.q_exp) == 1

    def varpi_root(self) -> CycNumber:
        return CycNumber.root(self.root_k, self.root_n)

    @classmethod
    def abs_power(cls, p: int, s) -> "MultCharacter":
        """|.|^s, so |varpi|^s = q^(-s)."""
        return cls(UnitCharacter.trivial(p), 0, 1, Fraction(s))

    def __str__(self) -> str:
        return (f"mu[{self.unit}, varpi->zeta_{self.root_n}^{self.root_k}"
                f"*q^({format_fraction(-self.q_exp)})]")


@dataclass(frozen=True)
class QuadraticCharacter:
    """chi_a(x) = (x, a)_2."""

    p: int
    cls: SquareClass

    def __call__(self, x) -> int:
        return hilbert(as_padic(x, self.p), self.cls.representative(self.p), self.p)

    def unit_part(self) -> UnitCharacter:
        # (u, a)_2 for a unit u is legendre(u)^ord(a)
        if self.cls.odd_valuation:
            return UnitCharacter.legendre(self.p)
        return UnitCharacter.trivial(self.p)

    def conductor(self) -> int:
        return self.unit_part().conductor()

    def as_mult(self) -> MultCharacter:
        s = self(ScaledPAdic(self.p, 1, 1))
        return MultCharacter(self.unit_part(), 0 if s == 1 else 1, 2, Fraction(0))

    def sign(self) -> int:
        return self(-1)


def chi_from_squareclass(p: int, cls: SquareClass) -> QuadraticCharacter:
    return QuadraticCharacter(p, cls)


def squareclass_from_quadchar(chi) -> SquareClass:
    """Inverse of chi_from_squareclass; accepts a QuadraticCharacter or a MultCharacter of order <= 2."""
    if isinstance(chi, QuadraticCharacter):
        return chi.cls
    mu = chi
    if mu.q_exp != 0 or (mu**2).unit.level != 0 or mu.root_n not in (1, 2):
        raise ValueError("not a quadratic or trivial character")
    p = mu.p
    ramified = not mu.unit.is_trivial()
    varpi_val = 1 if mu.root_n == 1 else -1
    for cls in (SquareClass.ONE, SquareClass.XI, SquareClass.VARPI, SquareClass.XI_VARPI):
        q = QuadraticCharacter(p, cls)
        if (q.conductor() > 0) == ramified and q(ScaledPAdic(p, 1, 1)) == varpi_val:
            return cls
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi0_a(x) = psi0(a x) where psi0(x) = exp(2 pi i {x}_p)."""

    shift: ScaledPAdic

    @property
    def p(self) -> int:
        return self.shift.p

    def conductor(self) -> int:
        return -self.shift.val

    def twist(self, a) -> "AdditiveCharacter":
        return AdditiveCharacter(self.shift * as_padic(a, self.p))

    def exponents(self, xs) -> tuple[np.ndarray, int]:
        """For integers xs: exponents t and order p^k with psi(x) = zeta_{p^k}^t."""
        k = self.conductor()
        xs = np.asarray(xs, dtype=np.int64)
        if k <= 0:
            return np.zeros(xs.shape, dtype=np.int64), 1
        if k > self.shift.prec:
            raise ValueError("insufficient precision in additive character")
        mod = self.p**k
        return (xs % mod) * (self.shift.unit % mod) % mod, mod

    def __call__(self, x) -> CycNumber:
        if not isinstance(x, ScaledPAdic):
            x = Fraction(x)
            if x == 0:
                return CycNumber.one()
            x = ScaledPAdic.from_rational(x, self.p, max(DEFAULT_PRECISION, -self.shift.val + 2))
        y = self.shift * x
        if y.val >= 0:
            return CycNumber.one()
        k = -y.val
        if k > y.prec:
            raise ValueError("insufficient precision to evaluate the additive character")
        return CycNumber.root(y.unit % self.p**k, self.p**k)

    def __str__(self) -> str:
        return f"psi[p={self.p},shift=p^{self.shift.val}*{self.shift.unit}]"


PSI_PRECISION = 40


def base_additive(p: int, prec: int = PSI_PRECISION) -> AdditiveCharacter:
    return AdditiveCharacter(ScaledPAdic(p, 0, 1, prec))


def psi_eps(p: int, eps: int, prec: int = PSI_PRECISION) -> AdditiveCharacter:
    """The fixed characters of conductor 0 (eps=0) and -1 (eps=1)."""
    if eps not in (0, 1):
        raise ValueError("eps must be 0 or 1")
    return AdditiveCharacter(ScaledPAdic(p, eps, 1, prec))


def additive_with_conductor(p: int, c: int, unit: int = 1, prec: int = PSI_PRECISION) -> AdditiveCharacter:
    return AdditiveCharacter(ScaledPAdic(p, -c, unit, prec))


# ---------- JSON round trip ----------

CHAR_KEYS = ("kind", "p", "level", "exponent", "varpi_root", "varpi_qexp", "shift_val", "shift_unit")


def character_to_json(ch) -> dict:
    out = dict.fromkeys(CHAR_KEYS)
    if isinstance(ch, UnitCharacter):
        out.update(kind="unit", p=ch.p, level=ch.level, exponent=ch.exponent)
    elif isinstance(ch, QuadraticCharacter):
        mu = ch.as_mult()
        out.update(kind="quadratic", p=ch.p, level=mu.unit.level, exponent=mu.unit.exponent,
                   varpi_root=f"zeta_{mu.root_n}^{mu.root_k}", varpi_qexp="0")
    elif isinstance(ch, MultCharacter):
        out.update(kind="mult", p=ch.p, level=ch.unit.level, exponent=ch.unit.exponent,
                   varpi_root=f"zeta_{ch.root_n}^{ch.root_k}", varpi_qexp=format_fraction(ch.q_exp))
    elif isinstance(ch, AdditiveCharacter):
        out.update(kind="additive", p=ch.p, shift_val=ch.shift.val, shift_unit=ch.shift.unit)
    else:
        raise TypeError(f"not a character: {ch!r}")
    return out


def _parse_root(text: str) -> tuple[int, int]:
    body = text.strip()
    if not body.startswith("zeta_") or "^" not in body:
        raise ValueError(f"bad root of unity {text!r}")
    n, k = body[5:].split("^")
    return int(k), int(n)


def character_from_json(d: dict):
    kind, p = d["kind"], int(d["p"])
    if kind == "unit":
        return UnitCharacter(p, int(d["level"]), int(d["exponent"]))
    if kind in ("mult", "quadratic"):
        k, n = _parse_root(d["varpi_root"])
        mu = MultCharacter(UnitCharacter(p, int(d["level"]), int(d["exponent"])), k, n,
                           Fraction(d["varpi_qexp"]))
        if kind == "quadratic":
            return QuadraticCharacter(p, squareclass_from_quadchar(mu))
        return mu
    if kind == "additive":
        return AdditiveCharacter(ScaledPAdic(p, int(d["shift_val"]), int(d["shift_unit"]), PSI_PRECISION))
    raise ValueError(f"unknown character kind {kind!r}")


def xi_of(p: int) -> int:
    return smallest_nonresidue(p)
