"""Exact p-adic substrate: residue integers, scaled p-adic numbers, square classes, Hilbert symbols."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

DEFAULT_PRECISION = 8


class PrecisionError(ArithmeticError):
    """Raised when an operation would lose every known digit."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for x in range(2, p):
        if pow(x, (p - 1) // 2, p) == p - 1:
            return x
    raise ValueError(f"no non-residue mod {p}")


@dataclass(frozen=True)
class FieldConfig:
    p: int
    N: int = DEFAULT_PRECISION
    xi: int = 0
    M: int = 0

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.N < 1:
            raise ValueError("precision must be positive")
        if self.xi == 0:
            object.__setattr__(self, "xi", smallest_nonresidue(self.p))
        if legendre_int(self.xi, self.p) != -1:
            raise ValueError(f"xi={self.xi} is not a non-residue mod {self.p}")
        needed = lcm(8, self.p**self.N, (self.p - 1) * self.p ** (self.N - 1))
        if self.M == 0:
            object.__setattr__(self, "M", needed)
        if self.M % needed:
            raise ValueError(f"M={self.M} must be divisible by {needed}")

    @property
    def q(self) -> int:
        return self.p

    @property
    def modulus(self) -> int:
        return self.p**self.N


@lru_cache(maxsize=None)
def config_for(p: int) -> FieldConfig:
    return FieldConfig(p)


def legendre_int(u: int, p: int) -> int:
    u %= p
    if u == 0:
        raise ValueError("not a unit")
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class ResidueInt:
    value: int
    p: int
    level: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.level)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def reduce(self, level: int) -> "ResidueInt":
        if level > self.level:
            raise PrecisionError("cannot raise precision of a residue")
        return ResidueInt(self.value, self.p, level)

    def __mul__(self, other: "ResidueInt") -> "ResidueInt":
        lev = min(self.level, other.level)
        return ResidueInt(self.value * other.value, self.p, lev)

    def inverse(self) -> "ResidueInt":
        if not self.is_unit():
            raise ValueError("not a unit")
        return ResidueInt(pow(self.value, -1, self.p**self.level), self.p, self.level)


def legendre(u: ResidueInt) -> int:
    return legendre_int(u.value, u.p)


@dataclass(frozen=True)
class ScaledPAdic:
    """x = p^val * unit, with the unit known modulo p^prec."""

    p: int
    val: int
    unit: int
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.prec < 1:
            raise PrecisionError("precision exhausted")
        u = self.unit % self.p**self.prec
        if u % self.p == 0:
            raise ValueError("unit part must be coprime to p")
        object.__setattr__(self, "unit", u)

    @classmethod
    def from_rational(cls, x, p: int, prec: int = DEFAULT_PRECISION) -> "ScaledPAdic":
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no scaled representation")
        a, b = vp(x.numerator, p), vp(x.denominator, p)
        num = x.numerator // p**a
        den = x.denominator // p**b
        mod = p**prec
        return cls(p, a - b, num * pow(den, -1, mod) % mod, prec)

    @classmethod
    def varpi_power(cls, p: int, k: int, unit: int = 1, prec: int = DEFAULT_PRECISION) -> "ScaledPAdic":
        return cls(p, k, unit, prec)

    @property
    def ord(self) -> int:
        return self.val

    def abs_exponent(self) -> int:
        """|x| = q^(-val); returns -val."""
        return -self.val

    def unit_residue(self, level: int | None = None) -> ResidueInt:
        level = self.prec if level is None else level
        if level > self.prec:
            raise PrecisionError(f"unit known only to level {self.prec}")
        return ResidueInt(self.unit, self.p, level)

    def __mul__(self, other):
        if not isinstance(other, ScaledPAdic):
            other = ScaledPAdic.from_rational(other, self.p, self.prec)
        prec = min(self.prec, other.prec)
        return ScaledPAdic(self.p, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "ScaledPAdic":
        mod = self.p**self.prec
        return ScaledPAdic(self.p, -self.val, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other):
        if not isinstance(other, ScaledPAdic):
            other = ScaledPAdic.from_rational(other, self.p, self.prec)
        return self * other.inverse()

    def __neg__(self) -> "ScaledPAdic":
        return ScaledPAdic(self.p, self.val, -self.unit, self.prec)

    def __add__(self, other: "ScaledPAdic") -> "ScaledPAdic":
        p = self.p
        lo = min(self.val, other.val)
        # absolute precision: digits known below p^(val+prec)
        top = min(self.val + self.prec, other.val + other.prec)
        mod = p ** (top - lo)
        s = (self.unit * p ** (self.val - lo) + other.unit * p ** (other.val - lo)) % mod
        if s == 0:
            raise PrecisionError("precision exhausted: sum vanishes to working precision")
        k = vp(s, p)
        return ScaledPAdic(p, lo + k, s // p**k, top - lo - k)

    def __sub__(self, other: "ScaledPAdic") -> "ScaledPAdic":
        return self + (-other)

    def to_rational_mod(self) -> Fraction:
        """A rational representative: p^val * unit."""
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def square_class(self) -> "SquareClass":
        return square_class(self)


class SquareClass(enum.Enum):
    ONE = "1"
    XI = "xi"
    VARPI = "varpi"
    XI_VARPI = "xi_varpi"

    @property
    def odd_valuation(self) -> bool:
        return self in (SquareClass.VARPI, SquareClass.XI_VARPI)

    @property
    def nonsquare_unit(self) -> bool:
        return self in (SquareClass.XI, SquareClass.XI_VARPI)

    @classmethod
    def from_parts(cls, odd_valuation: bool, nonsquare_unit: bool) -> "SquareClass":
        return {
            (False, False): cls.ONE,
            (False, True): cls.XI,
            (True, False): cls.VARPI,
            (True, True): cls.XI_VARPI,
        }[(bool(odd_valuation), bool(nonsquare_unit))]

    def representative(self, p: int, prec: int = DEFAULT_PRECISION) -> ScaledPAdic:
        xi = smallest_nonresidue(p)
        return ScaledPAdic(p, int(self.odd_valuation), xi if self.nonsquare_unit else 1, prec)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass.from_parts(
            self.odd_valuation != other.odd_valuation, self.nonsquare_unit != other.nonsquare_unit
        )

    @classmethod
    def parse(cls, text: str) -> "SquareClass":
        key = text.strip().lower().replace("*", "_").replace(" ", "")
        aliases = {"1": cls.ONE, "one": cls.ONE, "xi": cls.XI, "varpi": cls.VARPI, "pi": cls.VARPI,
                   "xi_varpi": cls.XI_VARPI, "xivarpi": cls.XI_VARPI, "xipi": cls.XI_VARPI,
                   "xi_pi": cls.XI_VARPI}
        if key not in aliases:
            raise ValueError(f"unknown square class {text!r}")
        return aliases[key]


ALL_CLASSES = (SquareClass.ONE, SquareClass.XI, SquareClass.VARPI, SquareClass.XI_VARPI)


def square_class(x: ScaledPAdic) -> SquareClass:
    return SquareClass.from_parts(x.val % 2 == 1, legendre_int(x.unit, x.p) == -1)


def as_padic(x, p: int, prec: int = DEFAULT_PRECISION) -> ScaledPAdic:
    if isinstance(x, ScaledPAdic):
        return x
    if isinstance(x, SquareClass):
        return x.representative(p, prec)
    return ScaledPAdic.from_rational(x, p, prec)


def hilbert(a, b, p: int | None = None) -> int:
    """Quadratic Hilbert symbol over Q_p for odd p; inputs may be ScaledPAdic, SquareClass or rationals."""
    if p is None:
        p = a.p if isinstance(a, ScaledPAdic) else b.p
    a, b = as_padic(a, p), as_padic(b, p)
    alpha, beta = a.val, b.val
    sign = (-1) ** (((p - 1) // 2) * alpha * beta)
    return sign * legendre_int(a.unit, p) ** (beta % 2) * legendre_int(b.unit, p) ** (alpha % 2)


@lru_cache(maxsize=None)
def _squares_mod(p: int, K: int) -> np.ndarray:
    mod = p**K
    z = np.arange(mod, dtype=np.int64)
    mask = np.zeros(mod, dtype=bool)
    mask[(z * z) % mod] = True
    return mask


def hilbert_oracle(a, b, K: int = 3, p: int | None = None) -> int:
    """+1 iff z^2 = a x^2 + b y^2 has a primitive solution mod p^K (exhaustive search)."""
    if K < 3:
        raise ValueError("K must be at least 3")
    if p is None:
        p = a.p if isinstance(a, ScaledPAdic) else b.p
    a, b = as_padic(a, p), as_padic(b, p)
    mod = p**K
    # scale by squares so both valuations are 0 or 1
    ai = (a.unit * p ** (a.val % 2)) % mod
    bi = (b.unit * p ** (b.val % 2)) % mod
    x = np.arange(mod, dtype=np.int64)
    xx = (ai * (x * x % mod)) % mod
    yy = (bi * (x * x % mod)) % mod
    vals = (xx[:, None] + yy[None, :]) % mod
    primitive = (x[:, None] % p != 0) | (x[None, :] % p != 0)
    hits = _squares_mod(p, K)[vals] & primitive
    return 1 if bool(hits.any()) else -1
