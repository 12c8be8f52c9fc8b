"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element is stored at the smallest order n whose field contains it, as an
integer coefficient vector over zeta_n^0..zeta_n^(n-1) plus a positive common
denominator.  The vector is kept in a canonical form: writing n as a product of
prime powers l^a and splitting exponents by CRT, every component exponent j
satisfies j < phi(l^a).  Canonical form plus minimal order make equality a
plain comparison.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

import numpy as np

_SAFE = 1 << 62


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            a = 0
            while n % d == 0:
                n //= d
                a += 1
            out.append((d, a))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def _reduction_plan(n: int):
    """Per prime-power factor: (src, [dst_d ...]) realising zeta^j = -sum_d zeta^(j0 + d q/l)."""
    plan = []
    k = np.arange(n, dtype=np.int64)
    for ell, a in _factor(n):
        q = ell**a
        r = n // q
        phi_q = q - q // ell
        e_q = (r * pow(r, -1, q)) % n if r > 1 else 1 % n
        src = k[(k % q) >= phi_q]
        if src.size == 0:
            continue
        step = q // ell
        dsts = [(src + (d - ell + 1) * step * e_q) % n for d in range(ell - 1)]
        plan.append((src, dsts))
    return plan


@lru_cache(maxsize=None)
def _primes(n: int) -> tuple[int, ...]:
    return tuple(ell for ell, _ in _factor(n))


def _maxabs(v: np.ndarray) -> int:
    if v.size == 0:
        return 0
    if v.dtype == object:
        return max(abs(int(x)) for x in v)
    return int(np.abs(v).max())


def _as_object(v: np.ndarray) -> np.ndarray:
    return v if v.dtype == object else v.astype(object)


class CycNumber:
    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, num, den: int = 1, *, _canonical: bool = False):
        if order < 1:
            raise ValueError("order must be positive")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64) if np.issubdtype(num.dtype, np.integer) else num.astype(object)
        if num.shape != (order,):
            raise ValueError("coefficient vector has wrong length")
        if den < 0:
            num, den = -num, -den
        self.order, self.num, self.den = order, num, int(den)
        self._hash = None
        if not _canonical:
            self._normalize()

    # ----- construction -----
    @classmethod
    def rational(cls, x) -> "CycNumber":
        x = Fraction(x)
        return cls(1, np.array([x.numerator], dtype=object if abs(x.numerator) >= _SAFE else np.int64),
                   x.denominator)

    @classmethod
    def zero(cls) -> "CycNumber":
        return cls.rational(0)

    @classmethod
    def one(cls) -> "CycNumber":
        return cls.rational(1)

    @classmethod
    def root(cls, k: int, n: int) -> "CycNumber":
        """zeta_n^k."""
        v = np.zeros(n, dtype=np.int64)
        v[k % n] = 1
        return cls(n, v)

    @classmethod
    def from_counts(cls, order: int, counts, den: int = 1) -> "CycNumber":
        """sum_k counts[k] zeta_order^k / den."""
        return cls(order, np.asarray(counts), den)

    @classmethod
    def coerce(cls, x) -> "CycNumber":
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction, np.integer)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNumber")

    # ----- normal form -----
    def _normalize(self) -> None:
        n = self.order
        v = self.num
        if v.dtype != object and _maxabs(v) >= _SAFE >> len(_primes(n)) + 1:
            v = _as_object(v)
        v = v.copy()
        for src, dsts in _reduction_plan(n):
            moved = v[src]
            for dst in dsts:
                v[dst] -= moved
            v[src] = 0
        # shrink to the minimal order
        changed = True
        while changed and n > 1:
            changed = False
            nz = np.nonzero(v)[0]
            for ell in _primes(n):
                if nz.size == 0 or np.all(nz % ell == 0):
                    v = v[::ell].copy()
                    n //= ell
                    for src, dsts in _reduction_plan(n):
                        moved = v[src]
                        for dst in dsts:
                            v[dst] -= moved
                        v[src] = 0
                    changed = True
                    break
        den = self.den
        nz = v[v != 0]
        if nz.size == 0:
            den = 1
        else:
            g = reduce(gcd, (int(x) for x in nz), den) if v.dtype == object else gcd(int(np.gcd.reduce(nz)), den)
            if g > 1:
                v = v // g
                den //= g
        if v.dtype == object and _maxabs(v) < _SAFE:
            v = v.astype(np.int64)
        self.order, self.num, self.den = n, v, den

    def lift(self, n: int) -> np.ndarray:
        """Coefficient vector (not canonical) of self regarded in Q(zeta_n)."""
        if n % self.order:
            raise ValueError(f"order {self.order} does not divide {n}")
        step = n // self.order
        v = np.zeros(n, dtype=self.num.dtype)
        v[::step] = self.num
        return v

    # ----- predicates -----
    def is_zero(self) -> bool:
        return not np.any(self.num)

    def is_rational(self) -> bool:
        return self.order == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(int(self.num[0]), self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ----- arithmetic -----
    def __add__(self, other) -> "CycNumber":
        try:
            other = CycNumber.coerce(other)
        except TypeError:
            return NotImplemented
        n = lcm(self.order, other.order)
        a, b = self.lift(n), other.lift(n)
        if a.dtype != b.dtype or (a.dtype != object and max(_maxabs(a) * other.den, _maxabs(b) * self.den) >= _SAFE >> 2):
            a, b = _as_object(a), _as_object(b)
        return CycNumber(n, a * other.den + b * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "CycNumber":
        return CycNumber(self.order, -self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "CycNumber":
        try:
            other = CycNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycNumber":
        return CycNumber.coerce(other) - self

    def __mul__(self, other) -> "CycNumber":
        try:
            other = CycNumber.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_rational() or self.is_rational():
            r, x = (other, self) if other.is_rational() else (self, other)
            k = int(r.num[0])
            v = x.num
            if v.dtype != object and _maxabs(v) * abs(k) >= _SAFE >> 2:
                v = _as_object(v)
            return CycNumber(x.order, v * k, x.den * r.den)
        n = lcm(self.order, other.order)
        a, b = self.lift(n), other.lift(n)
        bound = _maxabs(a) * _maxabs(b) * min(np.count_nonzero(a), np.count_nonzero(b))
        if bound >= _SAFE >> 2 or a.dtype == object or b.dtype == object:
            a, b = _as_object(a), _as_object(b)
        full = np.convolve(a, b)
        c = full[:n].copy()
        c[: n - 1] += full[n:]
        return CycNumber(n, c, self.den * other.den)

    __rmul__ = __mul__

    def conj(self) -> "CycNumber":
        return self.galois(-1)

    def galois(self, t: int) -> "CycNumber":
        """The automorphism zeta -> zeta^t (t coprime to the order)."""
        n = self.order
        if gcd(t, n) != 1:
            raise ValueError("Galois exponent must be coprime to the order")
        idx = (np.arange(n) * t) % n
        v = np.zeros_like(self.num)
        v[idx] = self.num
        return CycNumber(n, v, self.den)

    def mag_sq(self) -> "CycNumber":
        return self * self.conj()

    def mag_sq_fraction(self) -> Fraction:
        return self.mag_sq().to_fraction()

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycNumber.rational(1 / self.to_fraction())
        c = self.conj()
        m = self * c
        if m.is_rational():
            return c * CycNumber.rational(1 / m.to_fraction())
        # fall back to the product of the remaining Galois conjugates
        prod = CycNumber.one()
        for t in range(2, self.order):
            if gcd(t, self.order) == 1:
                prod = prod * self.galois(t)
        norm = self * prod
        return prod * CycNumber.rational(1 / norm.to_fraction())

    def __truediv__(self, other) -> "CycNumber":
        try:
            other = CycNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycNumber":
        return CycNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "CycNumber":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = CycNumber.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # ----- comparison / hashing -----
    def __eq__(self, other) -> bool:
        try:
            other = CycNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.order == other.order and self.den == other.den
                and bool(np.all(self.num == other.num)))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.den, tuple(int(x) for x in np.nonzero(self.num)[0]),
                               tuple(int(x) for x in self.num[self.num != 0])))
        return self._hash

    # ----- roots of unity -----
    def root_of_unity_exponent(self) -> tuple[int, int] | None:
        """(k, n) with self == zeta_n^k and k/n in lowest terms, or None."""
        n = self.order
        n2 = n if n % 2 == 0 else 2 * n
        if self.den != 1:
            return None
        for k in range(n2):
            if CycNumber.root(k, n2) == self:
                g = gcd(k, n2)
                return (k // g, n2 // g)
        return None

    def to_complex(self) -> complex:
        """Floating-point value under zeta_n = exp(2 pi i / n); diagnostics only."""
        k = np.arange(self.order)
        z = np.exp(2j * np.pi * k / self.order)
        return complex(np.sum(self.num.astype(np.complex128) * z) / self.den)

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycNumber({self.to_fraction()})"
        terms = [f"{int(c)}*z{self.order}^{k}" for k, c in enumerate(self.num) if c]
        body = " + ".join(terms)
        return f"CycNumber(({body})/{self.den})" if self.den != 1 else f"CycNumber({body})"

    def to_json(self) -> dict:
        if self.is_rational():
            return {"rational": format_fraction(self.to_fraction())}
        ru = self.root_of_unity_exponent()
        if ru is not None:
            return {"root_of_unity": f"zeta_{ru[1]}^{ru[0]}"}
        return {
            "order": self.order,
            "den": self.den,
            "coeffs": {str(k): int(c) for k, c in enumerate(self.num) if c},
        }


def format_fraction(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sqrt_q(p: int) -> CycNumber:
    """sqrt(p) in Q(zeta_4p), as the positive root under the standard embedding.

    Uses the quadratic Gauss sum G = sum_x zeta_p^(x^2), which is sqrt(p) when
    p = 1 mod 4 and i*sqrt(p) when p = 3 mod 4 (Gauss's sign theorem).
    """
    counts = np.zeros(p, dtype=np.int64)
    for x in range(p):
        counts[(x * x) % p] += 1
    g = CycNumber.from_counts(p, counts)
    if p % 4 == 1:
        return g
    return g * CycNumber.root(-1, 4)
