"""Gauss sums g and h over Z_p^x, and the normalized Weil index."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .characters import AdditiveCharacter, UnitCharacter, base_additive, psi_eps
from .cyclotomic import CycNumber, sqrt_q
from .exact import ALL_CLASSES, ScaledPAdic, SquareClass, as_padic, hilbert, smallest_nonresidue


@dataclass(frozen=True)
class GaussValue:
    kind: str  # "exact" | "zero" | "magsq"
    mag_sq: Fraction
    value: CycNumber | None = None

    @classmethod
    def exact(cls, value: CycNumber) -> "GaussValue":
        m = value.mag_sq().to_fraction()
        return cls("zero", Fraction(0), value) if m == 0 else cls("exact", m, value)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"


def _character_sum(chi: UnitCharacter, psi: AdditiveCharacter, K: int, square: bool) -> CycNumber:
    p = chi.p
    mod = p**K
    xs = np.arange(mod, dtype=np.int64)
    xs = xs[xs % p != 0]
    a = chi.exponents(xs)
    n1 = chi.order
    b, n2 = psi.exponents(xs * xs % mod if square else xs)
    N = lcm(n1, n2)
    e = (a * (N // n1) + b * (N // n2)) % N
    counts = np.bincount(e, minlength=N)
    return CycNumber.from_counts(N, counts, mod)


def _default_K(chi: UnitCharacter, psi: AdditiveCharacter) -> int:
    return max(1, chi.conductor(), psi.conductor())


@lru_cache(maxsize=65536)
def gauss_g_oracle(chi: UnitCharacter, psi: AdditiveCharacter, K: int | None = None) -> CycNumber:
    """Brute-force integral of chi(x) psi(x) over Z_p^x."""
    K = _default_K(chi, psi) if K is None else K
    if K < _default_K(chi, psi):
        raise ValueError("summation level below the conductors")
    return _character_sum(chi, psi, K, square=False)


@lru_cache(maxsize=65536)
def gauss_h_oracle(chi: UnitCharacter, psi: AdditiveCharacter, K: int | None = None) -> CycNumber:
    """Brute-force integral of chi(x) psi(x^2) over Z_p^x."""
    K = _default_K(chi, psi) if K is None else K
    if K < _default_K(chi, psi):
        raise ValueError("summation level below the conductors")
    return _character_sum(chi, psi, K, square=True)


def gauss_g_closed(chi: UnitCharacter, psi: AdditiveCharacter, q: int | None = None) -> GaussValue:
    q = chi.p if q is None else q
    c, cp = chi.conductor(), psi.conductor()
    if c == 0:
        if cp <= 0:
            return GaussValue.exact(CycNumber.rational(1 - Fraction(1, q)))
        if cp == 1:
            return GaussValue.exact(CycNumber.rational(Fraction(-1, q)))
        return GaussValue("zero", Fraction(0), CycNumber.zero())
    if cp != c:
        return GaussValue("zero", Fraction(0), CycNumber.zero())
    return GaussValue("magsq", Fraction(1, q**cp))


def gauss_h_pair_magsq(chi: UnitCharacter, psi: AdditiveCharacter, q: int | None = None) -> Fraction:
    """|h(chi,psi)|^2 + |h(chi,psi_xi)|^2 in closed form."""
    q = chi.p if q is None else q
    if chi.sign() == -1:
        raise ValueError("odd character")
    c, cp = chi.conductor(), psi.conductor()
    if cp <= 0:
        # both sums reduce to the measure of O^x against chi
        return 2 * (1 - Fraction(1, q)) ** 2 if c == 0 else Fraction(0)
    if c == cp:
        return Fraction(4, q**cp)
    if c == 0 and cp == 1:
        return Fraction(2, q) + Fraction(2, q**2)
    return Fraction(0)


def h_pair_oracle(chi: UnitCharacter, psi: AdditiveCharacter) -> Fraction:
    xi = smallest_nonresidue(chi.p)
    # individual |h|^2 may be irrational; only the pair sum is rational
    total = gauss_h_oracle(chi, psi).mag_sq() + gauss_h_oracle(chi, psi.twist(xi)).mag_sq()
    return total.to_fraction()


def h_twist_report(chi: UnitCharacter, psi: AdditiveCharacter) -> str | None:
    """For c(chi) = c(psi) >= 2: which of psi, psi_xi carries the nonzero h (empirical)."""
    c = chi.conductor()
    if c < 2 or psi.conductor() != c or chi.sign() == -1:
        return None
    xi = smallest_nonresidue(chi.p)
    full = Fraction(4, chi.p**c)
    a = gauss_h_oracle(chi, psi).mag_sq()
    b = gauss_h_oracle(chi, psi.twist(xi)).mag_sq()
    if a == full and b.is_zero():
        return "psi"
    if b == full and a.is_zero():
        return "psi_xi"
    return "neither"


# ---------------- Weil index ----------------


@dataclass(frozen=True)
class WeilIndex:
    value: CycNumber

    def __post_init__(self):
        if self.value.mag_sq() != 1 or self.value**8 != 1:
            raise ValueError("Weil index is not an eighth root of unity")

    def exponent8(self) -> int:
        for k in range(8):
            if CycNumber.root(k, 8) == self.value:
                return k
        raise AssertionError("unreachable")

    def __mul__(self, other):
        if isinstance(other, WeilIndex):
            return WeilIndex(self.value * other.value)
        return WeilIndex(self.value * other)

    def inverse(self) -> "WeilIndex":
        return WeilIndex(self.value.conj())

    def __eq__(self, other) -> bool:
        if isinstance(other, WeilIndex):
            return self.value == other.value
        return self.value == other

    def __hash__(self) -> int:
        return hash(self.value)


@lru_cache(maxsize=65536)
def truncated_quadratic_integral(psi: AdditiveCharacter, r: int) -> CycNumber:
    """Exact value of the integral of psi(x^2) over p^(-r)."""
    p = psi.p
    scaled = psi.twist(ScaledPAdic(p, -2 * r, 1, psi.shift.prec))  # y -> psi(varpi^(-2r) y^2)
    t = max(0, scaled.conductor())
    mod = p**t
    ys = np.arange(mod, dtype=np.int64)
    e, n = scaled.exponents(ys * ys % mod if t else ys)
    counts = np.bincount(e, minlength=n)
    # q^r from the change of variables, q^(-t) per residue class
    return CycNumber.from_counts(n, counts) * CycNumber.rational(Fraction(p**r, mod) if r >= 0 else Fraction(1, mod * p**-r))


@lru_cache(maxsize=65536)
def stable_quadratic_integral(psi: AdditiveCharacter) -> tuple[CycNumber, int]:
    c = psi.conductor()
    r = max(0, -((c - 2) // 2))  # ceil((2 - c)/2)
    r_max = abs(c) + 4
    while r <= r_max:
        a = truncated_quadratic_integral(psi, r)
        if a == truncated_quadratic_integral(psi, r + 1):
            return a, r
        r += 1
    raise ArithmeticError("truncated integral did not stabilize")


@lru_cache(maxsize=4096)
def weil_gamma_psi(psi: AdditiveCharacter) -> WeilIndex:
    """Unimodular index of x -> psi(x^2): the stable integral times q^(c(psi)/2)."""
    w, _ = stable_quadratic_integral(psi)
    c = psi.conductor()
    return WeilIndex(w * _sqrt_q_power(psi.p, c))


def _sqrt_q_power(p: int, k: int) -> CycNumber:
    """q^(k/2) exactly."""
    base = CycNumber.rational(Fraction(p) ** (k // 2))
    return base * sqrt_q(p) if k % 2 else base


def _stable_cut(psi: AdditiveCharacter, x: ScaledPAdic) -> ScaledPAdic:
    # only the unit residue modulo p^(needed) matters; trimming improves cache reuse
    c = psi.conductor() - x.val
    need = max(1, abs(c)) + 2 * (abs(c) + 5) + 2
    return ScaledPAdic(x.p, x.val, x.unit, min(x.prec, need))


def weil_index(a, psi: AdditiveCharacter) -> WeilIndex:
    """gamma(a, psi) = gamma(psi_a) / gamma(psi)."""
    a = as_padic(a, psi.p)
    return _weil_index(_stable_cut(psi, a), psi)


@lru_cache(maxsize=65536)
def _weil_index(a: ScaledPAdic, psi: AdditiveCharacter) -> WeilIndex:
    wa, ra = stable_quadratic_integral(psi.twist(a))
    w1, r1 = stable_quadratic_integral(psi)
    r = max(ra, r1)
    ratio = wa / w1
    if truncated_quadratic_integral(psi.twist(a), r + 1) / truncated_quadratic_integral(psi, r + 1) != ratio:
        raise ArithmeticError("Weil index ratio did not stabilize")
    # |W_b| = q^(-c(psi_b)/2), so the raw ratio has modulus q^(ord a / 2)
    value = ratio / _sqrt_q_power(psi.p, a.val)
    return WeilIndex(value)


def weil_index_identities_check(p: int) -> dict[str, bool]:
    """All displayed identities over every square class, for both fixed characters and their twists."""
    reps = {cls: cls.representative(p) for cls in ALL_CLASSES}
    psis = [psi_eps(p, 0), psi_eps(p, 1)]
    psis += [ps.twist(r) for ps in psis[:2] for r in reps.values()]
    ok = dict(square_invariance=True, multiplicativity=True, twist=True, minus_one=True, parity=True)
    squares = [ScaledPAdic.from_rational(x, p) for x in (4, 9 * p * p if p != 3 else 16, Fraction(1, p * p))]
    for psi in psis:
        g = {cls: weil_index(reps[cls], psi) for cls in ALL_CLASSES}
        for cls, a in reps.items():
            for c2 in squares:
                ok["square_invariance"] &= weil_index(a * c2, psi) == g[cls]
        for ca, a in reps.items():
            for cb, b in reps.items():
                lhs = weil_index(a * b, psi)
                ok["multiplicativity"] &= lhs == g[ca] * g[cb] * hilbert(a, b)
                ok["twist"] &= weil_index(a, psi.twist(b)) == g[ca] * hilbert(a, b)
        gp = weil_gamma_psi(psi)
        ok["minus_one"] &= weil_index(ScaledPAdic.from_rational(-1, p), psi) == (gp.inverse() * gp.inverse())
        for c in reps.values():
            if c.val % 2 == psi.conductor() % 2:
                for u in (reps[SquareClass.ONE], reps[SquareClass.XI]):
                    ok["parity"] &= weil_index(u * c, psi) == weil_index(c, psi)
    return ok


def standard_psi(p: int) -> AdditiveCharacter:
    return base_additive(p)
