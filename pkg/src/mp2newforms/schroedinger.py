"""Truncated Schroedinger model of the even Weil representation and a linear-algebra fixed-vector oracle.

A vector is an even function phi on F with phi(u y) = tau(u) phi(y) for units u, where tau is the
unit twist.  It is stored by its values phi(varpi^i) for i_min <= i <= i_max plus a constant tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import AdditiveCharacter, UnitCharacter, chi_from_squareclass, psi_eps
from .cyclotomic import CycNumber
from .exact import ScaledPAdic, SquareClass, as_padic, smallest_nonresidue
from .gauss import gauss_g_oracle, weil_index

MAX_TRUNCATION = 40


@dataclass(frozen=True)
class WeilRepConfig:
    p: int
    eps: int
    chi: SquareClass
    eta: UnitCharacter

    def __post_init__(self):
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        if self.eta.p != self.p:
            raise ValueError("eta lives over a different prime")

    @property
    def psi(self) -> AdditiveCharacter:
        return psi_eps(self.p, self.eps)

    @property
    def psi_prime(self) -> AdditiveCharacter:
        """psi^eps_a with a the representative of chi."""
        return self.psi.twist(self.chi.representative(self.p))

    @property
    def unit_twist(self) -> UnitCharacter:
        return chi_from_squareclass(self.p, self.chi).unit_part() * self.eta.inverse()

    @property
    def nu(self) -> int:
        return self.psi_prime.conductor() + self.eps


@dataclass(frozen=True)
class TruncatedEvenFunction:
    i_min: int
    i_max: int
    vals: tuple
    tail: CycNumber
    unit_twist: UnitCharacter

    def __post_init__(self):
        vals = tuple(CycNumber.coerce(v) for v in self.vals)
        object.__setattr__(self, "vals", vals)
        object.__setattr__(self, "tail", CycNumber.coerce(self.tail))
        if len(vals) != self.i_max - self.i_min + 1:
            raise ValueError("value vector does not match the index range")
        if not self.unit_twist.is_trivial() and not self.tail.is_zero():
            raise ValueError("a nontrivial unit twist forces a zero tail")
        if self.unit_twist.sign() == -1 and not self.is_zero():
            raise ValueError("an odd unit twist admits no nonzero even function")

    def value_at_power(self, i: int) -> CycNumber:
        if i < self.i_min:
            return CycNumber.zero()
        if i > self.i_max:
            return self.tail
        return self.vals[i - self.i_min]

    def __call__(self, y: ScaledPAdic) -> CycNumber:
        return self.unit_twist(y.unit) * self.value_at_power(y.val)

    def is_zero(self) -> bool:
        return self.tail.is_zero() and all(v.is_zero() for v in self.vals)

    def scaled(self, c) -> "TruncatedEvenFunction":
        c = CycNumber.coerce(c)
        return TruncatedEvenFunction(self.i_min, self.i_max, tuple(v * c for v in self.vals), self.tail * c,
                                     self.unit_twist)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedEvenFunction) or other.unit_twist != self.unit_twist:
            return False
        lo, hi = min(self.i_min, other.i_min), max(self.i_max, other.i_max) + 1
        return all(self.value_at_power(i) == other.value_at_power(i) for i in range(lo, hi + 1))

    def __hash__(self) -> int:
        return hash((self.i_min, self.unit_twist))


def _shell_constant(psi: AdditiveCharacter, b: ScaledPAdic, i: int) -> CycNumber | None:
    """psi(b varpi^(2i) u^2) if it does not depend on the unit u, else None."""
    twisted = psi.twist(b * ScaledPAdic(psi.p, 2 * i, 1))
    k = twisted.conductor()
    if k <= 0:
        return CycNumber.one()
    mod = psi.p**k
    us = np.arange(mod, dtype=np.int64)
    us = us[us % psi.p != 0]
    e, n = twisted.exponents(us * us % mod)
    if np.all(e == e[0]):
        return CycNumber.root(int(e[0]), n)
    return None


def weil_action_B(gen: tuple[str, object], phi: TruncatedEvenFunction, psi_prime: AdditiveCharacter,
                  eps: int = 0) -> TruncatedEvenFunction:
    """Apply the lift of t(a) (a a unit) or n(b) to phi in the model attached to psi_prime.

    The torus lift carries the splitting sign gamma(a, psi^eps), so t(a) acts on phi(y) by
    gamma(a, psi^eps) gamma(a, psi_prime)^-1 phi(a y).
    """
    kind, value = gen
    p = psi_prime.p
    if kind == "t":
        a = as_padic(value, p)
        if a.val != 0:
            raise ValueError("outside truncated model")
        split = weil_index(a, psi_eps(p, eps)).value
        factor = split * weil_index(a, psi_prime).value.conj() * phi.unit_twist(a.unit)
        return phi.scaled(factor)
    if kind == "n":
        if value == 0:
            return phi
        b = as_padic(value, p)
        new = []
        for i in range(phi.i_min, phi.i_max + 1):
            v = phi.value_at_power(i)
            if v.is_zero():
                new.append(v)
                continue
            c = _shell_constant(psi_prime, b, i)
            if c is None:
                raise ValueError(f"n(b) is not constant on the shell of valuation {i}")
            new.append(v * c)
        tail = phi.tail
        if not tail.is_zero():
            # every shell beyond i_max must see a trivial character
            if -psi_prime.shift.val - b.val - 2 * (phi.i_max + 1) > 0:
                raise ValueError("n(b) moves the tail outside the truncated model")
        return TruncatedEvenFunction(phi.i_min, phi.i_max, tuple(new), tail, phi.unit_twist)
    raise ValueError(f"unknown generator {kind!r}")


# ---------------- fixed-vector oracle ----------------


def _ceil_half(x: int) -> int:
    return -((-x) // 2)


@lru_cache(maxsize=None)
def _coefficient(tau: UnitCharacter, psi_prime: AdditiveCharacter, y_unit: int, k: int, i: int,
                 cutoff: int) -> CycNumber:
    """q^(-i) g(tau, psi'_{2 y varpi^i}) with y = y_unit * varpi^k; zero past the vanishing cutoff."""
    p = tau.p
    shifted = psi_prime.twist(ScaledPAdic(p, k + i, 2 * y_unit, psi_prime.shift.prec))
    if shifted.conductor() > cutoff:
        return CycNumber.zero()
    return gauss_g_oracle(tau, shifted) * CycNumber.rational(Fraction(1, p**i) if i >= 0 else p**-i)


def _tail_coefficient(tau: UnitCharacter, psi_prime: AdditiveCharacter, y_unit: int, k: int, start: int,
                      cutoff: int) -> CycNumber:
    """Sum over i >= start of q^(-i) g(1, psi'_{2 y varpi^i}); only the trivial twist has a tail."""
    p = tau.p
    c = psi_prime.conductor()
    # from i >= c - k the character is trivial on O and g = 1 - 1/q, so the rest sums to q^(-first)
    first = max(start, c - k)
    total = CycNumber.rational(Fraction(1, p**first) if first >= 0 else p**-first)
    for i in range(start, first):
        total = total + _coefficient(tau, psi_prime, y_unit, k, i, cutoff)
    return total


def _rows(cfg: WeilRepConfig, m: int, i_max: int) -> list[dict]:
    tau = cfg.unit_twist
    psi_prime = cfg.psi_prime
    c = psi_prime.conductor()
    i_min = _ceil_half(cfg.nu)
    cutoff = max(tau.conductor(), 1) + 1
    top = _ceil_half(c - m - cfg.eps) - 1
    floor = c - i_max - cutoff - 1
    has_tail = tau.is_trivial()
    xi = smallest_nonresidue(cfg.p)
    rows = []
    for k in range(top, floor - 1, -1):
        for y_unit in (1, xi):
            row = {}
            for i in range(i_min, i_max + 1):
                v = _coefficient(tau, psi_prime, y_unit, k, i, cutoff)
                if not v.is_zero():
                    row[i - i_min] = v
            if has_tail:
                v = _tail_coefficient(tau, psi_prime, y_unit, k, i_max + 1, cutoff)
                if not v.is_zero():
                    row[i_max - i_min + 1] = v
            if row:
                rows.append(row)
    return rows


def _nullspace(rows: list[dict], ncols: int) -> list[list[CycNumber]]:
    """Kernel basis of a sparse matrix over the cyclotomic numbers, by exact reduction."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        for col in sorted(pivots):
            if col in row:
                f = row[col]
                for j, v in pivots[col].items():
                    nv = row.get(j, CycNumber.zero()) - f * v
                    if nv.is_zero():
                        row.pop(j, None)
                    else:
                        row[j] = nv
        if not row:
            continue
        col = min(row)
        inv = row[col].inverse()
        row = {j: v * inv for j, v in row.items()}
        # keep the pivot rows fully reduced against each other
        for pc, prow in pivots.items():
            if col in prow:
                f = prow[col]
                for j, v in row.items():
                    nv = prow.get(j, CycNumber.zero()) - f * v
                    if nv.is_zero():
                        prow.pop(j, None)
                    else:
                        prow[j] = nv
        pivots[col] = row
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [CycNumber.zero()] * ncols
        vec[free] = CycNumber.one()
        for pc, prow in pivots.items():
            if free in prow:
                vec[pc] = -prow[free]
        basis.append(vec)
    return basis


def _kernel_at(cfg: WeilRepConfig, m: int, i_max: int) -> list[TruncatedEvenFunction]:
    tau = cfg.unit_twist
    i_min = _ceil_half(cfg.nu)
    if tau.sign() == -1:
        # phi(-y) = tau(-1) phi(y) and evenness force phi = 0
        return []
    ncols = i_max - i_min + 1 + (1 if tau.is_trivial() else 0)
    out = []
    for vec in _nullspace(_rows(cfg, m, i_max), ncols):
        vals = tuple(vec[: i_max - i_min + 1])
        tail = vec[-1] if tau.is_trivial() else CycNumber.zero()
        out.append(TruncatedEvenFunction(i_min, i_max, vals, tail, tau))
    return out


def even_weil_fixed_vectors(cfg: WeilRepConfig, m: int) -> list[TruncatedEvenFunction]:
    """Basis of the eta-isotypic K_m-fixed vectors, with the truncation raised until the count settles."""
    if m < 0:
        raise ValueError("level must be nonnegative")
    if m < cfg.eta.conductor():
        return []
    i_min = _ceil_half(cfg.nu)
    history = []
    for i_max in range(i_min, i_min + MAX_TRUNCATION):
        basis = _kernel_at(cfg, m, i_max)
        history.append(len(basis))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return basis
    raise ArithmeticError(f"kernel dimension did not stabilize: {history}")


def even_weil_fixed_dim_oracle(cfg: WeilRepConfig, m: int) -> int:
    return len(even_weil_fixed_vectors(cfg, m))
