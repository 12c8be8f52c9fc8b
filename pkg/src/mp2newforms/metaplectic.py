"""The metaplectic double cover of SL2(Q_p): Kubota cocycle, splittings over K^0 and K^1, double cosets."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import MultCharacter, UnitCharacter, dlog_table, psi_eps, totient_pp
from .exact import hilbert, smallest_nonresidue, vp
from .gauss import weil_index

INF = float("inf")


def ordp(x: Fraction, p: int) -> float:
    x = Fraction(x)
    if x == 0:
        return INF
    return vp(x.numerator, p) - vp(x.denominator, p)


@dataclass(frozen=True)
class SL2Elem:
    """A matrix in SL2(Q); entries are exact rationals, so an exact zero is just 0."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant is not 1")

    def __matmul__(self, o: "SL2Elem") -> "SL2Elem":
        return SL2Elem(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "SL2Elem":
        return SL2Elem(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def conj_beta(self, p: int, power: int = 1) -> "SL2Elem":
        """beta^power g beta^(-power) with beta = diag(1, p)."""
        s = Fraction(p) ** power
        return SL2Elem(self.a, self.b / s, self.c * s, self.d)

    def reduce_mod(self, p: int, m: int) -> tuple[int, int, int, int]:
        mod = p**m
        out = []
        for x in self.entries():
            if ordp(x, p) < 0:
                raise ValueError("entry is not integral")
            out.append(x.numerator * pow(x.denominator, -1, mod) % mod if mod > 1 else 0)
        return tuple(out)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = SL2Elem(1, 0, 0, 1)
W = SL2Elem(0, 1, -1, 0)


def t(a) -> SL2Elem:
    a = Fraction(a)
    return SL2Elem(a, 0, 0, 1 / a)


def n(b) -> SL2Elem:
    return SL2Elem(1, b, 0, 1)


def nop(c) -> SL2Elem:
    return SL2Elem(1, 0, c, 1)


def kubota_x(g: SL2Elem) -> Fraction:
    return g.c if g.c != 0 else g.d


def kubota_cocycle(g1: SL2Elem, g2: SL2Elem, p: int) -> int:
    x12 = kubota_x(g1 @ g2)
    return hilbert(kubota_x(g1) / x12, kubota_x(g2) / x12, p)


@dataclass(frozen=True)
class MpElem:
    g: SL2Elem
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")


def mp_mul(x: MpElem, y: MpElem, p: int) -> MpElem:
    return MpElem(x.g @ y.g, x.sign * y.sign * kubota_cocycle(x.g, y.g, p))


def mp_inv(x: MpElem, p: int) -> MpElem:
    ginv = x.g.inverse()
    return MpElem(ginv, x.sign * kubota_cocycle(x.g, ginv, p))


def minus_one_psi(p: int, eps: int = 0) -> MpElem:
    gamma = weil_index(Fraction(-1), psi_eps(p, eps)).value
    if gamma == 1:
        return MpElem(SL2Elem(-1, 0, 0, -1), 1)
    if gamma == -1:
        return MpElem(SL2Elem(-1, 0, 0, -1), -1)
    raise AssertionError("gamma(-1, psi) must be a sign for odd p")


# ---------------- compact subgroups and splittings ----------------


def in_K(g: SL2Elem, p: int, eps: int, m: int = 0) -> bool:
    a, b, c, d = (ordp(x, p) for x in g.entries())
    return a >= 0 and d >= 0 and b >= -eps and c >= m + eps


def generator_sign(kind: str, value: Fraction, p: int, eps: int) -> int:
    if kind == "t":
        gamma = weil_index(value, psi_eps(p, eps)).value
        if gamma == 1:
            return 1
        if gamma == -1:
            return -1
        raise AssertionError("torus splitting value must be a sign on units")
    return 1  # n(b), nop(c) and w t(varpi^eps)


def _gen_matrix(kind: str, value: Fraction, p: int, eps: int) -> SL2Elem:
    if kind == "t":
        return t(value)
    if kind == "n":
        return n(value)
    if kind == "nop":
        return nop(value)
    if kind == "wt":
        return W @ t(Fraction(p) ** eps)
    raise ValueError(kind)


def factorize(k: SL2Elem, p: int, eps: int, route: str = "default") -> list[tuple[str, Fraction]]:
    """Write k in K^eps as a product of the generators n(b), t(a), nop(c), w t(varpi^eps)."""
    if not in_K(k, p, eps):
        raise ValueError("element is not in the maximal compact subgroup")
    a, b, c, d = k.entries()
    if c == 0:
        return [("t", a), ("n", b / a)]
    lower_ok = ordp(a, p) == 0 and ordp(c / a, p) >= eps
    upper_ok = ordp(c, p) == eps
    use_lower = ordp(c, p) >= eps + 1 if route == "default" else lower_ok
    if route == "alt" and not lower_ok:
        use_lower = False
    if use_lower and lower_ok:
        return [("nop", c / a), ("t", a), ("n", b / a)]
    if not upper_ok:
        raise ValueError("factorization failed")
    varpi_eps = Fraction(p) ** eps
    return [("n", a / c), ("wt", Fraction(0)), ("t", -c / varpi_eps), ("n", d / c)]


def splitting_s(k: SL2Elem, p: int, eps: int, route: str = "default") -> int:
    word = factorize(k, p, eps, route)
    acc = MpElem(IDENTITY, 1)
    for kind, value in word:
        g = _gen_matrix(kind, value, p, eps)
        acc = mp_mul(acc, MpElem(g, generator_sign(kind, value, p, eps)), p)
    if acc.g != k:
        raise AssertionError("factorization does not reproduce the element")
    return acc.sign


def splitting_s0_closed(k: SL2Elem, p: int) -> int:
    if k.c != 0 and ordp(k.c, p) > 0:
        return hilbert(k.c, k.d, p)
    return 1


def random_K0(rng: random.Random, p: int, max_val: int = 3, size: int = 6) -> SL2Elem:
    """A random element of SL2(Z) (hence of K^0), with lower-left valuation spread over [0, max_val]."""
    bound = p**size
    if rng.random() < 0.1:
        a = rng.choice([u for u in range(1, 4 * p) if u % p])
        return t(a) @ n(rng.randrange(-bound, bound))
    while True:
        j = rng.randint(0, max_val)
        c = p**j * rng.randrange(1, bound)
        if rng.random() < 0.5:
            c = -c
        d = rng.randrange(-bound, bound)
        if d == 0:
            continue
        g, x, y = _egcd(d, c)
        if g != 1:
            continue
        # a d - b c = 1  with a = x, b = -y
        shift = rng.randrange(-bound, bound)
        a, b = x + shift * c, -y + shift * d
        return SL2Elem(a, b, c, d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def random_K(rng: random.Random, p: int, eps: int) -> SL2Elem:
    k = random_K0(rng, p)
    return k.conj_beta(p) if eps == 1 else k


@dataclass
class SplittingReport:
    p: int
    eps: int
    samples: int
    homomorphism_failures: int = 0
    closed_form_failures: int = 0
    path_failures: int = 0
    path_checked: int = 0
    generator_failures: int = 0

    @property
    def passed(self) -> bool:
        return not (self.homomorphism_failures or self.closed_form_failures
                    or self.path_failures or self.generator_failures)


def splitting_check(p: int, eps: int, sample_count: int = 500, seed: int = 0) -> SplittingReport:
    rng = random.Random(seed)
    rep = SplittingReport(p, eps, sample_count)
    xi = smallest_nonresidue(p)
    # the displayed generator values
    gens = [(n(Fraction(1, p**eps)), 1), (nop(Fraction(p**eps)), 1), (W @ t(Fraction(p) ** eps), 1)]
    gens += [(t(u), generator_sign("t", Fraction(u), p, eps)) for u in (1, xi, -1, p + 1)]
    for g, s in gens:
        rep.generator_failures += splitting_s(g, p, eps) != s
    for _ in range(sample_count):
        k1, k2 = random_K(rng, p, eps), random_K(rng, p, eps)
        s1, s2, s12 = splitting_s(k1, p, eps), splitting_s(k2, p, eps), splitting_s(k1 @ k2, p, eps)
        rep.homomorphism_failures += s1 * s2 * kubota_cocycle(k1, k2, p) != s12
        for k, s in ((k1, s1), (k2, s2)):
            if eps == 0:
                rep.closed_form_failures += splitting_s0_closed(k, p) != s
            try:
                alt = splitting_s(k, p, eps, route="alt")
            except ValueError:
                continue
            if factorize(k, p, eps, "alt") != factorize(k, p, eps):
                rep.path_checked += 1
                rep.path_failures += alt != s
    return rep


def cocycle_check(p: int, samples: int = 1000, seed: int = 0) -> int:
    """Number of random triples violating associativity of the group law."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        g1, g2, g3 = (_random_sl2_q(rng, p) for _ in range(3))
        lhs = kubota_cocycle(g1, g2, p) * kubota_cocycle(g1 @ g2, g3, p)
        rhs = kubota_cocycle(g2, g3, p) * kubota_cocycle(g1, g2 @ g3, p)
        failures += lhs != rhs
    return failures


def _random_sl2_q(rng: random.Random, p: int) -> SL2Elem:
    """Random elements of SL2(Z[1/p]): integral matrices conjugated by powers of beta, plus special shapes."""
    r = rng.random()
    if r < 0.15:
        a = Fraction(rng.choice([1, -1, 2, 3, 5, 7, 11])) * Fraction(p) ** rng.randint(-2, 2)
        return t(a) @ n(Fraction(rng.randint(-50, 50), p ** rng.randint(0, 2)))
    if r < 0.25:
        return W
    k = random_K0(rng, p)
    return k.conj_beta(p, rng.randint(-2, 2))


# ---------------- double cosets ----------------


def coset_reps(eps: int, m: int, p: int) -> list[SL2Elem]:
    if m == 0:
        return [IDENTITY]
    reps = [IDENTITY, W]
    xi = smallest_nonresidue(p)
    for i in range(1, m):
        for delta in (0, 1):
            reps.append(nop(Fraction(xi**delta * p ** (i + eps))))
    return reps


def rep_label(g: SL2Elem) -> str:
    if g == IDENTITY:
        return "1"
    if g == W:
        return "w"
    return f"nop({g.c})"


def iwasawa_k(g: SL2Elem, p: int) -> SL2Elem:
    """k in SL2(Z_p) (as a rational matrix) with g in k B."""
    va, vc = ordp(g.a, p), ordp(g.c, p)
    x = Fraction(p) ** (-int(min(va, vc)))
    g = g @ t(x)
    if ordp(g.a, p) == 0:
        g = g @ n(-g.b / g.a)
    else:
        g = g @ n(-g.d / g.c)
    return g


@lru_cache(maxsize=None)
def _sl2_mod(p: int, m: int) -> np.ndarray:
    """Sorted codes of SL2(Z/p^m); code = ((a P + b) P + c) P + d."""
    P = p**m
    r = np.arange(P, dtype=np.int64)
    cc, dd = np.meshgrid(r, r, indexing="ij")
    cc, dd = cc.ravel(), dd.ravel()
    prim = (cc % p != 0) | (dd % p != 0)
    cc, dd = cc[prim], dd[prim]
    inv = np.zeros(P, dtype=np.int64)
    units = r[r % p != 0]
    inv[units] = [pow(int(u), -1, P) for u in units]
    dunit = dd % p != 0
    s = r[None, :]
    # d a unit: b free, a = (1 + b c) d^-1
    c1, d1 = cc[dunit][:, None], dd[dunit][:, None]
    b1 = np.broadcast_to(s, (c1.shape[0], P))
    a1 = (1 + b1 * c1) % P * inv[d1] % P
    # d not a unit, so c is: a free, b = (a d - 1) c^-1
    c2, d2 = cc[~dunit][:, None], dd[~dunit][:, None]
    a2 = np.broadcast_to(s, (c2.shape[0], P))
    b2 = (a2 * d2 - 1) % P * inv[c2] % P
    a = np.concatenate([a1.ravel(), a2.ravel()])
    b = np.concatenate([b1.ravel(), b2.ravel()])
    c = np.concatenate([np.broadcast_to(c1, a1.shape).ravel(), np.broadcast_to(c2, a2.shape).ravel()])
    d = np.concatenate([np.broadcast_to(d1, a1.shape).ravel(), np.broadcast_to(d2, a2.shape).ravel()])
    codes = ((a * P + b) * P + c) * P + d
    codes.sort()
    return codes


def _decode(codes: np.ndarray, P: int):
    d = codes % P
    c = codes // P % P
    b = codes // P**2 % P
    a = codes // P**3
    return a, b, c, d


def _encode(a, b, c, d, P):
    return ((a % P * P + b % P) * P + c % P) * P + d % P


@dataclass
class CosetReport:
    p: int
    m: int
    count: int
    expected: int
    reps_distinct: dict
    reps_complete: dict
    canonical: list

    @property
    def verified(self) -> bool:
        return (self.count == self.expected and all(self.reps_distinct.values())
                and all(self.reps_complete.values()))


def coset_oracle(p: int, m: int, max_elements: int = 5_000_000) -> CosetReport:
    """Orbit enumeration of B_m backslash SL2(Z/p^m) / B_m, checked against coset_reps for both eps."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    if m == 0:
        ok = {0: True, 1: True}
        return CosetReport(p, 0, 1, 1, ok, ok, [(1, 0, 0, 1)])
    P = p**m
    if P**3 > max_elements:
        raise MemoryError("coset enumeration exceeds the resource limit")
    codes = _sl2_mod(p, m)
    a, b, c, d = _decode(codes, P)
    g = _smallest_generator_mod(p, m)
    ginv = pow(g, -1, P)
    moves = [
        (g * a, g * b, ginv * c, ginv * d),  # t(g) x
        (a + c, b + d, c, d),  # n(1) x
        (a * g, b * ginv, c * g, d * ginv),  # x t(g)
        (a, a + b, c, c + d),  # x n(1)
    ]
    N = codes.size
    src = np.concatenate([np.arange(N)] * len(moves))
    dst = np.concatenate([np.searchsorted(codes, _encode(*mv, P)) for mv in moves])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(N, N)).tocsr()
    count, labels = connected_components(graph, directed=True, connection="weak")
    # lexicographically least element of each component
    order = np.lexsort((codes, labels))
    first = order[np.r_[0, np.nonzero(np.diff(labels[order]))[0] + 1]]
    canonical = sorted(tuple(int(v) for v in _decode(codes[i], P)) for i in first)

    distinct, complete = {}, {}
    for eps in (0, 1):
        comps = []
        for rep in coset_reps(eps, m, p):
            k = iwasawa_k(rep.conj_beta(p, -1) if eps == 1 else rep, p)
            code = _encode(*(np.int64(v) for v in k.reduce_mod(p, m)), P)
            comps.append(int(labels[np.searchsorted(codes, code)]))
        distinct[eps] = len(set(comps)) == len(comps)
        complete[eps] = len(set(comps)) == count
    return CosetReport(p, m, int(count), 2 * m, distinct, complete, canonical)


def _smallest_generator_mod(p: int, m: int) -> int:
    from .characters import primitive_root

    return primitive_root(p)


# ---------------- the hom condition ----------------


def _rep_index(g: SL2Elem, p: int, eps: int) -> tuple[str, int]:
    if g == IDENTITY:
        return ("1", 0)
    if g == W:
        return ("w", 0)
    if g.a == 1 and g.b == 0 and g.d == 1:
        return ("nop", int(ordp(g.c, p)) - eps)
    raise ValueError("not a coset representative")


def _check_sign(eta: UnitCharacter, mu: MultCharacter) -> None:
    if eta.sign() != mu.sign():
        raise ValueError("central sign mismatch: eta(-1) != mu(-1)")


def hom_condition(g: SL2Elem, eps: int, m: int, eta: UnitCharacter, mu: MultCharacter) -> bool:
    _check_sign(eta, mu)
    kind, i = _rep_index(g, eta.p, eps)
    mu_u = mu.unit
    if kind == "1":
        return eta == mu_u.inverse()
    if kind == "w":
        return eta == mu_u
    if 2 * i >= m:
        return mu_u.conductor() <= i and (eta * mu_u).conductor() <= m - i
    return mu_u.conductor() <= m - i and (eta * mu_u.inverse()).conductor() <= i


@lru_cache(maxsize=None)
def _borel_stabilizer_pairs(p: int, eps: int, m: int, rep_key: tuple, L: int) -> np.ndarray:
    """Distinct (dlog a, dlog d') mod phi(p^L) over x = [[a, b], [0, a^-1]] with g x g^-1 in K^eps_m,
    d' being the lower-right entry of g x g^-1.  Entries are handled scaled by p^eps."""
    P = p**L
    S = p**eps  # scale so that b = b_int / S
    r = np.arange(P, dtype=np.int64)
    units = r[r % p != 0]
    inv = np.zeros(P, dtype=np.int64)
    inv[units] = [pow(int(u), -1, P) for u in units]
    kind, z = rep_key
    b_range = np.arange(P * S, dtype=np.int64)
    A, Bi = np.meshgrid(units, b_range, indexing="ij")
    A, Bi = A.ravel(), Bi.ravel()
    Ainv = inv[A]
    # matrices scaled by S: S x = [[S a, b_int], [0, S a^-1]]
    if kind == "1":
        k = (S * A, Bi, np.zeros_like(A), S * Ainv)
    elif kind == "w":
        # w x w^-1 = [[a^-1, 0], [-b, a]]
        k = (S * Ainv, np.zeros_like(A), -Bi, S * A)
    else:
        # nop(z) x nop(-z) = [[a - b z, b], [z (a - a^-1 - b z), a^-1 + z b]]  (z integral)
        k = (S * A - z * Bi, Bi, z * (S * A - S * Ainv - z * Bi), S * Ainv + z * Bi)
    ka, kb, kc, kd = k
    mod = P * S

    def val_at_least(x, e):
        # x is the scaled entry; the true entry x / S must lie in p^e, i.e. x in p^(e + eps)
        need = e + eps
        if need <= 0:
            return np.ones(x.shape, dtype=bool)
        return (x % p**need) == 0

    ok = val_at_least(ka, 0) & val_at_least(kd, 0) & val_at_least(kb, -eps) & val_at_least(kc, m + eps)
    ka, kd, A = ka[ok], kd[ok], A[ok]
    dprime = (kd % mod) // S if S > 1 else kd % P
    table = dlog_table(p, L)
    da = table[A % P]
    dd = table[dprime % P]
    if np.any(dd < 0) or np.any(da < 0):
        raise AssertionError("diagonal entries must be units")
    pairs = np.unique(np.stack([da, dd], axis=1), axis=0)
    return pairs


def hom_condition_oracle(g: SL2Elem, eps: int, m: int, eta: UnitCharacter, mu: MultCharacter,
                         L: int | None = None) -> bool:
    """Enumerate K_m^g ∩ B modulo p^L and test eta(d-entry of g x g^-1) = mu(a-entry of x)."""
    _check_sign(eta, mu)
    p = eta.p
    kind, i = _rep_index(g, p, eps)
    if L is None:
        L = max(m, eta.conductor(), mu.conductor()) + 1
    if L > 5:
        raise MemoryError("enumeration level exceeds the resource limit")
    z = 0
    if kind == "nop":
        z = int(g.c)
    pairs = _borel_stabilizer_pairs(p, eps, m, (kind, z), L)
    phi = totient_pp(p, L)
    e_eta = eta.lifted_exponent(L)
    e_mu = mu.unit.lifted_exponent(L)
    diff = (pairs[:, 1] * e_eta - pairs[:, 0] * e_mu) % phi
    return bool(np.all(diff == 0))
