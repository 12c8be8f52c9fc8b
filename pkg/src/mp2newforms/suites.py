"""Verification suites: each produces a list of exact expected/actual cases."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .characters import MultCharacter, UnitCharacter, additive_with_conductor, unit_characters
from .cyclotomic import format_fraction
from .exact import ALL_CLASSES, SquareClass, hilbert, hilbert_oracle, is_prime
from .gauss import gauss_g_closed, gauss_g_oracle, gauss_h_pair_magsq, h_pair_oracle, weil_index_identities_check
from .metaplectic import coset_oracle, cocycle_check, splitting_check
from .newforms import (
    INFINITY,
    UNKNOWN,
    EvenWeil,
    OddWeil,
    PrincipalSeries,
    Steinberg,
    Supercuspidal,
    central_sign,
    describe,
    dim_fixed_ps_oracle,
    even_weil_dim_formula,
    is_generic,
    oldform_bounds_check,
    ps_dim_formula,
    rs_sum_check,
    steinberg_identity_holds,
)
from .schroedinger import WeilRepConfig, even_weil_fixed_dim_oracle
from .theta import theta_conductor_check

SCHEMA_VERSION = "v1"


@dataclass(frozen=True)
class Grid:
    primes: tuple[int, ...]
    eps: tuple[int, ...] = (0, 1)
    max_char_conductor: int = 2
    max_c_sigma: int = 3
    m_max: int = 6


GRIDS = {
    "default": Grid((3, 5)),
    "small": Grid((3,), max_char_conductor=1, max_c_sigma=2, m_max=4),
    "wide": Grid((3, 5, 7)),
}


@dataclass(frozen=True)
class RunConfig:
    p: int | None = None
    N: int = 8
    seed: int = 0
    grid: str = "default"
    format: str = "json"
    out: str | None = None
    samples: int = 0
    m: int | None = None

    def __post_init__(self):
        if self.p is not None and (self.p < 3 or not is_prime(self.p)):
            raise ValueError("p must be an odd prime")
        if self.N < 3:
            raise ValueError("precision must be at least 3")
        if self.grid not in GRIDS:
            raise ValueError(f"unknown grid {self.grid!r}")
        if self.format not in ("json", "csv", "md"):
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def params(self) -> Grid:
        return GRIDS[self.grid]

    @property
    def primes(self) -> tuple[int, ...]:
        return (self.p,) if self.p is not None else self.params.primes

    def header(self) -> dict:
        return {"p": self.p, "N": self.N, "seed": self.seed, "grid": self.grid, "samples": self.samples,
                "m": self.m}


@dataclass(frozen=True)
class Case:
    key: str
    inputs: dict
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        return {"key": self.key, "inputs": self.inputs, "expected": self.expected, "actual": self.actual,
                "pass": self.passed}


@dataclass
class Report:
    suite: str
    config: dict
    cases: list[Case] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    elapsed: float | None = None
    truncated: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {"total": len(self.cases), "passed": len(self.cases) - len(self.failures),
                "failed": len(self.failures), "skipped": len(self.skipped), "truncated": self.truncated}

    def to_json(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "kind": "report", "suite": self.suite, "config": self.config,
               "cases": [c.to_json() for c in self.cases], "skipped": self.skipped, "notes": self.notes,
               "summary": self.summary()}
        if self.elapsed is not None:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def jsonable(x):
    if x is UNKNOWN:
        return "unknown"
    if isinstance(x, float) and x == INFINITY:
        return "inf"
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, SquareClass):
        return x.value
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


# ---------------- case workers (top level so they can run in worker processes) ----------------

Task = tuple[str, Callable, tuple]


def _gauss_g_case(p: int, level: int, exponent: int, c_psi: int):
    chi = UnitCharacter(p, level, exponent)
    psi = additive_with_conductor(p, c_psi)
    closed = gauss_g_closed(chi, psi)
    oracle = gauss_g_oracle(chi, psi)
    expected = {"zero": closed.is_zero, "mag_sq": format_fraction(closed.mag_sq)}
    actual = {"zero": oracle.is_zero(), "mag_sq": format_fraction(oracle.mag_sq().to_fraction())}
    if closed.kind == "exact":
        expected["value"] = closed.value.to_json()
        actual["value"] = oracle.to_json()
    return {"p": p, "chi": str(chi), "c_psi": c_psi}, expected, actual


def _gauss_h_case(p: int, level: int, exponent: int, c_psi: int):
    chi = UnitCharacter(p, level, exponent)
    psi = additive_with_conductor(p, c_psi)
    return ({"p": p, "chi": str(chi), "c_psi": c_psi}, format_fraction(gauss_h_pair_magsq(chi, psi)),
            format_fraction(h_pair_oracle(chi, psi)))


def _hilbert_case(p: int, a: str, b: str):
    ca, cb = SquareClass(a), SquareClass(b)
    return {"p": p, "a": a, "b": b}, hilbert(ca, cb, p), hilbert_oracle(ca, cb, p=p)


def _weil_index_case(p: int):
    res = weil_index_identities_check(p)
    return {"p": p}, dict.fromkeys(res, True), res


def _cocycle_case(p: int, samples: int, seed: int):
    return {"p": p, "samples": samples, "seed": seed}, 0, cocycle_check(p, samples, seed)


def _splitting_case(p: int, eps: int, samples: int, seed: int):
    rep = splitting_check(p, eps, samples, seed)
    actual = {"homomorphism": rep.homomorphism_failures, "closed_form": rep.closed_form_failures,
              "path": rep.path_failures, "generators": rep.generator_failures}
    return ({"p": p, "eps": eps, "samples": samples, "seed": seed, "paths_compared": rep.path_checked},
            dict.fromkeys(actual, 0), actual)


def _coset_case(p: int, m: int):
    rep = coset_oracle(p, m)
    expected = {"count": 1 if m == 0 else 2 * m, "distinct": True, "complete": True}
    actual = {"count": rep.count, "distinct": all(rep.reps_distinct.values()),
              "complete": all(rep.reps_complete.values())}
    return {"p": p, "m": m}, expected, actual


def _even_weil_case(p: int, eps: int, chi: str, level: int, exponent: int, m: int):
    cls, eta = SquareClass(chi), UnitCharacter(p, level, exponent)
    return ({"p": p, "eps": eps, "chi": chi, "eta": str(eta), "m": m}, even_weil_dim_formula(p, cls, eta, m),
            even_weil_fixed_dim_oracle(WeilRepConfig(p, eps, cls, eta), m))


def _ps_case(p: int, eps: int, mu_text: str, level: int, exponent: int, m: int):
    from .newforms import parse_descriptor

    mu = parse_descriptor(mu_text, p).mu
    eta = UnitCharacter(p, level, exponent)
    return ({"p": p, "eps": eps, "mu": mu_text, "eta": str(eta), "m": m}, ps_dim_formula(mu, eta, m),
            dim_fixed_ps_oracle(mu, eps, eta, m))


def _steinberg_case(p: int, eps: int, chi: str, level: int, exponent: int, m_max: int):
    eta = UnitCharacter(p, level, exponent)
    return ({"p": p, "eps": eps, "chi": chi, "eta": str(eta), "m_max": m_max}, True,
            steinberg_identity_holds(p, SquareClass(chi), eta, eps, m_max))


# ---------------- descriptor grids ----------------


def descriptor_grid(p: int, grid: Grid, eps: int = 0) -> list:
    """Test representations; the odd Weil supercuspidal aliases depend on eps."""
    out = []
    for unit in unit_characters(p, grid.max_char_conductor):
        for k, n in ((0, 1), (1, 2), (1, 3)):
            mu = MultCharacter(unit, k, n)
            if not mu.is_exceptional():
                out.append(PrincipalSeries(mu))
    for cls in ALL_CLASSES:
        out += [EvenWeil(p, cls), OddWeil(p, cls), Steinberg(p, cls), OddWeil(p, cls).as_supercuspidal(eps)]
    for c in range(1, grid.max_c_sigma + 1):
        for sign in (1, -1):
            out += [Supercuspidal(p, 0, c, 0, sign), Supercuspidal(p, 1, c, 0, sign),
                    Supercuspidal(p, 1, c, 1, sign),
                    Supercuspidal(p, 1, c, 1, sign, generic_classes=(SquareClass.ONE, SquareClass.XI_VARPI))]
    return out


def _rs_case(p: int, eps: int, text: str, level: int, exponent: int, m_max: int):
    from .newforms import parse_descriptor

    pi = parse_descriptor(text, p)
    eta = UnitCharacter(p, level, exponent)
    rs = rs_sum_check(pi, eps, eta)
    old = oldform_bounds_check(pi, eps, eta, m_max)
    inputs = {"p": p, "eps": eps, "repr": text, "eta": str(eta)}
    if rs is UNKNOWN:
        return inputs, "unknown", "unknown"
    return inputs, {"rs_sum": True, "oldform_bounds": True}, {"rs_sum": rs, "oldform_bounds": old}


def _theta_case(p: int, eps: int, text: str):
    from .newforms import parse_descriptor

    pi = parse_descriptor(text, p)
    chk = theta_conductor_check(pi, eps)
    row = {"repr": text, "c_eps_1": jsonable(chk.c_eps_1), "theta_conductor": jsonable(chk.theta_conductor),
           "match": chk.match, "exception": chk.exception}
    # a documented exception is expected to mismatch
    return {"p": p, "eps": eps, **row}, not chk.exception, chk.match


# ---------------- suites ----------------


def tasks_gauss(cfg: RunConfig) -> list[Task]:
    g = cfg.params
    out = []
    for p in cfg.primes:
        for chi in unit_characters(p, g.max_char_conductor + 1):
            for c_psi in range(-1, g.max_char_conductor + 2):
                key = f"p={p}|chi={chi.level}.{chi.exponent:04d}|c={c_psi:+d}"
                out.append(("g|" + key, _gauss_g_case, (p, chi.level, chi.exponent, c_psi)))
                if chi.sign() == 1:
                    out.append(("h|" + key, _gauss_h_case, (p, chi.level, chi.exponent, c_psi)))
    return out


def tasks_hilbert(cfg: RunConfig) -> list[Task]:
    return [(f"p={p}|{a.value}|{b.value}", _hilbert_case, (p, a.value, b.value))
            for p in cfg.primes for a in ALL_CLASSES for b in ALL_CLASSES]


def tasks_weil_index(cfg: RunConfig) -> list[Task]:
    return [(f"p={p}", _weil_index_case, (p,)) for p in cfg.primes]


def tasks_cocycle(cfg: RunConfig) -> list[Task]:
    n = cfg.samples or 1000
    return [(f"p={p}", _cocycle_case, (p, n, cfg.seed)) for p in cfg.primes]


def tasks_splitting(cfg: RunConfig) -> list[Task]:
    n = cfg.samples or 500
    return [(f"p={p}|eps={e}", _splitting_case, (p, e, n, cfg.seed)) for p in cfg.primes for e in cfg.params.eps]


def tasks_cosets(cfg: RunConfig) -> list[Task]:
    levels = [cfg.m] if cfg.m is not None else range(4)
    return [(f"p={p}|m={m}", _coset_case, (p, m)) for p in cfg.primes for m in levels]


def _eta_grid(p: int, max_conductor: int) -> list[UnitCharacter]:
    return unit_characters(p, max_conductor)


def tasks_even_weil(cfg: RunConfig) -> list[Task]:
    g = cfg.params
    out = []
    for p in cfg.primes:
        for eps in g.eps:
            for cls in ALL_CLASSES:
                for eta in _eta_grid(p, g.max_char_conductor):
                    for m in range(g.m_max + 1):
                        key = f"p={p}|eps={eps}|chi={cls.value}|eta={eta.level}.{eta.exponent:04d}|m={m}"
                        out.append((key, _even_weil_case, (p, eps, cls.value, eta.level, eta.exponent, m)))
    return out


def tasks_ps(cfg: RunConfig) -> list[Task]:
    g = cfg.params
    out = []
    for p in cfg.primes:
        for pi in descriptor_grid(p, g):
            if not isinstance(pi, PrincipalSeries):
                continue
            for eps in g.eps:
                for eta in _eta_grid(p, g.max_char_conductor):
                    for m in range(4):
                        key = f"p={p}|eps={eps}|{describe(pi)}|eta={eta.level}.{eta.exponent:04d}|m={m}"
                        out.append((key, _ps_case, (p, eps, describe(pi), eta.level, eta.exponent, m)))
    return out


def tasks_steinberg(cfg: RunConfig) -> list[Task]:
    g = cfg.params
    return [(f"p={p}|eps={eps}|chi={cls.value}|eta={eta.level}.{eta.exponent:04d}", _steinberg_case,
             (p, eps, cls.value, eta.level, eta.exponent, 20))
            for p in cfg.primes for eps in g.eps for cls in ALL_CLASSES
            for eta in _eta_grid(p, g.max_char_conductor + 1)]


def tasks_rs_sum(cfg: RunConfig) -> list[Task]:
    g = cfg.params
    out = []
    for p in cfg.primes:
        etas = _eta_grid(p, g.max_char_conductor + 1)
        for eps in g.eps:
            for pi in descriptor_grid(p, g, eps):
                text = describe(pi)
                z = central_sign(pi, eps)
                for eta in etas:
                    if eta.sign() == z:
                        key = f"p={p}|eps={eps}|{text}|eta={eta.level}.{eta.exponent:04d}"
                        out.append((key, _rs_case, (p, eps, text, eta.level, eta.exponent, g.m_max)))
    return out


def theta_grid(p: int, grid: Grid, eps: int) -> tuple[list, list]:
    """Descriptors admitted to the theta check, and those skipped for undetermined genericity."""
    admitted, skipped = [], []
    for pi in descriptor_grid(p, grid, eps):
        generic = is_generic(pi, SquareClass.ONE, eps)
        if generic is UNKNOWN:
            skipped.append(pi)
            continue
        if not generic:
            continue
        odd_weil = isinstance(pi, OddWeil) or (isinstance(pi, Supercuspidal) and pi.is_odd_weil)
        if central_sign(pi, eps) == 1 or odd_weil:
            admitted.append(pi)
    return admitted, skipped


def tasks_theta(cfg: RunConfig) -> tuple[list[Task], list[str]]:
    out, skipped = [], []
    for p in cfg.primes:
        for eps in cfg.params.eps:
            admitted, skip = theta_grid(p, cfg.params, eps)
            skipped += [f"p={p}|eps={eps}|{describe(pi)}" for pi in skip]
            out += [(f"p={p}|eps={eps}|{describe(pi)}", _theta_case, (p, eps, describe(pi))) for pi in admitted]
    return out, skipped


SUITES = {
    "gauss": tasks_gauss,
    "hilbert": tasks_hilbert,
    "weil-index": tasks_weil_index,
    "cocycle": tasks_cocycle,
    "splitting": tasks_splitting,
    "cosets": tasks_cosets,
    "weil": tasks_even_weil,
    "ps": tasks_ps,
    "steinberg": tasks_steinberg,
    "rs-sum": tasks_rs_sum,
    "theta": tasks_theta,
}


def _run_task(task: Task) -> Case | None:
    key, fn, args = task
    try:
        inputs, expected, actual = fn(*args)
    except MemoryError:
        return None
    return Case(key, jsonable(inputs), jsonable(expected), jsonable(actual))


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MP2_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(name: str, cfg: RunConfig) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    made = SUITES[name](cfg)
    tasks, skipped = made if isinstance(made, tuple) else (made, [])
    report = Report(name, cfg.header(), skipped=sorted(skipped))
    workers = thread_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = []
        for t in tasks:
            results.append(_run_task(t))
            if results[-1] is None:
                break
    # a case over the resource limit ends the run; what finished is still reported
    if None in results:
        report.truncated = True
        results = results[: results.index(None)]
    unknown = [c.key for c in results if c.expected == "unknown"]
    report.cases = sorted((c for c in results if c.expected != "unknown"), key=lambda c: c.key)
    report.skipped = sorted(report.skipped + unknown)
    if name == "theta":
        report.notes = {"wd_composite_preserves_conductor": False}
    return report
