"""Command line front end: tables, single oracle runs and verification suites.

Exit codes: 0 all cases pass, 1 some case failed, 2 invalid input, 3 resource limit (partial report).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from .characters import AdditiveCharacter, UnitCharacter, additive_with_conductor, character_from_json, unit_characters
from .cyclotomic import format_fraction
from .exact import SquareClass
from .gauss import gauss_g_closed, gauss_g_oracle, gauss_h_oracle
from .metaplectic import coset_oracle, coset_reps, rep_label
from .newforms import (
    UNKNOWN,
    LevelQuery,
    conductor,
    conductor_min,
    describe,
    dim_fixed,
    even_weil_dim_formula,
    newform_profile,
    parse_descriptor,
)
from .schroedinger import WeilRepConfig, even_weil_fixed_dim_oracle
from .suites import SCHEMA_VERSION, SUITES, RunConfig, jsonable, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _eta(text: str, p: int) -> UnitCharacter:
    try:
        level, exp = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise InputError(f"eta must be LEVEL:EXP, got {text!r}") from exc
    return UnitCharacter(p, level, exp)


def _eta_label(eta: UnitCharacter) -> str:
    return f"{eta.level}:{eta.exponent}"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, sort_keys=True, separators=(",", ":"))


def render_rows(columns: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows([_cell(v) for v in r] for r in rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    lines += ["| " + " | ".join(_cell(v) for v in r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------- table ----------------


def build_table(kind: str, text: str, p: int, eps: int, eta: UnitCharacter, m_max: int,
                max_eta_conductor: int = 2) -> dict:
    pi = parse_descriptor(text, p)
    header = {"schema": SCHEMA_VERSION, "kind": "table", "table": kind, "repr": describe(pi), "p": p, "eps": eps}
    if kind == "dims":
        rows = [[m, jsonable(dim_fixed(pi, LevelQuery(eps, eta, m)))] for m in range(m_max + 1)]
        return {**header, "eta": _eta_label(eta), "columns": ["m", "dim"], "rows": rows}
    if kind == "newforms":
        prof = newform_profile(pi, eps, eta)
        if prof is UNKNOWN:
            return {**header, "eta": _eta_label(eta), "first_level": "unknown", "columns": ["m", "dim_new"],
                    "rows": []}
        rows = [[m, d] for m, d in sorted(prof.dims_new.items())]
        return {**header, "eta": _eta_label(eta), "first_level": jsonable(prof.first_level),
                "columns": ["m", "dim_new"], "rows": rows}
    if kind == "conductors":
        rows = [[_eta_label(e), e.conductor(), jsonable(conductor(pi, eps, e))]
                for e in unit_characters(p, max_eta_conductor)]
        return {**header, "conductor_min": jsonable(conductor_min(pi, eps)),
                "columns": ["eta", "eta_conductor", "conductor"], "rows": rows}
    raise InputError(f"unknown table {kind!r}")


def cmd_table(args) -> int:
    eta = _eta(args.eta, args.p)
    table = build_table(args.kind, args.repr, args.p, args.eps, eta, args.m_max, args.max_eta_conductor)
    if args.format == "json":
        _emit(_dump(table), args.out)
    else:
        _emit(render_rows(table["columns"], table["rows"], args.format), args.out)
    return EXIT_OK


def cmd_conductor(args) -> int:
    pi = parse_descriptor(args.repr, args.p)
    eta = _eta(args.eta, args.p)
    out = {"repr": describe(pi), "p": args.p, "eps": args.eps, "eta": _eta_label(eta),
           "conductor": jsonable(conductor(pi, args.eps, eta)), "conductor_min": jsonable(conductor_min(pi, args.eps))}
    _emit(_dump(out), args.out)
    return EXIT_OK


# ---------------- oracle / gauss ----------------


def cmd_oracle(args) -> int:
    if args.what == "weil":
        if args.chi is None or args.m is None:
            raise InputError("oracle weil needs --chi and --m")
        cls = SquareClass.parse(args.chi)
        eta = UnitCharacter(args.p, args.eta_conductor, args.eta_exp)
        dim_oracle = even_weil_fixed_dim_oracle(WeilRepConfig(args.p, args.eps, cls, eta), args.m)
        dim_formula = even_weil_dim_formula(args.p, cls, eta, args.m)
        out = {"dim_oracle": dim_oracle, "dim_formula": dim_formula, "match": dim_oracle == dim_formula}
        _emit(_dump(out), args.out)
        return EXIT_OK if out["match"] else EXIT_FAIL
    if args.m is None:
        raise InputError("oracle cosets needs --m")
    try:
        rep = coset_oracle(args.p, args.m)
    except MemoryError as exc:
        _emit(_dump({"error": str(exc), "p": args.p, "m": args.m}), args.out)
        return EXIT_RESOURCE
    out = {"count": rep.count, "expected": rep.expected, "verified": rep.verified,
           "reps": {str(e): [rep_label(g) for g in coset_reps(e, args.m, args.p)] for e in (0, 1)}}
    _emit(_dump(out), args.out)
    return EXIT_OK if rep.verified else EXIT_FAIL


def _parse_chi(text: str, p: int | None) -> UnitCharacter:
    text = text.strip()
    if text.startswith("{"):
        ch = character_from_json(json.loads(text))
        if not isinstance(ch, UnitCharacter):
            raise InputError("chi must be a unit character")
        return ch
    if p is None:
        raise InputError("--p is required with the LEVEL:EXP form")
    return _eta(text, p)


def _parse_psi(text: str, p: int | None) -> AdditiveCharacter:
    text = text.strip()
    if text.startswith("{"):
        ch = character_from_json(json.loads(text))
        if not isinstance(ch, AdditiveCharacter):
            raise InputError("psi must be an additive character")
        return ch
    if p is None:
        raise InputError("--p is required when psi is given by its conductor")
    return additive_with_conductor(p, int(text))


def cmd_gauss(args) -> int:
    chi = _parse_chi(args.chi, args.p)
    psi = _parse_psi(args.psi, args.p or chi.p)
    if psi.p != chi.p:
        raise InputError("chi and psi live over different primes")
    value = gauss_g_oracle(chi, psi) if args.variant == "g" else gauss_h_oracle(chi, psi)
    mag = value.mag_sq()
    # a single |h|^2 need not be rational; it is then reported as a cyclotomic number
    out = {"value": value.to_json(), "mag_sq": format_fraction(mag.to_fraction()) if mag.is_rational() else mag.to_json(),
           "zero": value.is_zero()}
    if args.variant == "g":
        out["closed_kind"] = gauss_g_closed(chi, psi).kind
    _emit(_dump(out), args.out)
    return EXIT_OK


# ---------------- check ----------------


def render_report(report, fmt: str, timing: bool) -> str:
    if fmt == "json":
        data = report.to_json()
        if not timing:
            data.pop("elapsed", None)
        return _dump(data)
    rows = [[c.key, c.passed, c.inputs, c.expected, c.actual] for c in report.cases]
    return render_rows(["key", "pass", "inputs", "expected", "actual"], rows, fmt)


def cmd_check(args) -> int:
    cfg = RunConfig(p=args.p, N=args.N, seed=args.seed, grid=args.grid, format=args.format, out=args.out,
                    samples=args.samples or 0, m=args.m)
    start = time.perf_counter()
    report = run_suite(args.suite, cfg)
    if args.timing:
        report.elapsed = time.perf_counter() - start
    _emit(render_report(report, args.format, args.timing), args.out)
    if report.truncated:
        return EXIT_RESOURCE
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------- parser ----------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mp2newforms", description="Newform tables and oracle checks for Mp2(Q_p).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, p_default: int | None = 3):
        sp.add_argument("--p", type=int, default=p_default)
        sp.add_argument("--out", default=None)

    t = sub.add_parser("table", help="dimension, newform or conductor table for one representation")
    t.add_argument("kind", choices=["dims", "newforms", "conductors"])
    t.add_argument("--repr", required=True)
    t.add_argument("--eps", type=int, choices=[0, 1], default=0)
    t.add_argument("--eta", default="0:0", help="unit character LEVEL:EXP")
    t.add_argument("--m-max", type=int, default=6)
    t.add_argument("--max-eta-conductor", type=int, default=2)
    t.add_argument("--format", choices=["json", "csv", "md"], default="json")
    common(t)
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("conductor", help="conductor for one eta and the minimal conductor")
    c.add_argument("--repr", required=True)
    c.add_argument("--eps", type=int, choices=[0, 1], default=0)
    c.add_argument("--eta", default="0:0")
    common(c)
    c.set_defaults(func=cmd_conductor)

    o = sub.add_parser("oracle", help="run one brute-force oracle")
    o.add_argument("what", choices=["weil", "cosets"])
    o.add_argument("--eps", type=int, choices=[0, 1], default=0)
    o.add_argument("--chi", default=None)
    o.add_argument("--eta-conductor", type=int, default=0)
    o.add_argument("--eta-exp", type=int, default=0)
    o.add_argument("--m", type=int, default=None)
    common(o)
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gauss", help="evaluate a Gauss sum")
    g.add_argument("action", choices=["eval"])
    g.add_argument("--variant", choices=["g", "h"], default="g")
    g.add_argument("--chi", required=True, help="LEVEL:EXP or character JSON")
    g.add_argument("--psi", required=True, help="conductor or character JSON")
    common(g, None)
    g.set_defaults(func=cmd_gauss)

    k = sub.add_parser("check", help="run a verification suite")
    k.add_argument("suite", choices=sorted(SUITES))
    k.add_argument("--grid", default="default")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--samples", type=int, default=None)
    k.add_argument("--m", type=int, default=None)
    k.add_argument("--N", type=int, default=8, help="p-adic precision")
    k.add_argument("--format", choices=["json", "csv", "md"], default="json")
    k.add_argument("--timing", action="store_true", help="include elapsed seconds (breaks byte determinism)")
    common(k, None)
    k.set_defaults(func=cmd_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MemoryError as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
