"""Write markdown dimension, newform and conductor tables for a set of representations."""

import argparse
from pathlib import Path

from mp2newforms.cli import build_table, render_rows
from mp2newforms.characters import UnitCharacter

DEFAULT_REPRS = ["ps:0:0", "ps:1:1:1/2", "even:1", "even:varpi", "st:1", "st:xi", "st:varpi", "odd:1",
                 "sc:0:1:0:+1", "sc:1:2:1:+1"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--m-max", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("tables"))
    ap.add_argument("reprs", nargs="*", default=DEFAULT_REPRS)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for text in args.reprs:
        chunks = []
        for eps in (0, 1):
            for kind in ("dims", "newforms", "conductors"):
                try:
                    t = build_table(kind, text, args.p, eps, UnitCharacter.trivial(args.p), args.m_max)
                except ValueError as exc:
                    chunks.append(f"### {kind}, eps={eps}\n\n{exc}\n")
                    continue
                chunks.append(f"### {kind}, eps={eps}\n\n" + render_rows(t["columns"], t["rows"], "md"))
        name = text.replace(":", "_").replace("/", "-").replace("+", "p")
        (args.out / f"{name}.md").write_text(f"# {text} (p={args.p})\n\n" + "\n".join(chunks))
        print(args.out / f"{name}.md")


if __name__ == "__main__":
    main()
