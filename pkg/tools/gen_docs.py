"""Regenerate the schema reference files in docs/ from the parser's key registry.

    python3 tools/gen_docs.py          # rewrite docs/schema.txt and docs/defaults.md
    python3 tools/gen_docs.py --check  # exit 1 if either file is stale
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from definetti_sim.scenario import SECTIONS, TOP_KEYS, _fmt_default, schema_text

DOCS = Path(__file__).resolve().parent.parent / "docs"


def defaults_markdown() -> str:
    lines = [
        "# Scenario defaults",
        "",
        "Generated by `tools/gen_docs.py` from the parser's key registry; do not edit by hand.",
        "`required` keys have no default. `-` means the value is inherited (see the description).",
        "",
        "| key | type | default | valid | description |",
        "|---|---|---|---|---|",
    ]
    rows = [(k.path, k) for k in TOP_KEYS]
    rows += [(f"{section}.N.{k.path}", k) for section, keys in SECTIONS.items() for k in keys]
    for path, k in rows:
        cells = (f"`{path}`", k.kind, f"`{_fmt_default(k)}`", k.valid, k.doc)
        lines.append("| " + " | ".join(c.replace("|", "\\|") for c in cells) + " |")
    return "\n".join(lines) + "\n"


def outputs() -> dict[Path, str]:
    return {DOCS / "schema.txt": schema_text(), DOCS / "defaults.md": defaults_markdown()}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="only compare, do not write")
    args = ap.parse_args(argv)
    stale = []
    for path, text in outputs().items():
        current = path.read_text(encoding="utf-8") if path.exists() else None
        if current != text:
            stale.append(path)
            if not args.check:
                path.write_text(text, encoding="utf-8", newline="\n")
    for path in stale:
        print(f"{'stale' if args.check else 'wrote'}: {path}")
    return 1 if args.check and stale else 0


if __name__ == "__main__":
    sys.exit(main())
