#!/usr/bin/env python3
"""Write the verification report as JSON and Markdown and print the verdict counts.

    python3 scripts/make_report.py [--out-dir DIR]
"""
import argparse
import sys
from pathlib import Path

from abelaffine.catalog import load_catalog
from abelaffine.report import build_report, failed, to_json, to_markdown


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("reports"))
    args = ap.parse_args(argv)
    rep = build_report(load_catalog())
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "report.json").write_text(to_json(rep), encoding="utf-8")
    (args.out_dir / "report.md").write_text(to_markdown(rep), encoding="utf-8")
    print(" ".join(f"{k}={v}" for k, v in rep["summary"].items()))
    for c in rep["claims"]:
        if c["verdict"] != "match":
            print(f"  {c['verdict']:10s} {c['id']}: expected {c['expected']!r}, computed {c['computed']!r}")
    return 1 if failed(rep) else 0


if __name__ == "__main__":
    sys.exit(main())
