#!/usr/bin/env python3
"""
Regenerate the golden documents for the worked examples.

Usage:
  python scripts/reproduce_paper.py --out exports/golden
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from app.config import settings  # noqa: E402
from app.report import reproduce_paper  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default=settings.export_dir, help="output directory")
    args = ap.parse_args()
    manifest = reproduce_paper(args.out)
    print(json.dumps(manifest, sort_keys=True, indent=2))
    print(f"Wrote {len(manifest) + 1} files to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
