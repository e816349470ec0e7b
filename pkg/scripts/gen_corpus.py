"""Regenerate the labeled corpus under corpus/ (every case is checked by the oracle)."""
import argparse
import sys
from pathlib import Path

from stagedscan.bench import CorpusError, generate_corpus

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "corpus"))
    ap.add_argument("--cwe", type=int, action="append", help="limit to one CWE (repeatable)")
    args = ap.parse_args(argv)
    try:
        dirs = generate_corpus(args.out, tuple(args.cwe) if args.cwe else (194, 195, 457, 843))
    except CorpusError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {len(dirs)} cases to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
