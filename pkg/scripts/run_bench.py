"""Run the analyzer over the corpus and print TP/FN/FP/TN and rates per CWE."""
import argparse
import os
import sys
from pathlib import Path

from stagedscan.bench import run_corpus

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default=str(ROOT / "corpus"))
    ap.add_argument("--out", default=str(ROOT / "bench-out"))
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--cwe", type=int, action="append")
    args = ap.parse_args(argv)
    res = run_corpus(args.corpus, args.out, jobs=args.jobs, cwes=args.cwe)
    print(res.render_text(), end="")
    print(f"\n{len(res.cases)} cases in {res.wall:.2f}s; results in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
