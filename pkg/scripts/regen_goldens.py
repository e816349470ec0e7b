"""Rewrite tests/golden from the current analyzer (review the diff before committing)."""
import shutil
import sys
import tempfile
from pathlib import Path

from stagedscan.bench import run_corpus
from stagedscan.driver import load_manifest, run_all

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

# golden name -> (sample dir, resolve_ref_aliases)
SAMPLES = {
    "listing1": ("listing1", False),
    "listing1_init": ("listing1_init", False),
    "listing3": ("listing3", False),
    "listing3_aliases": ("listing3", True),
}


def sample_outputs(sample: str, aliases: bool, out: Path) -> Path:
    m = load_manifest(ROOT / "samples" / sample / "manifest.json")
    m.out = out
    m.wpa.resolve_ref_aliases = aliases
    run_all(m)
    return out


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        for name, (sample, aliases) in SAMPLES.items():
            out = sample_outputs(sample, aliases, Path(tmp) / name)
            dest = GOLDEN / name
            shutil.rmtree(dest, ignore_errors=True)
            dest.mkdir()
            for p in sorted((out / "reports").glob("report-*")) + sorted((out / "wp").glob("wp-report-*")):
                shutil.copy(p, dest / p.name)
            shutil.copy(out / "summary.json", dest / "summary.json")
        res = run_corpus(ROOT / "corpus", Path(tmp) / "bench", jobs=4)
        shutil.copy(Path(tmp) / "bench" / "bench-results.json", GOLDEN / "bench-results.json")
    print(f"goldens written to {GOLDEN} ({len(res.cases)} corpus cases)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
