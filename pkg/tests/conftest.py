import shutil
from pathlib import Path

import pytest

from stagedscan.driver import load_manifest, run_all
from stagedscan.frontend import load_sources
from stagedscan.ir import link, lower_unit

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
GOLDEN = Path(__file__).resolve().parent / "golden"
CORPUS = ROOT / "corpus"


def program_of(files: dict):
    """Checked program for {file name: text}."""
    return load_sources({Path(f).stem: (f, t) for f, t in files.items()})


def ir_of(files: dict, entries=("main",)):
    prog = program_of(files)
    return link([lower_unit(u) for u in prog.units.values()], list(entries) if entries is not None else None)


def run_sample(name: str, out: Path, aliases: bool = False, jobs: int = 1):
    m = load_manifest(SAMPLES / name / "manifest.json")
    m.out = out
    m.wpa.resolve_ref_aliases = aliases
    return run_all(m, jobs)


def copy_project(src: Path, dest: Path) -> Path:
    shutil.copytree(src, dest, ignore=shutil.ignore_patterns("out"))
    return dest


@pytest.fixture
def listing1_files():
    d = SAMPLES / "listing1"
    return {p.name: p.read_text() for p in sorted(d.glob("*.mo"))}
