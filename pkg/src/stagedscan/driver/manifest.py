"""Project manifests: the list of units to analyze plus analysis settings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from ..checkers import ALL_CHECKERS
from ..engine import EngineConfig


class ManifestError(Exception):
    pass


@dataclass
class WPAConfig:
    chain_cap: int = 16
    resolve_ref_aliases: bool = False


@dataclass
class Manifest:
    base_dir: Path
    units: list  # absolute Paths
    entries: list = field(default_factory=list)
    checkers: list = field(default_factory=lambda: list(ALL_CHECKERS))
    engine: EngineConfig = field(default_factory=EngineConfig)
    wpa: WPAConfig = field(default_factory=WPAConfig)
    out: Path = Path("out")

    @property
    def unit_names(self) -> list[str]:
        return [p.stem for p in self.units]


def load_schema(name: str) -> dict:
    """Bundled JSON schema (kept identical to the copy under docs/)."""
    return json.loads(resources.files("stagedscan.schemas").joinpath(name).read_text(encoding="utf-8"))


def parse_manifest(data: dict, base_dir) -> Manifest:
    base_dir = Path(base_dir).resolve()
    try:
        jsonschema.validate(data, load_schema("manifest-schema.json"))
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ManifestError(f"invalid manifest at {where}: {e.message}") from None
    units = [(base_dir / u).resolve() for u in data["units"]]
    seen: dict = {}
    for p in units:
        if not p.is_file():
            raise ManifestError(f"unit {p} does not exist")
        if p.stem in seen:
            raise ManifestError(f"units {seen[p.stem]} and {p} have the same unit name {p.stem}")
        seen[p.stem] = p
    eng = data.get("engine", {})
    wpa = data.get("wpa", {})
    return Manifest(
        base_dir=base_dir,
        units=units,
        entries=list(data.get("entries", [])),
        checkers=sorted(set(data.get("checkers", ALL_CHECKERS))),
        engine=EngineConfig(**{k: v for k, v in eng.items()}),
        wpa=WPAConfig(**wpa),
        out=(base_dir / data.get("out", "out")).resolve(),
    )


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ManifestError(f"cannot read manifest {path}: {e}") from None
    return parse_manifest(data, path.parent)
