"""Bundled group configurations.

Each preset is a Coxeter matrix document with two extra keys: ``gamma``
(element strings generating a subgroup used for orbit partitions) and
``notes``.  User files follow the same schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from coxrep.coxeter import CoxeterGroup, Element
from coxrep.errors import CoxeterMatrixError, MalformedMatrixError
from coxrep.matrix import CoxeterMatrix, parse_coxeter_matrix

PRESET_NAMES = ("a1", "a2", "a3", "b2", "g2", "iinf", "ra3", "u3")


@dataclass(frozen=True)
class Preset:
    name: str
    matrix: CoxeterMatrix
    gamma_words: tuple[str, ...]
    notes: str = ""

    def group(self) -> CoxeterGroup:
        return _group(self.matrix)

    @property
    def gamma_generators(self) -> list[Element]:
        g = self.group()
        return [g.element(w) for w in self.gamma_words]


@lru_cache(maxsize=None)
def _group(matrix: CoxeterMatrix) -> CoxeterGroup:
    return CoxeterGroup(matrix)


def _from_doc(doc: dict, fallback_name: str) -> Preset:
    matrix = parse_coxeter_matrix(doc)
    gamma = doc.get("gamma", [])
    if not isinstance(gamma, list) or not all(isinstance(w, str) for w in gamma):
        raise MalformedMatrixError("'gamma' must be a list of element strings")
    preset = Preset(str(doc.get("name", fallback_name)), matrix, tuple(gamma), str(doc.get("notes", "")))
    grp = preset.group()
    for w in gamma:
        g = grp.element(w)
        if str(g) != w.strip():
            raise MalformedMatrixError(f"gamma generator {w!r} is not in normal form (reduces to {str(g)!r})")
    return preset


@lru_cache(maxsize=None)
def _aliases() -> dict[str, str]:
    out = {}
    for name in PRESET_NAMES:
        out[name] = name
        for a in _read_bundled(name).get("aliases", []):
            out[a.lower()] = name
    return out


def _read_bundled(name: str) -> dict:
    text = resources.files("coxrep").joinpath("presets", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def preset_names() -> list[str]:
    return list(PRESET_NAMES)


@lru_cache(maxsize=None)
def load_preset(name: str) -> Preset:
    """Bundled preset by name or alias (``i∞``, ``itilde1`` and ``iinf`` are the same)."""
    key = _aliases().get(name.strip().lower())
    if key is None:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    return _from_doc(_read_bundled(key), key)


def load_group_file(path: str | Path) -> Preset:
    """A preset from a JSON file; ``presets/<name>.json`` falls back to the bundled copy."""
    p = Path(path)
    if p.is_file():
        try:
            doc = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedMatrixError(f"{p}: not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise MalformedMatrixError(f"{p}: document must be a JSON object")
        try:
            return _from_doc(doc, p.stem)
        except CoxeterMatrixError as exc:
            raise type(exc)(f"{p}: {exc}") from exc
    if p.suffix == ".json" and p.stem.lower() in _aliases():
        return load_preset(p.stem)
    raise FileNotFoundError(f"group file {p} not found")


def resolve_group(spec: str) -> Preset:
    """Preset name, alias, or path to a JSON file."""
    try:
        return load_preset(spec)
    except KeyError:
        return load_group_file(spec)
