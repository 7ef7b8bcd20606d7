"""Reading and writing input documents (UTF-8 JSON)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .errors import ParseError
from .foamkit import Expansion, GeneralizedGraph
from .permcore import Permutation
from .realcover import ComponentCover, RealBase

FORMAT = "foamlab-input/1"
CONVENTION = "left-to-right"
AUTO = "auto"


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    degree: int
    monodromy: tuple[Permutation, ...]
    lift: Permutation | str = AUTO

    def cover(self, lift: Permutation | None = None) -> ComponentCover:
        t = lift if lift is not None else (None if self.lift == AUTO else self.lift)
        return ComponentCover(self.degree, self.monodromy, t, self.name)


@dataclass(frozen=True)
class InputDocument:
    n: int
    components: tuple[ComponentSpec, ...]
    expansion: dict | None = None
    limits: dict = field(default_factory=dict)

    @property
    def base(self) -> RealBase:
        return RealBase(self.n)


def _schema() -> dict:
    text = resources.files("foamlab").joinpath("data/input.schema.json").read_text("utf-8")
    return json.loads(text)


def _perm(value: Any, degree: int, where: str) -> Permutation:
    if isinstance(value, str):
        try:
            return Permutation.parse(value, degree)
        except ParseError as exc:
            raise ParseError(f"{where}: {exc}") from None
    if len(value) != degree:
        raise ParseError(f"{where}: image array has length {len(value)}, expected {degree}")
    try:
        return Permutation(value)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_document(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise ParseError(f"schema violation at {loc}: {exc.message}") from None
    n = raw["base"]["n"]
    comps = []
    for k, entry in enumerate(raw["components"]):
        name = entry.get("name", f"C{k + 1}")
        d = entry["degree"]
        if len(entry["monodromy"]) != n:
            raise ParseError(f"{name}: {len(entry['monodromy'])} monodromy entries for n = {n}")
        mono = tuple(_perm(v, d, f"{name} monodromy {j + 1}") for j, v in enumerate(entry["monodromy"]))
        lift = entry.get("lift", AUTO)
        if lift != AUTO:
            lift = _perm(lift, d, f"{name} lift")
        comps.append(ComponentSpec(name, d, mono, lift))
    expansion = raw.get("foam", {}).get("expansion")
    return InputDocument(n, tuple(comps), expansion, dict(raw.get("limits", {})))


def load_document(path: str | Path) -> InputDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_document(text)


def document_to_dict(doc: InputDocument) -> dict:
    comps = []
    for c in doc.components:
        comps.append({
            "name": c.name,
            "degree": c.degree,
            "monodromy": [list(p.images) for p in c.monodromy],
            "lift": AUTO if c.lift == AUTO else list(c.lift.images),
        })
    out: dict = {"format": FORMAT, "convention": CONVENTION, "base": {"n": doc.n}, "components": comps}
    if doc.expansion is not None:
        out["foam"] = {"expansion": doc.expansion}
    if doc.limits:
        out["limits"] = dict(doc.limits)
    return out


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_document(doc: InputDocument) -> str:
    return dumps(document_to_dict(doc))


def expansion_from_dict(data: dict) -> Expansion:
    g = data["graph"]
    graph = GeneralizedGraph(tuple(g["vertices"]), tuple(tuple(e) for e in g["edges"]),
                             tuple(g.get("circles", ())))
    walks = tuple(tuple(tuple(w) for w in comp) for comp in data["walks"])
    return Expansion(graph, dict(data["vertex_map"]), dict(data["edge_map"]), walks)


def shipped_example(name: str) -> Path:
    """Path of a bundled example document such as ``"e9.json"``."""
    return Path(str(resources.files("foamlab").joinpath("data", name)))
