"""File formats: catalogs, character (scheme) files and reports.

Every number crosses the boundary as an exact rational string ("p/q").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from .characters import Character, InfinitesimalCharacter
from .errors import CoverageError, ParseError
from .graphs import DEFAULT_VERTEX_CAP, GraphCatalog
from .hopf import HopfAlgebra, HopfElement, TensorElement
from .series import DEFAULT_POLE_CAP, from_literal, to_literal

BUNDLED_CATALOGS = ("phi3_one_loop", "phi3_two_loop", "phi3_three_loop")
BUNDLED_SCHEMES = ("primitive_one_loop", "dimreg_toy", "dimreg_toy_twisted", "holomorphic", "nonlocal_counterexample")


def data_path(name: str) -> Path:
    """Path of a bundled data file (``name`` without the .json suffix)."""
    return Path(str(resources.files("hopfrenorm") / "data" / f"{name}.json"))


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_catalog(paths: Iterable[str | Path], vertex_cap: int = DEFAULT_VERTEX_CAP) -> GraphCatalog:
    catalog: GraphCatalog | None = None
    for p in paths:
        cat = GraphCatalog.from_document(_read_json(p), vertex_cap)
        catalog = cat if catalog is None else catalog.merged(cat)
    if catalog is None:
        raise ParseError("no catalog given")
    return catalog


# -- characters ---------------------------------------------------------------

@dataclass
class SchemeFile:
    scheme_name: str
    truncation_order: int
    character: Character


def character_document(chi: Character | InfinitesimalCharacter, scheme_name: str) -> dict:
    return {
        "scheme_name": scheme_name,
        "truncation_order": chi.order,
        "values": {n: to_literal(v) for n, v in chi.values.items()},
    }


def parse_character(
    document: Mapping | str,
    H: HopfAlgebra,
    truncation: int | None = None,
    pole_cap: int = DEFAULT_POLE_CAP,
) -> SchemeFile:
    """Read a character file; it must cover every catalog generator.

    ``truncation`` lowers the working order below the file's own order.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"character file is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ParseError("character file must be a JSON object")
    for key in ("scheme_name", "truncation_order", "values"):
        if key not in document:
            raise ParseError(f"character file missing {key!r}")
    name = document["scheme_name"]
    order = document["truncation_order"]
    values = document["values"]
    if not isinstance(name, str):
        raise ParseError("'scheme_name' must be a string")
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise ParseError("'truncation_order' must be a non-negative integer")
    if not isinstance(values, Mapping):
        raise ParseError("'values' must map graph names to series literals")
    if truncation is not None:
        order = min(order, truncation)
    unknown = sorted(set(values) - set(H.catalog.names()))
    if unknown:
        raise CoverageError(f"scheme {name!r} names graphs not in the catalog: {unknown}")
    missing = [n for n in H.generators() if n not in values]
    if missing:
        raise CoverageError(f"scheme {name!r} has no value for generator(s) {missing}")
    series = {n: from_literal(values[n], order, pole_cap) for n in H.generators()}
    return SchemeFile(name, order, Character(H, series, order, pole_cap))


def load_character(path: str | Path, H: HopfAlgebra, truncation: int | None = None,
                   pole_cap: int = DEFAULT_POLE_CAP) -> SchemeFile:
    return parse_character(_read_json(path), H, truncation, pole_cap)


# -- Hopf elements ----------------------------------------------------------------

def hopf_element_document(x: HopfElement) -> list:
    return [{"monomial": list(m), "coefficient": str(c)} for m, c in x]


def tensor_document(t: TensorElement) -> list:
    return [{"left": list(k[0]), "right": list(k[1]), "coefficient": str(c)} for k, c in t]


# -- reports ------------------------------------------------------------------------

def rational(x: Fraction | int | None) -> str | None:
    return None if x is None else str(Fraction(x))


@dataclass
class Report:
    """Result of one CLI command.  ``timing`` is shown to humans only; the
    structured form is byte-deterministic."""

    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    timing: float | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "results": self.results, "verdicts": self.verdicts}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"report is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "command" not in doc:
            raise ParseError("report needs a 'command' field")
        return cls(doc["command"], doc.get("inputs", {}), doc.get("results", {}), doc.get("verdicts", {}))
