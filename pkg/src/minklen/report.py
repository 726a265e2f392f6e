"""Report objects and the JSON wire formats.

Every rational-valued field is serialized as a 'p/q' (or plain integer)
string; floats never appear in reports. Polytopes travel as
{"vertices": [[int, ..], ..]} with duplicates and interior points tolerated.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

from .polytope import LatticePolytope, Zonotope, zonotope
from .vectors import format_fraction, parse_fraction

SCHEMA_VERSION = 1


class MalformedInput(ValueError):
    """Input file or stream does not parse as a polytope document."""


def polytope_to_json(P: LatticePolytope) -> dict:
    return {"vertices": [list(v) for v in P.vertices]}


def polytope_from_json(doc) -> LatticePolytope:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise MalformedInput(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise MalformedInput('expected an object with a "vertices" array')
    verts = doc["vertices"]
    if (not isinstance(verts, list) or not verts
            or not all(isinstance(v, list) and v for v in verts)):
        raise MalformedInput('"vertices" must be a nonempty array of arrays')
    for v in verts:
        if not all(isinstance(x, int) for x in v):
            raise MalformedInput(f"non-integer vertex {v}")
    try:
        return LatticePolytope([tuple(v) for v in verts])
    except ValueError as e:
        raise MalformedInput(str(e)) from e


def polytope_digest(P: LatticePolytope) -> str:
    blob = json.dumps(polytope_to_json(P), sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def zonotope_to_json(Z: Zonotope) -> dict:
    return {
        "anchor": [format_fraction(x) for x in Z.anchor],
        "terms": [{"dir": list(v), "weight": format_fraction(w)}
                  for v, w in Z.terms],
    }


def zonotope_from_json(doc) -> Zonotope:
    anchor = tuple(parse_fraction(x) for x in doc["anchor"])
    terms = [(tuple(t["dir"]), parse_fraction(t["weight"]))
             for t in doc["terms"]]
    return zonotope(anchor, terms)


@dataclass
class Report:
    """One command's result: exact values, witnesses, certification flags."""
    input_digest: str
    requested: tuple
    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    certified: dict = field(default_factory=dict)
    timing_ms: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "input_digest": self.input_digest,
            "requested": list(self.requested),
            "values": self.values,
            "witnesses": self.witnesses,
            "certified": self.certified,
        }
        if self.timing_ms is not None:
            out["timing_ms"] = int(self.timing_ms)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
