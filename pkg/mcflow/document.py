"""Network documents: the JSON file format read and written by the CLI.

Example::

    {
      "version": "mcflow/1",
      "k": 2,
      "nodes": ["s", "v", "t"],
      "source": "s",
      "sink": "t",
      "flags": {"reducible_declared": false},
      "arcs": [
        {"id": "a1", "tail": "s", "head": "v", "capacity": {"points": [[0, 0], [1, "1/2"]]}},
        {"id": "a2", "tail": "v", "head": "t", "capacity": {"polygons": [
          {"halfspaces": [[[1, 0], 2], [[-1, 0], 0], [[0, 1], 2, "<"], [[0, -1], 0]]},
          {"vertices": [[0, 0], [3, 0], [0, 1]]}
        ]}}
      ]
    }

Rationals are integers or "p/q" strings; floats are rejected. A halfspace
``[[a1, a2], b]`` means ``a1*x + a2*y <= b``; a third entry ``"<"`` makes it
strict.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .constants import DOCUMENT_VERSION
from .errors import DimensionError, DocumentError, McflowError
from .model import Arc, EnhancedNetwork, build_network
from .regions import ConvexPolygon, Halfspace, PointSet, Polygonal, Region
from .util import as_rational, format_rational

_FLAGS = {"reducible_declared": False}


def _num(value, where: str):
    try:
        return format_rational(as_rational(value))
    except (TypeError, ValueError) as e:
        raise DocumentError(f"{where}: {e}") from None


def _vector(value, k: int | None, where: str, arc: str | None = None) -> list:
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list of numbers", arc=arc)
    if k is not None and len(value) != k:
        raise DimensionError(f"{where}: expected {k} entries, got {len(value)}", arc=arc)
    return [_num(x, where) for x in value]


def _normalize_capacity(cap, k: int, arc: str) -> dict:
    where = f"arc {arc!r} capacity"
    if not isinstance(cap, dict) or len(cap) != 1 or not ({"points", "polygons"} & set(cap)):
        raise DocumentError(f"{where}: expected {{\"points\": ...}} or {{\"polygons\": ...}}", arc=arc)
    if "points" in cap:
        pts = cap["points"]
        if not isinstance(pts, list):
            raise DocumentError(f"{where}: points must be a list", arc=arc)
        return {"points": [_vector(p, k, where, arc) for p in pts]}
    if k != 2:
        raise DimensionError(f"{where}: polygonal capacities need k=2 (k={k})", arc=arc)
    pieces = []
    for piece in cap["polygons"]:
        if not isinstance(piece, dict) or len(piece) != 1:
            raise DocumentError(f"{where}: a polygon is {{\"halfspaces\": ...}} or {{\"vertices\": ...}}", arc=arc)
        if "vertices" in piece:
            if not piece["vertices"]:
                raise DocumentError(f"{where}: polygon without vertices", arc=arc)
            pieces.append({"vertices": [_vector(v, 2, where, arc) for v in piece["vertices"]]})
        elif "halfspaces" in piece:
            hs = []
            for h in piece["halfspaces"]:
                if not isinstance(h, list) or len(h) not in (2, 3):
                    raise DocumentError(f"{where}: halfspace is [[a1, a2], b] or [[a1, a2], b, \"<\"]", arc=arc)
                item = [_vector(h[0], 2, where, arc), _num(h[1], where)]
                if len(h) == 3:
                    if h[2] not in ("<", "<="):
                        raise DocumentError(f"{where}: unknown relation {h[2]!r}", arc=arc)
                    if h[2] == "<":
                        item.append("<")
                hs.append(item)
            pieces.append({"halfspaces": hs})
        else:
            raise DocumentError(f"{where}: unknown polygon form {sorted(piece)}", arc=arc)
    return {"polygons": pieces}


def _capacity_region(cap: dict, k: int, arc: str) -> Region:
    try:
        if "points" in cap:
            return PointSet.of(k, cap["points"])
        pieces = []
        for piece in cap["polygons"]:
            if "vertices" in piece:
                pieces.append(ConvexPolygon.from_vertices(piece["vertices"]))
            else:
                pieces.append(ConvexPolygon.from_halfspaces(
                    Halfspace.of(h[0], h[1], len(h) == 3) for h in piece["halfspaces"]))
        return Polygonal.of(pieces)
    except McflowError as e:
        e.details.setdefault("arc", arc)
        raise


@dataclass
class NetworkDocument:
    k: int
    nodes: list[str]
    arcs: list[dict]
    source: str
    sink: str
    flags: dict = field(default_factory=lambda: dict(_FLAGS))
    version: str = DOCUMENT_VERSION

    @classmethod
    def from_dict(cls, data) -> "NetworkDocument":
        if not isinstance(data, dict):
            raise DocumentError("document must be a JSON object")
        missing = [f for f in ("k", "nodes", "arcs", "source", "sink") if f not in data]
        if missing:
            raise DocumentError(f"document is missing fields: {', '.join(missing)}", fields=missing)
        version = data.get("version", DOCUMENT_VERSION)
        if version != DOCUMENT_VERSION:
            raise DocumentError(f"unsupported document version {version!r}", version=version)
        k = data["k"]
        if isinstance(k, bool) or not isinstance(k, int):
            raise DocumentError("k must be an integer")
        flags = dict(_FLAGS)
        for key, val in (data.get("flags") or {}).items():
            if key not in _FLAGS:
                raise DocumentError(f"unknown flag {key!r}", flag=key)
            flags[key] = bool(val)
        arcs = []
        for i, a in enumerate(data["arcs"]):
            if not isinstance(a, dict):
                raise DocumentError(f"arc #{i} must be an object")
            for f in ("id", "tail", "head", "capacity"):
                if f not in a:
                    raise DocumentError(f"arc #{i} is missing {f!r}", arc=a.get("id"))
            arc_id = str(a["id"])
            arcs.append({
                "id": arc_id,
                "tail": str(a["tail"]),
                "head": str(a["head"]),
                "capacity": _normalize_capacity(a["capacity"], k, arc_id),
            })
        return cls(k, [str(n) for n in data["nodes"]], arcs, str(data["source"]), str(data["sink"]), flags, version)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "k": self.k,
            "nodes": list(self.nodes),
            "source": self.source,
            "sink": self.sink,
            "flags": dict(self.flags),
            "arcs": [dict(a) for a in self.arcs],
        }

    @property
    def reducible_declared(self) -> bool:
        return bool(self.flags.get("reducible_declared"))

    def to_network(self) -> EnhancedNetwork:
        arcs = [Arc(a["id"], a["tail"], a["head"], _capacity_region(a["capacity"], self.k, a["id"]))
                for a in self.arcs]
        return build_network(self.k, self.nodes, arcs, self.source, self.sink)

    @classmethod
    def from_network(cls, net: EnhancedNetwork, flags: dict | None = None) -> "NetworkDocument":
        arcs = []
        for a in net.arcs:
            arcs.append({"id": a.id, "tail": a.tail, "head": a.head, "capacity": capacity_to_dict(a.capacity)})
        return cls(net.k, list(net.nodes), arcs, net.source, net.sink, {**_FLAGS, **(flags or {})})


def capacity_to_dict(cap: Region) -> dict:
    if isinstance(cap, PointSet):
        return {"points": [[format_rational(x) for x in p] for p in cap.sorted_points()]}
    if isinstance(cap, Polygonal):
        pieces = []
        for piece in cap.pieces:
            hs = []
            for h in piece.halfspaces:
                item = [[format_rational(x) for x in h.normal], format_rational(h.bound)]
                if h.strict:
                    item.append("<")
                hs.append(item)
            pieces.append({"halfspaces": hs})
        return {"polygons": pieces}
    raise DocumentError(f"cannot serialize a {cap.variant} capacity")


def parse_document(text: str) -> NetworkDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"syntax error: {e.msg}", line=e.lineno, column=e.colno) from None
    return NetworkDocument.from_dict(data)


def parse_network(text: str) -> EnhancedNetwork:
    return parse_document(text).to_network()


def serialize_document(doc: NetworkDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def load_document(path: str | Path) -> NetworkDocument:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {p}: {e.strerror}", path=str(p)) from None
    return parse_document(text)
