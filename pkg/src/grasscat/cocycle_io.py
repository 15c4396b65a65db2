"""JSON reading and writing of cocycles, validated against the bundled schema."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .cocycle_bundles import BaseComplex, CechCocycle, Overlap, Patch, Triple
from .errors import GrasscatError, SchemaError
from .grassmann import GrPoint

VERSION = 1


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("grasscat").joinpath("data/cocycle.schema.json").read_text())


def _matrix(rows, field: str) -> np.ndarray:
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise SchemaError("matrix rows must be non-empty and of equal length")
    has_pairs = any(isinstance(x, list) for r in rows for x in r)
    if has_pairs:
        if field != "complex":
            raise SchemaError("[re, im] entries are only allowed in complex cocycles")
        return np.array([[complex(*x) if isinstance(x, list) else complex(x) for x in r] for r in rows])
    return np.array(rows, dtype=complex if field == "complex" else float)


def _encode_matrix(a: np.ndarray, field: str) -> list:
    if field == "complex":
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return [[float(x) for x in row] for row in a]


def cocycle_from_dict(doc: dict) -> CechCocycle:
    """Validate ``doc`` against the schema and build the cocycle.

    Any structural problem, including inconsistent sample grids, is reported
    as :class:`SchemaError`.
    """
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None
    field = doc["field"]
    b = doc["base"]
    try:
        triples = None
        if "triples" in b:
            triples = [Triple(*t["patches"], np.array(t["params"])) for t in b["triples"]]
        base = BaseComplex(b["tag"], [Patch(p["name"], np.array(p["params"])) for p in b["patches"]],
                           [Overlap(o["src"], o["dst"], np.array(o["params"])) for o in b["overlaps"]],
                           triples)
        locs = {}
        for name, frames in doc["locals"].items():
            if name not in base.patch_names:
                raise SchemaError(f"locals given for unknown patch {name!r}")
            locs[name] = [GrPoint(_matrix(f, field)) for f in frames]
        by_pair = {}
        for t in doc["transitions"]:
            key = (t["src"], t["dst"])
            if key in by_pair:
                raise SchemaError(f"transitions for overlap {key} given twice")
            by_pair[key] = np.array([_matrix(m, field) for m in t["matrices"]])
        tables = []
        for ov in base.overlaps:
            if (ov.src, ov.dst) not in by_pair:
                raise SchemaError(f"no transitions for overlap ({ov.src}, {ov.dst})")
            tables.append(by_pair.pop((ov.src, ov.dst)))
        if by_pair:
            raise SchemaError(f"transitions for unknown overlaps {sorted(by_pair)}")
        return CechCocycle(base, doc["rank"], field, locs, tuple(tables))
    except SchemaError:
        raise
    except (GrasscatError, ValueError, TypeError) as exc:
        raise SchemaError(f"{type(exc).__name__}: {exc}") from None


def cocycle_to_dict(c: CechCocycle) -> dict:
    f = c.field
    base = {
        "tag": c.base.tag,
        "patches": [{"name": p.name, "params": p.params.tolist()} for p in c.base.patches],
        "overlaps": [{"src": o.src, "dst": o.dst, "params": o.params.tolist()} for o in c.base.overlaps],
    }
    if c.base.triples:
        base["triples"] = [{"patches": [t.a, t.b, t.c], "params": t.params.tolist()} for t in c.base.triples]
    return {
        "version": VERSION,
        "field": f,
        "rank": c.rank,
        "base": base,
        "locals": {name: [_encode_matrix(x.frame, f) for x in pts] for name, pts in c.locals.items()},
        "transitions": [{"src": o.src, "dst": o.dst, "matrices": [_encode_matrix(m, f) for m in tab]}
                        for o, tab in zip(c.base.overlaps, c.transitions)],
    }


def load_cocycle(path) -> CechCocycle:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return cocycle_from_dict(doc)


def dumps_cocycle(c: CechCocycle) -> str:
    return json.dumps(cocycle_to_dict(c), separators=(",", ":")) + "\n"


def save_cocycle(c: CechCocycle, path) -> None:
    Path(path).write_text(dumps_cocycle(c))


def shipped_path(name: str):
    """Path of a bundled example cocycle, e.g. ``moebius.json``."""
    return resources.files("grasscat").joinpath("data", name)
