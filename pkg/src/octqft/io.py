"""JSON (de)serialisation for matrices, algebras, words, reflections and diagrams.

Complex numbers are ``[re, im]`` pairs.  Matrices are
``{"rows": r, "cols": c, "entries": [[re, im], ...]}`` in row-major order.
Map keys built from brane labels are comma-joined (``"i,j"``), so labels may
not contain commas.  Every document carries a ``"schema"`` tag.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .amplitude import ClosedBrane, ClosedString, Corner, Face, FaceCycle, ScatteringDiagram
from .bordism import CIRCLE, KINDS, Generator, Interval, Word
from .errors import OCTQFTError, SchemaError
from .kfrob import ClosedAlgebra, KFrob, OpenSector, ZipData
from .reflection import ReflectionStructure

KFROB_SCHEMA = "kfrob-v1"
WORD_SCHEMA = "word-v1"
REFLECTION_SCHEMA = "reflection-v1"
DIAGRAM_SCHEMA = "diagram-v1"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def save(doc, path) -> None:
    Path(path).write_text(dumps(doc))


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file: {exc.strerror}") from None


# -- scalars and matrices ---------------------------------------------------


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v, path="$") -> complex:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise SchemaError(path, "expected a [re, im] pair of numbers")
    if not all(math.isfinite(x) for x in v):
        raise SchemaError(path, "complex components must be finite")
    return complex(float(v[0]), float(v[1]))


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return v


def matrix_from_json(doc, path="$") -> np.ndarray:
    rows = _field(doc, "rows", path, int)
    cols = _field(doc, "cols", path, int)
    entries = _field(doc, "entries", path, list)
    if rows < 0 or cols < 0:
        raise SchemaError(path, "rows and cols must be non-negative")
    if len(entries) != rows * cols:
        raise SchemaError(f"{path}.entries", f"expected {rows * cols} entries, got {len(entries)}")
    vals = [complex_from_json(e, f"{path}.entries[{n}]") for n, e in enumerate(entries)]
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def _check_schema(doc, expected, path="$"):
    got = _field(doc, "schema", path, str)
    if got != expected:
        raise SchemaError(f"{path}.schema", f"expected {expected!r}, got {got!r}")


def _key(*labels) -> str:
    return ",".join(labels)


def _split_key(key, n, path):
    parts = key.split(",")
    if len(parts) != n:
        raise SchemaError(path, f"key {key!r} must join {n} labels with commas")
    return tuple(parts)


# -- KFrob ------------------------------------------------------------------


def kfrob_to_json(kf: KFrob) -> dict:
    o, z = kf.open, kf.zip
    return {
        "schema": KFROB_SCHEMA,
        "branes": list(kf.branes),
        "closed": {
            "dim": kf.closed.dim,
            "mult": matrix_to_json(kf.closed.mult),
            "unit": matrix_to_json(kf.closed.unit),
            "trace": matrix_to_json(kf.closed.trace),
        },
        "open": {
            "dims": {_key(*k): int(v) for k, v in o.dims.items()},
            "chi": {_key(*k): matrix_to_json(v) for k, v in o.chi.items()},
            "eps": {k: matrix_to_json(v) for k, v in o.eps.items()},
            "theta": {k: matrix_to_json(v) for k, v in o.theta.items()},
        },
        "zip": {
            "iota": {k: matrix_to_json(v) for k, v in z.iota.items()},
            "iota_star": {k: matrix_to_json(v) for k, v in z.iota_star.items()},
        },
    }


def _matrix_map(doc, path, n_labels):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    out = {}
    for key, m in doc.items():
        k = _split_key(key, n_labels, f"{path}.{key}")
        out[k if n_labels > 1 else k[0]] = matrix_from_json(m, f"{path}.{key}")
    return out


def kfrob_from_json(doc) -> KFrob:
    _check_schema(doc, KFROB_SCHEMA)
    branes = _field(doc, "branes", "$", list)
    for n, b in enumerate(branes):
        if not isinstance(b, str) or not b or "," in b:
            raise SchemaError(f"$.branes[{n}]", "labels must be non-empty strings without commas")
    closed = _field(doc, "closed", "$", dict)
    opened = _field(doc, "open", "$", dict)
    zipped = _field(doc, "zip", "$", dict)
    dims_doc = _field(opened, "dims", "$.open", dict)
    dims = {}
    for key, v in dims_doc.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise SchemaError(f"$.open.dims.{key}", "expected an integer")
        dims[_split_key(key, 2, f"$.open.dims.{key}")] = v
    try:
        return KFrob(
            branes=tuple(branes),
            closed=ClosedAlgebra(
                mult=matrix_from_json(_field(closed, "mult", "$.closed"), "$.closed.mult"),
                unit=matrix_from_json(_field(closed, "unit", "$.closed"), "$.closed.unit"),
                trace=matrix_from_json(_field(closed, "trace", "$.closed"), "$.closed.trace"),
            ),
            open=OpenSector(
                dims=dims,
                chi=_matrix_map(_field(opened, "chi", "$.open"), "$.open.chi", 3),
                eps=_matrix_map(_field(opened, "eps", "$.open"), "$.open.eps", 1),
                theta=_matrix_map(_field(opened, "theta", "$.open"), "$.open.theta", 1),
            ),
            zip=ZipData(
                iota=_matrix_map(_field(zipped, "iota", "$.zip"), "$.zip.iota", 1),
                iota_star=_matrix_map(_field(zipped, "iota_star", "$.zip"), "$.zip.iota_star", 1),
            ),
        )
    except SchemaError:
        raise
    except OCTQFTError as exc:
        raise SchemaError("$", str(exc)) from None


# -- words ------------------------------------------------------------------


def factor_to_json(f):
    return "circle" if f == CIRCLE else {"interval": [f.start, f.end]}


def factor_from_json(v, path):
    if v == "circle":
        return CIRCLE
    if isinstance(v, dict) and set(v) == {"interval"}:
        pair = v["interval"]
        if isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair):
            return Interval(pair[0], pair[1])
    raise SchemaError(path, 'expected "circle" or {"interval": [start, end]}')


def object_from_json(v, path):
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list of factors")
    return tuple(factor_from_json(f, f"{path}[{n}]") for n, f in enumerate(v))


def generator_to_json(g: Generator) -> dict:
    out = {"kind": g.kind}
    if g.labels:
        out["labels"] = list(g.labels)
    if g.factors:
        out["factors"] = [factor_to_json(f) for f in g.factors]
    return out


def generator_from_json(v, path) -> Generator:
    kind = _field(v, "kind", path, str)
    if kind not in KINDS:
        raise SchemaError(f"{path}.kind", f"unknown generator kind {kind!r}")
    labels = v.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError(f"{path}.labels", "expected a list of label strings")
    factors = v.get("factors", [])
    if not isinstance(factors, list):
        raise SchemaError(f"{path}.factors", "expected a list of factors")
    try:
        return Generator(
            kind,
            tuple(labels),
            tuple(factor_from_json(f, f"{path}.factors[{n}]") for n, f in enumerate(factors)),
        )
    except SchemaError:
        raise
    except OCTQFTError as exc:
        raise SchemaError(path, str(exc)) from None


def word_to_json(w: Word) -> dict:
    return {
        "schema": WORD_SCHEMA,
        "source": [factor_to_json(f) for f in w.source],
        "target": [factor_to_json(f) for f in w.target],
        "layers": [[generator_to_json(g) for g in layer] for layer in w.layers],
    }


def word_from_json(doc) -> Word:
    _check_schema(doc, WORD_SCHEMA)
    layers = _field(doc, "layers", "$", list)
    parsed = []
    for li, layer in enumerate(layers):
        if not isinstance(layer, list):
            raise SchemaError(f"$.layers[{li}]", "expected a list of generators")
        parsed.append(tuple(generator_from_json(g, f"$.layers[{li}][{si}]") for si, g in enumerate(layer)))
    return Word(
        object_from_json(_field(doc, "source", "$"), "$.source"),
        object_from_json(_field(doc, "target", "$"), "$.target"),
        tuple(parsed),
    )


# -- reflection structures ---------------------------------------------------


def reflection_to_json(rs: ReflectionStructure) -> dict:
    return {
        "schema": REFLECTION_SCHEMA,
        "lambda": matrix_to_json(rs.lambda_tilde),
        "alpha": {_key(*k): matrix_to_json(v) for k, v in rs.alpha_tilde.items()},
    }


def reflection_from_json(doc) -> ReflectionStructure:
    _check_schema(doc, REFLECTION_SCHEMA)
    return ReflectionStructure(
        lambda_tilde=matrix_from_json(_field(doc, "lambda", "$"), "$.lambda"),
        alpha_tilde=_matrix_map(_field(doc, "alpha", "$"), "$.alpha", 2),
    )


# -- diagrams ------------------------------------------------------------------


def diagram_to_json(d: ScatteringDiagram) -> dict:
    comps = []
    for c in d.components:
        if isinstance(c, ClosedString):
            comps.append({"id": c.id, "kind": "ClosedString", "z": complex_to_json(c.z), "direction": c.direction})
        elif isinstance(c, ClosedBrane):
            comps.append({"id": c.id, "kind": "ClosedBrane", "holonomy": matrix_to_json(c.holonomy)})
        else:
            faces = []
            for f in c.faces:
                face = {"kind": f.kind, "matrix": matrix_to_json(f.matrix), "from": f.from_corner, "to": f.to_corner}
                if f.kind == "string":
                    face["direction"] = f.direction
                faces.append(face)
            comps.append({"id": c.id, "kind": "FaceCycle", "faces": faces})
    return {
        "schema": DIAGRAM_SCHEMA,
        "corners": [{"id": c.id, "dim": c.dim, "metric": matrix_to_json(c.metric)} for c in d.corners],
        "components": comps,
        "area": complex_to_json(d.area),
    }


def diagram_from_json(doc) -> ScatteringDiagram:
    _check_schema(doc, DIAGRAM_SCHEMA)
    try:
        corners = []
        for n, c in enumerate(_field(doc, "corners", "$", list)):
            p = f"$.corners[{n}]"
            metric = c.get("metric") if isinstance(c, dict) else None
            corners.append(Corner(
                _field(c, "id", p, str),
                _field(c, "dim", p, int),
                None if metric is None else matrix_from_json(metric, f"{p}.metric"),
            ))
        comps = []
        for n, c in enumerate(_field(doc, "components", "$", list)):
            p = f"$.components[{n}]"
            kind = _field(c, "kind", p, str)
            cid = c.get("id", str(n))
            if kind == "ClosedString":
                comps.append(ClosedString(cid, complex_from_json(_field(c, "z", p), f"{p}.z"), c.get("direction", "incoming")))
            elif kind == "ClosedBrane":
                comps.append(ClosedBrane(cid, matrix_from_json(_field(c, "holonomy", p), f"{p}.holonomy")))
            elif kind == "FaceCycle":
                faces = []
                for a, f in enumerate(_field(c, "faces", p, list)):
                    q = f"{p}.faces[{a}]"
                    faces.append(Face(
                        _field(f, "kind", q, str),
                        matrix_from_json(_field(f, "matrix", q), f"{q}.matrix"),
                        _field(f, "from", q, str),
                        _field(f, "to", q, str),
                        f.get("direction"),
                    ))
                comps.append(FaceCycle(cid, tuple(faces)))
            else:
                raise SchemaError(f"{p}.kind", f"unknown component kind {kind!r}")
        area = complex_from_json(_field(doc, "area", "$"), "$.area")
    except SchemaError:
        raise
    except OCTQFTError as exc:
        raise SchemaError("$", str(exc)) from None
    return ScatteringDiagram(tuple(corners), tuple(comps), area)
