"""Surface amplitudes of scattering diagrams over a chosen trivialisation.

A diagram keeps only what enters the amplitude once a trivialisation is
fixed: one complex area term (the integral of the curving 2-form) and, per
boundary component, either a closed-string value, a closed-brane holonomy,
or a cycle of faces carrying linear maps between corner spaces.

    A = exp(-area) * prod_c z_c

with ``z_c = z`` for a closed string, ``tr(holonomy)`` for a closed brane and
``tr(lambda_n ... lambda_1)`` around a face cycle.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace

import numpy as np

from . import tensor as tc
from .errors import InvalidParams, NonUnitTwist, NotAFaceCycle, OpenCycle, ShapeMismatch

INCOMING = "incoming"
OUTGOING = "outgoing"
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Corner:
    id: str
    dim: int
    metric: np.ndarray = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParams(f"corner {self.id!r} must have positive dimension")
        m = tc.identity(self.dim) if self.metric is None else tc.as_matrix(self.metric)
        object.__setattr__(self, "metric", m)


@dataclass(frozen=True)
class Face:
    """A brane face (``kind="brane"``, parallel transport) or a string face (a state)."""

    kind: str
    matrix: np.ndarray
    from_corner: str
    to_corner: str
    direction: str = None

    def __post_init__(self):
        if self.kind not in ("brane", "string"):
            raise InvalidParams(f"face kind must be 'brane' or 'string', got {self.kind!r}")
        if self.kind == "string" and self.direction not in (INCOMING, OUTGOING):
            raise InvalidParams("string faces need direction 'incoming' or 'outgoing'")
        object.__setattr__(self, "matrix", tc.as_matrix(self.matrix))


def brane_face(transport, from_corner, to_corner) -> Face:
    return Face("brane", transport, from_corner, to_corner)


def string_face(state, from_corner, to_corner, direction=INCOMING) -> Face:
    return Face("string", state, from_corner, to_corner, direction)


@dataclass(frozen=True)
class FaceCycle:
    id: str
    faces: tuple

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(self.faces))


@dataclass(frozen=True)
class ClosedString:
    id: str
    z: complex
    direction: str = INCOMING


@dataclass(frozen=True)
class ClosedBrane:
    id: str
    holonomy: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "holonomy", tc.as_matrix(self.holonomy))


@dataclass(frozen=True)
class ScatteringDiagram:
    corners: tuple = ()
    components: tuple = ()
    area: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "corners", tuple(self.corners))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "area", complex(self.area))

    def corner(self, cid) -> Corner:
        for c in self.corners:
            if c.id == cid:
                return c
        raise InvalidParams(f"unknown corner {cid!r}")

    def component(self, comp_id):
        for c in self.components:
            if c.id == comp_id:
                return c
        raise InvalidParams(f"unknown component {comp_id!r}")

    def with_component(self, comp) -> "ScatteringDiagram":
        comps = tuple(comp if c.id == comp.id else c for c in self.components)
        return replace(self, components=comps)


def check_diagram(d: ScatteringDiagram) -> None:
    """Raise unless shapes agree, cycles close and every corner sits on two faces."""
    ids = [c.id for c in d.corners]
    if len(set(ids)) != len(ids):
        raise InvalidParams("corner ids must be unique")
    comp_ids = [c.id for c in d.components]
    if len(set(comp_ids)) != len(comp_ids):
        raise InvalidParams("component ids must be unique")
    corners = {c.id: c for c in d.corners}
    for c in d.corners:
        if c.metric.shape != (c.dim, c.dim):
            raise ShapeMismatch(f"corner {c.id!r}: metric shape {c.metric.shape} for dim {c.dim}")
        tc.check_positive_definite(c.metric, f"metric of corner {c.id!r}")
    uses = {cid: 0 for cid in corners}
    for comp in d.components:
        if isinstance(comp, ClosedBrane):
            h = comp.holonomy
            if h.shape[0] != h.shape[1]:
                raise ShapeMismatch(f"component {comp.id!r}: holonomy must be square")
            continue
        if isinstance(comp, ClosedString):
            continue
        if not comp.faces:
            raise OpenCycle(f"component {comp.id!r} has no faces")
        for a, face in enumerate(comp.faces):
            for end in (face.from_corner, face.to_corner):
                if end not in corners:
                    raise InvalidParams(f"component {comp.id!r} face {a}: unknown corner {end!r}")
                uses[end] += 1
            shape = (corners[face.to_corner].dim, corners[face.from_corner].dim)
            if face.matrix.shape != shape:
                raise ShapeMismatch(
                    f"component {comp.id!r} face {a}: matrix {face.matrix.shape}, expected {shape}"
                )
            nxt = comp.faces[(a + 1) % len(comp.faces)]
            if face.to_corner != nxt.from_corner:
                raise OpenCycle(
                    f"component {comp.id!r}: face {a} ends at {face.to_corner!r} "
                    f"but the next face starts at {nxt.from_corner!r}"
                )
    for cid, n in uses.items():
        if n != 2:
            raise InvalidParams(f"corner {cid!r} lies on {n} faces, expected 2")


def cycle_operator(comp: FaceCycle) -> np.ndarray:
    """``lambda_n @ ... @ lambda_1``, multiplied left to right along the cycle."""
    m = comp.faces[0].matrix
    for face in comp.faces[1:]:
        m = face.matrix @ m
    return m


def component_value(comp) -> complex:
    if isinstance(comp, ClosedString):
        return complex(comp.z)
    if isinstance(comp, ClosedBrane):
        return tc.trace(comp.holonomy)
    return tc.trace(cycle_operator(comp))


def evaluate_amplitude(d: ScatteringDiagram) -> complex:
    check_diagram(d)
    value = cmath.exp(-d.area)
    for comp in d.components:
        value *= component_value(comp)
    return complex(value)


def principal_log(h: complex) -> complex:
    h = complex(h)
    if h.imag == 0.0:
        h = complex(h.real, 0.0)  # -1 must map to +i*pi, not -i*pi
    return cmath.log(h)


def gauge_transform(d: ScatteringDiagram, twists, area_shift=None) -> ScatteringDiagram:
    """Change of trivialisation by a line bundle with holonomies ``twists[c]``.

    Every component's decoration is divided by its twist (for a face cycle the
    first face absorbs it) and the area term moves by ``-sum(log h_c)``.  An
    explicit ``area_shift`` may pick another branch; it must agree modulo 2*pi*i.
    """
    twists = dict(twists)
    known = {c.id for c in d.components}
    for cid, h in twists.items():
        if cid not in known:
            raise InvalidParams(f"unknown component {cid!r}")
        if abs(abs(complex(h)) - 1.0) > UNIT_TOL:
            raise NonUnitTwist(f"twist for {cid!r} has modulus {abs(complex(h))}")
    shift = -sum((principal_log(h) for h in twists.values()), 0j)
    if area_shift is not None:
        k = (complex(area_shift) - shift) / (2j * cmath.pi)
        if abs(k - round(k.real)) > 1e-9:
            raise InvalidParams("area_shift is not a branch of -sum(log h)")
        shift = complex(area_shift)
    comps = []
    for comp in d.components:
        h = complex(twists.get(comp.id, 1.0))
        if h == 1.0:
            comps.append(comp)
        elif isinstance(comp, ClosedString):
            comps.append(replace(comp, z=complex(comp.z) / h))
        elif isinstance(comp, ClosedBrane):
            comps.append(replace(comp, holonomy=comp.holonomy / h))
        else:
            first = replace(comp.faces[0], matrix=comp.faces[0].matrix / h)
            comps.append(replace(comp, faces=(first,) + comp.faces[1:]))
    return replace(d, components=tuple(comps), area=d.area + shift)


def rotate_component(d: ScatteringDiagram, comp_id, k: int) -> ScatteringDiagram:
    comp = d.component(comp_id)
    if not isinstance(comp, FaceCycle):
        raise NotAFaceCycle(f"component {comp_id!r} is not a face cycle")
    n = len(comp.faces)
    k %= n
    return d.with_component(replace(comp, faces=comp.faces[k:] + comp.faces[:k]))


def _fresh(name, taken):
    out = name
    while out in taken:
        out += "'"
    return out


def disjoint_union(d1: ScatteringDiagram, d2: ScatteringDiagram) -> ScatteringDiagram:
    """Side-by-side diagram; clashing corner and component ids of ``d2`` get primes."""
    taken = {c.id for c in d1.corners}
    rename = {}
    for c in d2.corners:
        rename[c.id] = _fresh(c.id, taken)
        taken.add(rename[c.id])
    corners = d1.corners + tuple(replace(c, id=rename[c.id]) for c in d2.corners)
    comp_taken = {c.id for c in d1.components}
    comps = list(d1.components)
    for comp in d2.components:
        new_id = _fresh(comp.id, comp_taken)
        comp_taken.add(new_id)
        if isinstance(comp, FaceCycle):
            faces = tuple(
                replace(f, from_corner=rename[f.from_corner], to_corner=rename[f.to_corner])
                for f in comp.faces
            )
            comp = replace(comp, faces=faces)
        comps.append(replace(comp, id=new_id))
    return ScatteringDiagram(corners, tuple(comps), d1.area + d2.area)


def subdivide_face(d: ScatteringDiagram, comp_id, face_index: int, first, corner_id=None) -> ScatteringDiagram:
    """Split a brane face ``lambda`` into ``lambda'' . lambda'`` through a new corner.

    ``first`` is ``lambda'`` (square and invertible, mapping into a corner of
    the same dimension); ``lambda'' = lambda @ inv(lambda')``.
    """
    comp = d.component(comp_id)
    if not isinstance(comp, FaceCycle):
        raise NotAFaceCycle(f"component {comp_id!r} is not a face cycle")
    face = comp.faces[face_index]
    if face.kind != "brane":
        raise InvalidParams("only brane faces can be subdivided")
    first = tc.as_matrix(first)
    src_dim = d.corner(face.from_corner).dim
    if first.shape != (src_dim, src_dim):
        raise ShapeMismatch(f"first part must be {src_dim}x{src_dim}, got {first.shape}")
    cid = _fresh(corner_id or f"{face.from_corner}~{face.to_corner}", {c.id for c in d.corners})
    second = face.matrix @ np.linalg.inv(first)
    a = brane_face(first, face.from_corner, cid)
    b = brane_face(second, cid, face.to_corner)
    faces = comp.faces[:face_index] + (a, b) + comp.faces[face_index + 1:]
    corners = d.corners + (Corner(cid, src_dim),)
    return replace(d, corners=corners).with_component(replace(comp, faces=faces))


def thin_limit(d: ScatteringDiagram) -> ScatteringDiagram:
    """Zero the area term and make every brane transport and holonomy an identity."""
    comps = []
    for comp in d.components:
        if isinstance(comp, ClosedBrane):
            comp = replace(comp, holonomy=tc.identity(comp.holonomy.shape[0]))
        elif isinstance(comp, FaceCycle):
            faces = []
            for f in comp.faces:
                if f.kind == "brane":
                    if f.matrix.shape[0] != f.matrix.shape[1]:
                        raise ShapeMismatch("thin limit needs brane faces between equal-dimension corners")
                    f = replace(f, matrix=tc.identity(f.matrix.shape[0]))
                faces.append(f)
            comp = replace(comp, faces=tuple(faces))
        comps.append(comp)
    return replace(d, components=tuple(comps), area=0j)


def _random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_diagram(seed: int = 0, max_components: int = 4, max_faces: int = 4, max_dim: int = 3) -> ScatteringDiagram:
    """Seeded random diagram satisfying every invariant ``check_diagram`` enforces."""
    rng = np.random.default_rng(seed)
    corners, comps = [], []
    n_comp = int(rng.integers(1, max_components + 1))
    for c in range(n_comp):
        kind = rng.choice(["string", "brane", "cycle"], p=[0.2, 0.2, 0.6])
        cid = f"c{c}"
        if kind == "string":
            z = complex(*rng.normal(size=2))
            comps.append(ClosedString(cid, z, str(rng.choice([INCOMING, OUTGOING]))))
        elif kind == "brane":
            n = int(rng.integers(1, max_dim + 1))
            comps.append(ClosedBrane(cid, _random_complex(rng, (n, n))))
        else:
            n_faces = int(rng.integers(1, max_faces + 1))
            ids = [f"x{c}_{a}" for a in range(n_faces)]
            dims = [int(rng.integers(1, max_dim + 1)) for _ in ids]
            for x, n in zip(ids, dims):
                a = _random_complex(rng, (n, n))
                corners.append(Corner(x, n, a.conj().T @ a + n * tc.identity(n)))
            faces = []
            for a in range(n_faces):
                src, dst = a, (a + 1) % n_faces
                m = _random_complex(rng, (dims[dst], dims[src]))
                if a % 2 == 0:
                    faces.append(string_face(m, ids[src], ids[dst], str(rng.choice([INCOMING, OUTGOING]))))
                else:
                    faces.append(brane_face(m, ids[src], ids[dst]))
            comps.append(FaceCycle(cid, tuple(faces)))
    area = complex(rng.normal(scale=0.5), rng.normal(scale=2.0))
    return ScatteringDiagram(tuple(corners), tuple(comps), area)
