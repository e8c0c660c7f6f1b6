"""Open-closed bordisms over a point as typed words of generator layers.

A boundary object is a tuple of factors, each ``CIRCLE`` or ``Interval(i, j)``.
A layer is a tuple of generators placed side by side; their domains,
concatenated, must equal the current object.  An empty layer stands for the
identity on whatever object it meets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundaryMismatch, InvalidParams, WordTypeError


@dataclass(frozen=True)
class Circle:
    def dual(self):
        return self

    def __repr__(self):
        return "Circle"


@dataclass(frozen=True)
class Interval:
    start: str
    end: str

    def dual(self):
        return Interval(self.end, self.start)

    def __repr__(self):
        return f"Interval({self.start},{self.end})"


CIRCLE = Circle()


def strip_value(f) -> int:
    """Euler characteristic of the identity bordism on a single factor."""
    return 0 if isinstance(f, Circle) else 1


def dual_object(obj) -> tuple:
    return tuple(f.dual() for f in reversed(obj))


def labels_of(obj) -> set:
    out = set()
    for f in obj:
        if isinstance(f, Interval):
            out.update((f.start, f.end))
    return out


KINDS = (
    "ClosedUnit",
    "ClosedCounit",
    "ClosedMult",
    "ClosedComult",
    "OpenUnit",
    "OpenCounit",
    "OpenMult",
    "OpenComult",
    "Zip",
    "Unzip",
    "Swap",
    "Identity",
)

_N_LABELS = {
    "ClosedUnit": 0, "ClosedCounit": 0, "ClosedMult": 0, "ClosedComult": 0,
    "OpenUnit": 1, "OpenCounit": 1, "OpenMult": 3, "OpenComult": 3,
    "Zip": 1, "Unzip": 1, "Swap": 0, "Identity": 0,
}
_N_FACTORS = {"Swap": 2, "Identity": 1}

_EULER = {
    "ClosedUnit": 1, "ClosedCounit": 1, "ClosedMult": -1, "ClosedComult": -1,
    "OpenUnit": 1, "OpenCounit": 1, "OpenMult": 1, "OpenComult": 1,
    "Zip": 0, "Unzip": 0,
}

_ADJOINT_KIND = {
    "ClosedUnit": "ClosedCounit", "ClosedCounit": "ClosedUnit",
    "ClosedMult": "ClosedComult", "ClosedComult": "ClosedMult",
    "OpenUnit": "OpenCounit", "OpenCounit": "OpenUnit",
    "OpenMult": "OpenComult", "OpenComult": "OpenMult",
    "Zip": "Unzip", "Unzip": "Zip",
}


@dataclass(frozen=True)
class Generator:
    kind: str
    labels: tuple = ()
    factors: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.labels) != _N_LABELS[self.kind]:
            raise InvalidParams(f"{self.kind} takes {_N_LABELS[self.kind]} labels, got {len(self.labels)}")
        if len(self.factors) != _N_FACTORS.get(self.kind, 0):
            raise InvalidParams(f"{self.kind} takes {_N_FACTORS.get(self.kind, 0)} factors")

    # constructors -------------------------------------------------------
    @classmethod
    def closed_unit(cls):
        return cls("ClosedUnit")

    @classmethod
    def closed_counit(cls):
        return cls("ClosedCounit")

    @classmethod
    def closed_mult(cls):
        return cls("ClosedMult")

    @classmethod
    def closed_comult(cls):
        return cls("ClosedComult")

    @classmethod
    def open_unit(cls, i):
        return cls("OpenUnit", (i,))

    @classmethod
    def open_counit(cls, i):
        return cls("OpenCounit", (i,))

    @classmethod
    def open_mult(cls, i, j, k):
        return cls("OpenMult", (i, j, k))

    @classmethod
    def open_comult(cls, i, j, k):
        return cls("OpenComult", (i, j, k))

    @classmethod
    def zip(cls, i):
        return cls("Zip", (i,))

    @classmethod
    def unzip(cls, i):
        return cls("Unzip", (i,))

    @classmethod
    def swap(cls, left, right):
        return cls("Swap", factors=(left, right))

    @classmethod
    def identity(cls, factor):
        return cls("Identity", factors=(factor,))

    # typing -------------------------------------------------------------
    @property
    def domain(self) -> tuple:
        k, lb = self.kind, self.labels
        if k in ("ClosedUnit", "OpenUnit"):
            return ()
        if k in ("ClosedCounit", "ClosedComult", "Unzip"):
            return (CIRCLE,)
        if k == "ClosedMult":
            return (CIRCLE, CIRCLE)
        if k in ("OpenCounit", "Zip"):
            return (Interval(lb[0], lb[0]),)
        if k == "OpenMult":
            i, j, kk = lb
            return (Interval(j, kk), Interval(i, j))
        if k == "OpenComult":
            i, _, kk = lb
            return (Interval(i, kk),)
        if k == "Swap":
            return self.factors
        return self.factors  # Identity

    @property
    def codomain(self) -> tuple:
        k, lb = self.kind, self.labels
        if k in ("ClosedCounit", "OpenCounit"):
            return ()
        if k in ("ClosedUnit", "ClosedMult", "Zip"):
            return (CIRCLE,)
        if k == "ClosedComult":
            return (CIRCLE, CIRCLE)
        if k in ("OpenUnit", "Unzip"):
            return (Interval(lb[0], lb[0]),)
        if k == "OpenMult":
            i, _, kk = lb
            return (Interval(i, kk),)
        if k == "OpenComult":
            i, j, kk = lb
            return (Interval(j, kk), Interval(i, j))
        if k == "Swap":
            return (self.factors[1], self.factors[0])
        return self.factors

    @property
    def euler(self) -> int:
        if self.kind in ("Swap", "Identity"):
            return sum(strip_value(f) for f in self.factors)
        return _EULER[self.kind]

    def adjoint(self) -> "Generator":
        if self.kind == "Swap":
            return Generator.swap(self.factors[1], self.factors[0])
        if self.kind == "Identity":
            return self
        return Generator(_ADJOINT_KIND[self.kind], self.labels)

    def dual(self) -> "Generator":
        """Generator whose type is the dual of this one's, reversed."""
        k, lb = self.kind, self.labels
        if k == "Swap":
            a, b = self.factors
            return Generator.swap(a.dual(), b.dual())
        if k == "Identity":
            return Generator.identity(self.factors[0].dual())
        if k in ("OpenMult", "OpenComult"):
            return Generator(_ADJOINT_KIND[k], tuple(reversed(lb)))
        return Generator(_ADJOINT_KIND[k], lb)

    def __repr__(self):
        args = [repr(x) for x in self.labels + self.factors]
        return f"{self.kind}({', '.join(args)})"


def identity_layer(obj) -> tuple:
    return tuple(Generator.identity(f) for f in obj)


def layer_domain(layer) -> tuple:
    return tuple(f for g in layer for f in g.domain)


def layer_codomain(layer) -> tuple:
    return tuple(f for g in layer for f in g.codomain)


@dataclass(frozen=True)
class Word:
    source: tuple
    target: tuple
    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))

    @classmethod
    def identity(cls, obj) -> "Word":
        return cls(obj, obj, ())

    @classmethod
    def build(cls, source, layers) -> "Word":
        """Word whose target is inferred by typechecking ``layers`` from ``source``."""
        w = cls(source, (), layers)
        target = _run_layers(w)
        return cls(source, target, layers)

    @classmethod
    def of(cls, *gens) -> "Word":
        """Single-layer word ``g_1 (x) ... (x) g_n``."""
        layer = tuple(gens)
        return cls(layer_domain(layer), layer_codomain(layer), (layer,))

    def then(self, other: "Word") -> "Word":
        return compose(self, other)

    def canonical(self) -> "Word":
        """Same word with every elided identity layer written out."""
        obj = self.source
        layers = []
        for layer in self.layers:
            layer = layer if layer or not obj else identity_layer(obj)
            layers.append(layer)
            obj = layer_codomain(layer)
        return Word(self.source, self.target, tuple(layers))

    def generators(self):
        for layer in self.layers:
            yield from layer

    def intermediate_objects(self) -> list:
        """Objects between consecutive layers (``len(layers) - 1`` of them)."""
        objs = []
        obj = self.source
        for layer in self.layers[:-1]:
            if layer:
                obj = layer_codomain(layer)
            objs.append(obj)
        return objs


def _run_layers(w: Word) -> tuple:
    obj = w.source
    for li, layer in enumerate(w.layers):
        if not layer:
            continue
        pos = 0
        for si, g in enumerate(layer):
            dom = g.domain
            found = obj[pos:pos + len(dom)]
            if found != dom:
                raise WordTypeError(li, si, list(dom), list(found))
            pos += len(dom)
        if pos != len(obj):
            raise WordTypeError(li, len(layer), "end of object", list(obj[pos:]))
        obj = layer_codomain(layer)
    return obj


def typecheck(w: Word) -> tuple:
    """Return ``(source, target)`` or raise ``WordTypeError``."""
    obj = _run_layers(w)
    if obj != w.target:
        raise WordTypeError(len(w.layers), -1, list(w.target), list(obj))
    return w.source, w.target


def compose(w1: Word, w2: Word) -> Word:
    """``w1`` followed by ``w2`` (gluing along ``w1.target``)."""
    if w1.target != w2.source:
        raise BoundaryMismatch(f"cannot glue {list(w1.target)} to {list(w2.source)}")
    return Word(w1.source, w2.target, w1.layers + w2.layers)


def compose_all(*words: Word) -> Word:
    out = words[0]
    for w in words[1:]:
        out = compose(out, w)
    return out


def tensor(w1: Word, w2: Word) -> Word:
    """Disjoint union; the shorter word is padded with identity layers."""
    a, b = w1.canonical(), w2.canonical()
    n = max(len(a.layers), len(b.layers))
    la = list(a.layers) + [identity_layer(a.target)] * (n - len(a.layers))
    lb = list(b.layers) + [identity_layer(b.target)] * (n - len(b.layers))
    return Word(a.source + b.source, a.target + b.target, tuple(x + y for x, y in zip(la, lb)))


def tensor_all(*words: Word) -> Word:
    out = Word.identity(())
    for w in words:
        out = tensor(out, w)
    return out


def euler_characteristic(w: Word) -> int:
    typecheck(w)
    if not w.layers:
        return sum(strip_value(f) for f in w.source)
    c = w.canonical()
    total = sum(g.euler for g in c.generators())
    for obj in c.intermediate_objects():
        total -= sum(strip_value(f) for f in obj)
    return total


def dagger(w: Word) -> Word:
    """Reverse the layers and replace each generator by its adjoint partner."""
    typecheck(w)
    layers = tuple(tuple(g.adjoint() for g in layer) for layer in reversed(w.layers))
    return Word(w.target, w.source, layers)


def dual(w: Word) -> Word:
    """Orientation-reversed word of type ``dual(target) -> dual(source)``."""
    typecheck(w)
    layers = tuple(tuple(g.dual() for g in reversed(layer)) for layer in reversed(w.layers))
    return Word(dual_object(w.target), dual_object(w.source), layers)


# --------------------------------------------------------------------------
# standard words


def sphere_word() -> Word:
    return compose(Word.of(Generator.closed_unit()), Word.of(Generator.closed_counit()))


def genus_word(g: int) -> Word:
    """Closed connected genus-``g`` surface: unit, then ``g`` handles, then counit."""
    if g < 0:
        raise InvalidParams("genus must be non-negative")
    layers = [(Generator.closed_unit(),)]
    for _ in range(g):
        layers += [(Generator.closed_comult(),), (Generator.closed_mult(),)]
    layers.append((Generator.closed_counit(),))
    return Word((), (), tuple(layers))


def torus_word() -> Word:
    return genus_word(1)


def permutation_word(obj, perm) -> Word:
    """Word moving factor ``perm[t]`` of ``obj`` to position ``t``, by adjacent swaps.

    Swaps are emitted in bubble-sort order, one per layer.
    """
    obj = tuple(obj)
    n = len(obj)
    if sorted(perm) != list(range(n)):
        raise InvalidParams(f"{perm} is not a permutation of {n} factors")
    order = [0] * n  # final position of the factor currently at each slot
    for t, s in enumerate(perm):
        order[s] = t
    cur = list(obj)
    layers = []
    for end in range(n - 1, 0, -1):
        for p in range(end):
            if order[p] > order[p + 1]:
                layer = (
                    identity_layer(cur[:p])
                    + (Generator.swap(cur[p], cur[p + 1]),)
                    + identity_layer(cur[p + 2:])
                )
                layers.append(layer)
                order[p], order[p + 1] = order[p + 1], order[p]
                cur[p], cur[p + 1] = cur[p + 1], cur[p]
    return Word(obj, tuple(cur), tuple(layers))
