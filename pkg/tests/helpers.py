"""Test fixtures: random well-typed words, example algebras, the ranks enumeration."""

from __future__ import annotations

import itertools

import numpy as np

from octqft.bordism import CIRCLE, Circle, Generator, Interval, Word, identity_layer, layer_codomain
from octqft.evaluator import assign_object
from octqft.kfrob import ClosedAlgebra, KFrob, OpenSector, ZipData, from_brane_ranks

MAX_DIM = 64


def candidates(obj, p, branes):
    """Generators whose domain starts at position ``p`` of ``obj`` (non-empty domain)."""
    f = obj[p]
    nxt = obj[p + 1] if p + 1 < len(obj) else None
    out = []
    if isinstance(f, Circle):
        out += [Generator.closed_counit(), Generator.closed_comult()]
        out += [Generator.unzip(b) for b in branes]
        if nxt == CIRCLE:
            out.append(Generator.closed_mult())
    else:
        a, b = f.start, f.end
        if a == b:
            out += [Generator.open_counit(a), Generator.zip(a)]
        out += [Generator.open_comult(a, j, b) for j in branes]
        if isinstance(nxt, Interval) and nxt.end == a:
            out.append(Generator.open_mult(nxt.start, a, b))
    if nxt is not None:
        out.append(Generator.swap(f, nxt))
    return out


def random_layer(rng, obj, branes):
    layer = []
    p = 0
    while p <= len(obj):
        if rng.random() < 0.15:
            layer.append(Generator.closed_unit() if rng.random() < 0.4 else Generator.open_unit(rng.choice(branes)))
        if p == len(obj):
            break
        opts = candidates(obj, p, branes)
        if opts and rng.random() < 0.5:
            g = opts[rng.integers(len(opts))]
            layer.append(g)
            p += len(g.domain)
        else:
            layer.append(Generator.identity(obj[p]))
            p += 1
    return tuple(layer)


def random_object(rng, branes, max_factors=2):
    n = int(rng.integers(0, max_factors + 1))
    out = []
    for _ in range(n):
        if rng.random() < 0.4:
            out.append(CIRCLE)
        else:
            out.append(Interval(rng.choice(branes), rng.choice(branes)))
    return tuple(out)


def random_word(kf: KFrob, rng, n_layers=3, max_dim=MAX_DIM, max_factors=4, source=None):
    """Random well-typed word whose every intermediate object has dim <= ``max_dim``."""
    branes = list(kf.branes)
    obj = source if source is not None else random_object(rng, branes)
    while assign_object(kf, obj).dim > max_dim:
        obj = random_object(rng, branes)
    src = obj
    layers = []
    for _ in range(n_layers):
        for _attempt in range(50):
            layer = random_layer(rng, obj, branes)
            new = layer_codomain(layer)
            if len(new) <= max_factors and assign_object(kf, new).dim <= max_dim:
                break
        else:
            layer = identity_layer(obj)
            new = obj
        layers.append(layer)
        obj = new
    return Word(src, obj, tuple(layers))


def composable_pair(kf, rng, max_dim=MAX_DIM):
    w = random_word(kf, rng, n_layers=int(rng.integers(2, 6)), max_dim=max_dim)
    cut = int(rng.integers(0, len(w.layers) + 1))
    mid = w.source
    for layer in w.layers[:cut]:
        mid = layer_codomain(layer) if layer else mid
    return Word(w.source, mid, w.layers[:cut]), Word(mid, w.target, w.layers[cut:])


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def all_small_ranks(max_total_rank=8):
    """Every ranks map (up to relabelling) with ``sum_ij dim R_ij = (sum n)^2 <= 64``."""
    for n in range(1, max_total_rank + 1):
        for part in partitions(n):
            yield {f"b{t}": r for t, r in enumerate(part)}


def two_point_closed_algebra(t1=4.0, t2=0.5) -> KFrob:
    """``L = C e1 + C e2`` (orthogonal idempotents), one brane of rank 1 supported on ``e1``.

    ``trace(e_a) = t_a`` and ``theta = sqrt(t1)``; the Cardy condition forces
    ``theta^2 = t1``.  The closed partition function is ``t1^(1-g) + t2^(1-g)``.
    """
    mult = np.zeros((2, 4), dtype=np.complex128)
    mult[0, 0] = 1.0  # e1 e1 = e1
    mult[1, 3] = 1.0  # e2 e2 = e2
    unit = np.array([[1.0], [1.0]], dtype=np.complex128)
    trace = np.array([[t1, t2]], dtype=np.complex128)
    theta = np.sqrt(t1)
    one = np.ones((1, 1), dtype=np.complex128)
    return KFrob(
        branes=("i",),
        closed=ClosedAlgebra(mult, unit, trace),
        open=OpenSector(
            dims={("i", "i"): 1},
            chi={("i", "i", "i"): one.copy()},
            eps={"i": one.copy()},
            theta={"i": theta * one},
        ),
        zip=ZipData(
            iota={"i": np.array([[1.0, 0.0]], dtype=np.complex128)},
            iota_star={"i": np.array([[theta / t1], [0.0]], dtype=np.complex128)},
        ),
    )


def elementary(n_rows, n_cols, p, q):
    e = np.zeros((n_rows, n_cols), dtype=np.complex128)
    e[p, q] = 1.0
    return e


def matrix_model_cases():
    return [{"i": 1}, {"i": 2}, {"i": 1, "j": 2}, {"i": 2, "j": 3}, {"i": 2, "j": 2, "k": 1}]


__all__ = [
    "candidates", "random_layer", "random_word", "composable_pair", "all_small_ranks",
    "two_point_closed_algebra", "elementary", "matrix_model_cases", "from_brane_ranks",
    "itertools",
]
