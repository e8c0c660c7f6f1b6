"""The field theory determined by a knowledgeable Frobenius algebra.

``evaluate`` sends a bordism word to the matrix of the linear map it defines:
circles go to ``L``, ``Interval(i, j)`` goes to ``R_ij``, and a layer is the
Kronecker product of its slots.  The inverse direction, ``extract_kfrob``,
reads the algebra back off any word-evaluation oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import tensor as tc
from .bordism import (
    CIRCLE,
    Circle,
    Generator,
    Interval,
    Word,
    genus_word,
    typecheck,
)
from .errors import InconsistentOracle, InvalidParams, OCTQFTError, SingularPairing
from .kfrob import (
    ClosedAlgebra,
    KFrob,
    OpenSector,
    ZipData,
    from_brane_ranks,
    max_tensor_residual,
    sigma,
)


@dataclass(frozen=True)
class SpaceAssignment:
    object: tuple
    dim: int
    factor_dims: tuple


@dataclass(frozen=True)
class Evaluation:
    word: Word
    matrix: np.ndarray

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]


def factor_dim(kf: KFrob, f) -> int:
    if isinstance(f, Circle):
        return kf.closed.dim
    return kf.dim(f.start, f.end)


def assign_object(kf: KFrob, obj) -> SpaceAssignment:
    dims = tuple(factor_dim(kf, f) for f in obj)
    return SpaceAssignment(tuple(obj), int(np.prod(dims, dtype=np.int64)) if dims else 1, dims)


def closed_comult(kf: KFrob) -> np.ndarray:
    """``delta(x) = sum_k (x e_k) (x) e^k`` with ``trace(e^k e_l) = delta_kl``."""
    c = kf.closed
    d = c.dim
    dual = tc.dual_basis(tc.Pairing.from_matrix(c.pairing()))
    m = c.mult.reshape(d, d, d)  # [c, x, k]
    return np.einsum("cxk,dk->cdx", m, dual).reshape(d * d, d)


def open_comult(kf: KFrob, i, j, k) -> np.ndarray:
    """``R_ik -> R_jk (x) R_ij``, ``v -> sum_m chi_jik(v (x) u^m) (x) u_m``.

    ``u_m`` is the standard basis of ``R_ij`` and ``u^m`` its ``sigma_ij``-dual
    basis in ``R_ji``.
    """
    d = kf.open.dims
    dual = tc.dual_basis(sigma(kf, i, j))  # column m: u^m
    x = kf.chi_tensor(j, i, k)  # [c, v, b]: R_ik (x) R_ji -> R_jk
    return np.einsum("cvb,bm->cmv", x, dual).reshape(d[j, k] * d[i, j], d[i, k])


def generator_matrix(kf: KFrob, g: Generator) -> np.ndarray:
    k, lb = g.kind, g.labels
    for label in lb:
        kf.check_label(label)
    for f in g.factors:
        if isinstance(f, Interval):
            kf.check_label(f.start)
            kf.check_label(f.end)
    if k == "ClosedUnit":
        return kf.closed.unit
    if k == "ClosedCounit":
        return kf.closed.trace
    if k == "ClosedMult":
        return kf.closed.mult
    if k == "ClosedComult":
        return closed_comult(kf)
    if k == "OpenUnit":
        return kf.open.eps[lb[0]]
    if k == "OpenCounit":
        return kf.open.theta[lb[0]]
    if k == "OpenMult":
        return kf.open.chi[lb]
    if k == "OpenComult":
        return open_comult(kf, *lb)
    if k == "Zip":
        return kf.zip.iota_star[lb[0]]
    if k == "Unzip":
        return kf.zip.iota[lb[0]]
    if k == "Swap":
        a, b = g.factors
        return tc.swap_matrix(factor_dim(kf, a), factor_dim(kf, b))
    return tc.identity(factor_dim(kf, g.factors[0]))


def evaluate(kf: KFrob, w: Word) -> Evaluation:
    """Matrix of ``w``: layer matrices multiplied right to left."""
    typecheck(w)
    cache = {}

    def gen(g):
        if g not in cache:
            cache[g] = generator_matrix(kf, g)
        return cache[g]

    m = tc.identity(assign_object(kf, w.source).dim)
    for layer in w.layers:
        if not layer:
            continue
        m = tc.tensor_all([gen(g) for g in layer]) @ m
    return Evaluation(w, m)


def evaluator(kf: KFrob) -> Callable[[Word], np.ndarray]:
    """``w -> evaluate(kf, w).matrix``, the oracle form used by ``extract_kfrob``."""
    return lambda w: evaluate(kf, w).matrix


# --------------------------------------------------------------------------
# sewing relations


def _I(i, j):
    return Interval(i, j)


def closed_relation_pairs() -> dict:
    C = CIRCLE
    G = Generator
    mult, comult = G.closed_mult(), G.closed_comult()
    unit, counit = G.closed_unit(), G.closed_counit()
    idc = G.identity(C)
    three = (C, C, C)
    return {
        "closed_associativity": [(
            Word(three, (C,), ((mult, idc), (mult,))),
            Word(three, (C,), ((idc, mult), (mult,))),
        )],
        "closed_coassociativity": [(
            Word((C,), three, ((comult,), (comult, idc))),
            Word((C,), three, ((comult,), (idc, comult))),
        )],
        "closed_unit": [
            (Word((C,), (C,), ((unit, idc), (mult,))), Word.identity((C,))),
            (Word((C,), (C,), ((idc, unit), (mult,))), Word.identity((C,))),
        ],
        "closed_counit": [
            (Word((C,), (C,), ((comult,), (counit, idc))), Word.identity((C,))),
            (Word((C,), (C,), ((comult,), (idc, counit))), Word.identity((C,))),
        ],
        "closed_commutativity": [
            (Word((C, C), (C,), ((G.swap(C, C),), (mult,))), Word.of(mult)),
            (Word((C,), (C, C), ((comult,), (G.swap(C, C),))), Word.of(comult)),
        ],
        "closed_frobenius": [
            (Word((C, C), (C, C), ((idc, comult), (mult, idc))), Word((C, C), (C, C), ((mult,), (comult,)))),
            (Word((C, C), (C, C), ((comult, idc), (idc, mult))), Word((C, C), (C, C), ((mult,), (comult,)))),
        ],
    }


def open_relation_pairs(branes) -> dict:
    G = Generator
    rel = {name: [] for name in (
        "open_associativity", "open_coassociativity", "open_unit", "open_counit",
        "open_frobenius", "theta_cyclicity", "zip_centrality", "zip_adjointness", "cardy",
    )}
    for i, j, k, l in itertools.product(branes, repeat=4):
        src = (_I(k, l), _I(j, k), _I(i, j))
        rel["open_associativity"].append((
            Word(src, (_I(i, l),), ((G.open_mult(j, k, l), G.identity(_I(i, j))), (G.open_mult(i, j, l),))),
            Word(src, (_I(i, l),), ((G.identity(_I(k, l)), G.open_mult(i, j, k)), (G.open_mult(i, k, l),))),
        ))
        rel["open_coassociativity"].append((
            Word((_I(i, l),), src, ((G.open_comult(i, k, l),), (G.identity(_I(k, l)), G.open_comult(i, j, k)))),
            Word((_I(i, l),), src, ((G.open_comult(i, j, l),), (G.open_comult(j, k, l), G.identity(_I(i, j))))),
        ))
        fsrc, ftgt = (_I(k, l), _I(i, k)), (_I(j, l), _I(i, j))
        middle = Word(fsrc, ftgt, ((G.open_mult(i, k, l),), (G.open_comult(i, j, l),)))
        rel["open_frobenius"].append((
            Word(fsrc, ftgt, ((G.identity(_I(k, l)), G.open_comult(i, j, k)), (G.open_mult(j, k, l), G.identity(_I(i, j))))),
            middle,
        ))
        rel["open_frobenius"].append((
            Word(fsrc, ftgt, ((G.open_comult(k, j, l), G.identity(_I(i, k))), (G.identity(_I(j, l)), G.open_mult(i, k, j)))),
            middle,
        ))
    for i, j in itertools.product(branes, repeat=2):
        v = _I(i, j)
        idv = Word.identity((v,))
        rel["open_unit"] += [
            (Word((v,), (v,), ((G.open_unit(j), G.identity(v)), (G.open_mult(i, j, j),))), idv),
            (Word((v,), (v,), ((G.identity(v), G.open_unit(i)), (G.open_mult(i, i, j),))), idv),
        ]
        rel["open_counit"] += [
            (Word((v,), (v,), ((G.open_comult(i, i, j),), (G.identity(v), G.open_counit(i)))), idv),
            (Word((v,), (v,), ((G.open_comult(i, j, j),), (G.open_counit(j), G.identity(v)))), idv),
        ]
        rel["theta_cyclicity"].append((
            Word((_I(j, i), _I(i, j)), (), ((G.open_mult(i, j, i),), (G.open_counit(i),))),
            Word((_I(j, i), _I(i, j)), (), ((G.swap(_I(j, i), _I(i, j)),), (G.open_mult(j, i, j),), (G.open_counit(j),))),
        ))
        rel["zip_centrality"].append((
            Word((v, CIRCLE), (v,), ((G.identity(v), G.unzip(i)), (G.open_mult(i, i, j),))),
            Word((v, CIRCLE), (v,), ((G.swap(v, CIRCLE),), (G.unzip(j), G.identity(v)), (G.open_mult(i, j, j),))),
        ))
        rel["cardy"].append(cardy_words(i, j))
    for i in branes:
        r = _I(i, i)
        rel["zip_adjointness"].append((
            Word((CIRCLE, r), (), ((G.identity(CIRCLE), G.zip(i)), (G.closed_mult(),), (G.closed_counit(),))),
            Word((CIRCLE, r), (), ((G.unzip(i), G.identity(r)), (G.open_mult(i, i, i),), (G.open_counit(i),))),
        ))
    return rel


def cardy_words(i, j) -> tuple:
    """The two sides of the Cardy condition as words ``Interval(i,i) -> Interval(j,j)``.

    Left: zip then unzip.  Right: create the copairing of ``R_ij (x) R_ji`` from
    the unit of ``R_jj``, multiply its left leg onto the input, and close up.
    """
    G = Generator
    src, tgt = (_I(i, i),), (_I(j, j),)
    lhs = Word(src, tgt, ((G.zip(i),), (G.unzip(j),)))
    rhs = Word(src, tgt, (
        (G.open_unit(j), G.identity(_I(i, i))),
        (G.open_comult(j, i, j), G.identity(_I(i, i))),
        (G.identity(_I(i, j)), G.swap(_I(j, i), _I(i, i))),
        (G.open_mult(i, i, j), G.identity(_I(j, i))),
        (G.open_mult(j, i, j),),
    ))
    return lhs, rhs


def relation_pairs(branes) -> dict:
    out = closed_relation_pairs()
    out.update(open_relation_pairs(branes))
    return out


@dataclass(frozen=True)
class RelationResult:
    name: str
    residual: float
    passed: bool
    count: int


def relation_suite(kf: KFrob, tol: float = tc.DEFAULT_TOL) -> list:
    """Evaluate both sides of every sewing relation; one entry per relation, sorted by name."""
    out = []
    for name, pairs in sorted(relation_pairs(kf.branes).items()):
        worst = 0.0
        for lhs, rhs in pairs:
            try:
                r = tc.max_residual(evaluate(kf, lhs).matrix, evaluate(kf, rhs).matrix)
            except SingularPairing:
                r = float("inf")
            worst = max(worst, r)
        out.append(RelationResult(name, worst, bool(worst <= tol), len(pairs)))
    return out


# --------------------------------------------------------------------------
# closed-sector oracle


def handle_operator(kf: KFrob) -> np.ndarray:
    """``H(x) = sum_k e_k x e^k`` built directly from the product and trace."""
    c = kf.closed
    d = c.dim
    mult = c.mult.reshape(d, d, d)
    p = c.pairing()
    if abs(np.linalg.det(p)) < 1e-300:
        raise SingularPairing("closed Frobenius pairing is degenerate")
    coeffs = np.linalg.inv(p.T)  # column k: coordinates of e^k
    h = np.zeros((d, d), dtype=np.complex128)
    for x in range(d):
        for k in range(d):
            ekx = mult[:, k, x]
            dual_k = coeffs[:, k]
            h[:, x] += np.einsum("cab,a,b->c", mult, ekx, dual_k)
    return h


def closed_genus_oracle(kf: KFrob, g: int) -> complex:
    """``trace(H^g(1))``: the genus-``g`` partition function without using words."""
    if not 0 <= g <= 6:
        raise InvalidParams("genus must be in 0..6")
    h = handle_operator(kf)
    v = kf.closed.unit
    for _ in range(g):
        v = h @ v
    return complex((kf.closed.trace @ v)[0, 0])


# --------------------------------------------------------------------------
# extraction and the round trip


def _probe(oracle, w, shape, what):
    try:
        m = np.asarray(oracle(w), dtype=np.complex128)
    except OCTQFTError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise InconsistentOracle(f"oracle failed on {what}: {exc}") from exc
    if m.ndim != 2 or m.shape != shape:
        raise InconsistentOracle(f"{what}: expected shape {shape}, oracle returned {m.shape}")
    return m


def extract_kfrob(oracle, branes, tol: float = 1e-9) -> KFrob:
    """Read a knowledgeable Frobenius algebra off a word-evaluation oracle.

    Dimensions are probed from identity words; each structure map is the
    value of its generator word.  Identities, unitality and functoriality on a
    handful of probe words are spot-checked.
    """
    branes = tuple(sorted(branes))
    if not branes:
        raise InvalidParams("at least one brane label is required")
    G = Generator

    def dim_of(obj):
        m = np.asarray(oracle(Word.identity(obj)))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InconsistentOracle(f"identity on {list(obj)} evaluated to shape {m.shape}")
        if tc.max_residual(m, np.eye(m.shape[0])) > tol:
            raise InconsistentOracle(f"identity on {list(obj)} is not the identity matrix")
        return m.shape[0]

    dl = dim_of((CIRCLE,))
    dims = {(i, j): dim_of((_I(i, j),)) for i in branes for j in branes}

    def gen(g, shape):
        return _probe(oracle, Word.of(g), shape, repr(g))

    closed = ClosedAlgebra(
        mult=gen(G.closed_mult(), (dl, dl * dl)),
        unit=gen(G.closed_unit(), (dl, 1)),
        trace=gen(G.closed_counit(), (1, dl)),
    )
    chi = {
        (i, j, k): gen(G.open_mult(i, j, k), (dims[i, k], dims[j, k] * dims[i, j]))
        for i, j, k in itertools.product(branes, repeat=3)
    }
    eps = {i: gen(G.open_unit(i), (dims[i, i], 1)) for i in branes}
    theta = {i: gen(G.open_counit(i), (1, dims[i, i])) for i in branes}
    iota = {i: gen(G.unzip(i), (dims[i, i], dl)) for i in branes}
    iota_star = {i: gen(G.zip(i), (dl, dims[i, i])) for i in branes}
    kf = KFrob(branes, closed, OpenSector(dims, chi, eps, theta), ZipData(iota, iota_star))

    # spot checks: unitality and functoriality against the oracle itself
    unit_word = Word((CIRCLE,), (CIRCLE,), ((G.closed_unit(), G.identity(CIRCLE)), (G.closed_mult(),)))
    got = _probe(oracle, unit_word, (dl, dl), "closed unitality")
    if tc.max_residual(got, np.eye(dl)) > tol:
        raise InconsistentOracle("closed unitality fails on the oracle")
    for i, j in itertools.product(branes, repeat=2):
        v = _I(i, j)
        w = Word((v,), (v,), ((G.open_unit(j), G.identity(v)), (G.open_mult(i, j, j),)))
        got = _probe(oracle, w, (dims[i, j], dims[i, j]), f"open unitality ({i},{j})")
        if tc.max_residual(got, np.eye(dims[i, j])) > tol:
            raise InconsistentOracle(f"open unitality fails on the oracle for ({i},{j})")
    for i in branes:
        w = Word((_I(i, i),), (_I(i, i),), ((G.zip(i),), (G.unzip(i),)))
        got = _probe(oracle, w, (dims[i, i], dims[i, i]), f"zip/unzip composite ({i})")
        if tc.max_residual(got, iota[i] @ iota_star[i]) > tol * max(1.0, float(np.abs(got).max())):
            raise InconsistentOracle(f"oracle is not functorial on zip/unzip for {i}")
    return kf


@dataclass(frozen=True)
class RoundtripReport:
    ranks: dict
    residual: float
    passed: bool
    tol: float


def roundtrip_check(ranks, tol: float = 1e-12) -> RoundtripReport:
    """Compare ``extract(evaluate(from_brane_ranks(ranks)))`` with ``from_brane_ranks(ranks)``."""
    kf = from_brane_ranks(ranks)
    back = extract_kfrob(evaluator(kf), kf.branes)
    r = max_tensor_residual(kf, back)
    return RoundtripReport(dict(sorted(ranks.items())), r, bool(r <= tol), tol)


def partition_function(kf: KFrob, g: int) -> complex:
    m = evaluate(kf, genus_word(g)).matrix
    return complex(m[0, 0])

