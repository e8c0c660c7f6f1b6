"""Reflection structures and reflection positivity.

All maps here are antilinear and stored as matrices acting by
``v -> M @ conj(v)``.  Composing two of them gives the linear map
``M2 @ conj(M1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import tensor as tc
from .bordism import Circle, Word, dagger
from .errors import ShapeMismatch
from .evaluator import evaluate
from .kfrob import KFrob, check_shapes, from_brane_ranks, sigma

POSITIVITY_THRESHOLD = 1e-10

CONDITIONS = (
    "lambda_involutive",
    "lambda_multiplicative",
    "alpha_involutive",
    "alpha_antimultiplicative",
    "trace_real",
    "eps_fixed",
    "theta_real",
    "zip_compatible",
)


@dataclass(frozen=True)
class ReflectionStructure:
    lambda_tilde: np.ndarray  # dim L x dim L
    alpha_tilde: dict  # (i, j) -> dim R_ji x dim R_ij


def canonical_reflection(ranks) -> ReflectionStructure:
    """Hermitean adjoint on the matrix model; complex conjugation on ``L = C``."""
    kf = from_brane_ranks(ranks)
    n = {b: int(ranks[b]) for b in kf.branes}
    alpha = {}
    for i, j in itertools.product(kf.branes, repeat=2):
        # E_pq (n_j x n_i) -> E_qp (n_i x n_j); conjugation is implicit
        ni, nj = n[i], n[j]
        a = np.zeros((ni * nj, nj * ni), dtype=np.complex128)
        for p in range(nj):
            for q in range(ni):
                a[q * nj + p, p * ni + q] = 1.0
        alpha[i, j] = a
    return ReflectionStructure(lambda_tilde=np.ones((1, 1), dtype=np.complex128), alpha_tilde=alpha)


def check_reflection_shapes(kf: KFrob, rs: ReflectionStructure) -> None:
    dl = kf.closed.dim
    if np.shape(rs.lambda_tilde) != (dl, dl):
        raise ShapeMismatch(f"lambda: expected {(dl, dl)}, got {np.shape(rs.lambda_tilde)}")
    d = kf.open.dims
    for i, j in itertools.product(kf.branes, repeat=2):
        a = rs.alpha_tilde.get((i, j))
        if a is None or np.shape(a) != (d[j, i], d[i, j]):
            raise ShapeMismatch(f"alpha[{i},{j}]: expected {(d[j, i], d[i, j])}, got {np.shape(a)}")


@dataclass(frozen=True)
class ConditionResult:
    name: str
    residual: float
    passed: bool


def validate_reflection(kf: KFrob, rs: ReflectionStructure, tol: float = tc.DEFAULT_TOL) -> list:
    """Residual of every reflection-structure condition, sorted by name."""
    check_shapes(kf)
    check_reflection_shapes(kf, rs)
    lam = tc.as_matrix(rs.lambda_tilde)
    alpha = {k: tc.as_matrix(v) for k, v in rs.alpha_tilde.items()}
    c, o, z = kf.closed, kf.open, kf.zip
    dl = c.dim
    b = kf.branes
    res = {}
    res["lambda_involutive"] = tc.max_residual(lam @ lam.conj(), tc.identity(dl))
    # lam(conj(x y)) == lam(conj x) lam(conj y)
    res["lambda_multiplicative"] = tc.max_residual(lam @ c.mult.conj(), c.mult @ np.kron(lam, lam))
    res["alpha_involutive"] = max(
        tc.max_residual(alpha[j, i] @ alpha[i, j].conj(), tc.identity(o.dims[i, j]))
        for i, j in itertools.product(b, repeat=2)
    )
    worst = 0.0
    for i, j, k in itertools.product(b, repeat=3):
        # alpha_ik(chi_ijk(a (x) b)) == chi_kji(alpha_ij(b) (x) alpha_jk(a))
        lhs = alpha[i, k] @ o.chi[i, j, k].conj()
        rhs = o.chi[k, j, i] @ np.kron(alpha[i, j], alpha[j, k]) @ tc.swap_matrix(o.dims[j, k], o.dims[i, j])
        worst = max(worst, tc.max_residual(lhs, rhs))
    res["alpha_antimultiplicative"] = worst
    res["trace_real"] = tc.max_residual(c.trace @ lam, c.trace.conj())
    res["eps_fixed"] = max(tc.max_residual(alpha[i, i] @ o.eps[i].conj(), o.eps[i]) for i in b)
    res["theta_real"] = max(tc.max_residual(o.theta[i] @ alpha[i, i], o.theta[i].conj()) for i in b)
    res["zip_compatible"] = max(
        tc.max_residual(alpha[i, i] @ z.iota[i].conj(), z.iota[i] @ lam) for i in b
    )
    return [ConditionResult(n, float(res[n]), bool(res[n] <= tol)) for n in sorted(CONDITIONS)]


def open_form(kf: KFrob, rs: ReflectionStructure, i, j) -> np.ndarray:
    """Gram matrix of ``(v, w) -> sigma_ij(alpha_ji^{-1}(v) (x) w)`` on ``R_ij``.

    ``alpha_ji^{-1} = alpha_ij`` by involutivity, so the form is
    ``v^H (alpha_ij^T S) w`` with ``S`` the matrix of ``sigma_ij``.
    """
    return tc.as_matrix(rs.alpha_tilde[i, j]).T @ sigma(kf, i, j).values


def closed_form(kf: KFrob, rs: ReflectionStructure) -> np.ndarray:
    """Gram matrix of ``(l, l') -> trace(lambda^{-1}(l) l')`` on ``L``."""
    d = kf.closed.dim
    lam = tc.as_matrix(rs.lambda_tilde)
    m = (kf.closed.trace @ kf.closed.mult).reshape(d, d)  # [a, b] = trace(e_a e_b)
    return lam.T @ m


@dataclass(frozen=True)
class PositivityResult:
    passed: bool
    min_eigenvalue: float
    hermitian_residual: float


def positivity_check(kf: KFrob, rs: ReflectionStructure) -> PositivityResult:
    """Positive iff every induced form is hermitian with all eigenvalues above 1e-10."""
    forms = [closed_form(kf, rs)]
    forms += [open_form(kf, rs, i, j) for i, j in itertools.product(kf.branes, repeat=2)]
    lowest = np.inf
    herm = 0.0
    for g in forms:
        herm = max(herm, tc.max_residual(g, g.conj().T))
        h = 0.5 * (g + g.conj().T)
        lowest = min(lowest, float(np.linalg.eigvalsh(h)[0]))
    passed = bool(lowest > POSITIVITY_THRESHOLD and herm <= POSITIVITY_THRESHOLD)
    return PositivityResult(passed, float(lowest), float(herm))


def object_metric(kf: KFrob, rs: ReflectionStructure, obj) -> np.ndarray:
    """Product of the positivity forms over the factors of ``obj``."""
    mats = []
    for f in obj:
        if isinstance(f, Circle):
            mats.append(closed_form(kf, rs))
        else:
            mats.append(open_form(kf, rs, f.start, f.end))
    return tc.tensor_all(mats)


def dagger_compatibility(kf: KFrob, rs: ReflectionStructure, w: Word) -> float:
    """Max entrywise gap between ``Z(dagger w)`` and the metric adjoint of ``Z(w)``."""
    forward = evaluate(kf, w).matrix
    backward = evaluate(kf, dagger(w)).matrix
    g_src = object_metric(kf, rs, w.source)
    g_tgt = object_metric(kf, rs, w.target)
    return tc.max_residual(backward, tc.metric_adjoint(forward, g_src, g_tgt))
