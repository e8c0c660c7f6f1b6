"""Dense complex linear algebra used by every other module.

Matrices are plain 2-d ``numpy.complex128`` arrays.  Tensor factors are packed
left-factor-major: the basis vector ``e_a (x) e_b`` of ``C^m (x) C^n`` sits at
index ``a * n + b``, which is exactly what ``numpy.kron`` produces.

Antilinear maps are stored as a matrix ``M`` acting by ``v -> M @ conj(v)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NotPositiveDefinite, ShapeMismatch, SingularPairing

DEFAULT_TOL = float(os.environ.get("OCTQFT_TOL", "1e-9"))
DET_RELATIVE_FLOOR = 1e-12


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with left-factor-major packing."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(mats, unit_dim: int = 1) -> np.ndarray:
    """Fold ``tensor_product`` over a sequence; the empty product is ``Id_1``."""
    return reduce(tensor_product, mats, identity(unit_dim))


def trace(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"trace of non-square {a.shape[0]}x{a.shape[1]} matrix")
    return complex(np.trace(a))


def swap_matrix(m: int, n: int) -> np.ndarray:
    """Permutation ``C^m (x) C^n -> C^n (x) C^m``, ``x (x) y -> y (x) x``."""
    p = np.zeros((n * m, m * n), dtype=np.complex128)
    for a in range(m):
        for b in range(n):
            p[b * m + a, a * n + b] = 1.0
    return p


@dataclass(frozen=True)
class Pairing:
    """Bilinear form ``sigma(x, y) = x^T @ values @ y`` on ``C^left x C^right``."""

    left_dim: int
    right_dim: int
    values: np.ndarray

    def __post_init__(self):
        v = as_matrix(self.values)
        if v.shape != (self.left_dim, self.right_dim):
            raise ShapeMismatch(
                f"pairing values {v.shape} do not match {self.left_dim}x{self.right_dim}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def from_matrix(cls, values) -> "Pairing":
        v = as_matrix(values)
        return cls(v.shape[0], v.shape[1], v)

    def __call__(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.values @ np.asarray(y))


def is_nondegenerate(values) -> bool:
    """``|det| >= 1e-12 * ||P||_2^dim``; the empty form counts as non-degenerate."""
    p = as_matrix(values) if np.size(values) else np.zeros((0, 0))
    if p.shape[0] != p.shape[1]:
        return False
    n = p.shape[0]
    if n == 0:
        return True
    norm = np.linalg.norm(p, 2)
    if norm == 0.0:
        return False
    # compare in log space so large dims do not underflow
    _, logdet = np.linalg.slogdet(p)
    return bool(logdet >= np.log(DET_RELATIVE_FLOOR) + n * np.log(norm))


def dual_basis(p: Pairing) -> np.ndarray:
    """Return ``D`` with ``sigma(D e_k, e_l) = delta_kl``, i.e. ``D = (P^T)^{-1}``.

    Column ``k`` of ``D`` is the vector of the left space dual to the ``k``-th
    standard basis vector of the right space.
    """
    if p.left_dim != p.right_dim:
        raise SingularPairing(f"pairing is not square ({p.left_dim}x{p.right_dim})")
    if not is_nondegenerate(p.values):
        raise SingularPairing("pairing is degenerate")
    return np.linalg.inv(p.values.T)


def metric_adjoint(f, g_in, g_out) -> np.ndarray:
    """Adjoint of ``f: V -> W`` for hermitian metrics ``<v, v'> = v^H g v'``.

    Satisfies ``<f* w, v>_{g_in} = <w, f v>_{g_out}``; in coordinates
    ``f* = g_in^{-1} f^H g_out``.
    """
    f, g_in, g_out = as_matrix(f), as_matrix(g_in), as_matrix(g_out)
    if g_in.shape != (f.shape[1], f.shape[1]) or g_out.shape != (f.shape[0], f.shape[0]):
        raise ShapeMismatch(
            f"metrics {g_in.shape}, {g_out.shape} do not fit map of shape {f.shape}"
        )
    for name, g in (("g_in", g_in), ("g_out", g_out)):
        check_positive_definite(g, name)
    return np.linalg.solve(g_in, f.conj().T @ g_out)


def check_positive_definite(g, name: str = "metric", tol: float = 1e-12) -> None:
    g = as_matrix(g)
    if g.shape[0] == 0:
        return
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.max(np.abs(g - g.conj().T)) > tol * scale:
        raise NotPositiveDefinite(f"{name} is not hermitian")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(f"{name} is not positive definite") from None


def dual_map(f) -> np.ndarray:
    """Dual with respect to the standard evaluation pairing: plain transpose."""
    return as_matrix(f).T.copy()


def evaluation(n: int) -> np.ndarray:
    """Standard pairing ``ev: C^n (x) C^n -> C`` as a ``1 x n^2`` row."""
    return identity(n).reshape(1, n * n)


def max_residual(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))
