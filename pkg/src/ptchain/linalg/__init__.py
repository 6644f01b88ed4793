"""Dense complex eigensolvers.

Balancing, Householder reduction to Hessenberg form and single-shift complex
QR with Wilkinson shifts. The inner loops live in a compiled extension with a
numpy fallback; see :mod:`ptchain.linalg._backend`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ComputationError, DimensionLimitError
from ._backend import DEFAULT_BACKEND, available_backends, get_kernels

__all__ = [
    "DEFAULT_BACKEND",
    "MAX_DIM",
    "ConvergenceError",
    "EigenResult",
    "available_backends",
    "eig_dense",
    "eig_tridiag_complex_symmetric",
    "greedy_match",
    "spectral_order",
]

MAX_DIM = 4096
EPS = 2.0**-52


class ConvergenceError(ComputationError):
    """QR iteration ran out of sweeps.

    ``partial`` holds the eigenvalues that did converge (unsorted).
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues sorted by (real, imag), optional unit-norm eigenvectors.

    ``residual_bound`` is the largest relative residual
    ``|A v - mu v| / |A|_F`` when vectors were computed, and the a-priori
    backward error estimate ``dim * eps`` otherwise.
    """

    values: np.ndarray
    vectors: np.ndarray | None = None
    residual_bound: float = 0.0
    iterations: int = 0

    def __len__(self):
        return len(self.values)


def spectral_order(values, rtol=1e-12):
    """Permutation sorting complex values by real part, then imaginary part.

    Real parts within ``rtol`` (relative to the spectral scale) are treated as
    equal so that roundoff in Re never decides the order of a conjugate pair.
    """
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return np.zeros(0, dtype=int)
    scale = max(1.0, float(np.max(np.abs(values))))
    tol = rtol * scale
    by_re = np.argsort(values.real, kind="stable")
    out = []
    group = [by_re[0]]
    for j in by_re[1:]:
        if values.real[j] - values.real[group[-1]] <= tol:
            group.append(j)
        else:
            out.extend(sorted(group, key=lambda m: (values.imag[m], m)))
            group = [j]
    out.extend(sorted(group, key=lambda m: (values.imag[m], m)))
    return np.asarray(out, dtype=int)


def _as_square(a):
    a = np.array(a, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("matrix must have positive dimension")
    if a.shape[0] > MAX_DIM:
        raise DimensionLimitError(f"dimension {a.shape[0]} exceeds limit {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _solve_hessenberg(h, original, vectors, scale, q, backend, max_sweeps):
    kern = get_kernels(backend)
    n = h.shape[0]
    maxit = 30 * n if max_sweeps is None else int(max_sweeps)
    z = q if vectors else None
    w, info, its = kern.hqr(h, z, bool(vectors), maxit)
    if info:
        raise ConvergenceError(
            f"QR iteration failed to converge after {its} sweeps "
            f"({n - info} of {n} eigenvalues found)",
            partial=np.array(w[info:]),
        )
    order = spectral_order(w)
    w = w[order]
    if not vectors:
        return EigenResult(values=w, residual_bound=n * EPS, iterations=its)
    y = kern.trevc(h)
    v = z @ y
    if scale is not None:
        v *= scale[:, None]
    v /= np.linalg.norm(v, axis=0)
    v = v[:, order]
    anorm = np.linalg.norm(original) or 1.0
    res = np.linalg.norm(original @ v - v * w, axis=0).max() / anorm
    return EigenResult(values=w, vectors=v, residual_bound=float(res), iterations=its)


def eig_dense(a, vectors=False, balance=True, backend=None, max_sweeps=None):
    """All eigenvalues of a general complex square matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, dimension at most ``MAX_DIM``.
    vectors : bool
        Also return right eigenvectors (columns, unit 2-norm).
    balance : bool
        Apply diagonal balancing before the Hessenberg reduction.
    backend : {"compiled", "python"}, optional
        Kernel implementation; defaults to the one chosen at import.
    max_sweeps : int, optional
        QR sweep budget, default ``30 * dim``.

    Raises
    ------
    ValueError
        Non-square, empty, oversized or non-finite input.
    ConvergenceError
        Sweep budget exhausted; carries the converged eigenvalues.
    """
    a = _as_square(a)
    original = a.copy() if vectors else None
    kern = get_kernels(backend)
    scale = kern.balance(a) if balance else None
    q = kern.hessenberg(a, bool(vectors))
    return _solve_hessenberg(a, original, vectors, scale, q, backend, max_sweeps)


def eig_tridiag_complex_symmetric(diag, offdiag, vectors=False, backend=None, max_sweeps=None):
    """Eigenvalues of the complex symmetric tridiagonal matrix (diag, offdiag).

    The matrix is already Hessenberg, so it goes straight to the QR stage.
    """
    d = np.asarray(diag, dtype=np.complex128)
    e = np.asarray(offdiag, dtype=np.complex128)
    if d.ndim != 1 or e.ndim != 1 or e.size != max(d.size - 1, 0):
        raise ValueError("offdiag must have exactly len(diag) - 1 entries")
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    t = _as_square(t)
    n = t.shape[0]
    original = t.copy() if vectors else None
    q = np.eye(n, dtype=np.complex128) if vectors else None
    return _solve_hessenberg(t, original, vectors, None, q, backend, max_sweeps)


def greedy_match(a, b):
    """Greedy minimal-distance matching between two complex value lists.

    Repeatedly pairs the globally closest unmatched (a_i, b_j). Returns a list
    of ``(i, j, distance)`` sorted by ``i``; its length is ``min(len(a), len(b))``.
    Ties are broken by the smaller ``i``, then the smaller ``j``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        return []
    dist = np.abs(a[:, None] - b[None, :])
    flat = np.lexsort((np.arange(dist.size) % b.size, np.arange(dist.size) // b.size, dist.ravel()))
    used_a = np.zeros(a.size, dtype=bool)
    used_b = np.zeros(b.size, dtype=bool)
    pairs = []
    need = min(a.size, b.size)
    for f in flat:
        i, j = divmod(int(f), b.size)
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        pairs.append((i, j, float(dist[i, j])))
        if len(pairs) == need:
            break
    pairs.sort()
    return pairs
