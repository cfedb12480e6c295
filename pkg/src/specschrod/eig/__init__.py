"""Dense eigensolvers for assembled collocation operators.

Two backends implement the same contract:

``"reference"``
    The in-package solver: Householder tridiagonalization with implicit QL
    for symmetric matrices; balancing, Hessenberg reduction, Francis
    double-shift QR and inverse iteration for general ones.
``"lapack"``
    The LAPACK drivers exposed by scipy (``dsyevd`` and ``dgeev``).

Both return an :class:`EigenSolution` sorted ascending by real part, with
unit eigenvectors whose largest-magnitude component is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from ..errors import ContractViolation, ConvergenceError, InvalidArgument
from ..operators import DiscreteOperator
from . import _general, _symmetric

__all__ = ["EigConfig", "EigenSolution", "eig_symmetric", "eig_general", "select"]

BACKENDS = ("lapack", "reference")

MatrixLike = Union[DiscreteOperator, np.ndarray]


@dataclass(frozen=True)
class EigConfig:
    """Solver options.

    ``tol_im`` is relative to the Frobenius norm of the matrix: an eigenvalue
    is flagged real when ``|Im lambda| <= tol_im * ||A||_F``.
    """

    tol_im: float = 1e-8
    max_iter_per_eigenvalue: int = 50
    balance: bool = True
    backend: str = "reference"
    compute_vectors: bool = True
    inverse_iterations: int = 3

    def __post_init__(self):
        if not self.tol_im > 0:
            raise InvalidArgument(f"tol_im must be positive, got {self.tol_im!r}")
        if self.max_iter_per_eigenvalue < 1:
            raise InvalidArgument("max_iter_per_eigenvalue must be >= 1")
        if self.backend not in BACKENDS:
            raise InvalidArgument(f"unknown eigensolver backend {self.backend!r}; use one of {BACKENDS}")


@dataclass(frozen=True)
class EigenSolution:
    re: np.ndarray
    im: np.ndarray
    vectors: Optional[np.ndarray]
    residuals: Optional[np.ndarray]
    real_flags: np.ndarray
    norm: float

    @property
    def values(self) -> np.ndarray:
        return self.re + 1j * self.im

    def __len__(self) -> int:
        return int(self.re.shape[0])

    def real_values(self) -> np.ndarray:
        """Real parts of the real-flagged eigenvalues, ascending."""
        return self.re[self.real_flags]

    def complex_values(self) -> np.ndarray:
        """Eigenvalues flagged as not real; kept out of benchmark tables."""
        return self.values[~self.real_flags]

    def take(self, idx) -> "EigenSolution":
        idx = np.asarray(idx, dtype=int)
        return EigenSolution(
            self.re[idx],
            self.im[idx],
            None if self.vectors is None else self.vectors[:, idx],
            None if self.residuals is None else self.residuals[idx],
            self.real_flags[idx],
            self.norm,
        )


def _matrix(a: MatrixLike) -> np.ndarray:
    m = a.matrix if isinstance(a, DiscreteOperator) else a
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgument("matrix has non-finite entries")
    return m


def _sign_fix(vectors: np.ndarray) -> np.ndarray:
    if vectors.size == 0:
        return vectors
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _finish(a, w, vecs, cfg: EigConfig) -> EigenSolution:
    norm = float(np.linalg.norm(a))
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    flags = np.abs(w.imag) <= cfg.tol_im * norm
    if vecs is None:
        return EigenSolution(w.real.copy(), w.imag.copy(), None, None, flags, norm)
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    res = np.linalg.norm(a @ vecs - vecs * w, axis=0)
    res = res / norm if norm > 0 else res

    if np.iscomplexobj(vecs):
        # rotate each vector so its largest entry is real, then keep the real
        # part; exact for real eigenpairs, a real representative otherwise
        idx = np.argmax(np.abs(vecs), axis=0)
        pivot = vecs[idx, np.arange(vecs.shape[1])]
        phase = np.where(np.abs(pivot) > 0, np.conj(pivot) / np.abs(pivot), 1.0)
        real = (vecs * phase).real
        real = real / np.linalg.norm(real, axis=0)
    else:
        real = vecs
    return EigenSolution(w.real.copy(), w.imag.copy(), _sign_fix(real), res, flags, norm)


def eig_symmetric(a: MatrixLike, cfg: Optional[EigConfig] = None) -> EigenSolution:
    """Full spectrum of a symmetric operator with orthonormal eigenvectors."""
    cfg = cfg or EigConfig()
    if isinstance(a, DiscreteOperator) and not a.symmetric:
        raise ContractViolation("operator is not marked symmetric; use eig_general")
    m = _matrix(a)
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym != 0.0:
        raise ContractViolation(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    if m.shape[0] == 0:
        return _finish(m, np.zeros(0, complex), np.zeros((0, 0)), cfg)

    if cfg.backend == "lapack":
        if cfg.compute_vectors:
            w, v = scipy.linalg.eigh(m, driver="evd")
        else:
            w, v = scipy.linalg.eigh(m, eigvals_only=True, driver="evd"), None
    else:
        d, e, q = _symmetric.tridiagonalize(m)
        if not cfg.compute_vectors:
            q = np.zeros((0, m.shape[0]))
        status = _symmetric.tridiagonal_ql(d, e, q, cfg.max_iter_per_eigenvalue)
        if status >= 0:
            raise ConvergenceError(
                f"QL iteration did not converge for eigenvalue {status} "
                f"after {cfg.max_iter_per_eigenvalue} iterations",
                index=int(status),
            )
        w, v = d, (q if cfg.compute_vectors else None)
    return _finish(m, np.asarray(w, dtype=complex), v, cfg)


def _lapack_general(m: np.ndarray, cfg: EigConfig):
    # dgeev always balances (permutation and scaling); cfg.balance only
    # steers the reference backend
    wr, wi, _, vr, info = lapack.dgeev(m, compute_vl=0, compute_vr=int(cfg.compute_vectors))
    if info > 0:
        raise ConvergenceError(
            f"LAPACK QR iteration failed; eigenvalues up to {info} did not converge",
            index=int(info) - 1,
        )
    if info < 0:
        raise InvalidArgument(f"LAPACK dgeev rejected argument {-info}")
    w = wr + 1j * wi
    if not cfg.compute_vectors:
        return w, None
    v = vr.astype(complex)
    j = 0
    n = len(w)
    while j < n:
        if wi[j] != 0.0 and j + 1 < n:
            v[:, j] = vr[:, j] + 1j * vr[:, j + 1]
            v[:, j + 1] = vr[:, j] - 1j * vr[:, j + 1]
            j += 2
        else:
            j += 1
    return w, v


def _reference_general(m: np.ndarray, cfg: EigConfig):
    h = np.array(m, dtype=float, order="C")
    scale = _general.balance(h) if cfg.balance else np.ones(h.shape[0])
    vs, betas = _general.hessenberg(h)
    wr, wi, status = _general.hessenberg_qr(h, cfg.max_iter_per_eigenvalue)
    if status >= 0:
        raise ConvergenceError(
            f"Francis QR did not converge for eigenvalue {status} "
            f"after {cfg.max_iter_per_eigenvalue} iterations",
            index=int(status),
        )
    w = wr + 1j * wi
    if not cfg.compute_vectors:
        return w, None
    v = _general.eigenvectors(h, vs, betas, scale, wr, wi, cfg.inverse_iterations)
    return w, v


def eig_general(a: MatrixLike, cfg: Optional[EigConfig] = None) -> EigenSolution:
    """Full spectrum of a real square matrix.

    Eigenvalues whose imaginary part exceeds ``tol_im * ||A||_F`` are kept
    but flagged; see :meth:`EigenSolution.real_values`.
    """
    cfg = cfg or EigConfig()
    m = _matrix(a)
    if m.shape[0] == 0:
        return _finish(m, np.zeros(0, complex), np.zeros((0, 0)), cfg)
    if cfg.backend == "lapack":
        w, v = _lapack_general(m, cfg)
    else:
        w, v = _reference_general(m, cfg)
    return _finish(m, w, v, cfg)


def select(sol: EigenSolution, count: int, near: Optional[float] = None) -> EigenSolution:
    """The ``count`` real-flagged eigenpairs closest to ``near``.

    Without a target the lowest ``count`` are taken. The result stays in
    ascending order.
    """
    avail = np.flatnonzero(sol.real_flags)
    if int(count) != count or count < 0:
        raise InvalidArgument(f"count must be a non-negative integer, got {count!r}")
    if count > len(avail):
        raise InvalidArgument(f"asked for {count} eigenvalues but only {len(avail)} are real")
    if near is None:
        chosen = avail[: int(count)]
    else:
        dist = np.abs(sol.re[avail] - near)
        chosen = np.sort(avail[np.argsort(dist, kind="stable")[: int(count)]])
    return sol.take(chosen)
