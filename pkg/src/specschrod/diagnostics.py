"""Accuracy diagnostics for computed eigenpairs.

* drift: how much the j-th sorted eigenvalue moves when a discretization
  parameter (``N``, ``c`` or ``h``) changes, in absolute or relative terms,
  or against a closed-form spectrum;
* coefficient spectra: Chebyshev coefficients of an eigenvector sampled on
  Gauss-Lobatto points (or the nodal values for the sinc basis) and the level
  of their rounding floor;
* orthogonality deficiency: ``|<v_i, v_j>|`` between computed eigenvectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractViolation, DivisionGuard, InvalidArgument

__all__ = [
    "DriftKind",
    "DriftReport",
    "CoeffBasis",
    "CoeffSpectrum",
    "absolute_drift",
    "relative_drift",
    "drift_vs_exact",
    "cheb_coeffs",
    "cheb_evaluate",
    "sinc_coeffs",
    "plateau_estimate",
    "orthogonality_deficiency",
]


class DriftKind(enum.Enum):
    ABSOLUTE = "Absolute"
    RELATIVE = "Relative"


@dataclass(frozen=True)
class DriftReport:
    parameter_name: str
    alpha1: Optional[float]
    alpha2: Optional[float]
    indices: np.ndarray
    drift: np.ndarray
    kind: DriftKind

    def __len__(self) -> int:
        return int(self.drift.shape[0])

    def pairs(self):
        return list(zip(self.indices.tolist(), self.drift.tolist()))


def _sorted_1d(name, lam) -> np.ndarray:
    a = np.asarray(lam, dtype=float).ravel()
    if a.size > 1 and np.any(np.diff(a) < 0):
        raise ContractViolation(f"{name} must be sorted ascending")
    return a


def _prepare(lam1, lam2, ne):
    a = _sorted_1d("lam1", lam1)
    b = _sorted_1d("lam2", lam2)
    if int(ne) != ne or ne < 0:
        raise InvalidArgument(f"Ne must be a non-negative integer, got {ne!r}")
    k = min(int(ne), a.size, b.size)
    return a[:k], b[:k]


def absolute_drift(lam1, lam2, ne: int, parameter_name: str = "N", alpha1=None, alpha2=None) -> DriftReport:
    """``|lam1[j] - lam2[j]|`` for the first ``ne`` sorted eigenvalues.

    If fewer than ``ne`` eigenvalues are available in either list the report
    is shortened accordingly.
    """
    a, b = _prepare(lam1, lam2, ne)
    return DriftReport(parameter_name, alpha1, alpha2, np.arange(a.size), np.abs(a - b), DriftKind.ABSOLUTE)


def relative_drift(lam1, lam2, ne: int, parameter_name: str = "N", alpha1=None, alpha2=None) -> DriftReport:
    """Absolute drift divided by ``|lam1[j]|``; zero reference values are rejected."""
    a, b = _prepare(lam1, lam2, ne)
    zero = np.flatnonzero(a == 0.0)
    if zero.size:
        raise DivisionGuard(f"relative drift undefined: lam1[{int(zero[0])}] == 0")
    return DriftReport(parameter_name, alpha1, alpha2, np.arange(a.size), np.abs(a - b) / np.abs(a), DriftKind.RELATIVE)


def drift_vs_exact(lam, exact: Callable[[int], float], ne: int) -> DriftReport:
    a = _sorted_1d("lam", lam)
    if int(ne) != ne or ne < 0:
        raise InvalidArgument(f"Ne must be a non-negative integer, got {ne!r}")
    k = min(int(ne), a.size)
    ref = np.array([exact(j) for j in range(k)], dtype=float)
    return DriftReport("exact", None, None, np.arange(k), np.abs(a[:k] - ref), DriftKind.ABSOLUTE)


class CoeffBasis(enum.Enum):
    CHEBYSHEV = "Chebyshev"
    SINC = "Sinc"


@dataclass(frozen=True)
class CoeffSpectrum:
    coefficients: np.ndarray
    basis: CoeffBasis
    plateau: Optional[float]

    def __len__(self) -> int:
        return int(self.coefficients.shape[0])


def _cosine_matrix(n: int) -> np.ndarray:
    # C[k, j] = cos(k j pi / (n-1)); the integer product is reduced mod 2(n-1)
    # first so large arguments do not lose digits
    k = np.arange(n)
    kj = np.outer(k, k) % (2 * (n - 1))
    return np.cos(math.pi * kj / (n - 1))


def cheb_coeffs(values, with_plateau: bool = True) -> CoeffSpectrum:
    """Chebyshev coefficients ``a_k`` of the interpolant through the samples.

    ``values[j]`` is the function at ``cos(j pi/(n-1))`` (descending Gauss-Lobatto
    order). With the end weights ``w_0 = w_{n-1} = 1/2`` and ``w_j = 1``
    otherwise,

        a_k = (2/(n-1)) * w_k * sum_j w_j f_j cos(k j pi/(n-1)),

    so that ``sum_k a_k T_k(x_j) = f_j``. Computed as a direct cosine-matrix
    product. The plateau is filled in when at least 16 samples are given.
    """
    f = np.asarray(values, dtype=float).ravel()
    n = f.size
    if n < 2:
        raise InvalidArgument("need at least two samples for a Chebyshev transform")
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    a = (2.0 / (n - 1)) * w * (_cosine_matrix(n) @ (w * f))
    spec = CoeffSpectrum(a, CoeffBasis.CHEBYSHEV, None)
    if with_plateau and n >= 16:
        return CoeffSpectrum(a, CoeffBasis.CHEBYSHEV, plateau_estimate(spec))
    return spec


def cheb_evaluate(coefficients, nodes) -> np.ndarray:
    """``sum_k a_k T_k(x)`` by Clenshaw's recurrence."""
    a = np.asarray(coefficients, dtype=float).ravel()
    x = np.asarray(nodes, dtype=float)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for ak in a[:0:-1]:
        b1, b2 = 2.0 * x * b1 - b2 + ak, b1
    return x * b1 - b2 + a[0]


def sinc_coeffs(values, with_plateau: bool = True) -> CoeffSpectrum:
    """Sinc expansion coefficients, which for a cardinal basis are the nodal values."""
    f = np.asarray(values, dtype=float).ravel().copy()
    spec = CoeffSpectrum(f, CoeffBasis.SINC, None)
    if with_plateau and f.size >= 16:
        return CoeffSpectrum(f, CoeffBasis.SINC, plateau_estimate(spec))
    return spec


def plateau_estimate(spec: CoeffSpectrum) -> float:
    """Rounding floor of a coefficient spectrum: median ``|a_k|`` over the trailing tenth."""
    a = np.abs(np.asarray(spec.coefficients, dtype=float))
    if a.size < 16:
        raise InvalidArgument(f"plateau needs at least 16 coefficients, got {a.size}")
    return float(np.median(a[-max(1, a.size // 10) :]))


def orthogonality_deficiency(vectors, i: int, norm_tol: float = 1e-8) -> np.ndarray:
    """``|<v_i, v_j>|`` for every column ``j != i`` (in column order).

    Columns must be unit vectors to within ``norm_tol``.
    """
    v = np.asarray(vectors, dtype=float)
    if v.ndim != 2:
        raise InvalidArgument("vectors must be a 2-d array with one vector per column")
    if not 0 <= i < v.shape[1]:
        raise InvalidArgument(f"reference index {i} outside 0..{v.shape[1] - 1}")
    norms = np.linalg.norm(v, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > norm_tol)
    if bad.size:
        raise ContractViolation(f"column {int(bad[0])} is not unit-normalized (norm {norms[bad[0]]!r})")
    dots = np.abs(v[:, i] @ v)
    return np.delete(dots, i)
