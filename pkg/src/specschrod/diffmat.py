"""Collocation grids and dense differentiation matrices.

Two bases are supported:

* Chebyshev-Gauss-Lobatto points ``cos(j*pi/(n-1))`` on ``[-1, 1]``, stored in
  descending order (``nodes[0] == 1``), with differentiation matrices of any
  order ``1 <= k <= n-1``.
* Equispaced sinc points ``(j - (n-1)/2) * h`` on the real line, with the
  closed-form first and second derivative matrices of the cardinal functions
  ``sin(pi (x - x_k)/h) / (pi (x - x_k)/h)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidArgument, Unsupported

__all__ = [
    "GridKind",
    "Grid",
    "DiffOp",
    "chebyshev_grid",
    "chebyshev_diffmats",
    "sinc_grid",
    "sinc_diffmats",
]


class GridKind(enum.Enum):
    CHEBYSHEV_GAUSS_LOBATTO = "ChebyshevGaussLobatto"
    SINC_EQUISPACED = "SincEquispaced"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    nodes: np.ndarray
    kind: GridKind
    h: Optional[float] = None

    @property
    def n(self) -> int:
        return int(self.nodes.shape[0])


@dataclass(frozen=True)
class DiffOp:
    grid: Grid
    matrices: Tuple[np.ndarray, ...]

    @property
    def max_order(self) -> int:
        return len(self.matrices)

    def __getitem__(self, order: int) -> np.ndarray:
        """Matrix of the ``order``-th derivative (1-based)."""
        if not 1 <= order <= self.max_order:
            raise InvalidArgument(f"derivative order {order} not in 1..{self.max_order}")
        return self.matrices[order - 1]


def chebyshev_grid(n: int) -> Grid:
    """Chebyshev-Gauss-Lobatto grid with ``n`` points, from 1 down to -1."""
    if int(n) != n or n < 2:
        raise InvalidArgument(f"need n >= 2 Chebyshev points, got {n!r}")
    n = int(n)
    # sin form keeps the nodes exactly antisymmetric about 0
    nodes = np.sin(math.pi * np.arange(n - 1, -n, -2) / (2.0 * (n - 1)))
    return Grid(_frozen(nodes), GridKind.CHEBYSHEV_GAUSS_LOBATTO)


def chebyshev_diffmats(n: int, max_order: int) -> DiffOp:
    """Chebyshev differentiation matrices of orders ``1..max_order``.

    Row ``j`` of the k-th matrix applied to samples ``u(x_0..x_{n-1})`` gives
    the k-th derivative of the degree ``n-1`` interpolant at ``x_j``.

    Off-diagonal entries follow the recursion

        D_k[i, j] = k / (x_i - x_j) * (c_i/c_j (-1)^(i+j) D_{k-1}[i, i] - D_{k-1}[i, j])

    with ``c_0 = c_{n-1} = 2`` and ``c_j = 1`` otherwise, starting from the
    identity. Node differences are formed from products of sines and the
    lower half of the difference table is mirrored from the upper half, both
    to limit cancellation. Diagonals are set to minus the off-diagonal row sum.
    """
    grid = chebyshev_grid(n)
    n = grid.n
    if int(max_order) != max_order or not 1 <= max_order <= n - 1:
        raise InvalidArgument(f"max_order must lie in 1..{n - 1}, got {max_order!r}")

    theta = np.arange(n) * math.pi / (n - 1)
    half_sum = 0.5 * (theta[:, None] + theta[None, :])
    half_diff = 0.5 * (theta[None, :] - theta[:, None])
    dx = 2.0 * np.sin(half_sum) * np.sin(half_diff)  # dx[i, j] = x_i - x_j
    lo, hi = n // 2, (n + 1) // 2
    dx[lo:, :] = -np.flipud(np.fliplr(dx[:hi, :]))
    np.fill_diagonal(dx, 1.0)
    inv_dx = 1.0 / dx
    np.fill_diagonal(inv_dx, 0.0)

    sign = (-1.0) ** np.arange(n)
    cw = np.ones(n)
    cw[0] = cw[-1] = 2.0
    ratio = np.outer(cw * sign, sign / cw)

    mats = []
    d = np.eye(n)
    for k in range(1, int(max_order) + 1):
        d = k * inv_dx * (ratio * np.diag(d)[:, None] - d)
        np.fill_diagonal(d, 0.0)
        np.fill_diagonal(d, -d.sum(axis=1))
        mats.append(_frozen(d))
    return DiffOp(grid, tuple(mats))


def sinc_grid(n: int, h: float) -> Grid:
    """Equispaced grid of ``n`` points with step ``h``, symmetric about 0."""
    if int(n) != n or n < 2:
        raise InvalidArgument(f"need n >= 2 sinc points, got {n!r}")
    if not (h > 0 and math.isfinite(h)):
        raise InvalidArgument(f"sinc step h must be positive and finite, got {h!r}")
    n = int(n)
    j = np.arange(n)
    # (2j - (n-1)) is an exact integer, so node[j] == -node[n-1-j] bit for bit
    nodes = (2 * j - (n - 1)) * (0.5 * h)
    return Grid(_frozen(nodes), GridKind.SINC_EQUISPACED, float(h))


def sinc_diffmats(n: int, h: float, max_order: int = 2) -> DiffOp:
    """Closed-form sinc differentiation matrices (orders 1 and 2 only).

    Entries are the derivatives of the cardinal functions at the nodes:

    * first order: ``(-1)^(j-k) / (h (j-k))`` off the diagonal, 0 on it;
    * second order: ``-2 (-1)^(j-k) / (h^2 (j-k)^2)`` off the diagonal and
      ``-pi^2 / (3 h^2)`` on it.

    The first matrix is skew-symmetric and the second symmetric by
    construction, without rounding.
    """
    if int(max_order) != max_order or max_order < 1:
        raise InvalidArgument(f"max_order must be >= 1, got {max_order!r}")
    if max_order > 2:
        raise Unsupported("sinc differentiation matrices are available for orders 1 and 2 only")
    grid = sinc_grid(n, h)
    n = grid.n
    idx = np.arange(n)
    diff = (idx[:, None] - idx[None, :]).astype(float)
    alt = np.where(diff % 2 == 0, 1.0, -1.0)
    off = diff != 0
    safe = np.where(off, diff, 1.0)

    d1 = np.where(off, alt / (h * safe), 0.0)
    mats = [_frozen(d1)]
    if max_order == 2:
        d2 = np.where(off, -2.0 * alt / (h * h * safe * safe), -math.pi**2 / (3.0 * h * h))
        mats.append(_frozen(d2))
    return DiffOp(grid, tuple(mats))
