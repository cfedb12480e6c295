"""Dense collocation matrices for ``-u'' + q(x) u = lambda u``.

Three discretizations are assembled:

``ChC``
    Chebyshev collocation on a finite interval ``[a, b]`` with homogeneous
    Dirichlet conditions.
``MappedChC``
    Chebyshev collocation in ``s`` after the algebraic map
    ``x = c (1 + s)/(1 - s)`` onto ``[0, inf)``; ``u(0) = 0`` and decay at
    infinity become ``u(-1) = u(1) = 0``.
``SiC``
    Sinc collocation on the whole real line; decay at infinity is built into
    the cardinal basis, so no boundary rows are touched.

For both Chebyshev variants the Dirichlet conditions are imposed by dropping
the first and last rows and columns of the collocation matrix. Because the
potential is only sampled on the remaining interior nodes, endpoint
singularities (``x = 0`` or ``x = inf``) never enter the matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .diffmat import chebyshev_diffmats, sinc_diffmats
from .errors import AssemblyError, InvalidArgument
from .maps import AffineMap, AlgebraicMap

__all__ = [
    "DomainKind",
    "DomainClass",
    "PotentialSpec",
    "Method",
    "DiscreteOperator",
    "assemble_regular_dirichlet",
    "assemble_mapped_halfline",
    "assemble_sinc_line",
]


class DomainKind(enum.Enum):
    FINITE_INTERVAL = "FiniteInterval"
    HALF_LINE = "HalfLine"
    REAL_LINE = "RealLine"


@dataclass(frozen=True)
class DomainClass:
    kind: DomainKind
    a: Optional[float] = None
    b: Optional[float] = None

    @classmethod
    def finite(cls, a: float, b: float) -> "DomainClass":
        return cls(DomainKind.FINITE_INTERVAL, float(a), float(b))

    @classmethod
    def half_line(cls) -> "DomainClass":
        return cls(DomainKind.HALF_LINE, 0.0, math.inf)

    @classmethod
    def real_line(cls) -> "DomainClass":
        return cls(DomainKind.REAL_LINE, -math.inf, math.inf)


@dataclass(frozen=True)
class PotentialSpec:
    """A potential ``q(x)`` together with its domain.

    ``q`` must accept a numpy array and act elementwise. ``exact_eigenvalues``
    maps a 0-based index to the closed-form eigenvalue when one is known.
    """

    name: str
    q: Callable[[np.ndarray], np.ndarray]
    domain: DomainClass
    params: Mapping[str, float] = field(default_factory=dict)
    exact_eigenvalues: Optional[Callable[[int], float]] = None

    def __call__(self, x):
        return self.q(x)


class Method(enum.Enum):
    CHC = "ChC"
    MAPPED_CHC = "MappedChC"
    SIC = "SiC"


@dataclass(frozen=True)
class DiscreteOperator:
    matrix: np.ndarray
    interior_nodes: np.ndarray
    symmetric: bool
    method: Method
    meta: Mapping[str, object]

    @property
    def m(self) -> int:
        return int(self.matrix.shape[0])


def _sample_potential(pot: PotentialSpec, x: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        q = np.asarray(pot.q(x), dtype=float)
    if q.shape != x.shape:
        q = np.broadcast_to(q, x.shape).astype(float)
    bad = ~np.isfinite(q)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise AssemblyError(
            f"potential {pot.name!r} is not finite at interior node {j} (x = {float(x[j])!r})"
        )
    return q


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_n(n: int, minimum: int = 4) -> int:
    if int(n) != n or n < minimum:
        raise InvalidArgument(f"need n >= {minimum} collocation points, got {n!r}")
    return int(n)


def _meta(pot: PotentialSpec, **extra) -> dict:
    meta = {"potential": pot.name, "params": dict(pot.params)}
    meta.update(extra)
    return meta


def assemble_regular_dirichlet(pot: PotentialSpec, n: int) -> DiscreteOperator:
    """Chebyshev collocation with ``u(a) = u(b) = 0`` on a finite interval.

    The returned ``(n-2) x (n-2)`` matrix is the interior block of
    ``-(2/(b-a))**2 D2 + diag(q)``; it is not symmetric.
    """
    n = _check_n(n)
    if pot.domain.kind is not DomainKind.FINITE_INTERVAL:
        raise InvalidArgument(f"{pot.name!r} is not posed on a finite interval")
    amap = AffineMap(pot.domain.a, pot.domain.b)
    dops = chebyshev_diffmats(n, 2)
    inner = slice(1, n - 1)
    x = amap.forward(np.asarray(dops.grid.nodes[inner]))
    q = _sample_potential(pot, x)

    a = -dops[2][inner, inner] / amap.scale**2
    a[np.diag_indices_from(a)] += q
    return DiscreteOperator(
        _frozen(a),
        _frozen(x),
        False,
        Method.CHC,
        _meta(pot, n=n, a=amap.a, b=amap.b),
    )


def assemble_mapped_halfline(pot: PotentialSpec, cmap: AlgebraicMap, n: int) -> DiscreteOperator:
    """Mapped Chebyshev collocation for a half-line problem.

    In the canonical variable the operator reads

        -(u_ss / x_s**2 - u_s x_ss / x_s**3) + q(x(s)) u

    with ``x_s = 2c/(1-s)**2`` and ``x_ss = 4c/(1-s)**3``. Rows and columns
    belonging to ``s = 1`` (infinity) and ``s = -1`` (origin) are removed.
    """
    n = _check_n(n)
    if pot.domain.kind is not DomainKind.HALF_LINE:
        raise InvalidArgument(f"{pot.name!r} is not posed on the half-line")
    dops = chebyshev_diffmats(n, 2)
    inner = slice(1, n - 1)
    s = np.asarray(dops.grid.nodes[inner])
    x = cmap.forward(s)
    xs, xss = cmap.chain_factors(s)
    q = _sample_potential(pot, x)

    a = (-1.0 / xs**2)[:, None] * dops[2][inner, inner]
    a += (xss / xs**3)[:, None] * dops[1][inner, inner]
    a[np.diag_indices_from(a)] += q
    return DiscreteOperator(
        _frozen(a),
        _frozen(x),
        False,
        Method.MAPPED_CHC,
        _meta(pot, n=n, c=cmap.c),
    )


def assemble_sinc_line(pot: PotentialSpec, n: int, h: float) -> DiscreteOperator:
    """Sinc collocation ``-D2 + diag(q)`` on the full grid; exactly symmetric."""
    n = _check_n(n)
    if pot.domain.kind is not DomainKind.REAL_LINE:
        raise InvalidArgument(f"{pot.name!r} is not posed on the real line")
    dops = sinc_diffmats(n, h, 2)
    x = np.asarray(dops.grid.nodes)
    q = _sample_potential(pot, x)

    a = -dops[2]
    a[np.diag_indices_from(a)] += q
    return DiscreteOperator(
        _frozen(a),
        _frozen(x),
        True,
        Method.SIC,
        _meta(pot, n=n, h=float(h)),
    )
