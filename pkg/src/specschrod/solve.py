"""Assemble-and-solve helpers shared by the CLI and the test-suite."""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .diffmat import chebyshev_grid
from .eig import EigConfig, EigenSolution, eig_general, eig_symmetric
from .errors import InvalidArgument
from .maps import AlgebraicMap
from .operators import (
    DiscreteOperator,
    DomainKind,
    Method,
    PotentialSpec,
    assemble_mapped_halfline,
    assemble_regular_dirichlet,
    assemble_sinc_line,
)

_DOMAIN_OF = {
    Method.CHC: DomainKind.FINITE_INTERVAL,
    Method.MAPPED_CHC: DomainKind.HALF_LINE,
    Method.SIC: DomainKind.REAL_LINE,
}


def default_method(pot: PotentialSpec) -> Method:
    for method, kind in _DOMAIN_OF.items():
        if pot.domain.kind is kind:
            return method
    raise InvalidArgument(f"no discretization for domain {pot.domain.kind}")


def assemble(
    pot: PotentialSpec,
    n: int,
    *,
    method: Optional[Method] = None,
    c: Optional[float] = None,
    h: Optional[float] = None,
) -> DiscreteOperator:
    method = method or default_method(pot)
    if _DOMAIN_OF[method] is not pot.domain.kind:
        raise InvalidArgument(f"method {method.value} does not apply to a {pot.domain.kind.value} problem")
    if method is Method.CHC:
        return assemble_regular_dirichlet(pot, n)
    if method is Method.MAPPED_CHC:
        if c is None:
            raise InvalidArgument("MappedChC needs the scaling factor c")
        return assemble_mapped_halfline(pot, AlgebraicMap(float(c)), n)
    if h is None:
        raise InvalidArgument("SiC needs the grid step h")
    return assemble_sinc_line(pot, n, float(h))


def solve(op: DiscreteOperator, cfg: Optional[EigConfig] = None) -> EigenSolution:
    """Symmetric solver for symmetric operators, the general one otherwise."""
    if op.symmetric:
        return eig_symmetric(op, cfg)
    return eig_general(op, cfg)


def assemble_and_solve(pot, n, cfg=None, **kw) -> Tuple[DiscreteOperator, EigenSolution]:
    op = assemble(pot, n, **kw)
    return op, solve(op, cfg)


def full_samples(op: DiscreteOperator, vector) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvector samples on the whole collocation grid.

    Chebyshev operators drop the two boundary nodes, where the Dirichlet
    condition makes the solution vanish; those zeros are put back so that
    the samples sit on the full Gauss-Lobatto grid (descending in ``s``).
    Returns ``(canonical nodes, samples)``.
    """
    v = np.asarray(vector, dtype=float).ravel()
    if op.method is Method.SIC:
        return np.asarray(op.interior_nodes), v
    n = v.size + 2
    return np.asarray(chebyshev_grid(n).nodes), np.concatenate([[0.0], v, [0.0]])
