"""Spectral collocation eigensolvers for regular and singular Schroedinger problems.

The equation ``-u'' + q(x) u = lambda u`` is discretized by Chebyshev
collocation on finite intervals, by Chebyshev collocation after an algebraic
map on the half-line, and by sinc collocation on the real line. Accuracy is
judged by eigenvalue drift, coefficient decay and eigenvector orthogonality.
"""

__version__ = "0.1.0"

from .diffmat import DiffOp, Grid, GridKind, chebyshev_diffmats, chebyshev_grid, sinc_diffmats, sinc_grid
from .maps import AffineMap, AlgebraicMap, algebraic_forward, algebraic_inverse, chain_factors
from .operators import (
    DiscreteOperator,
    DomainClass,
    DomainKind,
    Method,
    PotentialSpec,
    assemble_mapped_halfline,
    assemble_regular_dirichlet,
    assemble_sinc_line,
)
from .eig import EigConfig, EigenSolution, eig_general, eig_symmetric, select
from .diagnostics import (
    CoeffSpectrum,
    DriftReport,
    absolute_drift,
    cheb_coeffs,
    drift_vs_exact,
    orthogonality_deficiency,
    plateau_estimate,
    relative_drift,
)
from .problems import anharmonic, benchmark, coffey_evans, coulomb_decay, harmonic, hydrogen
from .solve import assemble, assemble_and_solve, solve
