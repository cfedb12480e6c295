"""Coordinate maps from the canonical interval ``[-1, 1]``.

``AlgebraicMap`` sends ``s in [-1, 1)`` onto the half-line by
``x = c (1 + s) / (1 - s)``; ``AffineMap`` places ``[-1, 1]`` onto ``[a, b]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgument

__all__ = [
    "AlgebraicMap",
    "AffineMap",
    "algebraic_forward",
    "algebraic_inverse",
    "chain_factors",
]


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


@dataclass(frozen=True)
class AlgebraicMap:
    """Half-line map with scaling factor ``c > 0``.

    Larger ``c`` pushes the interior nodes further out along the half-line.
    """

    c: float

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InvalidArgument(f"scaling factor c must be positive and finite, got {self.c!r}")

    def forward(self, s):
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr >= 1.0):
            raise DomainError("s = 1 maps to the point at infinity")
        if np.any(s_arr < -1.0) or np.any(np.isnan(s_arr)):
            raise DomainError("s must lie in [-1, 1)")
        return _scalar_or_array(self.c * (1.0 + s_arr) / (1.0 - s_arr), s)

    def inverse(self, x):
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr < 0.0) or np.any(np.isnan(x_arr)):
            raise DomainError("the algebraic map is only defined for x >= 0")
        return _scalar_or_array((x_arr - self.c) / (x_arr + self.c), x)

    def chain_factors(self, s):
        """First and second derivatives of the map, ``dx/ds`` and ``d2x/ds2``.

        For ``u(x(s))`` they give ``u_x = u_s / x_s`` and
        ``u_xx = u_ss / x_s**2 - u_s * x_ss / x_s**3``. Both are finite at
        the origin ``s = -1`` but not at ``s = 1``.
        """
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr >= 1.0) or np.any(s_arr < -1.0) or np.any(np.isnan(s_arr)):
            raise DomainError("chain factors need nodes in [-1, 1)")
        one_minus = 1.0 - s_arr
        dxds = 2.0 * self.c / one_minus**2
        d2xds2 = 4.0 * self.c / one_minus**3
        return _scalar_or_array(dxds, s), _scalar_or_array(d2xds2, s)


@dataclass(frozen=True)
class AffineMap:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise InvalidArgument(f"need finite a < b, got [{self.a!r}, {self.b!r}]")

    @property
    def scale(self) -> float:
        """``dx/ds``, i.e. half the interval length."""
        return 0.5 * (self.b - self.a)

    def forward(self, s):
        s_arr = np.asarray(s, dtype=float)
        return _scalar_or_array(0.5 * (self.a + self.b) + self.scale * s_arr, s)

    def inverse(self, x):
        x_arr = np.asarray(x, dtype=float)
        return _scalar_or_array((x_arr - 0.5 * (self.a + self.b)) / self.scale, x)


def algebraic_forward(cmap: AlgebraicMap, s):
    return cmap.forward(s)


def algebraic_inverse(cmap: AlgebraicMap, x):
    return cmap.inverse(x)


def chain_factors(cmap: AlgebraicMap, s_nodes):
    return cmap.chain_factors(s_nodes)
