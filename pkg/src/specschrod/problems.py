"""Benchmark potentials and their published reference eigenvalues."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, List, Mapping, Tuple

import numpy as np

from .errors import InvalidArgument
from .operators import DomainClass, Method, PotentialSpec

__all__ = [
    "Reference",
    "BenchmarkCase",
    "coffey_evans",
    "hydrogen",
    "coulomb_decay",
    "anharmonic",
    "harmonic",
    "CATALOG",
    "benchmark",
    "list_problems",
    "load_references",
]


def coffey_evans(beta: float = 30.0) -> PotentialSpec:
    """``q(x) = -2 beta cos 2x + beta^2 sin^2 2x`` on ``[-pi/2, pi/2]``, Dirichlet ends.

    Large ``beta`` produces nearly triple eigenvalues. For ``beta = 0`` the
    problem is the Dirichlet Laplacian with eigenvalues ``(k+1)^2``.
    """
    beta = float(beta)

    def q(x):
        x = np.asarray(x, dtype=float)
        return -2.0 * beta * np.cos(2.0 * x) + beta**2 * np.sin(2.0 * x) ** 2

    exact = (lambda k: float((k + 1) ** 2)) if beta == 0.0 else None
    return PotentialSpec(
        "coffey_evans",
        q,
        DomainClass.finite(-math.pi / 2, math.pi / 2),
        {"beta": beta},
        exact,
    )


def hydrogen(l: float = 1.0) -> PotentialSpec:
    """Radial hydrogen atom, ``q(x) = -1/x + l(l+1)/x^2`` on the half-line.

    Bound states ``lambda_k = -1/(2k + 2l + 2)^2``; the positive axis is
    continuous spectrum.
    """
    l = float(l)
    cent = l * (l + 1.0)

    def q(x):
        x = np.asarray(x, dtype=float)
        return -1.0 / x + cent / x**2

    return PotentialSpec(
        "hydrogen",
        q,
        DomainClass.half_line(),
        {"l": l},
        lambda k: -1.0 / (2.0 * k + 2.0 * l + 2.0) ** 2,
    )


def coulomb_decay(l: float = 1.0) -> PotentialSpec:
    """``q(x) = -(1 - 5 exp(-2x))/x + l(l+1)/x^2``; Coulomb tail, no closed form."""
    l = float(l)
    cent = l * (l + 1.0)

    def q(x):
        x = np.asarray(x, dtype=float)
        return -(1.0 - 5.0 * np.exp(-2.0 * x)) / x + cent / x**2

    return PotentialSpec("coulomb_decay", q, DomainClass.half_line(), {"l": l})


def anharmonic(nu: float = 1.0, mu: float = 500.0) -> PotentialSpec:
    """``q(x) = x^2 + nu x^2 / (1 + mu x^2)`` on the real line."""
    nu, mu = float(nu), float(mu)
    if mu < 0:
        raise InvalidArgument(f"mu must be >= 0 (1 + mu x^2 vanishes on the real axis otherwise), got {mu}")

    def q(x):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return x2 + nu * x2 / (1.0 + mu * x2)

    exact = (lambda k: 2.0 * k + 1.0) if nu == 0.0 else None
    return PotentialSpec("anharmonic", q, DomainClass.real_line(), {"nu": nu, "mu": mu}, exact)


def harmonic() -> PotentialSpec:
    """``q(x) = x^2``; eigenvalues ``2k + 1`` for ``k = 0, 1, ...``."""

    def q(x):
        x = np.asarray(x, dtype=float)
        return x * x

    return PotentialSpec("harmonic", q, DomainClass.real_line(), {}, lambda k: 2.0 * k + 1.0)


@dataclass(frozen=True)
class Reference:
    case: str
    index: int
    value: float
    source: str

    @property
    def method(self) -> str:
        return self.source.split("+", 1)[0]

    @property
    def qualitative(self) -> bool:
        return "+qualitative" in self.source

    @property
    def inconsistent(self) -> bool:
        return "+inconsistent" in self.source


@lru_cache(maxsize=1)
def load_references() -> Tuple[Reference, ...]:
    """Parse the packaged reference file (``case,index,value,source`` per line)."""
    text = resources.files("specschrod").joinpath("data/references.txt").read_text(encoding="utf-8")
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise ValueError(f"references.txt:{lineno}: expected 4 fields, got {len(parts)}")
        case, index, value, source = parts
        out.append(Reference(case, int(index), float(value), source))
    return tuple(out)


@dataclass(frozen=True)
class BenchmarkCase:
    potential: PotentialSpec
    method: Method
    defaults: Mapping[str, float]
    references: Tuple[Reference, ...] = field(default=())

    @property
    def name(self) -> str:
        return self.potential.name

    def reference(self, index: int, source: str) -> float:
        for ref in self.references:
            if ref.index == index and ref.source.startswith(source):
                return ref.value
        raise KeyError((self.name, index, source))


_FAMILY: Dict[str, Tuple[Callable[..., PotentialSpec], Method, Dict[str, float]]] = {
    "coffey_evans": (coffey_evans, Method.CHC, {"n": 512, "ne": 201}),
    "hydrogen": (hydrogen, Method.MAPPED_CHC, {"n": 1024, "c": 2.0, "ne": 50}),
    "coulomb_decay": (coulomb_decay, Method.MAPPED_CHC, {"n": 512, "c": 2.0, "ne": 25}),
    "anharmonic": (anharmonic, Method.SIC, {"n": 500, "h": 0.1, "ne": 200}),
    "harmonic": (harmonic, Method.SIC, {"n": 200, "h": 0.2, "ne": 20}),
}

# default parameters of each family are the ones the reference values belong to
CATALOG = tuple(_FAMILY)


def benchmark(name: str, **params) -> BenchmarkCase:
    """Catalog entry ``name`` with optional potential parameter overrides.

    Reference values are attached only when the potential parameters are the
    defaults the references were computed for.
    """
    try:
        factory, method, defaults = _FAMILY[name]
    except KeyError:
        raise InvalidArgument(f"unknown problem {name!r}; known: {', '.join(CATALOG)}") from None
    try:
        pot = factory(**params)
    except TypeError as exc:
        raise InvalidArgument(f"bad parameters for {name!r}: {exc}") from None
    refs: Tuple[Reference, ...] = ()
    if pot.params == factory().params:
        refs = tuple(r for r in load_references() if r.case == name)
    return BenchmarkCase(pot, method, dict(defaults), refs)


def list_problems() -> List[Dict[str, object]]:
    rows = []
    for name in CATALOG:
        case = benchmark(name)
        rows.append(
            {
                "name": name,
                "domain": case.potential.domain.kind.value,
                "method": case.method.value,
                "params": dict(case.potential.params),
                "defaults": dict(case.defaults),
                "exact_spectrum": case.potential.exact_eigenvalues is not None,
                "references": len(case.references),
            }
        )
    return rows

