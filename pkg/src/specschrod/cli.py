"""Batch front-end.

Usage::

    specschrod solve|drift|coeffs|orth|sweep-c|list-problems \\
        (--config run.json | --problem NAME) [--out DIR] [--n 256,512] [--c 2] [--h 0.1] [--ne 100]

The config is a JSON object, e.g.::

    {"problem": {"name": "coffey_evans", "params": {"beta": 30}},
     "n": [256, 512], "ne": 100, "output_dir": "out/ce"}

Command-line flags override the scalar config fields; ``SPECSCHROD_OUT``
overrides the output directory of the config file (``--out`` wins over both).
All tables are comma-separated with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .diagnostics import (
    CoeffSpectrum,
    DriftReport,
    absolute_drift,
    cheb_coeffs,
    drift_vs_exact,
    orthogonality_deficiency,
    sinc_coeffs,
)
from .eig import BACKENDS, EigConfig, EigenSolution
from .errors import ConvergenceError, SpecSchrodError, UsageError
from .operators import DiscreteOperator, Method
from .problems import BenchmarkCase, benchmark, list_problems
from .solve import assemble, full_samples, solve

ENV_OUT = "SPECSCHROD_OUT"
ARTIFACTS = ("eigenvalues", "drift", "coeffs", "orthogonality")

EXIT_CODES = {
    "usage-error": 2,
    "invalid-argument": 2,
    "domain-error": 2,
    "unsupported": 2,
    "assembly-error": 3,
    "convergence-error": 4,
    "contract-violation": 5,
    "division-guard": 5,
}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    problem: str
    params: Dict[str, float] = field(default_factory=dict)
    method: Optional[str] = None
    n: List[int] = field(default_factory=list)
    c: List[float] = field(default_factory=list)
    h: List[float] = field(default_factory=list)
    ne: Optional[int] = None
    outputs: List[str] = field(default_factory=list)
    output_dir: str = "."
    modes: List[int] = field(default_factory=lambda: [0, 1, 2, 3])
    reference_index: int = 0
    orth_count: Optional[int] = None
    backend: str = EigConfig.backend
    tol_im: float = EigConfig.tol_im
    debug_vector: Optional[str] = None

    def case(self) -> BenchmarkCase:
        return benchmark(self.problem, **self.params)

    def eig_config(self, vectors: bool = True) -> EigConfig:
        return EigConfig(tol_im=self.tol_im, backend=self.backend, compute_vectors=vectors)


@dataclass
class ResultBundle:
    command: str
    config: RunConfig
    eigenvalues: List[Dict[str, Any]] = field(default_factory=list)
    complex_eigenvalues: List[Dict[str, Any]] = field(default_factory=list)
    drift: List[DriftReport] = field(default_factory=list)
    drift_exact: List[DriftReport] = field(default_factory=list)
    coeffs: Dict[int, CoeffSpectrum] = field(default_factory=dict)
    deficiency: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)


# -- config handling ---------------------------------------------------------


def _as_list(name, value, kind):
    if value is None:
        return []
    items = value if isinstance(value, (list, tuple)) else [value]
    out = []
    for item in items:
        try:
            if kind is int:
                if isinstance(item, bool) or float(item) != int(float(item)):
                    raise ValueError
                out.append(int(float(item)))
            else:
                out.append(float(item))
        except (TypeError, ValueError):
            raise UsageError(f"config field {name!r}: cannot read {item!r} as {kind.__name__}") from None
    return out


def _split(text: str) -> List[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def load_config(raw: Dict[str, Any]) -> RunConfig:
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise UsageError(f"config field {unknown[0]!r} is not recognised")
    prob = raw.get("problem")
    params = dict(raw.get("params") or {})
    if isinstance(prob, dict):
        params.update(prob.get("params") or {})
        prob = prob.get("name")
    if not isinstance(prob, str):
        raise UsageError("config field 'problem' must name a catalog problem")
    cfg = RunConfig(problem=prob, params=params)
    cfg.method = raw.get("method")
    cfg.n = _as_list("n", raw.get("n"), int)
    cfg.c = _as_list("c", raw.get("c"), float)
    cfg.h = _as_list("h", raw.get("h"), float)
    if raw.get("ne") is not None:
        cfg.ne = _as_list("ne", raw["ne"], int)[0]
    outputs = raw.get("outputs") or []
    for item in outputs:
        if item not in ARTIFACTS:
            raise UsageError(f"config field 'outputs': unknown artifact {item!r}")
    cfg.outputs = list(outputs)
    cfg.output_dir = str(raw.get("output_dir", "."))
    if raw.get("modes") is not None:
        cfg.modes = _as_list("modes", raw["modes"], int)
    if raw.get("reference_index") is not None:
        cfg.reference_index = _as_list("reference_index", raw["reference_index"], int)[0]
    if raw.get("orth_count") is not None:
        cfg.orth_count = _as_list("orth_count", raw["orth_count"], int)[0]
    cfg.backend = raw.get("backend", cfg.backend)
    if raw.get("tol_im") is not None:
        cfg.tol_im = _as_list("tol_im", raw["tol_im"], float)[0]
    cfg.debug_vector = raw.get("debug_vector")
    return cfg


def _finalize(cfg: RunConfig) -> RunConfig:
    """Fill defaults from the catalog and validate field by field."""
    try:
        case = cfg.case()
    except SpecSchrodError as exc:
        raise UsageError(f"config field 'problem': {exc}") from None
    defaults = case.defaults
    if cfg.method is None:
        cfg.method = case.method.value
    try:
        method = Method(cfg.method)
    except ValueError:
        raise UsageError(f"config field 'method': unknown method {cfg.method!r}") from None
    if method is not case.method:
        raise UsageError(f"config field 'method': {method.value} does not apply to {cfg.problem!r}")
    if not cfg.n:
        cfg.n = [int(defaults["n"])]
    if method is Method.MAPPED_CHC and not cfg.c:
        cfg.c = [float(defaults["c"])]
    if method is Method.SIC and not cfg.h:
        cfg.h = [float(defaults["h"])]
    if cfg.ne is None:
        cfg.ne = int(defaults["ne"])
    if cfg.ne < 1:
        raise UsageError("config field 'ne' must be >= 1")
    if any(n < 4 for n in cfg.n):
        raise UsageError("config field 'n': every n must be >= 4")
    if any(c <= 0 for c in cfg.c):
        raise UsageError("config field 'c': scaling factors must be positive")
    if any(h <= 0 for h in cfg.h):
        raise UsageError("config field 'h': grid steps must be positive")
    if cfg.backend not in BACKENDS:
        raise UsageError(f"config field 'backend': use one of {BACKENDS}")
    if cfg.tol_im <= 0:
        raise UsageError("config field 'tol_im' must be positive")
    if sum(len(v) > 1 for v in (cfg.n, cfg.c, cfg.h)) > 1:
        raise UsageError("only one of 'n', 'c', 'h' may list several values in one run")
    return cfg


def _single(cfg: RunConfig, name: str):
    values = getattr(cfg, name)
    if len(values) > 1:
        raise UsageError(f"config field {name!r}: this command takes a single value, got {values}")
    return values[0] if values else None


def _disc(cfg: RunConfig, n=None, c=None, h=None) -> Dict[str, Any]:
    return {
        "n": n if n is not None else _single(cfg, "n"),
        "c": c if c is not None else _single(cfg, "c"),
        "h": h if h is not None else _single(cfg, "h"),
    }


# -- pipelines ---------------------------------------------------------------


def _solve(cfg: RunConfig, vectors: bool, n=None, c=None, h=None):
    case = cfg.case()
    d = _disc(cfg, n, c, h)
    op = assemble(case.potential, d["n"], method=Method(cfg.method), c=d["c"], h=d["h"])
    try:
        sol = solve(op, cfg.eig_config(vectors))
    except ConvergenceError as exc:
        where = ", ".join(f"{k}={v}" for k, v in d.items() if v is not None)
        raise ConvergenceError(f"{cfg.problem} ({cfg.method}, {where}): {exc}", exc.index) from None
    return op, sol, d


def _real_part(sol: EigenSolution) -> EigenSolution:
    return sol.take(np.flatnonzero(sol.real_flags))


def _eig_rows(sol: EigenSolution, count: int) -> List[Dict[str, Any]]:
    rows = []
    for j in range(min(count, len(sol))):
        rows.append(
            {
                "index": j,
                "re": float(sol.re[j]),
                "im": float(sol.im[j]),
                "residual": None if sol.residuals is None else float(sol.residuals[j]),
                "real_flag": bool(sol.real_flags[j]),
            }
        )
    return rows


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (fmt(v) if isinstance(v, (float, np.floating)) else v) for v in row])
    path.write_bytes(buf.getvalue().encode("utf-8"))


def _write_eigs(out: Path, name: str, rows) -> None:
    _write_csv(
        out / name,
        ["index", "re", "im", "residual", "real_flag"],
        [[r["index"], r["re"], r["im"], r["residual"], "true" if r["real_flag"] else "false"] for r in rows],
    )


def _coeff_spectrum(op: DiscreteOperator, vector) -> CoeffSpectrum:
    _, samples = full_samples(op, vector)
    if op.method is Method.SIC:
        return sinc_coeffs(samples)
    return cheb_coeffs(samples)


def _do_coeffs(bundle: ResultBundle, op, sol: EigenSolution, out: Path) -> None:
    cfg = bundle.config
    if cfg.debug_vector is not None:
        if cfg.debug_vector != "constant":
            raise UsageError(f"config field 'debug_vector': unknown hook {cfg.debug_vector!r}")
        n = op.m + (0 if op.method is Method.SIC else 2)
        spec = cheb_coeffs(np.ones(n)) if op.method is not Method.SIC else sinc_coeffs(np.ones(n))
        bundle.coeffs[0] = spec
        labels = {0: float("nan")}
    else:
        labels = {}
        for mode in cfg.modes:
            if not 0 <= mode < min(cfg.ne, len(sol)):
                raise UsageError(f"config field 'modes': index {mode} outside 0..{min(cfg.ne, len(sol)) - 1}")
            bundle.coeffs[mode] = _coeff_spectrum(op, sol.vectors[:, mode])
            labels[mode] = float(sol.re[mode])
    rows = []
    for mode, spec in bundle.coeffs.items():
        rows.extend([mode, k, float(abs(a))] for k, a in enumerate(spec.coefficients))
    _write_csv(out / "coeffs.csv", ["mode", "k", "abs_coeff"], rows)
    _write_csv(
        out / "plateau.csv",
        ["mode", "eigenvalue", "plateau"],
        [[mode, labels[mode], spec.plateau] for mode, spec in bundle.coeffs.items()],
    )
    bundle.files += ["coeffs.csv", "plateau.csv"]


def _do_orth(bundle: ResultBundle, sol: EigenSolution, out: Path) -> None:
    cfg = bundle.config
    count = min(cfg.orth_count or cfg.ne, len(sol))
    i = cfg.reference_index
    if not 0 <= i < count:
        raise UsageError(f"config field 'reference_index': {i} outside 0..{count - 1}")
    dev = orthogonality_deficiency(sol.vectors[:, :count], i)
    bundle.deficiency = dev
    js = [j for j in range(count) if j != i]
    _write_csv(out / "orth.csv", ["j", "deficiency"], [[j, float(d)] for j, d in zip(js, dev)])
    bundle.files.append("orth.csv")


def run_solve(cfg: RunConfig, out: Path, command: str = "solve", extra: Sequence[str] = ()) -> ResultBundle:
    cfg = _finalize(cfg)
    bundle = ResultBundle(command, cfg)
    t0 = time.perf_counter()
    op, sol, disc = _solve(cfg, vectors=True)
    real = _real_part(sol)
    if len(real) < cfg.ne:
        raise UsageError(f"config field 'ne': only {len(real)} real eigenvalues available")
    bundle.eigenvalues = _eig_rows(real, cfg.ne)
    cplx = sol.take(np.flatnonzero(~sol.real_flags))
    bundle.complex_eigenvalues = _eig_rows(cplx, len(cplx))
    out.mkdir(parents=True, exist_ok=True)
    _write_eigs(out, "eigenvalues.csv", bundle.eigenvalues)
    bundle.files.append("eigenvalues.csv")
    if bundle.complex_eigenvalues:
        _write_eigs(out, "complex_eigenvalues.csv", bundle.complex_eigenvalues)
        bundle.files.append("complex_eigenvalues.csv")
    wanted = set(cfg.outputs) | set(extra)
    if "coeffs" in wanted:
        _do_coeffs(bundle, op, real, out)
    if "orthogonality" in wanted:
        _do_orth(bundle, real, out)
    bundle.metadata.update(
        discretization=disc,
        m=op.m,
        symmetric=op.symmetric,
        max_residual=float(np.max(real.residuals[: cfg.ne])),
        matrix_norm=sol.norm,
        complex_count=len(cplx),
        wall_time=time.perf_counter() - t0,
    )
    _write_meta(bundle, out)
    return bundle


def run_coeffs(cfg: RunConfig, out: Path) -> ResultBundle:
    return run_solve(cfg, out, "coeffs", extra=("coeffs",))


def run_orth(cfg: RunConfig, out: Path) -> ResultBundle:
    return run_solve(cfg, out, "orth", extra=("orthogonality",))


def _sweep_param(cfg: RunConfig):
    for name in ("n", "c", "h"):
        if len(getattr(cfg, name)) > 1:
            return name
    raise UsageError("drift needs at least two values of 'n', 'c' or 'h'")


def run_drift(cfg: RunConfig, out: Path, command: str = "drift") -> ResultBundle:
    cfg = _finalize(cfg)
    param = _sweep_param(cfg)
    bundle = ResultBundle(command, cfg)
    case = cfg.case()
    t0 = time.perf_counter()
    spectra = {}
    for value in getattr(cfg, param):
        if value in spectra:
            continue
        _, sol, _ = _solve(cfg, vectors=False, **{param: value})
        spectra[value] = sol.real_values()
    values = getattr(cfg, param)
    rows = []
    for a1, a2 in zip(values[:-1], values[1:]):
        lam1, lam2 = spectra[a1], spectra[a2]
        rep = absolute_drift(lam1, lam2, cfg.ne, param, a1, a2)
        bundle.drift.append(rep)
        for j, delta in zip(rep.indices, rep.drift):
            rel = delta / abs(lam1[j]) if lam1[j] != 0 else None
            rows.append([param, float(a1) if param != "n" else a1, float(a2) if param != "n" else a2, int(j), float(delta), rel])
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "drift.csv", ["parameter", "alpha1", "alpha2", "index", "delta_abs", "delta_rel"], rows)
    bundle.files.append("drift.csv")

    exact = case.potential.exact_eigenvalues
    if exact is not None:
        erows = []
        for value in dict.fromkeys(values):
            rep = drift_vs_exact(spectra[value], exact, cfg.ne)
            bundle.drift_exact.append(rep)
            for j, delta in zip(rep.indices, rep.drift):
                erows.append([param, value if param == "n" else float(value), int(j), float(exact(int(j))), float(spectra[value][j]), float(delta)])
        _write_csv(out / "drift_exact.csv", ["parameter", "alpha", "index", "exact", "value", "delta"], erows)
        bundle.files.append("drift_exact.csv")

    if command == "sweep-c":
        srows = []
        for rep in bundle.drift:
            srows.append([float(rep.alpha1), float(rep.alpha2), float(np.max(rep.drift)), float(np.median(rep.drift))])
        _write_csv(out / "sweep.csv", ["c1", "c2", "max_abs_drift", "median_abs_drift"], srows)
        bundle.files.append("sweep.csv")

    bundle.metadata.update(parameter=param, values=list(values), wall_time=time.perf_counter() - t0)
    _write_meta(bundle, out)
    return bundle


def run_sweep_c(cfg: RunConfig, out: Path) -> ResultBundle:
    if Method(_finalize(cfg).method) is not Method.MAPPED_CHC:
        raise UsageError("sweep-c applies to half-line problems (MappedChC) only")
    if len(cfg.c) < 2:
        raise UsageError("config field 'c': sweep-c needs at least two scaling factors")
    return run_drift(cfg, out, "sweep-c")


def _write_meta(bundle: ResultBundle, out: Path) -> None:
    meta = {
        "command": bundle.command,
        "version": __version__,
        "config": asdict(bundle.config),
        "files": bundle.files,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    meta.update(bundle.metadata)
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


# -- entry point ---------------------------------------------------------------


COMMANDS = {
    "solve": run_solve,
    "drift": run_drift,
    "coeffs": run_coeffs,
    "orth": run_orth,
    "sweep-c": run_sweep_c,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="specschrod", description="Spectral collocation eigensolver for Schroedinger problems.")
    p.add_argument("command", choices=list(COMMANDS) + ["list-problems"])
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--problem", help="catalog problem to run with its default settings (instead of --config)")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--n", help="collocation size, or a comma list for drift runs")
    p.add_argument("--c", help="half-line scaling factor, or a comma list")
    p.add_argument("--h", help="sinc grid step")
    p.add_argument("--ne", help="number of eigenvalues to report")
    p.add_argument("--backend", choices=BACKENDS, help="eigensolver backend")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _apply_flags(raw: Dict[str, Any], args) -> Dict[str, Any]:
    raw = dict(raw)
    for name in ("n", "c", "h"):
        text = getattr(args, name)
        if text is not None:
            raw[name] = _split(text)
    if args.ne is not None:
        raw["ne"] = args.ne
    if args.backend is not None:
        raw["backend"] = args.backend
    return raw


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "list-problems":
            json.dump(list_problems(), sys.stdout, indent=2)
            sys.stdout.write("\n")
            return 0
        if args.config is None and args.problem is None:
            raise UsageError(f"{args.command} needs --config or --problem")
        raw: Dict[str, Any] = {}
        if args.config is not None:
            try:
                raw = json.loads(args.config.read_text())
            except OSError as exc:
                raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if args.problem is not None and isinstance(raw, dict):
            # --problem replaces the config's problem together with its parameters
            raw = {k: v for k, v in raw.items() if k not in ("problem", "params")}
            raw["problem"] = args.problem
        cfg = load_config(_apply_flags(raw, args))
        out = Path(args.out or os.environ.get(ENV_OUT) or cfg.output_dir)
        bundle = COMMANDS[args.command](cfg, out)
        print(f"wrote {', '.join(bundle.files + ['meta.json'])} to {out}")
        return 0
    except SpecSchrodError as exc:
        print(f"specschrod: error[{exc.category}]: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)


if __name__ == "__main__":
    sys.exit(main())
