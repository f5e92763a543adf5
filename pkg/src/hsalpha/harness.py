"""Experiment driver: grid ladders, convergence tables, CSV reports.

Runs the full discrete pipeline (project the datum at mesh size dx, lift to
Lagrangian form, evolve with dissipation, push forward) against the matching
reference solution and measures

    Err_k(T) = sup over the time grid of  max |u_num - u_ref| / max |u_ref|,

with the time grid being ``time_samples`` uniform points in [0, T] together
with every breaking-event time of the numerical solution (errors peak at
events, so uniform sampling alone would understate the sup).  Experimental
orders of convergence between ladder rungs use

    eoc_k = ln(err_{k-1}/err_k) / ln(dx_{k-1}/dx_k),

left blank on the first rung and suppressed when both errors sit below the
round-off floor 1e-11.  All outputs are deterministic: identical configs
produce bit-identical CSV files (wall time lives only in the report object,
never in the CSV).
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time

import numpy as np

from .errors import ConfigError
from .eulerian import EulerianSolution, InitialDatum, eval_cumulative, make_multipeakon
from .evolution import events, evolve
from .lagrangian import to_lagrangian
from .metrics import w1
from .projection import ProjectionConfig, project
from .pushforward import to_eulerian
from .reference import ReferenceSolution, cosine_datum, cusp_datum, multipeakon_datum

__all__ = [
    "ExperimentConfig",
    "EocReport",
    "load_config",
    "config_from_dict",
    "run_solve",
    "run_eoc",
    "run_measure_rates",
    "write_solution_csv",
    "datum_for",
    "reference_for",
    "dx_of_level",
]

_EXAMPLES = ("appendixA", "cosine", "cusp", "multipeakon")
_METRICS = ("linf_u", "l2_ux", "w1", "dbl")

#: Below this error the ladder is dominated by round-off, not resolution;
#: order estimates between two such rungs are meaningless and left blank.
EOC_NOISE_FLOOR = 1e-11

DEFAULT_TIME_SAMPLES = 64


def dx_of_level(k: int) -> float:
    """Mesh size of ladder rung k (dx halves twice per rung)."""
    return 2.0 ** (-2 * k)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment.

    example selects the benchmark datum ("appendixA", "cosine", "cusp", or
    "multipeakon" with explicit points); k_range the mesh ladder
    (dx_k = 2^(-2k)); T the final time; time_samples the uniform part of the
    error-sampling grid.  metrics picks which distances reports include.
    """

    example: str
    alpha: float
    T: float
    k_range: tuple = (1, 2, 3, 4)
    time_samples: int = DEFAULT_TIME_SAMPLES
    metrics: tuple = ("linf_u",)
    out_dir: str = ""
    quad_tol: float = 1e-10
    inv_tol: float = 1e-12
    points: tuple = ()
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        if self.example not in _EXAMPLES:
            raise ConfigError(f"unknown example {self.example!r}; expected one of {_EXAMPLES}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0, 1]")
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ConfigError("T must be positive and finite")
        ks = tuple(self.k_range)
        if len(ks) == 0:
            raise ConfigError("k_range must be nonempty")
        for k in ks:
            if int(k) != k or k < 0:
                raise ConfigError("k_range entries must be integers >= 0 (so dx <= 1)")
        object.__setattr__(self, "k_range", tuple(sorted(set(int(k) for k in ks))))
        if int(self.time_samples) != self.time_samples or self.time_samples < 2:
            raise ConfigError("time_samples must be an integer >= 2")
        object.__setattr__(self, "time_samples", int(self.time_samples))
        ms = tuple(self.metrics)
        if len(ms) == 0:
            raise ConfigError("metrics must be nonempty")
        for m in ms:
            if m not in _METRICS:
                raise ConfigError(f"unknown metric {m!r}; expected subset of {_METRICS}")
        object.__setattr__(self, "metrics", ms)
        if not (self.quad_tol > 0.0 and self.inv_tol > 0.0):
            raise ConfigError("tolerances must be positive")
        if self.example == "multipeakon":
            pts = tuple((float(x), float(u)) for x, u in self.points)
            if len(pts) == 0:
                raise ConfigError("multipeakon example needs a nonempty points list")
            object.__setattr__(self, "points", pts)
        if not self.a <= self.b:
            raise ConfigError("cusp interval needs a <= b")


def config_from_dict(d: dict) -> ExperimentConfig:
    """Build a config from a JSON-style dict, rejecting unknown keys."""
    if not isinstance(d, dict):
        raise ConfigError("config root must be a JSON object")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(d) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kw = dict(d)
    for key in ("k_range", "metrics"):
        if key in kw:
            kw[key] = tuple(kw[key])
    if "points" in kw:
        kw["points"] = tuple(tuple(p) for p in kw["points"])
    try:
        return ExperimentConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def datum_for(cfg: ExperimentConfig) -> InitialDatum:
    """Initial datum selected by cfg.example."""
    if cfg.example == "appendixA":
        return multipeakon_datum()
    if cfg.example == "multipeakon":
        return make_multipeakon(cfg.points)
    if cfg.example == "cosine":
        return cosine_datum()
    return cusp_datum(cfg.a, cfg.b)


def reference_for(cfg: ExperimentConfig) -> ReferenceSolution:
    """Reference solution for cfg.example; custom multipeakon data have none."""
    if cfg.example == "appendixA":
        return ReferenceSolution(
            family="multipeakon_appA",
            alpha=cfg.alpha,
            quad_tol=cfg.quad_tol,
            inv_tol=cfg.inv_tol,
        )
    if cfg.example == "cosine":
        return ReferenceSolution(
            family="cosine", alpha=cfg.alpha, quad_tol=cfg.quad_tol, inv_tol=cfg.inv_tol
        )
    if cfg.example == "cusp":
        return ReferenceSolution(
            family="cusp",
            alpha=cfg.alpha,
            quad_tol=cfg.quad_tol,
            inv_tol=cfg.inv_tol,
            a=cfg.a,
            b=cfg.b,
        )
    raise ConfigError("no reference solution is available for a custom multipeakon example")


@dataclasses.dataclass(frozen=True)
class EocReport:
    """Ladder of errors with experimental convergence orders.

    rows hold (k, dx, err, eoc) with eoc None on the first rung and wherever
    the order estimate is suppressed; kind names the measured distance.
    wall_time is metadata only and never written to CSV.
    """

    example: str
    alpha: float
    T: float
    rows: tuple
    kind: str = "linf_u"
    wall_time: float = 0.0

    def write_csv(self, path: str) -> None:
        lines = ["k,dx,err,eoc"]
        for k, dx, err, eoc in self.rows:
            tail = "" if eoc is None else f"{eoc:.17g}"
            lines.append(f"{k:d},{dx:.17g},{err:.17g},{tail}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    def fitted_order(self, floor: float = 1e-13) -> float:
        """Least-squares slope of ln(err) against ln(dx) over usable rungs."""
        pts = [(dx, err) for _, dx, err, _ in self.rows if err > floor]
        if len(pts) < 2:
            raise ConfigError("need at least two rungs above the floor to fit an order")
        lx = np.log([p[0] for p in pts])
        ly = np.log([p[1] for p in pts])
        return float(np.polyfit(lx, ly, 1)[0])


def _attach_eoc(triples):
    rows = []
    prev = None
    for k, dx, err in triples:
        eoc = None
        if prev is not None:
            _, pdx, perr = prev
            noise = err < EOC_NOISE_FLOOR and perr < EOC_NOISE_FLOOR
            if not noise and err > 0.0 and perr > 0.0:
                eoc = math.log(perr / err) / math.log(pdx / dx)
        rows.append((k, dx, err, eoc))
        prev = (k, dx, err)
    return tuple(rows)


def _pipeline_state(cfg: ExperimentConfig, dx: float):
    datum = datum_for(cfg)
    projected = project(datum, ProjectionConfig(dx=dx))
    return to_lagrangian(projected, alpha=cfg.alpha)


def _merged_times(s, t_list):
    ts = np.asarray(t_list, dtype=float)
    if ts.size == 0:
        raise ConfigError("t_list must be nonempty")
    if np.any(~np.isfinite(ts)) or np.any(ts < 0.0):
        raise ConfigError("t_list entries must be finite and nonnegative")
    if np.any(np.diff(ts) < 0.0):
        raise ConfigError("t_list must be nondecreasing")
    ev = events(s, float(ts[-1]))
    return np.union1d(ts, np.asarray(ev.times, dtype=float))


def run_solve(cfg: ExperimentConfig, dx: float, t_list) -> list:
    """Full pipeline at one mesh size, returning Eulerian snapshots.

    Projects cfg's datum at mesh size dx, evolves through the nondecreasing
    times in t_list, and returns the pushed-forward solution at each time.
    Breaking-event times up to max(t_list) are inserted automatically, so the
    returned list may be longer than t_list; each snapshot carries its time.
    """
    s = _pipeline_state(cfg, dx)
    out = []
    for t in _merged_times(s, t_list):
        s = evolve(s, float(t))
        out.append(to_eulerian(s))
    return out


def _sup_rel_err(sol: EulerianSolution, prof) -> float:
    xs = sol.u.nodes
    if prof.knots is not None:
        xs = np.union1d(xs, prof.knots)
    diff = np.abs(sol.u(xs) - prof.u_at(xs))
    den = float(np.max(np.abs(prof.u_at(xs))))
    return float(np.max(diff)) / max(den, 1e-300)


def _profile_for(ref: ReferenceSolution, t: float, sol: EulerianSolution):
    n_base = max(4001, 3 * sol.u.nodes.size)
    return ref.profile(
        t, x_lo=float(sol.u.nodes[0]), x_hi=float(sol.u.nodes[-1]), n_base=n_base
    )


def run_eoc(cfg: ExperimentConfig) -> EocReport:
    """Convergence study of the sup-in-time relative wave-profile error."""
    t0 = time.perf_counter()
    ref = reference_for(cfg)
    samples = np.linspace(0.0, cfg.T, cfg.time_samples)
    triples = []
    for k in cfg.k_range:
        dx = dx_of_level(k)
        s = _pipeline_state(cfg, dx)
        grid = _merged_times(s, samples)
        worst = 0.0
        for t in grid:
            s = evolve(s, float(t))
            sol = to_eulerian(s)
            prof = _profile_for(ref, float(t), sol)
            worst = max(worst, _sup_rel_err(sol, prof))
        triples.append((k, dx, worst))
    report = EocReport(
        example=cfg.example,
        alpha=cfg.alpha,
        T=cfg.T,
        rows=_attach_eoc(triples),
        kind="linf_u",
        wall_time=time.perf_counter() - t0,
    )
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        report.write_csv(os.path.join(cfg.out_dir, _report_name(cfg, "eoc")))
    return report


def run_measure_rates(cfg: ExperimentConfig) -> EocReport:
    """Wasserstein-1 distance between numerical and reference energy measures.

    Only meaningful when no energy is dissipated (the distance needs equal
    masses), so alpha must be 0.  The probe time is cfg.T; the fitted order
    over the ladder is available via EocReport.fitted_order().
    """
    if cfg.alpha != 0.0:
        raise ConfigError("measure-rate runs need alpha = 0 (equal-mass transport)")
    t0 = time.perf_counter()
    ref = reference_for(cfg)
    probe = cfg.T
    triples = []
    for k in cfg.k_range:
        dx = dx_of_level(k)
        sols = run_solve(cfg, dx, [probe])
        sol = sols[-1]
        prof = _profile_for(ref, probe, sol)
        dist = w1(prof.measure(), sol.mu)
        triples.append((k, dx, dist))
    report = EocReport(
        example=cfg.example,
        alpha=cfg.alpha,
        T=cfg.T,
        rows=_attach_eoc(triples),
        kind="w1",
        wall_time=time.perf_counter() - t0,
    )
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        report.write_csv(os.path.join(cfg.out_dir, _report_name(cfg, "w1")))
    return report


def _report_name(cfg: ExperimentConfig, kind: str) -> str:
    return f"{kind}_{cfg.example}_alpha{cfg.alpha:g}_T{cfg.T:g}.csv"


def write_solution_csv(sol: EulerianSolution, path: str) -> None:
    """Write one snapshot as CSV columns x,u,F (17 significant digits).

    At an atom the cumulative jumps; the file records both one-sided values
    as two consecutive rows with the same x.
    """
    atom_pos = sol.mu.atom_positions
    xs = np.union1d(sol.u.nodes, atom_pos)
    lines = ["x,u,F"]
    for x in xs:
        u_val = float(sol.u(x))
        left = eval_cumulative(sol.mu, float(x), side="left")
        lines.append(f"{x:.17g},{u_val:.17g},{left:.17g}")
        if atom_pos.size and np.any(atom_pos == x):
            right = eval_cumulative(sol.mu, float(x), side="right")
            lines.append(f"{x:.17g},{u_val:.17g},{right:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
