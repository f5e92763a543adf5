r"""Eulerian-side data structures for the Hunter--Saxton equation.

A state of the :math:`\alpha`-dissipative Hunter--Saxton flow is a pair
``(u, mu)`` where ``u`` is the wave profile and ``mu`` is the energy measure.
Here ``u`` is piecewise linear with constant extensions, and ``mu`` splits
into an absolutely continuous part with cumulative ``F_ac`` (density
:math:`u_x^2`) plus finitely many atoms.  The cumulative

.. math::

    F(x) = \mu((-\infty, x))

is left continuous; both one-sided limits are exposed via
:func:`eval_cumulative`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError

__all__ = [
    "PiecewiseLinear",
    "PiecewiseConstant",
    "EnergyMeasure",
    "InitialDatum",
    "EulerianSolution",
    "ValidationReport",
    "eval_cumulative",
    "make_multipeakon",
    "validate",
]

_REL_SLACK = 1e-12


@dataclass(frozen=True)
class PiecewiseLinear:
    """Piecewise-linear function with constant extension outside its nodes."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be 1-d arrays of equal length")
        if nodes.size == 0:
            raise ValueError("need at least one node")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
            raise ValueError("nodes and values must be finite")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")

    @property
    def left_value(self) -> float:
        return float(self.values[0])

    @property
    def right_value(self) -> float:
        return float(self.values[-1])

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.nodes)

    def __call__(self, x):
        return np.interp(x, self.nodes, self.values)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Step function: ``values[i]`` on ``[breaks[i], breaks[i+1])``, 0 outside."""

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        breaks = np.ascontiguousarray(self.breaks, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "values", values)
        if breaks.ndim != 1 or values.ndim != 1:
            raise ValueError("breaks and values must be 1-d")
        if breaks.size != values.size + 1:
            raise ValueError("need len(breaks) == len(values) + 1")
        if np.any(np.diff(breaks) <= 0.0):
            raise ValueError("breaks must be strictly increasing")
        if not (np.all(np.isfinite(breaks)) and np.all(np.isfinite(values))):
            raise ValueError("breaks and values must be finite")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = np.searchsorted(self.breaks, x, side="right") - 1
        inside = (idx >= 0) & (x < self.breaks[-1])
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.size - 1)], 0.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class EnergyMeasure:
    """Positive finite measure: absolutely continuous cumulative plus atoms.

    ``F_ac`` is the nondecreasing cumulative of the a.c. part, normalized to
    start at zero.  ``atoms`` is a sequence of ``(position, mass)`` with
    strictly increasing positions and strictly positive masses; it is stored
    as the parallel arrays ``atom_positions`` / ``atom_masses``.
    """

    F_ac: PiecewiseLinear
    atoms: Sequence[tuple[float, float]] = ()
    atom_positions: np.ndarray = field(init=False)
    atom_masses: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        pairs = [(float(p), float(m)) for p, m in self.atoms]
        pos = np.array([p for p, _ in pairs], dtype=np.float64)
        mas = np.array([m for _, m in pairs], dtype=np.float64)
        object.__setattr__(self, "atoms", tuple(pairs))
        object.__setattr__(self, "atom_positions", pos)
        object.__setattr__(self, "atom_masses", mas)

        scale = max(1.0, abs(self.F_ac.right_value))
        if abs(self.F_ac.left_value) > _REL_SLACK * scale:
            raise ValueError("F_ac must start at zero")
        if np.any(np.diff(self.F_ac.values) < -_REL_SLACK * scale):
            raise ValueError("F_ac must be nondecreasing")
        if pos.size:
            if np.any(np.diff(pos) <= 0.0):
                raise ValueError("atom positions must be strictly increasing")
            if np.any(mas <= 0.0):
                raise ValueError("atom masses must be positive")
            if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(mas))):
                raise ValueError("atoms must be finite")

    def total_mass(self) -> float:
        return self.F_ac.right_value + math.fsum(self.atom_masses.tolist())


@dataclass(frozen=True)
class InitialDatum:
    """Initial condition given through evaluators.

    ``u``, ``u_x`` and ``F_ac`` are vectorized callables; for data built by
    :func:`make_multipeakon` they are :class:`PiecewiseLinear` /
    :class:`PiecewiseConstant` instances, which downstream code exploits for
    exact error computation.  ``singularities`` lists points where ``u_x``
    blows up, used to split quadrature intervals.
    """

    u: Callable
    u_x: Callable
    F_ac: Callable
    atoms: Sequence[tuple[float, float]] = ()
    support_hint: tuple[float, float] = (0.0, 1.0)
    singularities: Sequence[float] = ()

    def __post_init__(self) -> None:
        lo, hi = self.support_hint
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError("support_hint must be a finite nonempty interval")
        pairs = [(float(p), float(m)) for p, m in self.atoms]
        if any(m <= 0.0 for _, m in pairs):
            raise ValueError("atom masses must be positive")
        if any(b <= a for (a, _), (b, _) in zip(pairs, pairs[1:])):
            raise ValueError("atom positions must be strictly increasing")
        object.__setattr__(self, "atoms", tuple(pairs))
        object.__setattr__(self, "singularities", tuple(float(s) for s in self.singularities))


@dataclass(frozen=True)
class EulerianSolution:
    """Snapshot ``(u, mu)`` of the flow at a fixed time."""

    u: PiecewiseLinear
    mu: EnergyMeasure
    time: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not np.isfinite(self.time):
            raise ValueError("time must be finite")


def eval_cumulative(m: EnergyMeasure, x, side: str = "left"):
    """Evaluate the cumulative ``F`` of ``m`` at ``x``.

    ``side="left"`` gives :math:`\\mu((-\\infty, x))` (the left-continuous
    choice); ``side="right"`` gives :math:`\\mu((-\\infty, x])`.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    base = m.F_ac(x)
    if m.atom_positions.size == 0:
        return base
    cum = np.concatenate(([0.0], np.cumsum(m.atom_masses)))
    idx = np.searchsorted(m.atom_positions, x, side=side)
    out = base + cum[idx]
    return out if np.ndim(out) else float(out)


def make_multipeakon(points: Sequence[tuple[float, float]]) -> InitialDatum:
    """Build the datum for piecewise-linear ``u`` through ``points``.

    ``points`` is a sequence of ``(x, u(x))`` pairs with strictly increasing
    abscissae.  The energy density is the exact :math:`u_x^2`, so ``F_ac``
    is again piecewise linear on the same nodes; there are no atoms.
    """
    pts = [(float(x), float(v)) for x, v in points]
    if not pts:
        raise ConfigError("need at least one breakpoint")
    xs = np.array([x for x, _ in pts])
    vs = np.array([v for _, v in pts])
    if np.any(np.diff(xs) <= 0.0):
        raise ConfigError("breakpoint abscissae must be strictly increasing")

    u = PiecewiseLinear(xs, vs)
    if xs.size == 1:
        u_x = PiecewiseConstant(np.array([xs[0], xs[0] + 1.0]), np.array([0.0]))
        f_ac = PiecewiseLinear(xs, np.zeros(1))
        return InitialDatum(
            u=u,
            u_x=u_x,
            F_ac=f_ac,
            atoms=(),
            support_hint=(float(xs[0]), float(xs[0]) + 1.0),
        )
    slopes = np.diff(vs) / np.diff(xs)
    u_x = PiecewiseConstant(xs, slopes)
    # cumulative of u_x^2; increments are exact per segment
    inc = slopes * slopes * np.diff(xs)
    f_vals = np.concatenate(([0.0], np.cumsum(inc)))
    f_ac = PiecewiseLinear(xs, f_vals)
    return InitialDatum(
        u=u,
        u_x=u_x,
        F_ac=f_ac,
        atoms=(),
        support_hint=(float(xs[0]), float(xs[-1])),
    )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    max_violation: float
    messages: tuple[str, ...]


def _panel_quad(f, a: float, b: float, interior: list[float]) -> float:
    if b <= a:
        return 0.0
    pts = [p for p in interior if a < p < b]
    val, _ = quad(f, a, b, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-11)
    return val


def validate(d: InitialDatum, tol: float = 1e-8) -> ValidationReport:
    """Check the structural consistency of an initial datum.

    Verifies, on a panel decomposition of ``support_hint``, that ``u`` is the
    antiderivative of ``u_x`` and that ``F_ac`` is the antiderivative of
    ``u_x^2``; atom lists must be sorted with positive masses.  Panel
    discrepancies are reported per unit length (so a datum whose ``F_ac``
    grows at rate 2 while ``u_x**2 == 1`` scores a violation of 1 no matter
    how the panels fall); ``ok`` means the worst one stays within ``tol``.
    """
    messages: list[str] = []
    worst = 0.0
    lo, hi = d.support_hint

    pos = np.array([p for p, _ in d.atoms])
    if pos.size and np.any(np.diff(pos) <= 0.0):
        messages.append("atom positions not strictly increasing")
    if any(m <= 0.0 for _, m in d.atoms):
        messages.append("non-positive atom mass")

    grid = np.linspace(lo, hi, 17)
    extra = [s for s in d.singularities if lo < s < hi]
    grid = np.unique(np.concatenate((grid, extra)))
    interior = list(d.singularities)

    dens = lambda x: float(d.u_x(x)) ** 2
    for a, b in zip(grid[:-1], grid[1:]):
        width = b - a
        want_f = float(d.F_ac(b)) - float(d.F_ac(a))
        got_f = _panel_quad(dens, a, b, interior)
        df = abs(want_f - got_f) / width
        if df > tol:
            messages.append(
                f"F_ac inconsistent with u_x^2 on [{a:g}, {b:g}]: off by {df:.3e} per unit length"
            )
        worst = max(worst, df)

        want_u = float(d.u(b)) - float(d.u(a))
        got_u = _panel_quad(lambda x: float(d.u_x(x)), a, b, interior)
        du = abs(want_u - got_u) / width
        if du > tol:
            messages.append(
                f"u inconsistent with u_x on [{a:g}, {b:g}]: off by {du:.3e} per unit length"
            )
        worst = max(worst, du)

    fine = np.linspace(lo, hi, 1025)
    fvals = np.asarray(d.F_ac(fine), dtype=np.float64)
    dec = np.diff(fvals).min(initial=0.0)
    if dec < -tol:
        messages.append(f"F_ac decreases by {-dec:.3e}")
        worst = max(worst, -dec)

    return ValidationReport(ok=not messages, max_violation=worst, messages=tuple(messages))


def check_solution_consistency(sol: EulerianSolution, rtol: float = 1e-12) -> float:
    """Return the worst relative defect of ``slope^2 * length == F_ac increment``.

    Structural invariant of every pipeline-produced solution; used by tests.
    """
    u, f = sol.u, sol.mu.F_ac
    if u.nodes.size < 2:
        return 0.0
    if f.nodes.size != u.nodes.size or not np.array_equal(f.nodes, u.nodes):
        raise ValueError("u and F_ac must share their node set")
    widths = np.diff(u.nodes)
    lhs = u.slopes**2 * widths
    rhs = np.diff(f.values)
    floor = 1e-15 * max(1.0, f.right_value)
    scale = np.maximum(np.maximum(np.abs(rhs), lhs), floor)
    return float(np.max(np.abs(lhs - rhs) / scale))
