r"""Energy-consistent projection onto piecewise-linear data on a dyadic grid.

On the grid :math:`x_j = j\,\Delta x` the projection works on cell pairs
:math:`[x_{2j}, x_{2j+2}]`.  Writing

.. math::

    Du_{2j} = \frac{\bar u_{2j+2} - \bar u_{2j}}{2\Delta x}, \qquad
    DF_{2j} = \frac{\bar F_{ac,2j+2} - \bar F_{ac,2j}}{2\Delta x}, \qquad
    q_{2j} = \sqrt{DF_{2j} - Du_{2j}^2},

the projected profile takes the two half-cell slopes
:math:`Du_{2j} \mp q_{2j}` and :math:`Du_{2j} \pm q_{2j}`.  Either order
interpolates :math:`\bar u` and :math:`\bar F_{ac}` at the even gridpoints and
reproduces the pair's energy exactly, with the a.c. energy cumulative rising
with slope (local slope)² on each half cell.  Atoms of the input measure are
merged per pair and carried at the pair's left edge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConsistencyError
from .eulerian import (
    EnergyMeasure,
    InitialDatum,
    PiecewiseConstant,
    PiecewiseLinear,
    eval_cumulative,
)
from . import metrics

__all__ = [
    "SignRule",
    "ProjectionConfig",
    "ProjectedDatum",
    "default_window",
    "project",
    "projection_error",
]

# radicands in [-RADICAND_CLAMP, 0) are roundoff and clamp to zero; anything
# below is an inconsistent datum.  On fine grids the difference quotients
# themselves carry cancellation error of order eps * |F| / (2 dx), which can
# exceed this floor for perfectly consistent data (e.g. the cosine datum with
# F_inf ~ 19.7 at dx = 2^-14), so project() widens the floor by a provable
# round-off allowance computed from the sampled values.
RADICAND_CLAMP = 1e-12

_EPS = float(np.finfo(np.float64).eps)


class SignRule(enum.Enum):
    MINUS_FIRST = "minus_first"
    PLUS_FIRST = "plus_first"
    MINIMIZE_KINK = "minimize_kink"

    @classmethod
    def coerce(cls, value) -> "SignRule":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ConfigError(f"unknown sign rule: {value!r}") from None


@dataclass(frozen=True)
class ProjectionConfig:
    """Grid spacing, even-pair window and slope sign rule."""

    dx: float
    window: tuple[int, int] | None = None
    sign_rule: SignRule = SignRule.MINIMIZE_KINK

    def __post_init__(self) -> None:
        if not (0.0 < self.dx <= 1.0):
            raise ConfigError("dx must lie in (0, 1]")
        object.__setattr__(self, "sign_rule", SignRule.coerce(self.sign_rule))
        if self.window is not None:
            j0, j1 = self.window
            if int(j0) != j0 or int(j1) != j1 or j1 <= j0:
                raise ConfigError("window must be an integer pair (j_min, j_max) with j_min < j_max")
            object.__setattr__(self, "window", (int(j0), int(j1)))


@dataclass(frozen=True)
class ProjectedDatum:
    u: PiecewiseLinear
    mu: EnergyMeasure
    dx: float
    window: tuple[int, int]


def _required_span(d: InitialDatum) -> tuple[float, float]:
    lo, hi = d.support_hint
    if d.atoms:
        lo = min(lo, d.atoms[0][0])
        hi = max(hi, d.atoms[-1][0])
    return lo, hi


def default_window(d: InitialDatum, dx: float) -> tuple[int, int]:
    """Smallest even-pair window covering support and atoms with one pair margin."""
    lo, hi = _required_span(d)
    j_min = int(np.floor(lo / (2.0 * dx))) - 1
    j_max = int(np.ceil(hi / (2.0 * dx))) + 1
    return j_min, j_max


def project(d: InitialDatum, cfg: ProjectionConfig) -> ProjectedDatum:
    """Project an initial datum onto the dyadic grid.

    Even gridpoints interpolate ``u`` and ``F_ac`` exactly; each pair keeps its
    total energy.  A radicand below ``-1e-12`` (widened by the data-dependent
    round-off allowance, see :data:`RADICAND_CLAMP`) raises
    :class:`ConsistencyError`: the datum violates ``F_ac' >= u_x^2`` in the
    pair average.  Negative values inside the tolerance are clamped to zero.
    """
    dx = cfg.dx
    j_min, j_max = cfg.window if cfg.window is not None else default_window(d, dx)
    lo, hi = _required_span(d)
    x_left, x_right = 2.0 * dx * j_min, 2.0 * dx * j_max
    if x_left > lo - dx or x_right < hi + dx:
        raise ConfigError("window must cover the support and atoms with a margin")

    n_pairs = j_max - j_min
    xe = 2.0 * dx * np.arange(j_min, j_max + 1)
    ue = np.asarray(d.u(xe), dtype=np.float64)
    fe = np.asarray(d.F_ac(xe), dtype=np.float64)

    du = np.diff(ue) / (2.0 * dx)
    df = np.diff(fe) / (2.0 * dx)
    rad = df - du * du
    # round-off allowance: one ulp of F (resp. u) per endpoint evaluation,
    # amplified by the 1/(2 dx) quotient, with a safety factor of 8
    u_amp = float(np.max(np.abs(ue))) * (1.0 + float(np.max(np.abs(du))))
    allowance = 8.0 * _EPS * (float(np.max(np.abs(fe))) + u_amp) / (2.0 * dx)
    tol = RADICAND_CLAMP + allowance
    if np.any(rad < -tol):
        worst = float(rad.min())
        raise ConsistencyError(f"energy radicand {worst:.3e} below -{tol:.3g}")
    q = np.sqrt(np.maximum(rad, 0.0))

    if cfg.sign_rule is SignRule.MINUS_FIRST:
        sigma = np.ones(n_pairs)
    elif cfg.sign_rule is SignRule.PLUS_FIRST:
        sigma = -np.ones(n_pairs)
    else:
        # greedy left-to-right: make the slope entering each pair match the
        # previous pair's outgoing slope as closely as possible
        sigma = np.ones(n_pairs)
        prev = 0.0
        for j in range(n_pairs):
            first_minus = du[j] - q[j]
            first_plus = du[j] + q[j]
            if abs(first_plus - prev) < abs(first_minus - prev):
                sigma[j] = -1.0
            prev = du[j] + sigma[j] * q[j]
    s1 = du - sigma * q

    x_all = dx * np.arange(2 * j_min, 2 * j_max + 1)
    u_all = np.empty(2 * n_pairs + 1)
    u_all[::2] = ue
    u_all[1::2] = ue[:-1] + s1 * dx
    f_all = np.empty_like(u_all)
    f_all[::2] = fe
    # the midpoint cumulative may overshoot the exact right-edge pin by an
    # ulp when the second half-slope vanishes; keep the nodal values monotone
    f_all[1::2] = np.minimum(fe[:-1] + s1 * s1 * dx, fe[1:])

    atoms: list[tuple[float, float]] = []
    if d.atoms:
        pos = np.array([p for p, _ in d.atoms])
        mas = np.array([m for _, m in d.atoms])
        jp = np.floor(pos / (2.0 * dx)).astype(np.int64)
        if np.any(jp < j_min) or np.any(jp >= j_max):
            raise ConfigError("window must cover all atoms")
        merged = np.zeros(n_pairs)
        np.add.at(merged, jp - j_min, mas)
        for j in np.nonzero(merged)[0]:
            atoms.append((2.0 * dx * (j_min + j), float(merged[j])))

    mu = EnergyMeasure(PiecewiseLinear(x_all, f_all), tuple(atoms))
    return ProjectedDatum(PiecewiseLinear(x_all, u_all), mu, dx, (j_min, j_max))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _segment_quad(fn, edges: np.ndarray) -> tuple[float, float]:
    """Gauss-Legendre(8) integrals of ``|fn|`` and ``fn^2`` per segment, summed."""
    a = edges[:-1]
    width = np.diff(edges)
    xs = a[:, None] + (0.5 * (_GL_X + 1.0))[None, :] * width[:, None]
    vals = fn(xs.ravel()).reshape(xs.shape)
    w = 0.5 * width[:, None] * _GL_W[None, :]
    return float(np.sum(w * np.abs(vals))), float(np.sum(w * vals * vals))


def projection_error(d: InitialDatum, p: ProjectedDatum) -> tuple[float, float, float, float, float]:
    """Projection error of ``p`` against its datum.

    Returns ``(linf_u, l2_u, l2_ux, l1_F, l2_F)`` over the projection window.
    ``l2_ux`` is computed exactly through the identity
    :math:`\\int (\\bar u_x - s)^2 = \\Delta F_{ac} - 2 s \\Delta\\bar u + s^2 w`
    per half cell, which needs only the datum's endpoint evaluators.  The
    remaining integrals are exact for piecewise-linear data aligned with the
    grid and high-order sampled quadrature otherwise; ``linf_u`` is sampled
    (a lower bound on the true sup) unless the datum is piecewise linear.
    """
    nodes = p.u.nodes
    exact_pl = isinstance(d.u, PiecewiseLinear) and isinstance(d.u_x, PiecewiseConstant)

    if exact_pl:
        linf_u = metrics.linf_diff(d.u, p.u)
    else:
        linf_u = metrics.linf_diff_sampled(d.u, p.u, n_samples=9)

    diff_u = lambda x: np.asarray(d.u(x), dtype=np.float64) - p.u(x)
    _, l2u_sq = _segment_quad(diff_u, nodes)
    l2_u = np.sqrt(l2u_sq)

    # exact slope-error identity per half cell
    seg_du = np.diff(np.asarray(d.u(nodes), dtype=np.float64))
    seg_df = np.diff(np.asarray(d.F_ac(nodes), dtype=np.float64))
    s = p.u.slopes
    w = np.diff(nodes)
    contrib = seg_df - 2.0 * s * seg_du + s * s * w
    l2_ux = np.sqrt(max(0.0, float(np.sum(contrib))))

    atom_pos = [a for a, _ in d.atoms] + [a for a, _ in p.mu.atoms]
    edges = np.unique(np.concatenate((nodes, np.asarray(atom_pos, dtype=np.float64))))
    f_exact = d.F_ac
    d_pos = np.array([a for a, _ in d.atoms])
    d_cum = np.concatenate(([0.0], np.cumsum([m for _, m in d.atoms])))

    def full_datum_F(x):
        base = np.asarray(f_exact(x), dtype=np.float64)
        if d_pos.size:
            base = base + d_cum[np.searchsorted(d_pos, x, side="left")]
        return base

    diff_F = lambda x: full_datum_F(x) - eval_cumulative(p.mu, x, side="left")
    l1_F, l2F_sq = _segment_quad(diff_F, edges)
    return (float(linf_u), float(l2_u), float(l2_ux), float(l1_F), float(np.sqrt(l2F_sq)))
