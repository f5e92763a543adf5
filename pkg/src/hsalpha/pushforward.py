"""Reconstruction of the Eulerian pair (u, energy measure) from Lagrangian data.

The map sends a Lagrangian state to the wave profile u and the energy
measure it carries: u(x) = U(xi) for any xi with y(xi) = x (single-valued
because d_U vanishes wherever d_y does), the absolutely continuous energy
part picks up d_V * width from every cell of positive width, and cells whose
width has collapsed to zero while still holding energy deposit that energy
as a point mass at the collapse location.

Because u is piecewise linear and the absolutely continuous part has density
u_x^2, the cumulative F_ac is exactly piecewise linear on the reconstructed
nodes; no quadrature is involved anywhere.
"""

from __future__ import annotations

import numpy as np

from .errors import CorruptStateError
from .eulerian import EnergyMeasure, EulerianSolution, PiecewiseLinear, eval_cumulative
from .lagrangian import LagrangianState
from .numerics import exact_cumsum

__all__ = ["to_eulerian", "eval_u", "eval_F", "ATOM_WIDTH_TOL", "ATOM_MASS_TOL"]

#: A cell is width-degenerate when d_y is at or below this threshold.  Exact
#: zeros are produced analytically by projection and evolution; the threshold
#: only absorbs round-off from the quadratic motion updates.
ATOM_WIDTH_TOL = 1e-14

#: A width-degenerate cell is an atom when its energy density exceeds this;
#: otherwise it carries nothing worth keeping and is dropped.
ATOM_MASS_TOL = 1e-14


def to_eulerian(s: LagrangianState) -> EulerianSolution:
    """Push a Lagrangian state forward to its Eulerian solution.

    Cells with d_y > 1e-14 become linear segments of u and of the cumulative
    F_ac; cells with d_y <= 1e-14 and d_V > 1e-14 become point masses at
    their (common) y-value, consecutive ones merged; cells degenerate in both
    senses are removed.  Raises CorruptStateError if the nodal y values
    decrease by more than 1e-12 anywhere.
    """
    y_raw = s.y
    dy_nodes = np.diff(y_raw)
    if dy_nodes.size and np.min(dy_nodes) < -1e-12:
        raise CorruptStateError(
            f"Lagrangian positions decrease by {-np.min(dy_nodes):.3e}; state is corrupt"
        )
    # Tiny negative jumps are round-off residue on collapsed cells.
    y = np.maximum.accumulate(y_raw)

    w = s.widths
    masses = s.d_V * w
    real = s.d_y > ATOM_WIDTH_TOL
    atom = (~real) & (s.d_V > ATOM_MASS_TOL)

    idx_real = np.flatnonzero(real)
    x_nodes = np.concatenate(([y[0]], y[idx_real + 1]))
    u_nodes = np.concatenate(([s.U[0]], s.U[idx_real + 1]))
    F_vals = np.concatenate(([0.0], exact_cumsum(masses[idx_real])))
    F_vals = np.maximum.accumulate(F_vals)

    # Collapse nodes that still coincide after rounding (keep the last, so
    # cumulative mass and the outgoing value survive).
    if x_nodes.size > 1:
        keep = np.append(np.diff(x_nodes) > 0.0, True)
        x_nodes = x_nodes[keep]
        u_nodes = u_nodes[keep]
        F_vals = F_vals[keep]

    idx_atom = np.flatnonzero(atom)
    if idx_atom.size:
        # Atom cells separated only by degenerate cells share one location.
        group = np.cumsum(real)[idx_atom]
        uniq, first = np.unique(group, return_index=True)
        pos = y[idx_atom[first]]
        mass = np.zeros(uniq.size)
        np.add.at(mass, np.searchsorted(uniq, group), masses[idx_atom])
        atoms = tuple(zip(pos.tolist(), mass.tolist()))
    else:
        atoms = ()

    u = PiecewiseLinear(nodes=x_nodes, values=u_nodes)
    F_ac = PiecewiseLinear(nodes=x_nodes, values=F_vals)
    mu = EnergyMeasure(F_ac=F_ac, atoms=atoms)
    return EulerianSolution(u=u, mu=mu, time=s.time, alpha=s.alpha)


def eval_u(sol: EulerianSolution, x: float):
    """Wave profile value at x (piecewise linear, constant extension)."""
    return sol.u(x)


def eval_F(sol: EulerianSolution, x: float, side: str = "left"):
    """Cumulative energy of sol.mu at x, left-continuous by default."""
    return eval_cumulative(sol.mu, x, side=side)
