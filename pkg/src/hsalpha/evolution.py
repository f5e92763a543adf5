"""Exact-in-time evolution of the piecewise-linear Lagrangian state.

Between wave-breaking events every nodal trajectory obeys

    dy_j/dt = U_j,        dU_j/dt = (1/2) V_j - (1/4) V_inf,

with the nodal energy values V_j and the total V_inf constant, so the motion
is a polynomial in t and is advanced in closed form (no time stepping).  The
per-cell derivative surrogates evolve alongside:

    d_U(t) = d_U + (dt/2) d_V,
    d_y(t) = d_y + dt d_U + (dt^2/4) d_V.

A cell with breaking time tau collapses exactly at t = tau: its d_y and d_U
vanish there analytically, so the update writes zeros rather than trusting
floating-point cancellation.  At the event the cell's retained energy density
is scaled by (1 - alpha), the nodal V array is resummed from the cell data,
and the motion continues with the updated coefficients.

Event times closer than an absolute 1e-12 are merged into a single cluster
and applied together at the cluster's earliest time.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import ConfigError
from .lagrangian import LagrangianState
from .numerics import exact_cumsum, stable_sum

__all__ = ["EventSchedule", "events", "evolve", "total_energy", "brute_force_oracle"]

#: Two breaking times within this absolute distance count as one event.
EVENT_TIE_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class EventSchedule:
    """Clustered wave-breaking events of a state, in increasing time order.

    times
        Strictly increasing event times.
    cells_at
        Maps each entry of ``times`` to the indices of the cells that break
        there (each cell appears under exactly one event).
    """

    times: tuple
    cells_at: dict

    def __post_init__(self):
        ts = np.asarray(self.times, dtype=float)
        if ts.size > 1 and np.any(np.diff(ts) <= 0):
            raise ValueError("event times must be strictly increasing")
        for t in self.times:
            if t not in self.cells_at:
                raise ValueError("every event time needs a cell list")


def _clustered_events(tau, eligible, lo_mask):
    """Group eligible breaking times into tie-tolerance clusters.

    ``lo_mask`` selects the cells that seed clusters; ``eligible`` marks the
    cells allowed to join one (stragglers within EVENT_TIE_TOL of a cluster
    are swept in even when they missed the seed cut).  Returns a list of
    (event_time, index_array) pairs ordered by time, event_time being the
    earliest breaking time in the cluster.
    """
    seeds = np.flatnonzero(lo_mask)
    if seeds.size == 0:
        return []
    order = seeds[np.argsort(tau[seeds], kind="stable")]
    sorted_tau = tau[order]
    breaks = np.flatnonzero(np.diff(sorted_tau) > EVENT_TIE_TOL) + 1
    groups = np.split(np.arange(order.size), breaks)
    elig_idx = np.flatnonzero(eligible)
    elig_tau = tau[elig_idx]
    out = []
    claimed = np.zeros(tau.shape[0], dtype=bool)
    for g in groups:
        lo = sorted_tau[g[0]]
        hi = sorted_tau[g[-1]]
        members = elig_idx[(elig_tau >= lo - EVENT_TIE_TOL) & (elig_tau <= hi + EVENT_TIE_TOL)]
        members = members[~claimed[members]]
        if members.size == 0:
            continue
        claimed[members] = True
        out.append((lo, members))
    return out


def events(s: LagrangianState, T: float) -> EventSchedule:
    """Breaking events of ``s`` with times in (0, T], clustered at 1e-12.

    Cells already flagged broken, cells with tau = 0 (initial point masses,
    which never dissipate), and cells that never break are excluded.
    """
    if not np.isfinite(T):
        raise ConfigError("event horizon T must be finite")
    tau = s.tau
    eligible = (~s.broken) & (tau > 0.0) & np.isfinite(tau)
    base = eligible & (tau <= T)
    clusters = _clustered_events(tau, eligible, base)
    times = tuple(t for t, _ in clusters)
    cells = {t: idx for t, idx in clusters}
    return EventSchedule(times=times, cells_at=cells)


def _advance(y, U, V, d_y, d_U, d_V, V_inf, dt):
    """Closed-form motion over a window of length dt with frozen V."""
    if dt == 0.0:
        return
    acc = 0.5 * V - 0.25 * V_inf
    y += dt * U + (0.5 * dt * dt) * acc
    U += dt * acc
    d_y += dt * d_U + (0.25 * dt * dt) * d_V
    d_U += (0.5 * dt) * d_V


def evolve(s: LagrangianState, t: float, side: str = "right") -> LagrangianState:
    """Evolve a Lagrangian state to time t, applying breaking events on the way.

    With side="right" (default) events with tau <= t are fully applied, so the
    result is the right-continuous state at t.  With side="left" events at
    t itself are withheld: cells breaking exactly at t have collapsed (their
    d_y and d_U vanish there as a fact of the motion) but their energy is not
    yet scaled, giving the one-sided limit as time approaches t from below.

    Raises ValueError when t precedes the state's current time.
    """
    if side not in ("left", "right"):
        raise ConfigError("side must be 'left' or 'right'")
    if not np.isfinite(t):
        raise ValueError("target time must be finite")
    if t < s.time:
        raise ValueError(f"cannot evolve backwards: state at {s.time}, requested {t}")
    if t == s.time and side == "right":
        return s

    y = s.y.copy()
    U = s.U.copy()
    V = s.V.copy()
    d_y = s.d_y.copy()
    d_U = s.d_U.copy()
    d_V = s.d_V.copy()
    broken = s.broken.copy()
    tau = s.tau
    V_inf = s.V_inf
    V0 = V[0]
    w = s.widths

    eligible = (~broken) & (tau > 0.0) & np.isfinite(tau)
    if side == "right":
        base = eligible & (tau <= t)
    else:
        base = eligible & (tau < t - EVENT_TIE_TOL)
    one_minus_alpha = 1.0 - s.alpha

    t_cur = s.time
    for t_event, idx in _clustered_events(tau, eligible, base):
        t_stop = max(t_event, s.time)
        _advance(y, U, V, d_y, d_U, d_V, V_inf, t_stop - t_cur)
        t_cur = t_stop
        # The collapse is exact: write the analytic zeros instead of the
        # rounded residue of the quadratic update.
        d_y[idx] = 0.0
        d_U[idx] = 0.0
        d_V[idx] *= one_minus_alpha
        broken[idx] = True
        V = V0 + np.concatenate(([0.0], exact_cumsum(d_V * w)))
        V_inf = V0 + stable_sum(d_V * w)

    _advance(y, U, V, d_y, d_U, d_V, V_inf, t - t_cur)

    if side == "left":
        at_t = (~broken) & np.isfinite(tau) & (np.abs(tau - t) <= EVENT_TIE_TOL) & (tau > 0.0)
        d_y[at_t] = 0.0
        d_U[at_t] = 0.0

    return dataclasses.replace(
        s,
        y=y,
        U=U,
        V=V,
        d_y=d_y,
        d_U=d_U,
        d_V=d_V,
        broken=broken,
        time=t,
        V_inf=V_inf,
    )


def total_energy(s: LagrangianState) -> float:
    """Current total energy sum(d_V * width) over all cells."""
    return stable_sum(s.d_V * s.widths)


def brute_force_oracle(s: LagrangianState, t: float, n_steps: int) -> LagrangianState:
    """Reference integrator for tests: classical RK4 on the nodal system.

    Marches (y_j, U_j) with fixed step h = (t - s.time)/n_steps using the
    textbook four-stage Runge-Kutta scheme, holding the nodal V values frozen
    within each step.  Energy dissipation is quantized: each breaking cell has
    its d_V scaled by (1 - alpha) at the first step boundary at or after its
    breaking time.  Deliberately independent of evolve's closed-form updates;
    agreement is limited by the O(h) event quantization.
    """
    if n_steps < 1:
        raise ConfigError("n_steps must be a positive integer")
    if t < s.time:
        raise ValueError(f"cannot integrate backwards: state at {s.time}, requested {t}")

    y = s.y.copy()
    U = s.U.copy()
    d_V = s.d_V.copy()
    broken = s.broken.copy()
    tau = s.tau
    V0 = s.V[0]
    w = s.widths
    V = s.V.copy()
    V_inf = s.V_inf
    h = (t - s.time) / n_steps
    one_minus_alpha = 1.0 - s.alpha

    pending = np.flatnonzero(
        (~broken) & (tau > 0.0) & np.isfinite(tau) & (tau <= t + EVENT_TIE_TOL)
    )
    pending = pending[np.argsort(tau[pending], kind="stable")]
    ptr = 0

    def rhs(y_arr, U_arr):
        acc = 0.5 * V - 0.25 * V_inf
        return U_arr, acc

    for k in range(n_steps + 1):
        t_k = t if k == n_steps else s.time + k * h
        cut = ptr
        while cut < pending.size and tau[pending[cut]] <= t_k + EVENT_TIE_TOL:
            cut += 1
        if cut > ptr:
            idx = pending[ptr:cut]
            d_V[idx] *= one_minus_alpha
            broken[idx] = True
            V = V0 + np.concatenate(([0.0], exact_cumsum(d_V * w)))
            V_inf = V0 + stable_sum(d_V * w)
            ptr = cut
        if k == n_steps:
            break
        k1y, k1u = rhs(y, U)
        k2y, k2u = rhs(y + 0.5 * h * k1y, U + 0.5 * h * k1u)
        k3y, k3u = rhs(y + 0.5 * h * k2y, U + 0.5 * h * k2u)
        k4y, k4u = rhs(y + h * k3y, U + h * k3u)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        U = U + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)

    with np.errstate(invalid="ignore", divide="ignore"):
        d_y_new = np.diff(y) / w
        d_U_new = np.diff(U) / w
    return dataclasses.replace(
        s,
        y=y,
        U=U,
        V=V,
        d_y=d_y_new,
        d_U=d_U_new,
        d_V=d_V,
        broken=broken,
        time=t,
        V_inf=V_inf,
    )
