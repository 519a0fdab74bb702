"""Direct explicit integration of the nonlinear Burgers system.

Forward Euler in time, second-order centred differences in space, periodic
wrap.  This path shares no code with the linearised solver and exists only to
cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import CFLViolation, NonFiniteState
from .heat_ivp import DomainBox, ScalarField2D

STABILITY_FACTOR = 0.9
ADVECTIVE_FACTOR = 0.5
_EPS = 1e-12


@dataclass(frozen=True)
class FDState:
    u: ScalarField2D
    v: ScalarField2D
    dt: float

    @property
    def time(self) -> float:
        return self.u.time

    @property
    def box(self) -> DomainBox:
        return self.u.box


def max_stable_dt(u: np.ndarray, v: np.ndarray, box: DomainBox) -> float:
    h = min(box.hx, box.hy)
    speed = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))), _EPS)
    return min(STABILITY_FACTOR * h * h / 4.0, ADVECTIVE_FACTOR * h / speed)


def initial_state(u: ScalarField2D, v: ScalarField2D, dt: float = None) -> FDState:
    """State with the given step, or the largest stable one if ``dt`` is None."""
    if u.box != v.box or u.time != v.time:
        raise ValueError("u and v must share box and time")
    if dt is None:
        dt = max_stable_dt(u.values, v.values, u.box)
    return FDState(u, v, float(dt))


def _check_cfl(u, v, box, dt):
    if not dt > 0:
        raise CFLViolation(f"time step must be positive, got {dt}")
    h = min(box.hx, box.hy)
    if dt > STABILITY_FACTOR * h * h / 4.0 * (1 + 1e-12):
        raise CFLViolation(f"dt={dt:.3e} exceeds diffusive bound {STABILITY_FACTOR * h * h / 4:.3e}")
    speed = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))), _EPS)
    if dt > ADVECTIVE_FACTOR * h / speed * (1 + 1e-12):
        raise CFLViolation(f"dt={dt:.3e} exceeds advective bound {ADVECTIVE_FACTOR * h / speed:.3e}")


def _rhs(f, u, v, hx, hy):
    fxp, fxm = np.roll(f, -1, 0), np.roll(f, 1, 0)
    fyp, fym = np.roll(f, -1, 1), np.roll(f, 1, 1)
    fxx = (fxp - 2 * f + fxm) / (hx * hx)
    fyy = (fyp - 2 * f + fym) / (hy * hy)
    fx = (fxp - fxm) / (2 * hx)
    fy = (fyp - fym) / (2 * hy)
    return fxx + fyy + 2 * u * fx + 2 * v * fy


def _advance(state: FDState, dt: float) -> FDState:
    box = state.box
    u, v = state.u.values, state.v.values
    _check_cfl(u, v, box, dt)
    with np.errstate(over="ignore", invalid="ignore"):  # reported below
        un = u + dt * _rhs(u, u, v, box.hx, box.hy)
        vn = v + dt * _rhs(v, u, v, box.hx, box.hy)
    if not (np.all(np.isfinite(un)) and np.all(np.isfinite(vn))):
        raise NonFiniteState(f"non-finite values after step at t={state.time}")
    t = state.time + dt
    return replace(state, u=ScalarField2D(un, box, t), v=ScalarField2D(vn, box, t))


def fd_step(state: FDState) -> FDState:
    """One forward Euler step of size ``state.dt``."""
    return _advance(state, state.dt)


def fd_integrate(state: FDState, t_end: float) -> FDState:
    """Step to ``t_end``; the last step is shortened to land on it exactly."""
    if t_end < state.time:
        raise ValueError(f"t_end={t_end} is before the current time {state.time}")
    remaining = t_end - state.time
    if remaining == 0:
        return state
    n = max(int(np.ceil(remaining / state.dt - 1e-9)), 1)
    for _ in range(n - 1):
        state = fd_step(state)
    last = t_end - state.time
    # a last step equal to dt up to rounding is taken as dt itself
    if abs(last - state.dt) <= 1e-9 * state.dt:
        state = fd_step(state)
    else:
        state = _advance(state, last)
    fields = {k: ScalarField2D(getattr(state, k).values, state.box, t_end) for k in ("u", "v")}
    return replace(state, **fields)


def discrete_curl(u: np.ndarray, v: np.ndarray, box: DomainBox) -> np.ndarray:
    """u_y - v_x by centred differences."""
    uy = (np.roll(u, -1, 1) - np.roll(u, 1, 1)) / (2 * box.hy)
    vx = (np.roll(v, -1, 0) - np.roll(v, 1, 0)) / (2 * box.hx)
    return uy - vx
