"""Named closed-form initial data.

Each case bundles an :class:`InitialData` with whatever exact information is
known about it: the heat function it came from and the Burgers pair at later
times.  Data are kept analytic so the compatibility check can differentiate
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exact import ConstantPair, cole_hopf_lift, evaluate_on_grid, make_plane_wave_seed
from .heat_ivp import InitialData

TANH_TERMS = ((1.0, 1.0, 1.0),)


@dataclass(frozen=True)
class Case:
    data: InitialData
    exact_uv: Optional[Callable] = None  # (X, Y, t) -> (u, v)
    exact_phi: Optional[Callable] = None  # (X, Y, t) -> phi


def constants(a: float = 0.0, b: float = 0.0, background=ConstantPair(), base_point=(0.0, 0.0)) -> Case:
    data = InitialData(lambda x, y: np.full(np.shape(x), float(a)),
                       lambda x, y: np.full(np.shape(x), float(b)),
                       tuple(base_point), background, "constants", {"a": a, "b": b})

    def exact(X, Y, t):
        return np.full(np.shape(X), float(a)), np.full(np.shape(X), float(b))

    return Case(data, exact)


def tanh_pair(terms=TANH_TERMS, background=ConstantPair(), t0: float = 0.0,
              base_point=(0.0, 0.0)) -> Case:
    """Lift of phi = 1 + sum a exp(kx + ly + w t), sampled at t0.

    The default single term gives u = v = e^q / (1 + e^q), q = x + y + 2t.
    """
    phi = make_plane_wave_seed(background, terms)
    pair = cole_hopf_lift(phi, background, seed="tanh-pair")

    def s(x, y):
        return evaluate_on_grid(pair, x, y, t0)[0]

    def k(x, y):
        return evaluate_on_grid(pair, x, y, t0)[1]

    def exact_phi(X, Y, t):
        return np.array(phi(X, Y, np.full(np.shape(X), float(t)), 0).value)

    data = InitialData(s, k, tuple(base_point), background, "tanh-pair",
                       {"terms": [list(map(float, tm)) for tm in terms], "t0": t0})
    return Case(data, lambda X, Y, t: evaluate_on_grid(pair, X, Y, t), exact_phi)


def _potential_case(name, psi, psi_x, psi_y, background, base_point, params) -> Case:
    u0, v0 = background.u0, background.v0
    data = InitialData(lambda x, y: psi_x(x, y) + u0, lambda x, y: psi_y(x, y) + v0,
                       tuple(base_point), background, name, params)
    x0, y0 = base_point
    return Case(data, None, lambda X, Y, t: np.exp(psi(X, Y) - psi(x0, y0)))


def gaussian_bump(amplitude: float = 1.0, width: float = 1.0, center=(0.0, 0.0),
                  background=ConstantPair(), base_point=(0.0, 0.0)) -> Case:
    """(s, k) = (u0, v0) + grad psi, psi = A exp(-|r - c|^2 / (2 w^2)).

    ``exact_phi`` is the heat datum at t0 only (exp(psi) up to the base constant).
    """
    cx, cy = center

    def psi(x, y):
        return amplitude * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * width ** 2))

    return _potential_case(
        "gaussian-bump", psi,
        lambda x, y: -(x - cx) / width ** 2 * psi(x, y),
        lambda x, y: -(y - cy) / width ** 2 * psi(x, y),
        background, base_point,
        {"amplitude": amplitude, "width": width, "center": list(center)})


def periodic_cosine(amplitude: float = 1.0, Lx: float = 2 * np.pi, Ly: float = 2 * np.pi,
                    background=ConstantPair(), base_point=(0.0, 0.0)) -> Case:
    """(s, k) = (u0, v0) + grad psi, psi = A (cos(2 pi x / Lx) + cos(2 pi y / Ly))."""
    ax, ay = 2 * np.pi / Lx, 2 * np.pi / Ly

    def psi(x, y):
        return amplitude * (np.cos(ax * x) + np.cos(ay * y))

    return _potential_case(
        "periodic-cosine", psi,
        lambda x, y: -amplitude * ax * np.sin(ax * x),
        lambda x, y: -amplitude * ay * np.sin(ay * y),
        background, base_point, {"amplitude": amplitude, "Lx": Lx, "Ly": Ly})


LIBRARY = {
    "constants": constants,
    "tanh-pair": tanh_pair,
    "gaussian-bump": gaussian_bump,
    "periodic-cosine": periodic_cosine,
}


def make_case(name: str, background=ConstantPair(), t0: float = 0.0, base_point=(0.0, 0.0),
              **params) -> Case:
    if name not in LIBRARY:
        raise KeyError(f"unknown initial data {name!r}; choose from {sorted(LIBRARY)}")
    if name == "tanh-pair":
        params.setdefault("t0", t0)
    return LIBRARY[name](background=background, base_point=tuple(base_point), **params)
