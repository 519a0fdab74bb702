"""Exact solutions of the coupled Burgers system

    u_t = u_xx + u_yy + 2 u u_x + 2 v u_y
    v_t = v_xx + v_yy + 2 u v_x + 2 v v_y

built from positive solutions of the drifted heat equation

    phi_t = phi_xx + phi_yy + 2 u0 phi_x + 2 v0 phi_y

through the lift u = phi_x / phi + u0, v = phi_y / phi + v0, and iterated by
the recurrence that reuses phi = u_N + v_N as the next heat solution.

Every solution object evaluates lazily to :class:`~burgers_bt.jets.Jet`s, so a
pair produced by N recurrence steps asks its seed for N extra derivative
orders automatically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DivisorTooSmall, NonPositiveSeed, OrderExhausted, PhiNonPositive
from .jets import DIVISOR_FLOOR, Jet, jet_constant, variables

DEFAULT_SAMPLE_BOX = ((-2.0, 2.0), (-2.0, 2.0), (0.1, 1.0))


@dataclass(frozen=True)
class ConstantPair:
    """Constant background solution (u0, v0)."""

    u0: float = 0.0
    v0: float = 0.0


@dataclass(frozen=True)
class HeatSolution:
    """A scalar phi(x, y, t) evaluable as a jet (positive for the Cole-Hopf lift).

    ``eval(x, y, t, order)`` returns the jet of phi at the given points.
    ``params`` records the closed form it came from (for reports).
    """

    eval: Callable[..., Jet]
    params: dict = field(default_factory=dict)

    def __call__(self, x, y, t, order: int = 0) -> Jet:
        return self.eval(x, y, t, order)


@dataclass(frozen=True)
class Lineage:
    seed: str
    depth: int = 0


@dataclass(frozen=True)
class SolutionPair:
    """A Burgers pair (u, v).

    ``evaluate(x, y, t, order)`` returns the jets of u and v together, since
    both usually share the work of building phi.  ``max_order`` caps the
    order the pair can deliver (``None`` means unlimited).
    """

    evaluate: Callable[..., tuple]
    lineage: Lineage = Lineage("unknown")
    max_order: Optional[int] = None

    def __call__(self, x, y, t, order: int = 0):
        if self.max_order is not None and order > self.max_order:
            raise OrderExhausted(
                f"pair {self.lineage} supplies order <= {self.max_order}, asked for {order}")
        return self.evaluate(x, y, t, order)

    def u_eval(self, x, y, t, order: int = 0) -> Jet:
        return self(x, y, t, order)[0]

    def v_eval(self, x, y, t, order: int = 0) -> Jet:
        return self(x, y, t, order)[1]


Background = Union[ConstantPair, SolutionPair]


def constant_pair_solution(c: ConstantPair) -> SolutionPair:
    def evaluate(x, y, t, order):
        X, _, _ = variables(x, y, t, order)
        shape = X.batch_shape
        return jet_constant(c.u0, order, shape), jet_constant(c.v0, order, shape)

    return SolutionPair(evaluate, Lineage(f"constant({c.u0!r},{c.v0!r})"))


# -- seeds ------------------------------------------------------------------

def plane_wave_rate(background: ConstantPair, k: float, l: float) -> float:
    """Growth rate that makes exp(kx + ly + rate t) solve the drifted heat equation."""
    return k * k + l * l + 2.0 * background.u0 * k + 2.0 * background.v0 * l


def make_plane_wave_seed(background: ConstantPair, terms: Sequence, constant: float = 1.0,
                         rates: Optional[Sequence[float]] = None) -> HeatSolution:
    """phi = constant + sum_i a_i exp(k_i x + l_i y + w_i t).

    ``terms`` is a sequence of (a, k, l).  Rates default to the value making
    each term an exact solution; passing ``rates`` explicitly is only useful
    to build deliberately corrupted seeds for validator tests.
    """
    terms = [tuple(float(v) for v in term) for term in terms]
    if any(a < 0 for a, _, _ in terms) or constant < 0:
        raise NonPositiveSeed(f"negative amplitude in seed: constant={constant}, terms={terms}")
    if constant == 0 and not any(a > 0 for a, _, _ in terms):
        raise NonPositiveSeed("seed is identically zero")
    if rates is None:
        rates = [plane_wave_rate(background, k, l) for _, k, l in terms]
    rates = [float(w) for w in rates]

    def phi(x, y, t, order):
        X, Y, T = variables(x, y, t, order)
        out = jet_constant(constant, order, X.batch_shape)
        for (a, k, l), w in zip(terms, rates):
            out = out + a * (k * X + l * Y + w * T).exp()
        return out

    params = {"constant": constant, "terms": [list(tm) for tm in terms], "rates": rates,
              "background": [background.u0, background.v0]}
    return HeatSolution(phi, params)


# -- the transformation -------------------------------------------------------

def _as_pair(background: Background) -> SolutionPair:
    if isinstance(background, ConstantPair):
        return constant_pair_solution(background)
    return background


def backlund_lift(phi: HeatSolution, background: Background, seed: str = "phi",
                  require_positive: bool = False) -> SolutionPair:
    """u = phi_x / phi + u0, v = phi_y / phi + v0 for any background pair.

    Only phi != 0 is needed for the formula (phi_x / phi is the x-derivative
    of log|phi|); ``require_positive`` enforces phi > 0 as well.
    """
    base = _as_pair(background)

    def evaluate(x, y, t, order):
        p = phi(x, y, t, order + 1)
        val = np.asarray(p.value)
        if require_positive and np.any(~(val > DIVISOR_FLOOR)):
            raise PhiNonPositive(f"phi <= {DIVISOR_FLOOR} at an evaluation point (min {val.min()!r})")
        if np.any(~(np.abs(val) > DIVISOR_FLOOR)):
            raise DivisorTooSmall("phi vanishes at an evaluation point")
        u0, v0 = base(x, y, t, order)
        pt = p.truncate(order)
        return p.diff("x") / pt + u0, p.diff("y") / pt + v0

    depth = base.lineage.depth + 1 if isinstance(background, SolutionPair) else 0
    return SolutionPair(evaluate, Lineage(seed, depth), base.max_order)


def cole_hopf_lift(phi: HeatSolution, background: ConstantPair = ConstantPair(),
                   seed: str = "phi") -> SolutionPair:
    """Lift a positive heat solution over a constant background into a Burgers pair."""
    return backlund_lift(phi, background, seed, require_positive=True)


def pair_sum_heat(pair: SolutionPair) -> HeatSolution:
    """phi' = u + v, which solves the heat equation drifted by (u, v) itself."""

    def phi(x, y, t, order):
        u, v = pair(x, y, t, order)
        return u + v

    return HeatSolution(phi, {"from_pair": str(pair.lineage)})


def recurrence_step(pair: SolutionPair) -> SolutionPair:
    """(u, v) -> ((u_x+v_x)/(u+v) + u, (u_y+v_y)/(u+v) + v)."""

    def evaluate(x, y, t, order):
        u, v = pair(x, y, t, order + 1)
        s = u + v
        if np.any(~(np.abs(np.asarray(s.value)) > DIVISOR_FLOOR)):
            raise DivisorTooSmall("u + v vanishes at an evaluation point")
        st = s.truncate(order)
        return s.diff("x") / st + u.truncate(order), s.diff("y") / st + v.truncate(order)

    cap = None if pair.max_order is None else pair.max_order - 1
    if cap is not None and cap < 0:
        raise OrderExhausted(f"pair {pair.lineage} has no derivative order left")
    return SolutionPair(evaluate, Lineage(pair.lineage.seed, pair.lineage.depth + 1), cap)


def iterate_recurrence(pair: SolutionPair, depth: int) -> SolutionPair:
    for _ in range(depth):
        pair = recurrence_step(pair)
    return pair


# -- verification -------------------------------------------------------------

def burgers_residual(pair: SolutionPair, point, order: int = 2):
    """(r1, r2) with r = f_t - f_xx - f_yy - 2 u f_x - 2 v f_y for f = u, v.

    ``point`` is (x, y, t); each coordinate may be an array.
    """
    if order < 2:
        raise ValueError("residual needs jets of order >= 2")
    x, y, t = point
    u, v = pair(x, y, t, order)
    U, V = u.value, v.value

    def res(f):
        return (f.partial(0, 0, 1) - f.partial(2, 0, 0) - f.partial(0, 2, 0)
                - 2 * U * f.partial(1, 0, 0) - 2 * V * f.partial(0, 1, 0))

    return res(u), res(v)


def compatibility_defect(pair: SolutionPair, point):
    """u_y - v_x at the given points."""
    x, y, t = point
    u, v = pair(x, y, t, 1)
    return u.partial(0, 1, 0) - v.partial(1, 0, 0)


def heat_residual(phi: HeatSolution, background: Background, point):
    """phi_t - phi_xx - phi_yy - 2 u0 phi_x - 2 v0 phi_y at the given points."""
    x, y, t = point
    p = phi(x, y, t, 2)
    if isinstance(background, ConstantPair):
        u0, v0 = background.u0, background.v0
    else:
        uj, vj = background(x, y, t, 0)
        u0, v0 = uj.value, vj.value
    return (p.partial(0, 0, 1) - p.partial(2, 0, 0) - p.partial(0, 2, 0)
            - 2 * u0 * p.partial(1, 0, 0) - 2 * v0 * p.partial(0, 1, 0))


@dataclass
class ValidationReport:
    heat_residual_max: float
    compatibility_max: float
    n_points: int
    notes: list = field(default_factory=list)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.heat_residual_max < tol and self.compatibility_max < tol


def validate_bt_premises(phi: HeatSolution, background: Background, sample_points) -> ValidationReport:
    """Check the two premises of the lift over a sample set.

    The heat residual must vanish, and the background must be curl free
    (u0_y = v0_x).  Failures are reported, never raised.
    """
    x, y, t = (np.asarray(c, dtype=float) for c in sample_points)
    notes = []
    try:
        heat = float(np.max(np.abs(heat_residual(phi, background, (x, y, t))), initial=0.0))
    except Exception as exc:  # report carries the failure
        heat = float("inf")
        notes.append(f"heat residual: {type(exc).__name__}: {exc}")
    if isinstance(background, ConstantPair):
        compat = 0.0
    else:
        try:
            compat = float(np.max(np.abs(compatibility_defect(background, (x, y, t))), initial=0.0))
        except Exception as exc:
            compat = float("inf")
            notes.append(f"compatibility: {type(exc).__name__}: {exc}")
    return ValidationReport(heat, compat, int(x.size), notes)


def sample_points(n: int = 100, seed: int = 0, box=DEFAULT_SAMPLE_BOX):
    """Uniform random (x, y, t) arrays in ``box`` from a seeded generator."""
    rng = np.random.default_rng(seed)
    return tuple(rng.uniform(lo, hi, n) for lo, hi in box)


def evaluate_on_grid(pair: SolutionPair, X, Y, t):
    """Values of u and v on coordinate arrays at time ``t``."""
    u, v = pair(X, Y, np.full_like(np.asarray(X, dtype=float), t), 0)
    return np.array(u.value), np.array(v.value)
