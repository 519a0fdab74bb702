"""Truncated Taylor jets in the three variables (x, y, t).

A :class:`Jet` stores the normalised Taylor coefficients

    c[i, j, k] = d^i_x d^j_y d^k_t f / (i! j! k!)

of a scalar function at an expansion point, for every multi-index with
``i + j + k <= order``.  Coefficients live in one dense vector laid out in
graded order (all degree-0 entries, then degree 1, ...), so the layout of a
lower order is always a prefix of a higher one and truncation is slicing.

Every coefficient may carry trailing batch dimensions: a jet built from an
array of expansion points evaluates a whole sample set in one pass.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivisorTooSmall, OrderExceeded

DIVISOR_FLOOR = 1e-12

_AXES = {"x": 0, "y": 1, "t": 2, 0: 0, 1: 1, 2: 2}


@dataclass(frozen=True)
class _Layout:
    order: int
    indices: tuple
    position: dict
    degree_start: tuple  # degree_start[d] is the first slot of degree d
    # Cauchy product: pairs (a-slot, b-slot) sorted by output slot
    mul_a: np.ndarray
    mul_b: np.ndarray
    mul_starts: np.ndarray
    # per-degree pairs (alpha, gamma - alpha) with alpha != 0, sorted by gamma
    rec: tuple


def n_coeffs(order: int) -> int:
    return math.comb(order + 3, 3)


def _multi_indices(order):
    out = []
    for d in range(order + 1):
        for i in range(d, -1, -1):
            for j in range(d - i, -1, -1):
                out.append((i, j, d - i - j))
    return out


@functools.lru_cache(maxsize=None)
def _layout(order: int) -> _Layout:
    if order < 0:
        raise ValueError(f"jet order must be non-negative, got {order}")
    idx = _multi_indices(order)
    pos = {m: p for p, m in enumerate(idx)}
    starts = tuple(n_coeffs(d - 1) if d > 0 else 0 for d in range(order + 2))

    mul_a, mul_b, mul_starts = [], [], []
    rec = []
    for d in range(order + 1):
        ra, rb, rw, rs = [], [], [], []
        for g in idx[starts[d]:starts[d + 1]]:
            mul_starts.append(len(mul_a))
            rs.append(len(ra))
            for a in idx[: starts[d + 1]]:
                if a[0] > g[0] or a[1] > g[1] or a[2] > g[2]:
                    continue
                b = (g[0] - a[0], g[1] - a[1], g[2] - a[2])
                mul_a.append(pos[a])
                mul_b.append(pos[b])
                if d > 0 and sum(a) > 0:
                    ra.append(pos[a])
                    rb.append(pos[b])
                    rw.append(sum(a) / d)
        rec.append((np.array(ra, dtype=np.intp), np.array(rb, dtype=np.intp),
                    np.array(rw), np.array(rs, dtype=np.intp)))
    return _Layout(order, tuple(idx), pos, starts,
                   np.array(mul_a, dtype=np.intp), np.array(mul_b, dtype=np.intp),
                   np.array(mul_starts, dtype=np.intp), tuple(rec))


@functools.lru_cache(maxsize=None)
def _diff_map(order: int, axis: int):
    """Source slots and factors for d/d(axis) taking an order-n jet to order n-1."""
    hi, lo = _layout(order), _layout(order - 1)
    src, fac = [], []
    for m in lo.indices:
        up = list(m)
        up[axis] += 1
        src.append(hi.position[tuple(up)])
        fac.append(float(up[axis]))
    return np.array(src, dtype=np.intp), np.array(fac)


def _bcast(w, arr):
    return w.reshape(w.shape + (1,) * (arr.ndim - 1))


class Jet:
    """Immutable truncated Taylor expansion in (x, y, t)."""

    __slots__ = ("coeffs", "order")
    __array_priority__ = 100  # make ndarray * Jet dispatch to Jet

    def __init__(self, coeffs, order: int):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[:1] != (n_coeffs(order),):
            raise ValueError(
                f"order {order} needs {n_coeffs(order)} coefficients, got shape {coeffs.shape}")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value!r})"

    # -- access -----------------------------------------------------------
    @property
    def value(self):
        return self.coeffs[0]

    @property
    def batch_shape(self):
        return self.coeffs.shape[1:]

    def coeff(self, i: int, j: int, k: int):
        if i < 0 or j < 0 or k < 0 or i + j + k > self.order:
            raise OrderExceeded(f"multi-index ({i}, {j}, {k}) beyond order {self.order}")
        return self.coeffs[_layout(self.order).position[(i, j, k)]]

    def partial(self, i: int = 0, j: int = 0, k: int = 0):
        """Mixed partial d^i_x d^j_y d^k_t at the expansion point."""
        c = self.coeff(i, j, k)
        return math.factorial(i) * math.factorial(j) * math.factorial(k) * c

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExceeded(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.coeffs[: n_coeffs(order)], order)

    def diff(self, axis) -> "Jet":
        """Derivative jet, one order lower."""
        if self.order == 0:
            raise OrderExceeded("cannot differentiate an order-0 jet")
        src, fac = _diff_map(self.order, _AXES[axis])
        return Jet(_bcast(fac, self.coeffs) * self.coeffs[src], self.order - 1)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        return jet_constant(other, self.order, self.batch_shape)

    def __add__(self, other):
        return jet_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.order)

    def __sub__(self, other):
        return jet_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return jet_add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        other = np.asarray(other, dtype=float)
        return Jet(self.coeffs * other, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return jet_div(self._coerce(other), self)

    def exp(self) -> "Jet":
        return jet_exp(self)

    def log(self) -> "Jet":
        return jet_log(self)


def jet_constant(value, order: int, batch_shape=()) -> Jet:
    value = np.broadcast_to(np.asarray(value, dtype=float), batch_shape) \
        if batch_shape else np.asarray(value, dtype=float)
    coeffs = np.zeros((n_coeffs(order),) + value.shape)
    coeffs[0] = value
    return Jet(coeffs, order)


def jet_variable(which, value, order: int) -> Jet:
    """Jet of the coordinate function ``which`` ('x', 'y' or 't') at ``value``."""
    axis = _AXES[which]
    jet = jet_constant(value, order)
    if order >= 1:
        coeffs = jet.coeffs.copy()
        e = [0, 0, 0]
        e[axis] = 1
        coeffs[_layout(order).position[tuple(e)]] = 1.0
        jet = Jet(coeffs, order)
    return jet


def variables(x, y, t, order: int):
    """Seed jets for all three coordinates, broadcast to a common batch shape."""
    x, y, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, t)))
    return jet_variable("x", x, order), jet_variable("y", y, order), jet_variable("t", t, order)


def _check_orders(a, b):
    if a.order != b.order:
        raise ValueError(f"jet orders differ: {a.order} vs {b.order}")


def _flat(c):
    return c.reshape(c.shape[0], -1)


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_orders(a, b)
    return Jet(a.coeffs + b.coeffs, a.order)


def jet_mul(a: Jet, b: Jet) -> Jet:
    _check_orders(a, b)
    lay = _layout(a.order)
    ac, bc = np.broadcast_arrays(a.coeffs, b.coeffs)
    shape = ac.shape
    ac, bc = _flat(ac), _flat(bc)
    prod = np.add.reduceat(ac[lay.mul_a] * bc[lay.mul_b], lay.mul_starts, axis=0)
    return Jet(prod.reshape(shape), a.order)


def _run_recurrence(order, first, step):
    """Fill coefficients degree by degree; ``step`` sees all lower degrees."""
    lay = _layout(order)
    out = np.empty((n_coeffs(order),) + first.shape)
    out[0] = first
    for d in range(1, order + 1):
        ia, ib, w, rs = lay.rec[d]
        lo, hi = lay.degree_start[d], lay.degree_start[d + 1]
        out[lo:hi] = step(lo, hi, ia, ib, w, rs, out)
    return out


def jet_div(a: Jet, b: Jet) -> Jet:
    """Quotient a / b, raising :class:`DivisorTooSmall` if |b| at the point is tiny."""
    _check_orders(a, b)
    ac, bc = np.broadcast_arrays(a.coeffs, b.coeffs)
    shape = ac.shape
    ac, bc = _flat(ac), _flat(bc)
    b0 = bc[0]
    if np.any(~(np.abs(b0) > DIVISOR_FLOOR)):
        raise DivisorTooSmall(
            f"divisor value {b0.flat[np.argmin(np.abs(b0))]!r} within floor {DIVISOR_FLOOR}")

    def step(lo, hi, ia, ib, w, rs, out):
        s = np.add.reduceat(bc[ia] * out[ib], rs, axis=0)
        return (ac[lo:hi] - s) / b0

    out = _run_recurrence(a.order, ac[0] / b0, step)
    return Jet(out.reshape(shape), a.order)


def jet_exp(a: Jet) -> Jet:
    ac = _flat(a.coeffs)

    def step(lo, hi, ia, ib, w, rs, out):
        return np.add.reduceat(w[:, None] * ac[ia] * out[ib], rs, axis=0)

    out = _run_recurrence(a.order, np.exp(ac[0]), step)
    return Jet(out.reshape(a.coeffs.shape), a.order)


def jet_log(a: Jet) -> Jet:
    ac = _flat(a.coeffs)
    a0 = ac[0]
    if np.any(~(a0 > 0)):
        raise ValueError("log of a jet with non-positive value")

    def step(lo, hi, ia, ib, w, rs, out):
        s = np.add.reduceat((1.0 - w)[:, None] * ac[ia] * out[ib], rs, axis=0)
        return (ac[lo:hi] - s) / a0

    out = _run_recurrence(a.order, np.log(a0), step)
    return Jet(out.reshape(a.coeffs.shape), a.order)


def extract_partial(j: Jet, i: int, jdx: int, k: int):
    """Mixed partial derivative d^i_x d^jdx_y d^k_t carried by ``j``."""
    return j.partial(i, jdx, k)
