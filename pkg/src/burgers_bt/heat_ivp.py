"""Initial-value problem for the Burgers system through its linearisation.

Initial Burgers data (s, k) are turned into a heat datum

    f(x, y) = exp( int_{x0}^{x} s1(xi, y0) dxi + int_{y0}^{y} k1(x, eta) deta ),
    s1 = s - u0,  k1 = k - v0,

which is evolved under phi_t = lap(phi) + 2 u0 phi_x + 2 v0 phi_y by the exact
Fourier multiplier

    exp( (-(c1^2 + c2^2) + 2i (u0 c1 + v0 c2)) tau ),   tau = t - t0,

on a periodic box, and the Burgers fields are recovered as u = phi_x/phi + u0,
v = phi_y/phi + v0.  Its real-space counterpart, convolution with the drifted
Gaussian

    G(x, y) = exp(-((x + 2 u0 tau)^2 + (y + 2 v0 tau)^2) / (4 tau)) / (4 pi tau),

is implemented separately by direct quadrature as an independent check.

Grids are cell-vertex, periodic, centred on the origin:
x_i = -Lx/2 + i Lx/nx.  Field arrays are indexed ``values[ix, iy]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from .errors import (CompatibilityViolated, KernelTruncationError, NonPositiveResult,
                     PhiNonPositive, QuadratureNonConvergent)
from .exact import ConstantPair

QUAD_RTOL = 1e-10
COMPAT_TOL = 1e-6
COMPAT_STEP = 1e-5
KERNEL_TAIL = 1e-12

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DomainBox:
    """Periodic rectangle [-Lx/2, Lx/2) x [-Ly/2, Ly/2) sampled on nx x ny points."""

    Lx: float
    Ly: float
    nx: int
    ny: int
    t0: float = 0.0

    def __post_init__(self):
        if not (self.Lx > 0 and self.Ly > 0):
            raise ValueError(f"box lengths must be positive, got {self.Lx}, {self.Ly}")
        for n in (self.nx, self.ny):
            if int(n) != n or n < 8 or not _is_pow2(int(n)):
                raise ValueError(f"grid sizes must be powers of two >= 8, got {n}")

    @property
    def hx(self) -> float:
        return self.Lx / self.nx

    @property
    def hy(self) -> float:
        return self.Ly / self.ny

    @property
    def x(self) -> np.ndarray:
        return -0.5 * self.Lx + self.hx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return -0.5 * self.Ly + self.hy * np.arange(self.ny)

    def grid(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def wavenumbers(self):
        """Angular wavenumbers 2 pi m / Lx and 2 pi n / Ly in FFT order."""
        # fftfreq(n) * n is exact integers for power-of-two n
        c1 = np.fft.fftfreq(self.nx) * self.nx * (2 * np.pi / self.Lx)
        c2 = np.fft.fftfreq(self.ny) * self.ny * (2 * np.pi / self.Ly)
        return c1, c2

    def interior_mask(self, fraction: float = 0.5) -> np.ndarray:
        """Central sub-box covering ``fraction`` of each side."""
        X, Y = self.grid()
        return (np.abs(X) <= 0.5 * fraction * self.Lx) & (np.abs(Y) <= 0.5 * fraction * self.Ly)


@dataclass(frozen=True)
class ScalarField2D:
    values: np.ndarray
    box: DomainBox
    time: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.box.nx, self.box.ny):
            raise ValueError(f"field shape {v.shape} does not match box {(self.box.nx, self.box.ny)}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field has non-finite values")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Spectrum2D:
    coeffs: np.ndarray
    box: DomainBox


@dataclass(frozen=True)
class InitialData:
    """Initial Burgers fields s(x, y), k(x, y) (vectorised callables)."""

    s: Callable
    k: Callable
    base_point: Tuple[float, float] = (0.0, 0.0)
    background: ConstantPair = ConstantPair()
    name: str = "custom"
    params: dict = field(default_factory=dict)


# -- transforms -----------------------------------------------------------------

def to_spectrum(f: ScalarField2D) -> Spectrum2D:
    return Spectrum2D(np.fft.fft2(f.values), f.box)


def to_field(spec: Spectrum2D, time: float) -> ScalarField2D:
    z = np.fft.ifft2(spec.coeffs)
    scale = max(np.max(np.abs(z.real)), np.finfo(float).tiny)
    if np.max(np.abs(z.imag)) > 1e-10 * scale:
        raise RuntimeError("inverse transform left a non-negligible imaginary part")
    return ScalarField2D(z.real, spec.box, time)


def _drift_factor(c, drift, tau):
    """1-D factor exp((-c^2 + 2i drift c) tau); the Nyquist entry keeps only its
    real part so real data stay real."""
    m = np.exp((-c * c + 2j * drift * c) * tau)
    if c.size % 2 == 0:
        ny = c.size // 2
        m[ny] = m[ny].real
    return m


def heat_multiplier(box: DomainBox, background: ConstantPair, tau: float) -> np.ndarray:
    c1, c2 = box.wavenumbers()
    return np.outer(_drift_factor(c1, background.u0, tau), _drift_factor(c2, background.v0, tau))


def evolve_spectrum(spec: Spectrum2D, background: ConstantPair, tau: float) -> Spectrum2D:
    return Spectrum2D(spec.coeffs * heat_multiplier(spec.box, background, tau), spec.box)


def spectral_derivative(f: ScalarField2D, axis: int) -> ScalarField2D:
    """d f / d(axis) by wavenumber multiplication; Nyquist derivative set to zero."""
    c1, c2 = f.box.wavenumbers()
    c = (c1 if axis == 0 else c2).copy()
    if c.size % 2 == 0:
        c[c.size // 2] = 0.0
    shape = (-1, 1) if axis == 0 else (1, -1)
    d = np.fft.ifft2(np.fft.fft2(f.values) * (1j * c.reshape(shape))).real
    return ScalarField2D(d, f.box, f.time)


def spectral_curl(u: ScalarField2D, v: ScalarField2D) -> np.ndarray:
    """u_y - v_x."""
    return spectral_derivative(u, 1).values - spectral_derivative(v, 0).values


# -- line integrals ---------------------------------------------------------------

def _line_integral(fn, a, b, rtol: float = QUAD_RTOL, max_panels: int = 4096):
    """Integrals of ``fn`` over [a, b] (arrays) by composite 8-point Gauss-Legendre.

    ``fn(p)`` receives positions with shape ``broadcast(a, b).shape + (q,)``.
    Panels are doubled until successive results agree to ``rtol`` relative
    (floor 1 on the scale, so zero integrals converge).
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    a, b = a[..., None], b[..., None]
    prev = None
    m = 1
    while m <= max_panels:
        edges = np.arange(m)[:, None]
        t = ((edges + 0.5 * (_GL_NODES + 1.0)) / m).ravel()
        w = np.tile(_GL_WEIGHTS, m) / (2.0 * m)
        vals = fn(a + (b - a) * t)
        cur = ((b - a)[..., 0]) * np.sum(vals * w, axis=-1)
        if prev is not None:
            err = np.abs(cur - prev)
            if np.all(err <= rtol * np.maximum(np.abs(cur), 1.0)):
                return cur
        prev = cur
        m *= 2
    raise QuadratureNonConvergent(f"line integral did not converge with {max_panels} panels")


def _cumulative_from(fn, nodes, start):
    """int_{start}^{node} fn for every node, via segments between sorted breakpoints."""
    pts = np.unique(np.append(nodes, start))
    seg = _line_integral(fn, pts[:-1], pts[1:])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return cum[np.searchsorted(pts, nodes)] - cum[np.searchsorted(pts, start)]


def check_compatibility(data: InitialData, box: DomainBox, tol: float = COMPAT_TOL) -> float:
    """max |ds/dy - dk/dx| on the grid by centred differences of step 1e-5."""
    X, Y = box.grid()
    d = COMPAT_STEP
    dsdy = (data.s(X, Y + d) - data.s(X, Y - d)) / (2 * d)
    dkdx = (data.k(X + d, Y) - data.k(X - d, Y)) / (2 * d)
    defect = float(np.max(np.abs(dsdy - dkdx)))
    if not defect <= tol:
        raise CompatibilityViolated(f"ds/dy - dk/dx reaches {defect:.3e} (tolerance {tol:.1e})")
    return defect


def log_initial_data(data: InitialData, box: DomainBox) -> np.ndarray:
    """The exponent of the heat datum on the grid (path along y0, then along x)."""
    x0, y0 = data.base_point
    u0, v0 = data.background.u0, data.background.v0
    x, y = box.x, box.y

    def s1(p):
        return data.s(p, np.full_like(p, y0)) - u0

    ix = _cumulative_from(s1, x, x0)

    # int_{y0}^{y} k1(x, eta) deta for every grid x at once
    ypts = np.unique(np.append(y, y0))
    xs = x[:, None]

    def k1(p):
        return data.k(np.broadcast_to(xs[..., None], p.shape), p) - v0

    shape = (x.size, ypts.size - 1)
    seg = _line_integral(k1, np.broadcast_to(ypts[:-1], shape), np.broadcast_to(ypts[1:], shape))
    cum = np.concatenate([np.zeros((x.size, 1)), np.cumsum(seg, axis=1)], axis=1)
    iy = cum[:, np.searchsorted(ypts, y)] - cum[:, [np.searchsorted(ypts, y0)]]
    return ix[:, None] + iy


def build_initial_data(data: InitialData, box: DomainBox) -> ScalarField2D:
    """Heat datum f at t0 on the grid; fails on incompatible (s, k)."""
    check_compatibility(data, box)
    return ScalarField2D(np.exp(log_initial_data(data, box)), box, box.t0)


def path_integrals(data: InitialData, probe):
    """Exponent of f at ``probe`` along the two axis-aligned paths from the base point.

    path 1: (x0, y0) -> (x, y0) -> (x, y);  path 2: (x0, y0) -> (x0, y) -> (x, y).
    """
    x0, y0 = data.base_point
    x, y = probe
    u0, v0 = data.background.u0, data.background.v0

    def along_x(yc):
        return lambda p: data.s(p, np.full_like(p, yc)) - u0

    def along_y(xc):
        return lambda p: data.k(np.full_like(p, xc), p) - v0

    i1 = _line_integral(along_x(y0), x0, x) + _line_integral(along_y(x), y0, y)
    i2 = _line_integral(along_y(x0), y0, y) + _line_integral(along_x(y), x0, x)
    return float(i1), float(i2)


def path_independence_check(data: InitialData, probe) -> float:
    i1, i2 = path_integrals(data, probe)
    return abs(i1 - i2)


# -- solvers --------------------------------------------------------------------

def _require_positive(f: ScalarField2D, what="f"):
    m = float(np.min(f.values))
    if not m > 0:
        raise PhiNonPositive(f"{what} must be strictly positive (min {m!r})")


def solve_heat_spectral(f: ScalarField2D, background: ConstantPair, t: float) -> ScalarField2D:
    """Evolve the heat datum from ``f.time`` to ``t`` with the exact multiplier."""
    tau = t - f.time
    if tau < 0:
        raise ValueError(f"cannot evolve backwards: t={t} < {f.time}")
    _require_positive(f)
    phi = to_field(evolve_spectrum(to_spectrum(f), background, tau), t)
    if not np.min(phi.values) > 0:
        raise NonPositiveResult(
            f"phi reached {np.min(phi.values)!r}; enlarge the box or resolve the datum better")
    return phi


def _periodic_gaussian(targets, sources, L, tau, tail=KERNEL_TAIL, max_images=10000):
    """Matrix of the 1-D unit-mass Gaussian of variance 2 tau, summed over images."""
    d = targets[:, None] - sources[None, :]
    d = d - L * np.round(d / L)  # nearest image, |d| <= L/2
    reach = math.sqrt(4 * tau * math.log(1.0 / tail))
    n_img = int(math.ceil(reach / L)) + 1
    if n_img > max_images:
        raise KernelTruncationError(f"kernel needs {n_img} images (L={L}, tau={tau})")
    g = np.zeros_like(d)
    for m in range(-n_img, n_img + 1):
        g += np.exp(-((d + m * L) ** 2) / (4 * tau))
    # nearest image left out of the sum
    edge = math.exp(-((n_img + 0.5) * L) ** 2 / (4 * tau))
    if edge > tail:
        raise KernelTruncationError(f"image sum tail {edge:.2e} exceeds {tail:.0e}")
    return g / math.sqrt(4 * math.pi * tau)


def kernel_convolve_oracle(f: ScalarField2D, background: ConstantPair, t: float) -> ScalarField2D:
    """phi(x) = sum_z f(z) G(x + 2 (u0, v0) tau - z) hx hy  (tensor trapezoid rule).

    The drifted Gaussian is separable, so the double sum is evaluated as
    Kx @ F @ Ky^T with periodised 1-D kernels.
    """
    tau = t - f.time
    if not tau > 0:
        raise ValueError("kernel quadrature needs t > t0")
    box = f.box
    x, y = box.x, box.y
    kx = _periodic_gaussian(x + 2 * background.u0 * tau, x, box.Lx, tau) * box.hx
    ky = _periodic_gaussian(y + 2 * background.v0 * tau, y, box.Ly, tau) * box.hy
    return ScalarField2D(kx @ f.values @ ky.T, box, t)


def recover_burgers(phi: ScalarField2D, background: ConstantPair):
    """(u, v) = (phi_x / phi + u0, phi_y / phi + v0) with spectral derivatives."""
    _require_positive(phi, "phi")
    px = spectral_derivative(phi, 0).values
    py = spectral_derivative(phi, 1).values
    u = ScalarField2D(px / phi.values + background.u0, phi.box, phi.time)
    v = ScalarField2D(py / phi.values + background.v0, phi.box, phi.time)
    return u, v


@dataclass(frozen=True)
class IVPResult:
    f: ScalarField2D
    phi: ScalarField2D
    u: ScalarField2D
    v: ScalarField2D


def solve_burgers_ivp(data: InitialData, box: DomainBox, t: float) -> IVPResult:
    """Initial data at ``box.t0`` -> Burgers fields at time ``t``."""
    f = build_initial_data(data, box)
    phi = solve_heat_spectral(f, data.background, t)
    u, v = recover_burgers(phi, data.background)
    return IVPResult(f, phi, u, v)


def recovered_curl(phi: ScalarField2D) -> np.ndarray:
    """u_y - v_x of the recovered pair, differentiating phi spectrally.

    Uses u_y = (phi_xy phi - phi_x phi_y) / phi^2 and the mirror expression for
    v_x, with phi_xy and phi_yx taken in opposite orders.  Unlike a spectral
    curl of u and v themselves, this stays meaningful when u, v do not decay
    at the box edge.
    """
    _require_positive(phi, "phi")
    px, py = spectral_derivative(phi, 0), spectral_derivative(phi, 1)
    pxy = spectral_derivative(px, 1).values
    pyx = spectral_derivative(py, 0).values
    p = phi.values
    return ((pxy * p - px.values * py.values) - (pyx * p - py.values * px.values)) / (p * p)
