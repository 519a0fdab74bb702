import numpy as np
import pytest

from burgers_bt import heat_ivp
from burgers_bt.errors import (CompatibilityViolated, KernelTruncationError, NonPositiveResult,
                               PhiNonPositive)
from burgers_bt.exact import ConstantPair
from burgers_bt.heat_ivp import (DomainBox, InitialData, ScalarField2D, Spectrum2D,
                                 build_initial_data, evolve_spectrum, kernel_convolve_oracle,
                                 path_independence_check, recover_burgers, solve_heat_spectral)
from burgers_bt.library import constants, gaussian_bump, periodic_cosine, tanh_pair

L2PI = 2 * np.pi


def cosine_datum(box):
    X, Y = box.grid()
    return ScalarField2D(np.exp(np.cos(2 * np.pi * X / box.Lx) + np.cos(2 * np.pi * Y / box.Ly)),
                         box, box.t0)


def test_box_validation():
    with pytest.raises(ValueError):
        DomainBox(1, 1, 12, 16)
    with pytest.raises(ValueError):
        DomainBox(1, 1, 4, 4)
    with pytest.raises(ValueError):
        DomainBox(0, 1, 16, 16)
    box = DomainBox(4, 2, 16, 8, 0.5)
    assert box.hx == 0.25 and box.hy == 0.25
    assert box.x[0] == -2 and box.x[-1] == 2 - 0.25
    assert box.interior_mask().sum() == 9 * 5


def test_real_spectrum_is_hermitian():
    box = DomainBox(L2PI, L2PI, 16, 16)
    rng = np.random.default_rng(0)
    c = heat_ivp.to_spectrum(ScalarField2D(rng.normal(size=(16, 16)), box, 0)).coeffs
    m = np.arange(16)
    assert np.allclose(c[(-m[:, None]) % 16, (-m[None, :]) % 16], np.conj(c), atol=1e-12)


# -- initial datum ------------------------------------------------------------------

def test_zero_data_give_unit_datum():
    f = build_initial_data(constants(0, 0).data, DomainBox(4, 4, 16, 16))
    assert np.all(f.values == 1.0)


def test_constant_data_give_exponential():
    box = DomainBox(4, 4, 16, 16)
    f = build_initial_data(constants(0.7, -0.4).data, box)
    X, Y = box.grid()
    assert np.max(np.abs(f.values / np.exp(0.7 * X - 0.4 * Y) - 1)) < 1e-12


def test_tanh_datum_is_multiple_of_phi():
    box = DomainBox(16, 16, 128, 128, 0.25)
    case = tanh_pair(t0=0.25, base_point=(0.3, -1.1))
    f = build_initial_data(case.data, box)
    X, Y = box.grid()
    ratio = f.values / case.exact_phi(X, Y, 0.25)
    inner = box.interior_mask()
    assert np.ptp(ratio[inner]) / np.mean(ratio[inner]) < 1e-8
    assert np.ptp(ratio) / np.mean(ratio) < 1e-8


def test_incompatible_data_rejected():
    data = InitialData(lambda x, y: y, lambda x, y: -x)
    with pytest.raises(CompatibilityViolated):
        build_initial_data(data, DomainBox(2, 2, 8, 8))


def test_path_independence_constant():
    assert path_independence_check(constants(1.5, -2.0).data, (1.3, -0.7)) < 1e-12


def test_path_independence_tanh():
    case = tanh_pair(background=ConstantPair(0.2, -0.1), t0=0.1)
    for probe in [(1.0, 1.0), (-2.0, 0.5), (3.0, -3.0)]:
        assert path_independence_check(case.data, probe) < 1e-8


@pytest.mark.parametrize("probe", [(1.0, 1.0), (2.0, -0.5), (-1.5, 3.0)])
def test_path_discrepancy_of_rotational_data(probe):
    # s = y, k = -x from the origin: path 1 gives -xy, path 2 gives +xy
    data = InitialData(lambda x, y: y, lambda x, y: -x)
    i1, i2 = heat_ivp.path_integrals(data, probe)
    x, y = probe
    assert i1 == pytest.approx(-x * y, abs=1e-10)
    assert i2 == pytest.approx(x * y, abs=1e-10)
    assert path_independence_check(data, probe) == pytest.approx(2 * abs(x * y), abs=1e-10)


# -- spectral solver ------------------------------------------------------------------

@pytest.mark.parametrize("bg", [ConstantPair(), ConstantPair(0.4, -1.3)])
def test_unit_datum_is_fixed(bg):
    box = DomainBox(L2PI, 3.0, 32, 16)
    f = ScalarField2D(np.ones((32, 16)), box, 0.0)
    for t in (0.0, 0.3, 5.0):
        assert np.all(solve_heat_spectral(f, bg, t).values == 1.0)


@pytest.mark.parametrize("m,n", [(1, 0), (0, 3), (-2, 5), (7, -7), (3, 1)])
def test_single_mode_multiplier(m, n):
    box = DomainBox(3.0, 5.0, 16, 16)
    bg, tau = ConstantPair(0.6, -0.9), 0.07
    coeffs = np.zeros((16, 16), complex)
    coeffs[m % 16, n % 16] = 2.0 - 1.0j
    out = evolve_spectrum(Spectrum2D(coeffs, box), bg, tau).coeffs
    c1, c2 = 2 * np.pi * m / 3.0, 2 * np.pi * n / 5.0
    expected = (2.0 - 1.0j) * np.exp((-(c1 ** 2 + c2 ** 2) + 2j * (0.6 * c1 - 0.9 * c2)) * tau)
    assert abs(out[m % 16, n % 16] - expected) <= 1e-14 * abs(expected)
    out[m % 16, n % 16] = 0
    assert np.all(out == 0)


def test_semigroup():
    box = DomainBox(L2PI, L2PI, 64, 64)
    f, bg = cosine_datum(box), ConstantPair(0.3, 0.8)
    two = solve_heat_spectral(solve_heat_spectral(f, bg, 0.13), bg, 0.4)
    one = solve_heat_spectral(f, bg, 0.4)
    assert np.max(np.abs(two.values - one.values)) < 1e-12


def test_translation_pins_drift():
    box = DomainBox(L2PI, L2PI, 128, 128)
    f, tau = cosine_datum(box), 0.1
    sx, sy = 3, -5  # grid shifts
    bg = ConstantPair(sx * box.hx / (2 * tau), sy * box.hy / (2 * tau))
    moved = solve_heat_spectral(f, bg, tau).values
    still = solve_heat_spectral(f, ConstantPair(), tau).values
    # phi_bg(x, y) = phi_0(x + 2 u0 tau, y + 2 v0 tau)
    assert np.max(np.abs(moved - np.roll(still, (-sx, -sy), axis=(0, 1)))) < 1e-8


def test_spectral_matches_kernel_cosine():
    box = DomainBox(L2PI, L2PI, 128, 128)
    f = cosine_datum(box)
    a = solve_heat_spectral(f, ConstantPair(), 0.1)
    b = kernel_convolve_oracle(f, ConstantPair(), 0.1)
    assert np.max(np.abs(a.values - b.values)) < 1e-6


def test_rejects_nonpositive_input_and_backwards_time():
    box = DomainBox(1, 1, 8, 8)
    with pytest.raises(PhiNonPositive):
        solve_heat_spectral(ScalarField2D(np.zeros((8, 8)), box, 0), ConstantPair(), 0.1)
    with pytest.raises(ValueError):
        solve_heat_spectral(ScalarField2D(np.ones((8, 8)), box, 1.0), ConstantPair(), 0.5)


def test_underresolved_spike_reports_nonpositive():
    box = DomainBox(L2PI, L2PI, 32, 32)
    v = np.full((32, 32), 1e-6)
    v[16, 16] = 1.0
    with pytest.raises(NonPositiveResult):
        solve_heat_spectral(ScalarField2D(v, box, 0), ConstantPair(), 1e-4)


# -- kernel oracle ----------------------------------------------------------------------

def test_kernel_unit_mass():
    box = DomainBox(L2PI, L2PI, 128, 128)
    f = ScalarField2D(np.ones((128, 128)), box, 0.0)
    out = kernel_convolve_oracle(f, ConstantPair(0.5, -0.25), 0.1)
    assert np.max(np.abs(out.values - 1)) < 1e-12


def test_kernel_conserves_heat():
    box = DomainBox(L2PI, L2PI, 128, 128)
    X, Y = box.grid()
    f = ScalarField2D(1 + np.exp(-(X ** 2 + Y ** 2) / (2 * 0.2 ** 2)), box, 0.0)
    total = f.values.sum() * box.hx * box.hy
    for t in (0.05, 0.5):
        phi = kernel_convolve_oracle(f, ConstantPair(), t)
        assert abs(phi.values.sum() * box.hx * box.hy - total) < 1e-8 * total


def test_kernel_needs_positive_tau_and_images():
    box = DomainBox(1e-3, 1e-3, 8, 8)
    f = ScalarField2D(np.ones((8, 8)), box, 0.0)
    with pytest.raises(ValueError):
        kernel_convolve_oracle(f, ConstantPair(), 0.0)
    with pytest.raises(KernelTruncationError):
        kernel_convolve_oracle(f, ConstantPair(), 1e3)


# -- recovery -----------------------------------------------------------------------

def test_recover_unit_phi():
    box = DomainBox(2, 2, 16, 16)
    u, v = recover_burgers(ScalarField2D(np.ones((16, 16)), box, 0), ConstantPair(0.3, -0.6))
    assert np.all(u.values == 0.3) and np.all(v.values == -0.6)


def _bump_window(z, flat, edge):
    """C-infinity step: 1 for |z| <= flat, 0 for |z| >= edge."""
    a = np.clip((np.abs(z) - flat) / (edge - flat), 0, 1)

    def g(s):
        return np.where(s > 0, np.exp(-1 / np.where(s > 0, s, 1)), 0.0)

    return 1 - g(a) / (g(a) + g(1 - a))


def test_recover_windowed_tanh_phi():
    box = DomainBox(8, 8, 512, 512)
    case, t = tanh_pair(), 0.3
    X, Y = box.grid()
    w = _bump_window(X, 0.26 * box.Lx, box.Lx / 2) * _bump_window(Y, 0.26 * box.Ly, box.Ly / 2)
    phi = 1 + w * (case.exact_phi(X, Y, t) - 1)
    u, v = recover_burgers(ScalarField2D(phi, box, t), ConstantPair())
    ue, ve = case.exact_uv(X, Y, t)
    inner = box.interior_mask()
    assert np.max(np.abs(u.values - ue)[inner]) < 1e-6
    assert np.max(np.abs(v.values - ve)[inner]) < 1e-6


def test_recover_gaussian_potential():
    bg = ConstantPair(0.2, -0.3)
    case = gaussian_bump(amplitude=0.8, width=1.0, background=bg)
    box = DomainBox(16, 16, 128, 128)
    X, Y = box.grid()
    u, v = recover_burgers(ScalarField2D(case.exact_phi(X, Y, 0), box, 0), bg)
    assert np.max(np.abs(u.values - case.data.s(X, Y))) < 1e-10
    assert np.max(np.abs(v.values - case.data.k(X, Y))) < 1e-10


def test_recovered_pair_compatibility():
    box = DomainBox(L2PI, L2PI, 64, 64)
    case = periodic_cosine(background=ConstantPair(0.2, 0.1))
    res = heat_ivp.solve_burgers_ivp(case.data, box, 0.3)
    assert np.max(np.abs(heat_ivp.spectral_curl(res.u, res.v))) < 1e-8
    assert np.max(np.abs(heat_ivp.recovered_curl(res.phi))) < 1e-8

    box = DomainBox(16, 16, 128, 128)
    res = heat_ivp.solve_burgers_ivp(tanh_pair().data, box, 0.1)
    assert np.max(np.abs(heat_ivp.recovered_curl(res.phi))) < 1e-8


def test_recover_rejects_nonpositive():
    box = DomainBox(1, 1, 8, 8)
    with pytest.raises(PhiNonPositive):
        recover_burgers(ScalarField2D(-np.ones((8, 8)), box, 0), ConstantPair())


@pytest.mark.parametrize("bg", [ConstantPair(), ConstantPair(0.3, -0.2)])
def test_pipeline_reproduces_tanh_pair(bg):
    box = DomainBox(16, 16, 128, 128)
    case = tanh_pair(background=bg)
    res = heat_ivp.solve_burgers_ivp(case.data, box, 0.1)
    X, Y = box.grid()
    ue, ve = case.exact_uv(X, Y, 0.1)
    inner = box.interior_mask()
    assert np.max(np.abs(res.u.values - ue)[inner]) < 1e-6
    assert np.max(np.abs(res.v.values - ve)[inner]) < 1e-6
    assert np.min(res.phi.values) > 0
