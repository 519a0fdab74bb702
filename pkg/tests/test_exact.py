import numpy as np
import pytest

from burgers_bt import exact
from burgers_bt.errors import DivisorTooSmall, NonPositiveSeed, OrderExhausted, PhiNonPositive
from burgers_bt.exact import (ConstantPair, SolutionPair, burgers_residual, cole_hopf_lift,
                              compatibility_defect, heat_residual, iterate_recurrence,
                              make_plane_wave_seed, recurrence_step, validate_bt_premises)
from burgers_bt.jets import variables

from conftest import recurrence_seeds


def maxabs(*arrs):
    return max(float(np.max(np.abs(a))) for a in arrs)


def test_constant_seed_heat_residual_exact(pts):
    phi = make_plane_wave_seed(ConstantPair(), [])
    assert maxabs(heat_residual(phi, ConstantPair(), pts)) == 0.0


def test_plane_wave_heat_residual():
    pts = exact.sample_points(100, seed=3, box=((-2, 2), (-2, 2), (0, 1)))
    phi = make_plane_wave_seed(ConstantPair(), [(1, 1, 0)])
    assert maxabs(heat_residual(phi, ConstantPair(), pts)) < 1e-12


def test_plane_wave_rate_with_background(pts):
    bg = ConstantPair(1, -1)
    assert exact.plane_wave_rate(bg, 1, 1) == 2.0
    phi = make_plane_wave_seed(bg, [(2, 1, 1)])
    assert phi.params["rates"] == [2.0]
    assert maxabs(heat_residual(phi, bg, pts)) < 1e-12


def test_seed_positivity():
    with pytest.raises(NonPositiveSeed):
        make_plane_wave_seed(ConstantPair(), [(-1, 1, 1)])
    with pytest.raises(NonPositiveSeed):
        make_plane_wave_seed(ConstantPair(), [], constant=0.0)


def test_lift_of_constant_phi_is_background(pts):
    bg = ConstantPair(0.7, -0.2)
    u, v = cole_hopf_lift(make_plane_wave_seed(bg, []), bg)(*pts, 2)
    assert np.all(u.value == 0.7) and np.all(v.value == -0.2)
    assert np.all(u.coeffs[1:] == 0) and np.all(v.coeffs[1:] == 0)


def test_lift_of_pure_exponential(pts):
    k, l = 0.8, -1.3
    phi = make_plane_wave_seed(ConstantPair(), [(1, k, l)], constant=0.0)
    u, v = cole_hopf_lift(phi)(*pts, 2)
    assert np.max(np.abs(u.value - k)) < 1e-14 and np.max(np.abs(v.value - l)) < 1e-14
    assert np.max(np.abs(u.coeffs[1:])) < 1e-13


def test_lift_tanh_front(pts):
    pair = cole_hopf_lift(make_plane_wave_seed(ConstantPair(), [(1, 1, 0)]))
    x, y, t = pts
    u, v = pair(x, y, t, 0)
    e = np.exp(x + t)
    assert np.max(np.abs(u.value - e / (1 + e))) < 1e-15
    assert np.all(v.value == 0)
    assert maxabs(*burgers_residual(pair, pts)) < 1e-10


def test_lift_rejects_nonpositive_phi(pts):
    phi = exact.HeatSolution(lambda x, y, t, order: variables(x, y, t, order)[0])
    with pytest.raises(PhiNonPositive):
        cole_hopf_lift(phi)(*pts, 0)


def test_validate_premises():
    pts = exact.sample_points()
    rep = validate_bt_premises(make_plane_wave_seed(ConstantPair(2, 3), []), ConstantPair(2, 3), pts)
    assert rep.heat_residual_max == 0.0 and rep.compatibility_max == 0.0
    bg = ConstantPair(0.3, -0.4)
    good = make_plane_wave_seed(bg, [(2, 1, 0.5), (0.3, -1, 1)])
    assert validate_bt_premises(good, bg, pts).passed(1e-10)
    rates = [exact.plane_wave_rate(bg, 1, 0.5) + 0.1, exact.plane_wave_rate(bg, -1, 1)]
    bad = make_plane_wave_seed(bg, [(2, 1, 0.5), (0.3, -1, 1)], rates=rates)
    rep = validate_bt_premises(bad, bg, pts)
    assert rep.heat_residual_max > 1e-3 and not rep.passed()


def test_validate_premises_nonconstant_background(pts):
    bg = ConstantPair(0.2, 0.3)
    pair = cole_hopf_lift(make_plane_wave_seed(bg, [(1, 1, 0.5), (2, 0.2, 1)]), bg)
    rep = validate_bt_premises(exact.pair_sum_heat(pair), pair, pts)
    assert rep.passed(1e-10)


def test_recurrence_fixed_point(pts):
    pair = exact.constant_pair_solution(ConstantPair(0.5, 1.25))
    u, v = recurrence_step(pair)(*pts, 2)
    assert np.all(u.value == 0.5) and np.all(v.value == 1.25)
    assert np.all(u.coeffs[1:] == 0)


def test_recurrence_degenerate_sum(pts):
    pair = exact.constant_pair_solution(ConstantPair(0.8, -0.8))
    with pytest.raises(DivisorTooSmall):
        recurrence_step(pair)(*pts, 2)


def test_recurrence_one_step_tanh(pts):
    pair = cole_hopf_lift(make_plane_wave_seed(ConstantPair(), [(1, 1, 1)]))
    nxt = recurrence_step(pair)
    assert nxt.lineage.depth == 1
    assert maxabs(*burgers_residual(nxt, pts)) < 1e-8
    assert maxabs(compatibility_defect(nxt, pts)) < 1e-8


def test_order_exhausted():
    pair = SolutionPair(exact.constant_pair_solution(ConstantPair(1, 1)).evaluate, max_order=2)
    with pytest.raises(OrderExhausted):
        burgers_residual(recurrence_step(pair), (0.0, 0.0, 0.0), 2)
    with pytest.raises(OrderExhausted):
        recurrence_step(recurrence_step(recurrence_step(pair)))


def test_residual_constant_pair(pts):
    r1, r2 = burgers_residual(exact.constant_pair_solution(ConstantPair(3, -2)), pts)
    assert np.all(r1 == 0) and np.all(r2 == 0)


def test_residual_of_non_solution():
    def evaluate(x, y, t, order):
        X, _, _ = variables(x, y, t, order)
        return X, X * 0.0

    r1, r2 = burgers_residual(SolutionPair(evaluate), (1.0, 0.0, 0.0))
    assert r1 == -2.0 and r2 == 0.0


def test_residual_requires_second_order():
    with pytest.raises(ValueError):
        burgers_residual(exact.constant_pair_solution(ConstantPair()), (0, 0, 0), 1)


def _fd_residual(pair, x, y, t, h=1e-3):
    def uv(dx=0.0, dy=0.0, dt=0.0):
        u, v = pair(np.array(x + dx), np.array(y + dy), np.array(t + dt), 0)
        return np.array([u.value, v.value])

    c = uv()
    fx = (uv(dx=h) - uv(dx=-h)) / (2 * h)
    fy = (uv(dy=h) - uv(dy=-h)) / (2 * h)
    ft = (uv(dt=h) - uv(dt=-h)) / (2 * h)
    fxx = (uv(dx=h) - 2 * c + uv(dx=-h)) / h ** 2
    fyy = (uv(dy=h) - 2 * c + uv(dy=-h)) / h ** 2
    return ft - fxx - fyy - 2 * c[0] * fx - 2 * c[1] * fy


def test_depth_two_residual_and_fd_crosscheck():
    pts = exact.sample_points(100, seed=11, box=((-2, 2), (-2, 2), (0.1, 1.0)))
    bg = ConstantPair(0.4, 0.3)
    pair = iterate_recurrence(cole_hopf_lift(make_plane_wave_seed(bg, [(1, 1, 0.5), (3, 0.5, 1.5)]), bg), 2)
    assert maxabs(*burgers_residual(pair, pts)) < 1e-8
    for i in range(5):
        x, y, t = (c[i] for c in pts)
        jet_r = np.array(burgers_residual(pair, (x, y, t)))
        assert np.max(np.abs(_fd_residual(pair, x, y, t) - jet_r)) < 1e-5


def test_recurrence_matches_lift_of_sum(pts):
    rng = np.random.default_rng(5)
    for bg, terms in recurrence_seeds(3, rng, depth=2):
        pair = cole_hopf_lift(make_plane_wave_seed(bg, terms), bg)
        via_rec = recurrence_step(pair)(*pts, 2)
        via_lift = exact.backlund_lift(exact.pair_sum_heat(pair), pair)(*pts, 2)
        for a, b in zip(via_rec, via_lift):
            assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-10


def test_evaluate_on_grid_shapes():
    pair = cole_hopf_lift(make_plane_wave_seed(ConstantPair(), [(1, 1, 1)]))
    X, Y = np.meshgrid(np.linspace(-1, 1, 4), np.linspace(-1, 1, 3), indexing="ij")
    u, v = exact.evaluate_on_grid(pair, X, Y, 0.2)
    assert u.shape == (4, 3)
    e = np.exp(X + Y + 0.4)
    assert np.max(np.abs(u - e / (1 + e))) < 1e-15


def test_sample_points_reproducible():
    a = exact.sample_points(10, seed=7)
    b = exact.sample_points(10, seed=7)
    assert all(np.array_equal(p, q) for p, q in zip(a, b))
    assert np.all((a[2] >= 0.1) & (a[2] <= 1.0))
