import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqcip.grid import GridFunction, SpatialGrid, sobolev_norm
from freqcip.qrm import QrmError, QrmProblem, blend, h3_norm, lift_boundary, qrm_solve
from oracles import brute_force


def manufactured(grid, delta=0.0, alpha=1e-8):
    x = grid.x
    w_star = x**2 - (2 / 3) * x**3
    prob = QrmProblem(grid, 0.0, 0.0, 2 - 4 * x, delta, 0.0, alpha)
    return prob, w_star


def test_blend_plateaus():
    x = np.linspace(0, 1, 401)
    b = blend(x)
    assert np.all(b[x <= 0.5] == 1) and np.all(b[x >= 0.75] == 0)
    assert np.all(np.diff(b) <= 0)


def test_lift_examples():
    g = SpatialGrid()
    assert np.all(lift_boundary(0, 0, g).values == 0)
    f = lift_boundary(1.0, 0.0, g)
    assert np.all(f.values[g.x <= 0.5] == 1) and np.all(f.values[g.x >= 0.75] == 0)
    assert abs(f.d1().values[0]) < 1e-12 and abs(f.d1().values[-1]) < 1e-12
    assert lift_boundary(2.0, 4.0, g).values[50] == pytest.approx(3.0)


def test_manufactured_solution_recovered():
    g = SpatialGrid()
    prob, w_star = manufactured(g)
    sol = qrm_solve(prob)
    assert sobolev_norm(sol.w.values - w_star, 2, g) < 1e-2


def test_zero_problem_gives_zero():
    g = SpatialGrid(51)
    sol = qrm_solve(QrmProblem(g, 1.0 + 2j, -3.0, 0.0, 0.0, 0.0, 1e-4))
    assert np.all(sol.w.values == 0)
    assert sol.functional_value == 0


def test_rate_alpha_equal_delta_squared():
    g = SpatialGrid()
    deltas = np.array([1e-2, 1e-3, 1e-4])
    errs = []
    for delta in deltas:
        prob, w_star = manufactured(g, delta, delta**2)
        errs.append(sobolev_norm(qrm_solve(prob).w.values - w_star, 2, g))
    slope = np.polyfit(np.log(deltas), np.log(errs), 1)[0]
    assert 0.8 <= slope <= 1.2


def test_boundary_conditions_exact_and_deterministic():
    g = SpatialGrid()
    rng = np.random.default_rng(5)
    prob = QrmProblem(g, rng.normal(size=201), rng.normal(size=201) * 1j,
                      rng.normal(size=201), 0.3 - 0.2j, 1.5j, 1e-5)
    a, b = qrm_solve(prob), qrm_solve(prob)
    assert np.array_equal(a.w.values, b.w.values)
    w1 = a.w.d1().values
    assert abs(a.w.values[0] - prob.p0) < 1e-8
    assert abs(w1[0] - prob.p1) < 1e-8 and abs(w1[-1]) < 1e-8


def test_functional_bookkeeping():
    g = SpatialGrid(101)
    prob, _ = manufactured(g, 0.01, 1e-3)
    sol = qrm_solve(prob)
    assert sol.functional_value == pytest.approx(
        0.5 * (sol.residual_l2**2 + prob.alpha * sol.penalty_h3**2))
    assert prob.functional(sol.w) == pytest.approx(sol.functional_value, rel=1e-10)
    assert sol.penalty_h3 == pytest.approx(h3_norm(sol.w))


def test_minimiser_beats_perturbations():
    g = SpatialGrid(41)
    prob, _ = manufactured(g, 0.05, 1e-3)
    sol = qrm_solve(prob)
    rng = np.random.default_rng(0)
    bump = np.sin(np.pi * g.x) ** 2 * np.cos(np.pi * g.x / 2) ** 3 * g.x**2
    for _ in range(5):
        eps = rng.normal() * 1e-3
        assert prob.functional(sol.w.values + eps * bump) >= sol.functional_value


def test_matches_brute_force_minimisation():
    g = SpatialGrid(21)
    rng = np.random.default_rng(1)
    prob = QrmProblem(g, rng.normal(size=21) + 1j * rng.normal(size=21),
                      rng.normal(size=21), rng.normal(size=21) + 1j,
                      0.7 + 0.1j, -0.4j, 1e-3)
    ref = brute_force(prob)
    assert np.max(np.abs(qrm_solve(prob).w.values - ref)) < 1e-8 * (1 + np.abs(ref).max())


def test_stability_ratio_uniformly_bounded():
    g = SpatialGrid()
    rng = np.random.default_rng(0)
    ratios = []
    for _ in range(8):
        for alpha in (1e-2, 1e-4, 1e-6):
            z = lambda: rng.normal(size=201) + 1j * rng.normal(size=201)
            p0, p1 = rng.normal(size=2) + 1j * rng.normal(size=2)
            d = z()
            sol = qrm_solve(QrmProblem(g, z(), z(), d, p0, p1, alpha))
            scale = abs(p0) + abs(p1) + GridFunction(g, d).l2_norm()
            ratios.append(sol.penalty_h3 * np.sqrt(alpha) / scale)
    assert max(ratios) < 1.0


@settings(max_examples=10, deadline=None)
@given(p0=st.complex_numbers(max_magnitude=10), p1=st.complex_numbers(max_magnitude=10),
       alpha=st.floats(1e-8, 1.0))
def test_boundary_conditions_hold_for_random_data(p0, p1, alpha):
    g = SpatialGrid(61)
    x = g.x
    sol = qrm_solve(QrmProblem(g, -2j, x, np.cos(x), p0, p1, alpha))
    w1 = sol.w.d1().values
    tol = 1e-8 * (1 + abs(p0) + abs(p1))
    assert abs(sol.w.values[0] - p0) < tol and abs(w1[0] - p1) < tol
    assert abs(w1[-1]) < tol


def test_problem_validation():
    g = SpatialGrid(21)
    with pytest.raises(QrmError):
        QrmProblem(g, 0.0, 0.0, 0.0, alpha=0.0)
    with pytest.raises(QrmError):
        QrmProblem(g, 0.0, 0.0, 0.0, alpha=2.0)
    with pytest.raises(QrmError):
        QrmProblem(g, np.full(21, np.inf), 0.0, 0.0)
    with pytest.raises(ValueError):
        QrmProblem(g, np.zeros(20), 0.0, 0.0)


def test_h3_norm_of_cubic():
    g = SpatialGrid(201)
    f = GridFunction(g, g.x**3)
    exact = np.sqrt(1 / 7 + 9 / 5 + 36 / 3 + 36)
    assert h3_norm(f) == pytest.approx(exact, rel=2e-2)
