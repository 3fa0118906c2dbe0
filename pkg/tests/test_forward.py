import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqcip.forward import (BoundaryData, ForwardSolveError, SourceConfig, add_noise,
                             extract_boundary_data, free_space_field,
                             solve_helmholtz_fd, solve_lippmann_schwinger)
from freqcip.grid import FrequencyGrid, MediumProfile, SpatialGrid, diff1_matrix


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_free_space_field_values():
    assert free_space_field(-1.0, -1.0, 1.0) == pytest.approx(-0.5j)
    assert free_space_field(0.0, -1.0, 1.0) == pytest.approx(np.exp(-1j) / 2j)
    with pytest.raises(ValueError):
        free_space_field(0.0, -1.0, 0.0)


@given(x=st.floats(-50, 50), k=st.floats(0.01, 100))
def test_free_space_modulus(x, k):
    assert abs(free_space_field(x, -1.0, k)) == pytest.approx(1 / (2 * k), rel=1e-12)


def test_source_must_be_left_of_medium():
    with pytest.raises(ValueError):
        SourceConfig(0.5)


def test_lippmann_schwinger_homogeneous_is_free_field(grid):
    p = MediumProfile.homogeneous(grid)
    for k in (0.5, 1.0, 1.5):
        sol = solve_lippmann_schwinger(p, k)
        assert np.max(np.abs(sol.u.values - free_space_field(grid.x, -1.0, k))) < 1e-12


def test_lippmann_schwinger_matches_fd_at_unit_k(profiles):
    p = profiles[4.0]
    ls = solve_lippmann_schwinger(p, 1.0).u.values
    fd = solve_helmholtz_fd(p, 1.0).u.values
    assert rel_l2(ls, fd) < 1e-3


def test_fd_cross_validates_high_contrast(profiles):
    p = profiles[7.0]
    assert rel_l2(solve_lippmann_schwinger(p, 1.5).u.values,
                  solve_helmholtz_fd(p, 1.5).u.values) < 1e-3


def test_exterior_evaluation_agrees_on_grid(profiles, grid):
    sol = solve_lippmann_schwinger(profiles[4.0], 1.2)
    assert np.allclose(sol.evaluate(grid.x), sol.u.values, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("k", [0.5, 1.0, 1.5])
def test_scattered_field_is_outgoing(profiles, k):
    sol = solve_lippmann_schwinger(profiles[4.0], k)
    B = sol.scattered(-0.5) / np.exp(1j * k * -0.5)
    assert abs(sol.scattered(-0.25) - B * np.exp(1j * k * -0.25)) < 1e-8
    B2 = sol.scattered(-3.0) / np.exp(1j * k * -3.0)
    assert abs(abs(B2) - abs(B)) < 1e-8


def test_fd_homogeneous_matches_analytic(grid):
    # default spacing is half the profile grid: 1601 nodes on [-2, 2]
    p = MediumProfile.homogeneous(grid)
    for k in (0.5, 1.5):
        sol = solve_helmholtz_fd(p, k)
        assert rel_l2(sol.u.values, free_space_field(grid.x, -1.0, k)) < 1e-4


def test_fd_is_second_order(grid):
    p = MediumProfile.homogeneous(grid)
    u0 = free_space_field(grid.x, -1.0, 1.0)
    e1 = rel_l2(solve_helmholtz_fd(p, 1.0, spacing=0.005).u.values, u0)
    e2 = rel_l2(solve_helmholtz_fd(p, 1.0, spacing=0.0025).u.values, u0)
    assert 3.5 < e1 / e2 < 4.5


def test_fd_spacing_must_divide_grid(grid):
    with pytest.raises(ValueError):
        solve_helmholtz_fd(MediumProfile.homogeneous(grid), 1.0, spacing=0.003)


def test_homogeneous_data_is_trivial(trivial_data):
    assert np.max(np.abs(trivial_data.g0 - 1)) < 1e-12
    assert np.max(np.abs(trivial_data.g1)) < 1e-11


def test_g1_identity():
    d = BoundaryData(FrequencyGrid(1.0, 0.98, 0.02), [1 + 1j, 1.0])
    assert d.g1[0] == pytest.approx(-2.0)
    assert d.g1[1] == 0


def test_g1_matches_field_derivative(profiles, data, grid):
    p, d = profiles[4.0], data[4.0]
    D1 = diff1_matrix(grid.n_points, grid.spacing)
    worst = 0.0
    for j, k in enumerate(d.k):
        w = solve_lippmann_schwinger(p, k).u.values / free_space_field(grid.x, -1.0, k)
        worst = max(worst, abs((D1 @ w)[0] - d.g1[j]))
    assert worst < 1e-3


def test_g0_nonvanishing_across_contrasts(grid, freq):
    for ct in (1.5, 4.0, 10.0):
        d = extract_boundary_data(MediumProfile.inclusion(grid, ct, 0.1, 0.6), freq)
        assert np.min(np.abs(d.g0)) > 0.1


def test_boundary_data_validation(freq):
    with pytest.raises(ValueError):
        BoundaryData(freq, np.ones(10))
    g = np.ones(len(freq), complex)
    g[3] = 0
    with pytest.raises(ValueError):
        BoundaryData(freq, g)


def test_ill_conditioned_system_is_reported(grid, monkeypatch):
    import freqcip.forward as fw
    monkeypatch.setattr(fw, "COND_LIMIT", 1.0)
    with pytest.raises(ForwardSolveError, match="ill-conditioned"):
        solve_lippmann_schwinger(MediumProfile.inclusion(grid, 4.0), 1.0)


def test_noise_zero_level_is_identity(data):
    d = data[4.0]
    assert np.array_equal(add_noise(d, 0.0, 3).g0, d.g0)


def test_noise_is_bounded_and_deterministic(data):
    d = data[4.0]
    a = add_noise(d, 0.05, 11)
    b = add_noise(d, 0.05, 11)
    assert np.array_equal(a.g0, b.g0)
    assert np.max(np.abs(a.g0 / d.g0 - 1)) <= 0.05
    assert not np.array_equal(a.g0, add_noise(d, 0.05, 12).g0)
    assert np.allclose(a.g1, 2j * a.k * (a.g0 - 1))
    with pytest.raises(ValueError):
        add_noise(d, -0.1, 0)


@settings(max_examples=8, deadline=None)
@given(ct=st.floats(1.0, 10.0), left=st.floats(0.05, 0.6), width=st.floats(0.05, 0.3),
       k=st.floats(0.5, 1.5))
def test_solvers_agree_on_random_slabs(ct, left, width, k):
    g = SpatialGrid()
    p = MediumProfile.inclusion(g, ct, left, min(left + width, 0.95))
    assert rel_l2(solve_lippmann_schwinger(p, k).u.values,
                  solve_helmholtz_fd(p, k).u.values) < 1e-3
