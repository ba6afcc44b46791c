import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singlab.growth import ExpOdd, Power, Truncated, Zero
from singlab.pde import (BoundaryMeasure, GridMode, PolarGrid, SolverError, SolverOptions,
                         mollify_measure, solve_linear, solve_nonlinear)
from singlab.pde import weak
from singlab.pde.io import config_hash, read_solution, write_solution
from singlab.pde.studies import (MonotonicityError, comparison_check, default_window,
                                 grid_refinement, kernel_estimate, monotone_truncation_sequence,
                                 removability_experiment, theorem_d_sequence)
from singlab.regimes import ProblemParams

DISK = GridMode.DISK_2D
BALL = GridMode.BALL_3D_AXISYMMETRIC


def bessel_i1_at_one(terms=30):
    # I_1(1) = Σ (1/2)^{2k+1} / (k! (k+1)!)
    return sum(0.5 ** (2 * k + 1) / (math.factorial(k) * math.factorial(k + 1))
               for k in range(terms))


def test_bessel_series_oracle():
    # frozen 40-digit reference for 1/I_1(1)
    assert 1.0 / bessel_i1_at_one() == pytest.approx(1.7694132376805825857, rel=1e-15)


@pytest.fixture(scope="module")
def disk64():
    return PolarGrid(DISK, 64, 64)


def test_grid_validation():
    with pytest.raises(ValueError):
        PolarGrid(DISK, 8, 64)
    with pytest.raises(ValueError):
        PolarGrid(DISK, 64, 64, R=2.0)
    g = PolarGrid(BALL, 32, 33)
    assert g.dim == 3 and g.ang[-1] == pytest.approx(math.pi)


@pytest.mark.parametrize("mode", [DISK, BALL])
def test_boundary_and_volume_quadrature(mode):
    g = PolarGrid(mode, 64, 65)
    area = 2 * math.pi if mode is DISK else 4 * math.pi
    vol = math.pi if mode is DISK else 4 * math.pi / 3
    assert g.boundary_weights.sum() == pytest.approx(area, rel=1e-3)
    assert g.volume_weights.sum() == pytest.approx(vol, rel=1e-3)


@pytest.mark.parametrize("spacings", [2, 4, 8])
def test_mollified_atom_mass(disk64, spacings):
    eps = spacings * disk64.boundary_spacing
    mu = mollify_measure(BoundaryMeasure(atoms=[(1.0, 1.0)], epsilon=eps), disk64)
    assert float(np.dot(mu, disk64.boundary_weights)) == pytest.approx(1.0, abs=1e-3)
    assert np.all(mu >= 0)


def test_mollifier_examples(disk64):
    d = np.linspace(0.0, 1.0, disk64.n_ang)
    assert np.array_equal(mollify_measure(BoundaryMeasure(density=d), disk64), d)
    eps = 4 * disk64.boundary_spacing
    mu = mollify_measure(BoundaryMeasure(atoms=[(0.0, 1.0), (math.pi, -1.0)], epsilon=eps), disk64)
    assert abs(float(np.dot(mu, disk64.boundary_weights))) < 1e-12
    with pytest.raises(ValueError):
        mollify_measure(BoundaryMeasure(atoms=[(0.0, 1.0)], epsilon=disk64.boundary_spacing),
                        disk64)
    with pytest.raises(ValueError):
        BoundaryMeasure(atoms=[(0.0, 1.0)])
    ball = PolarGrid(BALL, 32, 33)
    with pytest.raises(ValueError):
        mollify_measure(BoundaryMeasure(atoms=[(1.0, 1.0)], epsilon=0.5), ball)


@pytest.mark.parametrize("g", [Zero(), Power(3.0), Power(1.5), ExpOdd(1.0)])
def test_zero_data_gives_zero(disk64, g):
    sol = solve_nonlinear(g, BoundaryMeasure(), disk64)
    assert np.all(sol.values == 0.0) and sol.iterations == 0


@settings(max_examples=8, deadline=None)
@given(st.floats(-5.0, 5.0).filter(lambda a: abs(a) > 1e-3))
def test_linear_solver_is_linear(alpha):
    grid = PolarGrid(DISK, 32, 32)
    base = BoundaryMeasure(atoms=[(0.5, 1.0)], density=0.3, epsilon=0.4)
    u1 = solve_linear(base, grid).values
    ua = solve_linear(base.scaled(alpha), grid).values
    assert np.max(np.abs(ua - alpha * u1)) <= 1e-10 * max(1.0, np.max(np.abs(alpha * u1)))


@settings(max_examples=6, deadline=None)
@given(st.floats(1.2, 4.0), st.floats(0.05, 3.0), st.floats(0.0, 2 * math.pi))
def test_maximum_principle(p, k, theta):
    grid = PolarGrid(DISK, 32, 32)
    sol = solve_nonlinear(Power(p), BoundaryMeasure(atoms=[(theta, k)], epsilon=0.5), grid)
    assert sol.final_residual < 1e-10
    assert np.min(sol.values) >= -1e-10


def test_uniform_flux_disk_oracle():
    sol = solve_linear(BoundaryMeasure(density=2.0), PolarGrid(DISK, 128, 64))
    assert sol.center / 2.0 == pytest.approx(1.0 / bessel_i1_at_one(), rel=5e-3)
    # radial: no angular variation
    assert np.ptp(sol.values[40]) < 1e-10


def test_uniform_flux_ball_oracle():
    # u = m sinh(r)/r / (cosh 1 - sinh 1) so u(0) = m e
    sol = solve_linear(BoundaryMeasure(density=1.0), PolarGrid(BALL, 128, 33))
    assert sol.center == pytest.approx(math.e, rel=5e-3)


def test_refinement_is_second_order():
    rows = grid_refinement(DISK, [32, 64, 128])
    assert rows[2].ratio >= 3.0


@pytest.fixture(scope="module")
def atom_solution():
    grid = PolarGrid(DISK, 128, 128)
    mu = BoundaryMeasure(atoms=[(0.0, 1.0)], epsilon=4 * grid.boundary_spacing)
    return solve_nonlinear(Power(3.0), mu, grid, params=ProblemParams(2, 3.0))


def test_mass_balance_and_weak_residual(atom_solution):
    bal = weak.mass_balance(atom_solution)
    assert bal.data == pytest.approx(1.0, abs=1e-12)
    assert bal.relative_error < 1e-2
    assert weak.weak_residual(atom_solution, test_family_size=12) < 2e-2
    # the ξ = 1 member reproduces the mass balance
    vol, bnd, data = weak.weak_terms(atom_solution, atom_solution.measure,
                                     weak.test_family(DISK, 1)[0])
    assert abs(vol + bnd - data) / (1 + abs(data)) == pytest.approx(
        abs(bal.lhs - bal.data) / (1 + abs(bal.data)), rel=1e-12)


def test_weak_residual_of_zero(disk64):
    sol = solve_nonlinear(Power(2.0), BoundaryMeasure(), disk64)
    assert weak.weak_residual(sol) == 0.0


@pytest.mark.parametrize("mode", [DISK, BALL])
def test_test_functions_are_neumann(mode):
    for xi in weak.test_family(mode, 10):
        h = 1e-6
        ang = np.linspace(0.1, 3.0, 7)
        dr = (xi.values(np.full(7, 1 + h), ang) - xi.values(np.full(7, 1 - h), ang)) / (2 * h)
        assert np.max(np.abs(dr)) < 1e-8


def test_solver_params_mismatch(disk64):
    with pytest.raises(ValueError):
        solve_nonlinear(Power(3.0), BoundaryMeasure(density=1.0), disk64,
                        params=ProblemParams(3, 3.0))


def test_solver_reports_history(disk64):
    mu = BoundaryMeasure(density=5.0)
    with pytest.raises(SolverError) as info:
        solve_nonlinear(Power(3.0), mu, disk64, SolverOptions(max_iter=1))
    assert len(info.value.history) == 2


def test_comparison(disk64):
    eps = 4 * disk64.boundary_spacing
    hi = solve_nonlinear(Power(2.0), BoundaryMeasure(atoms=[(0.0, 0.2)], epsilon=eps), disk64)
    lo = solve_nonlinear(Power(2.0), BoundaryMeasure(atoms=[(0.0, 0.1)], epsilon=eps), disk64)
    assert comparison_check(hi, hi) == (0, 0.0)
    count, worst = comparison_check(hi, lo)
    assert count == 0
    count, worst = comparison_check(lo, hi)
    assert count > 0 and worst > 0
    with pytest.raises(ValueError):
        comparison_check(hi, solve_linear(BoundaryMeasure(), PolarGrid(DISK, 32, 32)))


def test_truncation_sequence(disk64):
    eps = 4 * disk64.boundary_spacing
    mu = BoundaryMeasure(atoms=[(0.0, 1.0)], epsilon=eps)
    res = monotone_truncation_sequence(1.5, mu, disk64, [1, 2, 4, 8])
    assert res.max_increase <= 1e-10 and res.max_excess <= 1e-10 and res.min_value >= -1e-10
    full = solve_nonlinear(Power(1.5), mu, disk64)
    top = float(np.max(full.values))
    # max u < 1, so the level-8 member is the untruncated solution
    assert top < 1.0
    assert np.max(np.abs(res.solutions[-1].values - full.values)) < 1e-9
    # levels above max u: truncation inactive
    res = monotone_truncation_sequence(1.5, mu, disk64, [2 * top, 4 * top])
    for s in res.solutions:
        assert np.max(np.abs(s.values - full.values)) < 1e-9
    zero = monotone_truncation_sequence(1.5, BoundaryMeasure(), disk64, [1, 2])
    assert all(np.all(s.values == 0) for s in zero.solutions)
    with pytest.raises(ValueError):
        monotone_truncation_sequence(1.5, mu, disk64, [2, 1])
    with pytest.raises(ValueError):
        monotone_truncation_sequence(1.5, mu.scaled(-1.0), disk64, [1, 2])


def test_truncation_detects_violations(disk64, monkeypatch):
    from singlab.pde import studies
    real = studies.solve_nonlinear

    def bad(g, measure, grid, opts=None):
        sol = real(g, measure, grid, opts)
        sol.values = sol.values + (g.level if isinstance(g, Truncated) else 0.0)
        return sol

    monkeypatch.setattr(studies, "solve_nonlinear", bad)
    mu = BoundaryMeasure(atoms=[(0.0, 1.0)], epsilon=4 * disk64.boundary_spacing)
    with pytest.raises(MonotonicityError):
        monotone_truncation_sequence(1.5, mu, disk64, [1, 2])


def test_epsilon_sequence(disk64):
    h = disk64.boundary_spacing
    mu = BoundaryMeasure(atoms=[(0.0, 0.5)], epsilon=8 * h)
    res = theorem_d_sequence(Power(1.5), mu, disk64, [16 * h, 8 * h, 4 * h, 2 * h])
    d = res.l1_differences
    assert all(b < a for a, b in zip(d, d[1:]))
    zero = theorem_d_sequence(Power(1.5), BoundaryMeasure(), disk64, [0.4, 0.2])
    assert zero.l1_differences == [0.0]
    smooth = theorem_d_sequence(Power(1.5), BoundaryMeasure(density=0.4), disk64, [0.4, 0.2])
    assert smooth.l1_differences == [0.0]
    with pytest.raises(ValueError):
        theorem_d_sequence(Power(1.5), mu, disk64, [0.2, 0.4])
    with pytest.raises(ValueError):  # weight outside the exponential window π/a_+
        theorem_d_sequence(ExpOdd(4.0), BoundaryMeasure(atoms=[(0.0, 1.0)], epsilon=0.4),
                           disk64, [0.4])
    ball = PolarGrid(BALL, 32, 33)
    with pytest.raises(ValueError):  # supercritical in 3D
        theorem_d_sequence(Power(2.5), BoundaryMeasure(density=0.1), ball, [0.4])


def test_kernel_weight_doubles():
    grid = PolarGrid(DISK, 128, 256)
    eps = [2 * grid.boundary_spacing]
    one = kernel_estimate(grid, 0.0, eps, weight=1.0)
    two = kernel_estimate(grid, 0.0, eps, weight=2.0)
    assert two.value == pytest.approx(2 * one.value, rel=1e-10)
    assert one.value == pytest.approx(one.expected, rel=0.05)
    with pytest.raises(ValueError):
        kernel_estimate(grid, 0.0, eps, window=(0.5 * grid.dr, 0.2))


def test_default_window(disk64):
    lo, hi = default_window(disk64, 0.0)
    assert lo == pytest.approx(4 * max(disk64.dr, disk64.boundary_spacing)) and hi == 0.2
    assert default_window(disk64, 0.3)[0] == pytest.approx(0.6)


def test_removability_runs():
    rows = removability_experiment(3.0, PolarGrid(DISK, 32, 64), 1.0, [0.4, 0.2], [0.1, 0.3])
    assert len(rows) == 2 and all(len(r.probes) == 2 for r in rows)
    assert all(v > 0 for r in rows for v in r.probes)


@pytest.mark.parametrize("fmt", ["json", "binary"])
def test_io_roundtrip(tmp_path, atom_solution, fmt):
    cfg = {"a": 1, "b": [1, 2]}
    path = write_solution(atom_solution, tmp_path / f"sol.{fmt}", fmt, cfg)
    back = read_solution(path)
    assert np.array_equal(back.values, atom_solution.values)
    assert back.grid == atom_solution.grid
    assert back.g == atom_solution.g and back.params == atom_solution.params
    assert back.measure.atoms == atom_solution.measure.atoms
    header = path.read_bytes().split(b"\n", 1)[0]
    assert config_hash(cfg).encode() in header
    assert config_hash({"b": [1, 2], "a": 1}) == config_hash(cfg)
    with pytest.raises(ValueError):
        write_solution(atom_solution, tmp_path / "x", "hdf5")
