import math

import _core as bl


def test_baselines():
    trig, markov = bl.classical_baselines(5)
    assert abs(trig - 5) < 1e-6
    assert abs(markov - 25) < 1e-6


def test_dims_and_zonal():
    assert bl.dim_harmonics(3, 2) == 5
    assert bl.dim_harmonics(2, 4) == 2
    assert abs(bl.zonal_kernel(3, 2, 0.0) + 2.5) < 1e-12


def test_expansion_roundtrip_and_frequency():
    e = bl.HarmonicExpansion(3)
    e.set_coeff(0, 0, 1.0)
    e.set_coeff(2, 0, 1.0)
    assert abs(e.exact_frequency(1.0) - 1.0) < 1e-12
    assert abs(bl.frequency_numeric(e, [], 1.0) - 1.0) < 1e-8
    import math as _m
    oracle = 0.5 * _m.log2(e.ball_mean_square(1.0) / e.ball_mean_square(0.5))
    assert abs(bl.doubling_index(e, 0.5) - oracle) < 1e-9
    back = bl.HarmonicExpansion.from_json(e.to_json())
    assert abs(back.coeff(2, 0) - 1.0) < 1e-15


def test_expansion_eval_and_means():
    e = bl.coordinate_expansion(3, 0)
    v, g = e.eval([0.3, 0.4, 0.0])
    assert abs(v - 0.3) < 1e-12
    assert abs(g[0] - 1.0) < 1e-12
    assert abs(e.ball_mean_square(1.0) - 0.2) < 1e-13  # (3/5) * (1/3)


def test_torus_eigenfunction():
    phi = bl.TorusEigenfunction(2, [(([3, 0]), 0.0, 1.0)])
    assert phi.lam == 9.0
    assert abs(phi.value([0.2, 0.0]) - math.sin(0.6)) < 1e-14
    assert abs(phi.gradient_norm([0.0, 0.0]) - 3.0) < 1e-12


def test_zonal_value():
    assert abs(bl.zonal_sphere_eigenfunction_value(2, 1, [0.0, 0.0, 1.0]) - 1.0) < 1e-12


def test_bernstein_ratio():
    rep = bl.bernstein_ratio_torus(2, [([3, 0], 0.0, 1.0)], [0.0, 0.0], math.pi / 2)
    assert abs(rep["ratio"] - 3.0) < 1e-5
    assert abs(rep["c_global"] - 1.0) < 1e-5


def test_lift_frequency_window():
    n = bl.lift_frequency(2, [([3, 0], 0.0, 1.0)], 0.5)
    assert 0.3 * 3 <= n <= 3 * 3


def test_sweep_smoke():
    csv, summary, slope = bl.run_sweep(
        "torus2", [16.0], [0.05, 0.08, 0.12], style="canonical", seed=3, threads=2
    )
    assert csv.startswith("manifold,lambda,r,center_id")
    assert csv.count("\n") == 4  # header + three rows
    assert 0.7 < slope < 1.3
    assert "regressions" in summary
