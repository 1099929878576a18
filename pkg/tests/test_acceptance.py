"""Acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py -s`` (or the full suite) and read the
"acceptance criteria" section of the terminal summary for one pass/fail line
per criterion.  Runtime bounds are checked on the best of a few repeats so a
single scheduler hiccup does not fail a criterion.
"""

import csv
import math
import time

import numpy as np
import pytest

from qmarket.cli import main
from qmarket.intensity import RWQuoteModel, fixed_point, iterate_map, maximize_rho, rho, rho_quadrature
from qmarket.market_sim import Adaptive, Fixed, GameConfig, run_adaptive, run_fixed
from qmarket.projective import build_cycle_points, cycle_log_cross_ratio, points_log_cross_ratio, rescale_units
from qmarket.strategy import (
    GaussianStrategy,
    GridWavefunction,
    fourier_dual,
    grid_risk_expectation,
    risk_expectation,
)

PUBLISHED_A_MAX = 0.27603


def best_time(fn, repeats=5):
    best, value = math.inf, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def test_c01_fixed_point_value(criterion):
    with criterion("C1 fixed_point(m=1) = 0.27603 +/- 5e-5, < 1 ms") as info:
        elapsed, res = best_time(lambda: fixed_point(RWQuoteModel(1.0)))
        assert abs(res.a_max - PUBLISHED_A_MAX) <= 5e-5
        info["runtime"] = elapsed
        assert elapsed < 1e-3, elapsed


def test_c02_maximum_is_fixed_point(criterion):
    with criterion("C2 |maximize_rho - fixed_point| <= 1e-9 for m in {0.25, 1, 4}, < 10 ms") as info:
        models = [RWQuoteModel(m) for m in (0.25, 1.0, 4.0)]

        def gaps():
            return [abs(maximize_rho(mo) - fixed_point(mo).a_max) for mo in models]

        elapsed, values = best_time(gaps)
        assert max(values) <= 1e-9, values
        info["runtime"] = elapsed
        assert elapsed < 1e-2, elapsed


def test_c03_global_attraction(criterion):
    with criterion("C3 101 starts in [-5, 5] reach |a - a_max| < 1e-8 in 200 steps, < 50 ms") as info:
        model = RWQuoteModel(1.0)
        target = fixed_point(model).a_max

        def orbits():
            return [iterate_map(a0, model, 200) for a0 in np.linspace(-5, 5, 101)]

        elapsed, all_orbits = best_time(orbits)
        for orbit in all_orbits:
            assert np.any(np.abs(orbit - target) < 1e-8), orbit[0]
        info["runtime"] = elapsed
        assert elapsed < 5e-2, elapsed


def test_c04_oracle_equivalence(criterion):
    with criterion("C4 closed-form rho vs quadrature to 1e-9 on a 6x3 (a, m) grid, < 1 s") as info:
        grid = [(a, m) for a in (-2.0, -0.5, 0.0, 0.27603, 1.0, 3.0) for m in (0.25, 1.0, 4.0)]

        def worst():
            return max(abs(rho(a, RWQuoteModel(m)) - rho_quadrature(a, RWQuoteModel(m)))
                       for a, m in grid)

        elapsed, value = best_time(worst, repeats=3)
        assert value <= 1e-9, value
        info["runtime"] = elapsed
        assert elapsed < 1.0, elapsed


def test_c05_monte_carlo_consistency(criterion):
    with criterion("C5 run_fixed(a=0.27603, 1e7 cycles) within 4 batch-means se, < 10 s") as info:
        config = GameConfig(m=1.0, seed=2024, cycles=10 ** 7, policy=Fixed(PUBLISHED_A_MAX),
                            buy_leg="zero")
        t0 = time.perf_counter()
        res = run_fixed(config)
        elapsed = time.perf_counter() - t0
        assert 1e-4 < res.std_error < 4e-4, res.std_error
        assert abs(res.empirical_intensity - PUBLISHED_A_MAX) <= 4 * res.std_error
        info["runtime"] = elapsed
        assert elapsed < 10.0, elapsed


def test_c06_adaptive_convergence(criterion):
    with criterion("C6 adaptive play ends within 0.01 of 0.27603 in 9 runs, < 10 s total") as info:
        t0 = time.perf_counter()
        finals = [
            run_adaptive(GameConfig(m=1.0, seed=seed, cycles=10 ** 6, policy=Adaptive(a1))).final_a
            for a1 in (-2.0, 0.0, 2.0)
            for seed in (1, 2, 3)
        ]
        elapsed = time.perf_counter() - t0
        assert max(abs(f - PUBLISHED_A_MAX) for f in finals) <= 0.01, finals
        info["runtime"] = elapsed
        assert elapsed < 10.0, elapsed


def test_c07_projective_invariance(criterion):
    with criterion("C7 1000 rescaled cycles give |log cross ratio - (p+q)| < 1e-12, < 100 ms") as info:
        rng = np.random.default_rng(20240607)
        p, q = rng.uniform(-3, 3, size=(2, 1000))
        upsilon, w = np.exp(rng.uniform(-5, 5, size=(2, 1000)))
        scales = np.exp(rng.uniform(-7, 7, size=(1000, 2)))
        rows = [tuple(map(float, r)) for r in zip(p, q, upsilon, w)]
        scales = [tuple(map(float, s)) for s in scales]

        def worst():
            dev = 0.0
            for (pi, qi, ui, wi), s in zip(rows, scales):
                target = pi + qi
                dev = max(dev, abs(cycle_log_cross_ratio(pi, qi, ui, wi) - target))
                u_q, u_p = build_cycle_points(pi, qi, ui, wi)
                value = points_log_cross_ratio(rescale_units(u_q, s), rescale_units(u_p, s))
                dev = max(dev, abs(value - target))
            return dev

        elapsed, value = best_time(worst, repeats=3)
        assert value < 1e-12, value
        info["runtime"] = elapsed
        assert elapsed < 0.1, elapsed


def test_c08_wavefunction_suite(criterion):
    with criterion("C8 Parseval, dual variance, risk duality, ground state, risk bound, < 2 s") as info:
        t0 = time.perf_counter()
        cases = [(0.0, 1.0, 1.0), (0.7, 0.3, 1.0), (-1.2, 2.0, 0.5), (0.4, 0.5, 2.0)]
        for a, width, hbar in cases:
            psi = GridWavefunction.from_strategy(GaussianStrategy(a, width), hbar_e=hbar)
            dual = fourier_dual(psi)
            assert abs(dual.norm() - psi.norm()) < 1e-9
            assert abs(dual.variance() - hbar ** 2 / (4 * width)) < 1e-6
            for risk_m in (0.5, 1.0, 3.0):
                direct = grid_risk_expectation(psi, risk_m)
                mirrored = grid_risk_expectation(dual, 1.0 / risk_m)
                assert abs(direct - mirrored) < 1e-6
        for risk_m, hbar in ((1.0, 1.0), (0.3, 2.0), (4.0, 0.2)):
            ground = GaussianStrategy(0.0, risk_m * hbar / 2)
            assert abs(risk_expectation(ground, risk_m, hbar) - hbar / 2) < 1e-6
            psi = GridWavefunction.from_strategy(ground, hbar_e=hbar)
            assert abs(grid_risk_expectation(psi, risk_m) - hbar / 2) < 1e-6
        rng = np.random.default_rng(8)
        for _ in range(100):
            a, log_w, log_m, log_h = rng.uniform(-3, 3), *rng.uniform(-3, 3, size=3)
            hbar = math.exp(log_h / 2)
            r = risk_expectation(GaussianStrategy(a, math.exp(log_w)), math.exp(log_m), hbar)
            assert r >= hbar / 2 - 1e-12 * hbar
        elapsed = time.perf_counter() - t0
        info["runtime"] = elapsed
        assert elapsed < 2.0, elapsed


def test_c09_intensity_curve(criterion, tmp_path, capsys):
    with criterion("C9 rho-curve over [-1, 1.5] at 2501 points peaks at 0.276 +/- 0.001, unimodal") as info:
        out = tmp_path / "rho_curve.csv"
        code = main(["rho-curve", "--m", "1", "--a-min", "-1", "--a-max", "1.5",
                     "--steps", "2501", "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        with out.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["a", "rho"]
        data = np.array(rows[1:], dtype=float)
        assert len(data) == 2501
        peak = data[np.argmax(data[:, 1])]
        assert abs(peak[0] - 0.276) <= 1e-3
        signs = np.sign(np.diff(data[:, 1]))
        signs = signs[signs != 0]
        assert np.count_nonzero(np.diff(signs)) == 1


def test_c10_entangled_maximum_excluded(criterion):
    with criterion("C10 entangled-strategy maximum (excluded: no defining formula)") as info:
        pytest.skip("no defining formula is available for entangled strategies; not reproduced")
