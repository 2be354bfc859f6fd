import numpy as np
import pytest

from wpcn_traj import (AllocationIC, WitMode, common_throughput_ic,
                       harvested_energy_ic, phi_derivative, solve_infinite_ic,
                       wit_mode1_hover, wit_mode2_rate, wpt_hover_ic)
from wpcn_traj.hover_ic import interior_hover_x
from conftest import benchmark_config, hover_positions


def charge_objective(x, D, H):
    """Independent evaluation of the symmetric charging-hover objective."""
    return 1.0 / ((x - D / 2.0) ** 2 + H**2) + 1.0 / ((x + D / 2.0) ** 2 + H**2)


def grid_argmax_charge(D, H, lo, step=1e-4):
    xs = np.arange(lo, D / 2.0 + 2.0 * H, step)
    return xs[np.argmax(charge_objective(xs, D, H))]


def uplink_rate_objective(x, D, H, q, beta0, sigma2):
    """Independent simultaneous-transmission rate at symmetric offset x,
    each UAV beyond its own device."""
    sig = q * beta0 / ((x - D / 2.0) ** 2 + H**2)
    itf = q * beta0 / ((x + D / 2.0) ** 2 + H**2)
    return np.log2(1.0 + sig / (itf + sigma2))


class TestPhiDerivative:
    def test_zero_at_origin(self):
        assert phi_derivative(0.0, 15.0, 5.0, 1.0, 0.6, 10.0, 1e-3) == 0.0

    def test_sign_pattern_wide(self):
        eps = interior_hover_x(15.0, 5.0)
        assert eps == pytest.approx(7.3456, abs=1e-4)
        below = np.linspace(1e-3, eps - 1e-6, 300)
        above = np.linspace(eps + 1e-6, 40.0, 300)
        assert np.all(phi_derivative(below, 15.0, 5.0, 1.0, 0.6, 10.0, 1e-3) > 0)
        assert np.all(phi_derivative(above, 15.0, 5.0, 1.0, 0.6, 10.0, 1e-3) < 0)

    def test_sign_pattern_narrow(self):
        # Devices closer than 2H/sqrt(3): the objective only decreases.
        xs = np.linspace(1e-6, 20.0, 400)
        assert np.all(phi_derivative(xs, 5.0, 5.0, 1.0, 0.6, 10.0, 1e-3) <= 0)

    def test_matches_numerical_derivative(self):
        D, H, tau, eta, P, b0 = 12.0, 4.0, 3.0, 0.6, 10.0, 1e-3
        xs = np.linspace(0.2, 15.0, 40)
        h = 1e-6
        num = (tau * eta * P * b0
               * (charge_objective(xs + h, D, H) - charge_objective(xs - h, D, H))
               / (2 * h))
        ana = phi_derivative(xs, D, H, tau, eta, P, b0)
        assert np.allclose(ana, num, rtol=1e-5, atol=1e-12)


class TestWptHover:
    def test_close_devices_sit_at_separation_limit(self):
        cfg = benchmark_config(device_distance=5.0)
        x, _ = wpt_hover_ic(cfg, 1.0)
        assert x == pytest.approx(0.5)

    def test_far_devices_use_interior_point(self):
        cfg = benchmark_config(device_distance=15.0)
        x, _ = wpt_hover_ic(cfg, 1.0)
        assert x == pytest.approx(7.3456, abs=1e-4)
        assert x == pytest.approx(grid_argmax_charge(15.0, 5.0, 0.5), abs=1e-3)

    def test_energy_matches_model_evaluation(self):
        cfg = benchmark_config(device_distance=15.0, duration=2.0, num_slots=2)
        x, energy = wpt_hover_ic(cfg, 1.0)
        pos = hover_positions(-x, x, 2)
        alloc = AllocationIC([1.0, 0.0], [0.0, 0.0], np.zeros((2, 2)))
        for k in range(2):
            assert harvested_energy_ic(alloc, pos, k, cfg) == pytest.approx(
                energy, rel=1e-12)

    def test_branch_consistency_random(self):
        # Closed form against a two-stage grid argmax for random geometries.
        rng = np.random.default_rng(42)
        for _ in range(1000):
            D = rng.uniform(1.0, 40.0)
            H = rng.uniform(0.5, 25.0)
            cfg = benchmark_config(device_distance=D, altitude=H,
                                   min_separation=1e-6,
                                   uav_initial=[[-30, -30], [30, -30]],
                                   uav_final=[[-30, 30], [30, 30]],
                                   duration=100.0, num_slots=10)
            x, _ = wpt_hover_ic(cfg, 1.0)
            xs = np.arange(0.0, D / 2.0 + 2.0 * H, 1e-2)
            coarse = xs[np.argmax(charge_objective(xs, D, H))]
            fine = np.arange(max(0.0, coarse - 2e-2), coarse + 2e-2, 1e-4)
            best = fine[np.argmax(charge_objective(fine, D, H))]
            assert abs(x - best) < 1e-3, (D, H, x, best)


class TestWitMode1:
    def _solve(self, D=15.0, T=100.0, tau=50.0):
        cfg = benchmark_config(device_distance=D, duration=T, num_slots=100)
        _, energy = wpt_hover_ic(cfg, tau)
        x, rate = wit_mode1_hover(cfg, tau, energy)
        return cfg, tau, energy, x, rate

    def test_stationarity_residual(self):
        cfg, tau, energy, x, _ = self._solve()
        D, H = cfg.device_distance, cfg.altitude
        q = energy / (cfg.duration - tau)
        c = cfg.ref_gain * q / cfg.noise_power
        lhs = (x + D / 2) * ((x - D / 2) ** 2 + H**2) ** 2 / c
        rhs = cfg.device_distance * (H**2 + (D / 2) ** 2 - x**2)
        scale = abs(lhs) + abs(rhs)
        assert abs(lhs - rhs) <= 1e-8 * scale

    def test_bracket_containment(self):
        cfg, tau, energy, x, _ = self._solve()
        D, H = cfg.device_distance, cfg.altitude
        assert max(D / 2, cfg.min_separation / 2) <= x
        assert x <= max(cfg.min_separation / 2, np.sqrt((D / 2) ** 2 + H**2)) + 1e-12

    def test_agrees_with_grid_maximization(self):
        cfg, tau, energy, x, rate = self._solve()
        D, H = cfg.device_distance, cfg.altitude
        q = energy / (cfg.duration - tau)
        xs = np.arange(cfg.min_separation / 2, np.sqrt((D / 2) ** 2 + H**2) + 2.0, 1e-4)
        vals = uplink_rate_objective(xs, D, H, q, cfg.ref_gain, cfg.noise_power)
        assert abs(x - xs[np.argmax(vals)]) <= 1e-3
        assert rate == pytest.approx((cfg.duration - tau) / cfg.duration * vals.max(),
                                     rel=1e-6)

    def test_hover_moves_out_with_power(self):
        cfg, tau, energy, x1, _ = self._solve()
        _, _, _, x2, _ = (None, None, None, *wit_mode1_hover(cfg, tau, 100.0 * energy))
        assert x2 > x1

    def test_rate_reproduced_by_model(self):
        # Discrete schedule with grid-aligned durations reproduces the rate.
        cfg = benchmark_config(device_distance=15.0, duration=100.0, num_slots=10)
        tau = 40.0
        _, energy = wpt_hover_ic(cfg, tau)
        x, rate = wit_mode1_hover(cfg, tau, energy)
        x_e, _ = wpt_hover_ic(cfg, tau)
        pos = hover_positions(-x_e, x_e, 10)
        pos[0, 4:, 0] = -x
        pos[1, 4:, 0] = x
        q = energy / (cfg.duration - tau)
        charge = np.where(np.arange(10) < 4, 10.0, 0.0)
        uplink = 10.0 - charge
        Q = np.where(uplink > 0, q, 0.0)[None, :].repeat(2, axis=0)
        alloc = AllocationIC(charge, uplink, Q)
        assert common_throughput_ic(alloc, pos, cfg) == pytest.approx(rate, abs=1e-9)


class TestWitMode2:
    def test_vanishes_as_charge_fills_mission(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0)
        _, energy = wpt_hover_ic(cfg, 100.0 - 1e-9)
        assert wit_mode2_rate(cfg, 100.0 - 1e-9, energy) < 1e-6

    def test_positive_at_benchmark(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0)
        _, energy = wpt_hover_ic(cfg, 50.0)
        r = wit_mode2_rate(cfg, 50.0, energy)
        assert np.isfinite(r) and r > 0

    def test_noise_monotonicity(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0)
        noisy = benchmark_config(device_distance=15.0, duration=100.0,
                                 noise_power=2e-13)
        _, energy = wpt_hover_ic(cfg, 50.0)
        assert wit_mode2_rate(noisy, 50.0, energy) < wit_mode2_rate(cfg, 50.0, energy)

    def test_rate_reproduced_by_model(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0, num_slots=10)
        tau = 40.0
        _, energy = wpt_hover_ic(cfg, tau)
        rate = wit_mode2_rate(cfg, tau, energy)
        x_e, _ = wpt_hover_ic(cfg, tau)
        pos = hover_positions(-x_e, x_e, 10)
        pos[0, 4:, 0] = -7.5
        pos[1, 4:, 0] = 7.5
        q2 = 2.0 * energy / (cfg.duration - tau)
        charge = np.where(np.arange(10) < 4, 10.0, 0.0)
        uplink = 10.0 - charge
        Q = np.zeros((2, 10))
        Q[0, 4:7] = q2
        Q[1, 7:] = q2
        alloc = AllocationIC(charge, uplink, Q)
        assert common_throughput_ic(alloc, pos, cfg) == pytest.approx(rate, abs=1e-9)


class TestSolveInfinite:
    def test_close_devices_prefer_turn_taking(self):
        cfg = benchmark_config(device_distance=5.0, duration=100.0)
        sol = solve_infinite_ic(cfg, tau_grid=300)
        assert sol.wit_mode is WitMode.TDMA

    def test_grid_refinement_stable(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0)
        r1 = solve_infinite_ic(cfg, tau_grid=500).common_rate
        r2 = solve_infinite_ic(cfg, tau_grid=1000).common_rate
        assert abs(r1 - r2) < 1e-3

    def test_best_on_grid(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0)
        sol = solve_infinite_ic(cfg, tau_grid=300)
        for tau in np.linspace(1.0, 99.0, 23):
            _, energy = wpt_hover_ic(cfg, tau)
            _, r1 = wit_mode1_hover(cfg, tau, energy)
            r2 = wit_mode2_rate(cfg, tau, energy)
            assert sol.common_rate >= max(r1, r2) - 1e-9

    @pytest.mark.parametrize("D", [5.0, 15.0, 30.0])
    def test_hover_ordering(self, D):
        cfg = benchmark_config(device_distance=D, duration=100.0)
        sol = solve_infinite_ic(cfg, tau_grid=300)
        assert sol.wpt_hover_x <= max(D / 2, cfg.min_separation / 2) + 1e-9
        _, energy = wpt_hover_ic(cfg, sol.charge_time)
        x1, _ = wit_mode1_hover(cfg, sol.charge_time, energy)
        assert x1 >= D / 2 - 1e-12

    def test_turn_taking_rate_flat_for_far_devices(self):
        # Once the devices are far apart each harvests essentially from its
        # own overhead UAV, so the turn-taking rate stops moving with D.
        rates = []
        for D in [20.0, 40.0]:
            cfg = benchmark_config(device_distance=D, duration=100.0,
                                   uav_initial=[[-30, -30], [30, -30]],
                                   uav_final=[[-30, 30], [30, 30]])
            taus = np.linspace(1.0, 99.0, 99)
            best = max(wit_mode2_rate(cfg, t, wpt_hover_ic(cfg, t)[1]) for t in taus)
            rates.append(best)
        assert abs(rates[1] - rates[0]) / rates[0] < 0.02

    def test_equal_energy_and_rates(self):
        cfg = benchmark_config(device_distance=15.0, duration=100.0, num_slots=10)
        sol = solve_infinite_ic(cfg, tau_grid=300)
        pos = hover_positions(-sol.wpt_hover_x, sol.wpt_hover_x, 10)
        alloc = AllocationIC(np.full(10, 1.0), np.zeros(10), np.zeros((2, 10)))
        e1 = harvested_energy_ic(alloc, pos, 0, cfg)
        e2 = harvested_energy_ic(alloc, pos, 1, cfg)
        assert e1 == pytest.approx(e2, rel=1e-12)
