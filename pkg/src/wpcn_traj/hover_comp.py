"""Infinite-horizon hovering solution for the joint transmission/reception mode.

Charging happens in two mirrored phases, one aimed at each device, with the
hover pair found by a 2-D exhaustive search; the uplink hover pair has the
same closed form as the coordination mode and sits between the devices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .model import ScenarioConfig
from .hover_ic import interior_hover_x, pair_gain_sum


class EmptyFeasibleGrid(RuntimeError):
    """Hover grid has no pair satisfying the separation constraint."""


@dataclass(frozen=True)
class HoverSolutionCoMP:
    charge_time: float             # total charging duration, split equally per device
    wpt_hover_pair: tuple          # (x1, x2) during the first device's phase
    wit_hover_x: float             # uplink hovers at (-x, 0) and (x, 0)
    tx_power: float                # common device transmit power, W
    common_rate: float             # bps/Hz (bound-rate objective)
    harvested_per_device: float    # J

    @property
    def mirror_pair(self) -> tuple:
        """Hover pair during the second device's phase."""
        x1, x2 = self.wpt_hover_pair
        return (-x2, -x1)


def charge_pair_power(x1, x2, cfg: ScenarioConfig) -> np.ndarray:
    """Received power sum delivered by hovering at (x1, 0), (x2, 0) while
    phase-aligned to the first device: coherent power there plus the
    non-coherent leakage at the second device."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    D, H, b0 = cfg.device_distance, cfg.altitude, cfg.ref_gain
    g1 = b0 / ((x1 + D / 2.0) ** 2 + H**2), b0 / ((x2 + D / 2.0) ** 2 + H**2)
    g2 = b0 / ((x1 - D / 2.0) ** 2 + H**2), b0 / ((x2 - D / 2.0) ** 2 + H**2)
    coherent = (np.sqrt(g1[0]) + np.sqrt(g1[1])) ** 2
    leakage = g2[0] + g2[1]
    return cfg.eh_efficiency * cfg.uav_power * (coherent + leakage)


def _best_pair_on(xs1: np.ndarray, xs2: np.ndarray, cfg: ScenarioConfig):
    X1, X2 = np.meshgrid(xs1, xs2, indexing="ij")
    keep = (X2 - X1) >= cfg.min_separation  # canonical order: UAV 1 left
    if not keep.any():
        raise EmptyFeasibleGrid("no hover pair satisfies min_separation")
    val = np.where(keep, charge_pair_power(X1, X2, cfg), -np.inf)
    i, j = np.unravel_index(int(val.argmax()), val.shape)
    return float(X1[i, j]), float(X2[i, j]), float(val[i, j])


def wpt_hover_comp(cfg: ScenarioConfig, tau_E_total: float,
                   grid_step: float = 0.25, refine_step: float = 0.01):
    """Exhaustive-search charging hover pair and the per-device energy.

    Searches the box [-(D/2+H), D/2+H]^2 under the separation constraint with
    a coarse grid, then refines locally.  The second charging phase is the
    mirror image, so both devices harvest the same energy.
    """
    if grid_step <= 0 or refine_step <= 0:
        raise ValueError("grid steps must be positive")
    D, H = cfg.device_distance, cfg.altitude
    span = D / 2.0 + H
    coarse = np.arange(-span, span + grid_step / 2.0, grid_step)
    x1, x2, _ = _best_pair_on(coarse, coarse, cfg)
    fine1 = np.clip(np.arange(x1 - grid_step, x1 + grid_step + refine_step / 2.0,
                              refine_step), -span, span)
    fine2 = np.clip(np.arange(x2 - grid_step, x2 + grid_step + refine_step / 2.0,
                              refine_step), -span, span)
    x1, x2, best = _best_pair_on(fine1, fine2, cfg)
    energy = tau_E_total / 2.0 * best
    return (x1, x2), float(energy)


def wit_hover_comp(cfg: ScenarioConfig) -> float:
    """Closed-form uplink hover offset; same branch structure as the
    charging hover of the coordination mode."""
    D, H = cfg.device_distance, cfg.altitude
    if D <= 2.0 * H / np.sqrt(3.0):
        return cfg.min_separation / 2.0
    return max(interior_hover_x(D, H), cfg.min_separation / 2.0)


def bound_rate_at(cfg: ScenarioConfig, tau_E: float, energy: float, x_I: float) -> float:
    """Common bound-rate when both devices transmit at full power toward the
    symmetric uplink hover pair at +-x_I."""
    tau_I = cfg.duration - tau_E
    Q = energy / tau_I
    snr = 0.5 * Q * cfg.ref_gain / cfg.noise_power * pair_gain_sum(x_I, cfg.device_distance,
                                                                   cfg.altitude)
    return float(tau_I / cfg.duration * np.log2(1.0 + snr))


def solve_infinite_comp(cfg: ScenarioConfig, tau_grid: int = 1000,
                        hover_grid_step: float = 0.25) -> HoverSolutionCoMP:
    """1-D search of the charging duration on top of the 2-D hover search.

    The charging objective scales linearly with the charging time, so the 2-D
    hover search runs once and its per-second yield is reused on the grid.
    """
    if tau_grid < 2:
        raise ValueError("tau_grid must be at least 2")
    T = cfg.duration
    pair, e_unit = wpt_hover_comp(cfg, 1.0, grid_step=hover_grid_step)
    x_I = wit_hover_comp(cfg)

    def rate(tau: float) -> float:
        return bound_rate_at(cfg, tau, e_unit * tau, x_I)

    step = T / tau_grid
    taus = step * np.arange(1, tau_grid)
    rates = np.array([rate(t) for t in taus])
    best = int(rates.argmax())
    lo = max(taus[best] - step, step * 1e-3)
    hi = min(taus[best] + step, T - step * 1e-3)
    res = minimize_scalar(lambda t: -rate(t), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-10 * T})
    tau = float(res.x) if -res.fun >= rates[best] else float(taus[best])
    energy = e_unit * tau
    return HoverSolutionCoMP(
        charge_time=tau,
        wpt_hover_pair=pair,
        wit_hover_x=x_I,
        tx_power=energy / (T - tau),
        common_rate=rate(tau),
        harvested_per_device=energy,
    )
