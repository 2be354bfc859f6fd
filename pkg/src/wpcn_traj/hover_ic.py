"""Infinite-horizon hovering solution for the interference-coordination mode.

With an unbounded mission the endpoint and speed constraints vanish and the
optimum decomposes into a charging phase at one symmetric hover pair and an
uplink phase at another, with the charging duration found by a 1-D search.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .model import ScenarioConfig


class NoRootInBracket(RuntimeError):
    """Stationarity equation has no sign change inside the hover bracket."""


class WitMode(Enum):
    SIMULTANEOUS = "simultaneous"
    TDMA = "tdma"


@dataclass(frozen=True)
class HoverSolutionIC:
    charge_time: float            # total downlink charging duration, s
    wpt_hover_x: float            # charging hovers at (-x, 0) and (x, 0)
    wit_mode: WitMode
    wit_hover_x: float            # uplink hovers at (-x, 0) and (x, 0)
    common_rate: float            # bps/Hz
    harvested_per_device: float   # J


def pair_gain_sum(x, D: float, H: float) -> np.ndarray:
    """Sum of inverse squared distances from a symmetric hover pair at +-x
    to a device on the axis; the common shape of both hover objectives."""
    x = np.asarray(x, dtype=float)
    return 1.0 / ((x - D / 2.0) ** 2 + H**2) + 1.0 / ((x + D / 2.0) ** 2 + H**2)


def interior_hover_x(D: float, H: float) -> float:
    """Interior maximizer of pair_gain_sum, defined for D > 2H/sqrt(3)."""
    u = -(D**2 / 4.0 + H**2) + np.sqrt(D**4 / 4.0 + H**2 * D**2)
    return float(np.sqrt(u))


def phi_derivative(x, D: float, H: float, tau_E: float,
                   eta: float, P: float, beta0: float) -> np.ndarray:
    """Derivative of the charging-hover objective tau_E*eta*P*beta0*pair_gain_sum."""
    x = np.asarray(x, dtype=float)
    a = D**2 / 4.0 + H**2
    num = x**4 + 2.0 * a * x**2 - 3.0 * D**4 / 16.0 + H**4 - H**2 * D**2 / 2.0
    den = ((x**2 + a - D * x) ** 2) * ((x**2 + a + D * x) ** 2)
    return -4.0 * eta * tau_E * beta0 * P * x * num / den


def wpt_hover_ic(cfg: ScenarioConfig, tau_E: float) -> tuple[float, float]:
    """Optimal symmetric charging hover offset and the per-device energy.

    The first UAV hovers at (-x, 0) next to the first device, the second at
    (x, 0); both devices harvest the same amount by symmetry.
    """
    D, H = cfg.device_distance, cfg.altitude
    if D <= 2.0 * H / np.sqrt(3.0):
        x = cfg.min_separation / 2.0
    else:
        x = max(interior_hover_x(D, H), cfg.min_separation / 2.0)
    energy = tau_E * cfg.eh_efficiency * cfg.uav_power * cfg.ref_gain * pair_gain_sum(x, D, H)
    return x, float(energy)


def simultaneous_rate_at(cfg: ScenarioConfig, tau_E: float, energy: float, x) -> np.ndarray:
    """Common rate when both devices transmit together and each UAV hovers at
    offset |x| beyond its own device (UAV 1 at (-x, 0))."""
    x = np.abs(np.asarray(x, dtype=float))
    D, H = cfg.device_distance, cfg.altitude
    tau_I = cfg.duration - tau_E
    Q = energy / tau_I
    sig = Q * cfg.ref_gain / ((x - D / 2.0) ** 2 + H**2)
    itf = Q * cfg.ref_gain / ((x + D / 2.0) ** 2 + H**2)
    return tau_I / cfg.duration * np.log2(1.0 + sig / (itf + cfg.noise_power))


def _stationarity(x: float, D: float, H: float, snr_scale: float) -> float:
    """Simultaneous-mode hover stationarity residual at symmetric offset x."""
    return (x + D / 2.0) * ((x - D / 2.0) ** 2 + H**2) ** 2 / snr_scale \
        - D * (H**2 + (D / 2.0) ** 2 - x**2)


def _stationarity_deriv(x: float, D: float, H: float, snr_scale: float) -> float:
    v = (x - D / 2.0) ** 2 + H**2
    return (v**2 + (x + D / 2.0) * 4.0 * v * (x - D / 2.0)) / snr_scale + 2.0 * D * x


def _polish_root(x: float, lo: float, hi: float, D, H, c, steps: int = 12) -> float:
    """Newton-polish the bracketed root down to evaluation noise."""
    for _ in range(steps):
        f = _stationarity(x, D, H, c)
        if f == 0.0:
            break
        df = _stationarity_deriv(x, D, H, c)
        if df == 0.0:
            break
        x_new = min(max(x - f / df, lo), hi)
        if x_new == x:
            break
        x = x_new
    return x


def wit_mode1_hover(cfg: ScenarioConfig, tau_E: float, energy: float) -> tuple[float, float]:
    """Simultaneous-transmission hover offset and common rate.

    The offset solves the stationarity equation inside the bracket
    [max(D/2, dmin/2), max(dmin/2, sqrt((D/2)^2 + H^2))]; when there is no
    sign change the better bracket endpoint is taken.
    """
    D, H = cfg.device_distance, cfg.altitude
    Q = energy / (cfg.duration - tau_E)
    c = cfg.ref_gain * Q / cfg.noise_power
    lo = max(D / 2.0, cfg.min_separation / 2.0)
    hi = max(cfg.min_separation / 2.0, float(np.sqrt((D / 2.0) ** 2 + H**2)))
    try:
        if hi - lo < 1e-12:
            raise NoRootInBracket("degenerate bracket")
        f_lo, f_hi = _stationarity(lo, D, H, c), _stationarity(hi, D, H, c)
        if f_lo == 0.0:
            x = lo
        elif f_hi == 0.0:
            x = hi
        elif f_lo * f_hi > 0.0:
            raise NoRootInBracket(f"no sign change on [{lo}, {hi}]")
        else:
            x = float(brentq(_stationarity, lo, hi, args=(D, H, c),
                             xtol=1e-12, rtol=8.9e-16))
            x = _polish_root(x, lo, hi, D, H, c)
    except NoRootInBracket:
        r_lo, r_hi = (float(simultaneous_rate_at(cfg, tau_E, energy, e)) for e in (lo, hi))
        x = lo if r_lo >= r_hi else hi
    return x, float(simultaneous_rate_at(cfg, tau_E, energy, x))


def wit_mode2_rate(cfg: ScenarioConfig, tau_E: float, energy: float) -> float:
    """Common rate when the devices take turns at double power with their UAV
    hovering directly overhead."""
    tau_I = cfg.duration - tau_E
    Q = 2.0 * energy / tau_I
    snr = Q * cfg.ref_gain / (cfg.noise_power * cfg.altitude**2)
    return float(tau_I / (2.0 * cfg.duration) * np.log2(1.0 + snr))


def _rate_at(cfg: ScenarioConfig, tau_E: float) -> tuple[float, WitMode, float, float, float]:
    x_E, energy = wpt_hover_ic(cfg, tau_E)
    x_1, r_st = wit_mode1_hover(cfg, tau_E, energy)
    r_td = wit_mode2_rate(cfg, tau_E, energy)
    if r_st >= r_td:
        return r_st, WitMode.SIMULTANEOUS, x_1, x_E, energy
    return r_td, WitMode.TDMA, cfg.device_distance / 2.0, x_E, energy


def solve_infinite_ic(cfg: ScenarioConfig, tau_grid: int = 1000) -> HoverSolutionIC:
    """Grid-plus-refinement search of the charging duration.

    Evaluates the best of the two uplink modes on a uniform grid over (0, T)
    (the endpoint tau_E = T gives zero rate and is excluded), then refines
    around the best cell with a bounded scalar minimizer.
    """
    if tau_grid < 2:
        raise ValueError("tau_grid must be at least 2")
    T = cfg.duration
    step = T / tau_grid
    taus = step * np.arange(1, tau_grid)
    rates = np.array([_rate_at(cfg, t)[0] for t in taus])
    best = int(rates.argmax())
    lo = max(taus[best] - step, step * 1e-3)
    hi = min(taus[best] + step, T - step * 1e-3)
    res = minimize_scalar(lambda t: -_rate_at(cfg, t)[0], bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-10 * T})
    tau = float(res.x) if -res.fun >= rates[best] else float(taus[best])
    rate, mode, x_I, x_E, energy = _rate_at(cfg, tau)
    return HoverSolutionIC(
        charge_time=tau,
        wpt_hover_x=x_E,
        wit_mode=mode,
        wit_hover_x=x_I,
        common_rate=rate,
        harvested_per_device=energy,
    )
