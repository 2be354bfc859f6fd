"""Concave global lower bounds used by the successive convex approximation.

Each bound is exact at its expansion point and valid everywhere on its
domain; the iterative engines replace the non-convex rate, harvested-energy
and separation terms with these surrogates.  They are exposed as plain
functions so the tightness and validity properties can be tested directly.
"""

from __future__ import annotations

import numpy as np

from .model import ScenarioConfig, gain_matrix

LOG2E = float(np.log2(np.e))


def power_rate_bound(tx_power, tx_power_ref, traj, alloc_uplink_time,
                     k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Per-slot lower bound on device k's weighted rate, concave in the powers.

    The interfering device's log term is replaced by its tangent at the
    reference power; the joint received-power log term is kept exact.
    """
    g = gain_matrix(traj, cfg)
    Q = np.asarray(tx_power, dtype=float)
    Qr = np.asarray(tx_power_ref, dtype=float)
    dI = np.asarray(alloc_uplink_time, dtype=float)
    ko = 1 - k
    total = np.log2(Q[0] * g[0, k] + Q[1] * g[1, k] + cfg.noise_power)
    ref_itf = Qr[ko] * g[ko, k] + cfg.noise_power
    slope = g[ko, k] * LOG2E / ref_itf
    return dI * (total - np.log2(ref_itf) - slope * (Q[ko] - Qr[ko]))


def traj_rate_bound(pos, pos_ref, tx_power, alloc_uplink_time,
                    k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Per-slot lower bound on device k's weighted rate, concave in UAV k's
    positions.

    The received-power log term is expanded to first order in the squared
    distances; inside the interference term the squared distance to the
    interfering device is replaced by its affine minorant so the whole
    expression stays concave.  Entries where that minorant leaves the model
    domain evaluate to -inf.
    """
    pos = np.asarray(pos, dtype=float)          # (2, N, 2)
    ref = np.asarray(pos_ref, dtype=float)
    Q = np.asarray(tx_power, dtype=float)
    dI = np.asarray(alloc_uplink_time, dtype=float)
    H2 = cfg.altitude**2
    b0 = cfg.ref_gain
    ko = 1 - k
    w = cfg.device_positions

    u_ref = ((ref[k][None, :, :] - w[:, None, :]) ** 2).sum(axis=-1)  # (2 dev, N)
    u_new = ((pos[k][None, :, :] - w[:, None, :]) ** 2).sum(axis=-1)
    s_ref = (Q[0] * b0 / (u_ref[0] + H2) + Q[1] * b0 / (u_ref[1] + H2)
             + cfg.noise_power)
    r_hat = np.log2(s_ref)
    alpha = (Q * b0 / (u_ref + H2) ** 2) * LOG2E / s_ref[None, :]
    taylor = r_hat - (alpha * (u_new - u_ref)).sum(axis=0)

    lin = u_ref[ko] + 2.0 * ((ref[k] - w[ko]) * (pos[k] - ref[k])).sum(axis=-1)
    dom = lin + H2 > 0.0
    itf = np.where(dom, cfg.noise_power + Q[ko] * b0 / np.where(dom, lin + H2, 1.0),
                   np.nan)
    out = dI * (taylor - np.log2(itf))
    return np.where(dom, out, -np.inf)


def harvest_bound_ic(pos, pos_ref, charge_time, k: int, cfg: ScenarioConfig) -> float:
    """Lower bound on device k's harvested energy, concave (quadratic) in the
    UAV positions."""
    pos = np.asarray(pos, dtype=float)
    ref = np.asarray(pos_ref, dtype=float)
    dE = np.asarray(charge_time, dtype=float)
    H2 = cfg.altitude**2
    w = cfg.device_positions[k]
    u_ref = ((ref - w) ** 2).sum(axis=-1)  # (2 uav, N)
    u_new = ((pos - w) ** 2).sum(axis=-1)
    coef = cfg.eh_efficiency * cfg.uav_power * cfg.ref_gain * dE
    per = coef * (2.0 / (H2 + u_ref) - (H2 + u_new) / (H2 + u_ref) ** 2)
    return float(per.sum())


def separation_bound(pos, pos_ref) -> np.ndarray:
    """Per-slot affine lower bound on the squared inter-UAV distance."""
    pos = np.asarray(pos, dtype=float)
    ref = np.asarray(pos_ref, dtype=float)
    d_ref = ref[0] - ref[1]
    d_new = pos[0] - pos[1]
    return -(d_ref**2).sum(axis=-1) + 2.0 * (d_ref * d_new).sum(axis=-1)


def amp_sum_sq_bound(a, a_ref) -> np.ndarray:
    """Affine lower bound on the squared sum of the per-UAV amplitude slacks."""
    a = np.asarray(a, dtype=float)
    a_ref = np.asarray(a_ref, dtype=float)
    s = a.sum(axis=0)
    s_ref = a_ref.sum(axis=0)
    return s_ref**2 + 2.0 * s_ref * (s - s_ref)


def reciprocal_bound(b, b_ref) -> np.ndarray:
    """Affine lower bound on 1/b around b_ref > 0."""
    b = np.asarray(b, dtype=float)
    b_ref = np.asarray(b_ref, dtype=float)
    return 1.0 / b_ref - (b - b_ref) / b_ref**2


def inv_square_bound(a, a_ref) -> np.ndarray:
    """Affine lower bound on 1/a^2 around a_ref > 0."""
    a = np.asarray(a, dtype=float)
    a_ref = np.asarray(a_ref, dtype=float)
    return 1.0 / a_ref**2 - 2.0 * (a - a_ref) / a_ref**3
