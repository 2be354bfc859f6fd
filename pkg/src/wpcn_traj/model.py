"""Physical model of the two-UAV / two-device wireless-powered network.

Everything is kept in linear SI units (W, J, m, s); dB and dBm inputs are
converted once at the configuration boundary.  Model evaluations are pure
functions of plain arrays so that validated trajectories and synthetic hover
schedules can be scored by the same code.  Channel phases are random in the
underlying physical model but never enter these deterministic evaluations;
they only matter to the Monte-Carlo oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

# Feasibility tolerances: geometric in metres, physical in seconds / joules.
GEOM_TOL = 1e-6
PHYS_TOL = 1e-9


class ConfigError(ValueError):
    """Raised when a scenario configuration violates a model invariant."""


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def watt_to_dbm(watt: float) -> float:
    return 10.0 * np.log10(watt / 1e-3)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _as_point_pair(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2, 2):
        raise ConfigError(f"{name} must be two 2-D points, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class ScenarioConfig:
    """All physical and mission constants of one scenario instance.

    Defaults follow the benchmark setup: 5 m altitude, -100 dBm noise,
    -30 dB reference gain, 40 dBm UAV transmit power, 60% harvesting
    efficiency, 5 m/s speed cap and 1 m separation, with the UAVs flying
    from (-2,-2)/(2,-2) to (-2,2)/(2,2).
    """

    altitude: float = 5.0
    device_distance: float = 5.0
    uav_power: float = 10.0
    eh_efficiency: float = 0.6
    ref_gain: float = 1e-3
    noise_power: float = 1e-13
    max_speed: float = 5.0
    min_separation: float = 1.0
    duration: float = 10.0
    num_slots: int = 100
    device_positions: np.ndarray = None  # (2, 2); defaults to (-D/2,0), (D/2,0)
    uav_initial: np.ndarray = field(
        default_factory=lambda: np.array([[-2.0, -2.0], [2.0, -2.0]])
    )
    uav_final: np.ndarray = field(
        default_factory=lambda: np.array([[-2.0, 2.0], [2.0, 2.0]])
    )

    def __post_init__(self):
        if self.device_positions is None:
            half = self.device_distance / 2.0
            object.__setattr__(
                self, "device_positions", np.array([[-half, 0.0], [half, 0.0]])
            )
        object.__setattr__(
            self, "device_positions", _as_point_pair(self.device_positions, "device_positions")
        )
        object.__setattr__(self, "uav_initial", _as_point_pair(self.uav_initial, "uav_initial"))
        object.__setattr__(self, "uav_final", _as_point_pair(self.uav_final, "uav_final"))
        for key in ("altitude", "uav_power", "ref_gain", "noise_power",
                    "max_speed", "min_separation", "duration", "device_distance"):
            if getattr(self, key) <= 0.0:
                raise ConfigError(f"{key} must be positive")
        if not 0.0 < self.eh_efficiency <= 1.0:
            raise ConfigError("eh_efficiency must lie in (0, 1]")
        if self.num_slots < 1:
            raise ConfigError("num_slots must be at least 1")
        for m in range(2):
            need = float(np.linalg.norm(self.uav_initial[m] - self.uav_final[m])) / self.max_speed
            if self.duration < need - PHYS_TOL:
                raise ConfigError(
                    f"duration too short for uav {m + 1} endpoints: need >= {need:.6g} s"
                )
        for name, pts in (("uav_initial", self.uav_initial), ("uav_final", self.uav_final)):
            if np.linalg.norm(pts[0] - pts[1]) < self.min_separation - GEOM_TOL:
                raise ConfigError(f"{name} points violate min_separation")

    @property
    def slot_duration(self) -> float:
        return self.duration / self.num_slots

    @property
    def max_step(self) -> float:
        """Maximum per-slot displacement."""
        return self.max_speed * self.slot_duration

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class Trajectory:
    """Slot-boundary horizontal positions of both UAVs, shape (2, N+1, 2).

    Index 0 is the initial location and index N the final one; slot-n model
    quantities are evaluated at the right endpoint q[m][n], n = 1..N.
    """

    positions: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.positions, dtype=float)
        if arr.ndim != 3 or arr.shape[0] != 2 or arr.shape[2] != 2:
            raise ValueError(f"positions must have shape (2, N+1, 2), got {arr.shape}")
        object.__setattr__(self, "positions", arr)

    @property
    def num_slots(self) -> int:
        return self.positions.shape[1] - 1

    @property
    def slot_positions(self) -> np.ndarray:
        """Positions used for slot-n model quantities, shape (2, N, 2)."""
        return self.positions[:, 1:, :]

    def residuals(self, cfg: ScenarioConfig) -> dict:
        pos = self.positions
        endpoint = max(
            float(np.abs(pos[:, 0, :] - cfg.uav_initial).max()),
            float(np.abs(pos[:, -1, :] - cfg.uav_final).max()),
        )
        steps = np.linalg.norm(np.diff(pos, axis=1), axis=2)
        speed = max(0.0, float(steps.max() - cfg.max_step)) if steps.size else 0.0
        gaps = np.linalg.norm(pos[0, 1:, :] - pos[1, 1:, :], axis=1)
        separation = max(0.0, float(cfg.min_separation - gaps.min()))
        return {"endpoint": endpoint, "speed": speed, "separation": separation}

    def is_feasible(self, cfg: ScenarioConfig, tol: float = GEOM_TOL) -> bool:
        return max(self.residuals(cfg).values()) <= tol


def _positions_of(traj) -> np.ndarray:
    """Accept a Trajectory or a raw (2, N, 2) slot-position array."""
    if isinstance(traj, Trajectory):
        return traj.slot_positions
    return np.asarray(traj, dtype=float)


@dataclass(frozen=True)
class AllocationIC:
    """Per-slot sub-slot durations and device transmit powers, coordination mode."""

    charge_time: np.ndarray  # (N,) downlink charging sub-slot, s
    uplink_time: np.ndarray  # (N,) uplink data sub-slot, s
    tx_power: np.ndarray     # (2, N) device transmit power, W

    def __post_init__(self):
        object.__setattr__(self, "charge_time", np.asarray(self.charge_time, dtype=float))
        object.__setattr__(self, "uplink_time", np.asarray(self.uplink_time, dtype=float))
        object.__setattr__(self, "tx_power", np.asarray(self.tx_power, dtype=float))

    def residuals(self, cfg: ScenarioConfig) -> dict:
        budget = float((self.charge_time + self.uplink_time - cfg.slot_duration).max())
        neg = -min(
            float(self.charge_time.min()),
            float(self.uplink_time.min()),
            float(self.tx_power.min()),
        )
        return {"slot_budget": max(0.0, budget), "negativity": max(0.0, neg)}


@dataclass(frozen=True)
class AllocationCoMP:
    """Per-slot beamforming sub-sub-slots, uplink sub-slot and powers, joint mode."""

    beam_time: np.ndarray    # (2, N) charging sub-sub-slot aimed at device k, s
    uplink_time: np.ndarray  # (N,) joint-reception uplink sub-slot, s
    tx_power: np.ndarray     # (2, N) device transmit power, W

    def __post_init__(self):
        object.__setattr__(self, "beam_time", np.asarray(self.beam_time, dtype=float))
        object.__setattr__(self, "uplink_time", np.asarray(self.uplink_time, dtype=float))
        object.__setattr__(self, "tx_power", np.asarray(self.tx_power, dtype=float))

    def residuals(self, cfg: ScenarioConfig) -> dict:
        used = self.beam_time.sum(axis=0) + self.uplink_time
        budget = float((used - cfg.slot_duration).max())
        neg = -min(
            float(self.beam_time.min()),
            float(self.uplink_time.min()),
            float(self.tx_power.min()),
        )
        return {"slot_budget": max(0.0, budget), "negativity": max(0.0, neg)}


# ---------------------------------------------------------------------------
# Channel and link quantities
# ---------------------------------------------------------------------------

def channel_gain(q, w, cfg: ScenarioConfig) -> np.ndarray:
    """Line-of-sight channel power gain between a UAV at q and a device at w."""
    q = np.asarray(q, dtype=float)
    w = np.asarray(w, dtype=float)
    d2 = ((q - w) ** 2).sum(axis=-1)
    return cfg.ref_gain / (d2 + cfg.altitude**2)


def gain_matrix(traj, cfg: ScenarioConfig) -> np.ndarray:
    """Channel power gains g[k, m, n] from UAV m to device k over all slots."""
    pos = _positions_of(traj)  # (2, N, 2)
    dev = cfg.device_positions  # (2, 2)
    d2 = ((pos[None, :, :, :] - dev[:, None, None, :]) ** 2).sum(axis=-1)
    return cfg.ref_gain / (d2 + cfg.altitude**2)


def harvested_energy_ic(alloc: AllocationIC, traj, k: int, cfg: ScenarioConfig) -> float:
    """Total energy collected by device k from both UAVs' independent charging."""
    g = gain_matrix(traj, cfg)
    per_slot = cfg.eh_efficiency * cfg.uav_power * alloc.charge_time * g[k].sum(axis=0)
    return float(per_slot.sum())


def sinr_ic(tx_power, traj, k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Per-slot uplink SINR of device k when both devices transmit at once."""
    g = gain_matrix(traj, cfg)
    Q = np.asarray(tx_power, dtype=float)
    ko = 1 - k
    return Q[k] * g[k, k] / (Q[ko] * g[ko, k] + cfg.noise_power)


def rates_ic(alloc: AllocationIC, traj, cfg: ScenarioConfig) -> np.ndarray:
    """Average uplink throughput of each device, bps/Hz, shape (2,)."""
    out = np.empty(2)
    for k in range(2):
        s = sinr_ic(alloc.tx_power, traj, k, cfg)
        out[k] = (alloc.uplink_time * np.log2(1.0 + s)).sum() / cfg.duration
    return out


def common_throughput_ic(alloc: AllocationIC, traj, cfg: ScenarioConfig) -> float:
    """Minimum of the two devices' average uplink rates, bps/Hz."""
    return float(rates_ic(alloc, traj, cfg).min())


def energy_residual_ic(alloc: AllocationIC, traj, k: int, cfg: ScenarioConfig) -> float:
    """Harvested minus spent energy of device k; feasible iff >= -PHYS_TOL."""
    spent = float((alloc.tx_power[k] * alloc.uplink_time).sum())
    return harvested_energy_ic(alloc, traj, k, cfg) - spent


def comp_coherent_power(slot_positions, k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Received power at device k when both UAVs phase-align toward it."""
    pos = _positions_of(slot_positions)
    g = channel_gain(pos, cfg.device_positions[k], cfg)  # (2, ...) over UAVs
    amp = np.sqrt(g).sum(axis=0)
    return cfg.eh_efficiency * cfg.uav_power * amp**2


def comp_noncoherent_power(slot_positions, k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Received power at device k from beams aligned to the other device."""
    pos = _positions_of(slot_positions)
    g = channel_gain(pos, cfg.device_positions[k], cfg)
    return cfg.eh_efficiency * cfg.uav_power * g.sum(axis=0)


def harvested_energy_comp(alloc: AllocationCoMP, traj, k: int, cfg: ScenarioConfig) -> float:
    """Total energy collected by device k under joint energy beamforming."""
    pos = _positions_of(traj)
    coh = comp_coherent_power(pos, k, cfg)
    non = comp_noncoherent_power(pos, k, cfg)
    ko = 1 - k
    return float((alloc.beam_time[k] * coh + alloc.beam_time[ko] * non).sum())


def comp_rate_upper_bound(tx_power, slot_positions, k: int, cfg: ScenarioConfig) -> np.ndarray:
    """Upper bound on device k's joint-reception rate per unit uplink time."""
    pos = _positions_of(slot_positions)
    g = channel_gain(pos, cfg.device_positions[k], cfg)
    snr = 0.5 * np.asarray(tx_power, dtype=float) / cfg.noise_power * g.sum(axis=0)
    return np.log2(1.0 + snr)


def rates_comp(alloc: AllocationCoMP, traj, cfg: ScenarioConfig) -> np.ndarray:
    """Bound-rate average throughput of each device, bps/Hz, shape (2,)."""
    pos = _positions_of(traj)
    out = np.empty(2)
    for k in range(2):
        r = comp_rate_upper_bound(alloc.tx_power[k], pos, k, cfg)
        out[k] = (alloc.uplink_time * r).sum() / cfg.duration
    return out


def common_throughput_comp(alloc: AllocationCoMP, traj, cfg: ScenarioConfig) -> float:
    return float(rates_comp(alloc, traj, cfg).min())


def energy_residual_comp(alloc: AllocationCoMP, traj, k: int, cfg: ScenarioConfig) -> float:
    spent = float((alloc.tx_power[k] * alloc.uplink_time).sum())
    return harvested_energy_comp(alloc, traj, k, cfg) - spent


def feasibility_report(cfg: ScenarioConfig, traj: Trajectory, alloc) -> Mapping[str, float]:
    """All constraint residuals of a candidate solution (0 = satisfied)."""
    out = dict(traj.residuals(cfg))
    out.update(alloc.residuals(cfg))
    if isinstance(alloc, AllocationIC):
        for k in range(2):
            out[f"energy_dev{k + 1}"] = max(0.0, -energy_residual_ic(alloc, traj, k, cfg))
    else:
        for k in range(2):
            out[f"energy_dev{k + 1}"] = max(0.0, -energy_residual_comp(alloc, traj, k, cfg))
    return out


def is_feasible(cfg: ScenarioConfig, traj: Trajectory, alloc,
                geom_tol: float = GEOM_TOL, phys_tol: float = PHYS_TOL) -> bool:
    rep = feasibility_report(cfg, traj, alloc)
    geom = max(rep["endpoint"], rep["speed"], rep["separation"])
    phys = max(rep["slot_budget"], rep["negativity"],
               rep["energy_dev1"], rep["energy_dev2"])
    return geom <= geom_tol and phys <= phys_tol
