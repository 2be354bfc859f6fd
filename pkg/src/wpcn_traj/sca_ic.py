"""Finite-horizon alternating solver for the interference-coordination mode.

Time allocation (a linear program), device transmit powers and UAV
trajectories (both successive convex approximation) are optimized in turn.
Every subproblem contains the incumbent, so the true common throughput is
non-decreasing across accepted iterates; candidates that fail that check are
rejected, which keeps the trace monotone under solver noise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .hover_ic import HoverSolutionIC, WitMode, solve_infinite_ic
from .kernel import (KernelOptions, LinearProgram, LogGroup, NegLogGroup,
                     Problem, StartInfeasible, solve_concave, solve_lp)
from .model import (AllocationIC, ScenarioConfig, Trajectory,
                    common_throughput_ic, feasibility_report, gain_matrix,
                    harvested_energy_ic)

LOG2E = float(np.log2(np.e))
_SPEED_MARGIN = 1.0 - 1e-9   # legs fly just under the cap for strict interiors


class Initialization(Enum):
    SHF = "shf"
    DIRECT_FLIGHT = "direct-flight"


@dataclass
class SolveOptions:
    outer_tol: float = 1e-4
    max_outer: int = 50
    max_inner: int = 30
    inner_tol: float = 1e-4
    tau_grid: int = 400           # grid for the embedded infinite-horizon solve
    optimize_trajectory: bool = True
    kernel: KernelOptions = field(default_factory=KernelOptions)


@dataclass
class SolveReport:
    trajectory: Trajectory
    allocation: AllocationIC
    common_rate: float
    objective_trace: np.ndarray
    power_traces: list
    traj_traces: list
    residuals: dict
    initialization: Initialization
    outer_iterations: int
    wall_seconds: float


# ---------------------------------------------------------------------------
# Initial trajectories
# ---------------------------------------------------------------------------

def _sample_piecewise(times: np.ndarray, points: np.ndarray, at: np.ndarray) -> np.ndarray:
    x = np.interp(at, times, points[:, 0])
    y = np.interp(at, times, points[:, 1])
    return np.stack([x, y], axis=-1)


def _leg_time(a, b, cfg: ScenarioConfig) -> float:
    return float(np.linalg.norm(np.asarray(b) - np.asarray(a))) / (cfg.max_speed * _SPEED_MARGIN)


def build_visit_paths(cfg: ScenarioConfig, waypoints, dwell_weights):
    """Sample both UAVs flying through synchronized waypoint lists.

    waypoints[m] is UAV m's sequence (equal lengths); dwell_weights[i] is the
    share of the leftover time spent hovering at interior waypoint i+1.  Legs
    are synchronized, with the slower UAV setting each leg's duration.
    Returns (positions, dwell windows) or None when the legs alone exceed the
    mission duration.
    """
    n_legs = len(waypoints[0]) - 1
    legs = np.array([
        max(_leg_time(waypoints[0][i], waypoints[0][i + 1], cfg),
            _leg_time(waypoints[1][i], waypoints[1][i + 1], cfg))
        for i in range(n_legs)
    ])
    if float(legs.sum()) > cfg.duration:
        return None
    slack = cfg.duration - float(legs.sum())
    weights = np.asarray(dwell_weights, dtype=float)
    total = weights.sum()
    dwells = slack * weights / total if total > 0 else np.zeros_like(weights)

    times = [0.0]
    windows = []
    for i in range(n_legs):
        times.append(times[-1] + legs[i])
        if i < n_legs - 1:
            start = times[-1]
            times.append(start + dwells[i])
            windows.append((start, start + dwells[i]))
    times = np.asarray(times)
    times[-1] = cfg.duration  # absorb rounding in the final breakpoint

    at = cfg.slot_duration * np.arange(cfg.num_slots + 1)
    pos = np.empty((2, cfg.num_slots + 1, 2))
    for m in range(2):
        pts = [np.asarray(waypoints[m][0], dtype=float)]
        for i in range(n_legs):
            pts.append(np.asarray(waypoints[m][i + 1], dtype=float))
            if i < n_legs - 1:
                pts.append(pts[-1])
        pos[m] = _sample_piecewise(times, np.asarray(pts), at)
        pos[m, 0] = waypoints[m][0]
        pos[m, -1] = waypoints[m][-1]
    return pos, windows


def direct_flight_trajectory(cfg: ScenarioConfig) -> Trajectory:
    """Straight constant-speed paths from the initial to the final locations."""
    frac = np.linspace(0.0, 1.0, cfg.num_slots + 1)[None, :, None]
    pos = cfg.uav_initial[:, None, :] * (1 - frac) + cfg.uav_final[:, None, :] * frac
    return Trajectory(pos)


def _shf_ic(cfg: ScenarioConfig, hover: HoverSolutionIC):
    x_e, x_i = hover.wpt_hover_x, hover.wit_hover_x
    wp = [
        [cfg.uav_initial[0], np.array([-x_e, 0.0]), np.array([-x_i, 0.0]), cfg.uav_final[0]],
        [cfg.uav_initial[1], np.array([x_e, 0.0]), np.array([x_i, 0.0]), cfg.uav_final[1]],
    ]
    tau_e = hover.charge_time
    built = build_visit_paths(cfg, wp, [tau_e, cfg.duration - tau_e])
    if built is None:
        return None
    traj = Trajectory(built[0])
    if not traj.is_feasible(cfg):
        return None
    return traj, {"charge": built[1][0], "uplink": built[1][1]}


def shf_trajectory_ic(cfg: ScenarioConfig, hover: HoverSolutionIC):
    """Hover-and-fly initial trajectory: initial -> charging hover -> uplink
    hover -> final, hovering with the leftover time; None when the mission is
    too short for the visits (direct flight needed)."""
    built = _shf_ic(cfg, hover)
    return None if built is None else built[0]


# ---------------------------------------------------------------------------
# Initial allocation
# ---------------------------------------------------------------------------

def _slots_in_window(cfg: ScenarioConfig, window) -> np.ndarray:
    start, end = window
    d = cfg.slot_duration
    n = np.arange(1, cfg.num_slots + 1)
    return ((n - 1) * d >= start - 1e-9) & (n * d <= end + 1e-9)


def initial_allocation_ic(cfg: ScenarioConfig, traj: Trajectory,
                          hover: HoverSolutionIC, windows=None) -> AllocationIC:
    """Feasible warm-start allocation mirroring the hover solution's split."""
    N, d = cfg.num_slots, cfg.slot_duration
    uplink_mask = None
    if windows is not None:
        uplink_mask = _slots_in_window(cfg, windows["uplink"])
        if uplink_mask.sum() < 2:
            uplink_mask = None
    charge = np.full(N, d)
    uplink = np.zeros(N)
    # A small positive power floor everywhere keeps every slot visible to the
    # time-allocation LP, so later passes can re-activate slots the warm
    # start left idle.
    Q = np.full((2, N), 0.05)
    if uplink_mask is None:
        rho = min(max(hover.charge_time / cfg.duration, 0.05), 0.95)
        charge = np.full(N, d * rho)
        uplink = np.full(N, d * (1.0 - rho))
        Q[:, :] = 1.0
    else:
        charge[uplink_mask] = 0.0
        uplink[uplink_mask] = d
        idx = np.flatnonzero(uplink_mask)
        if hover.wit_mode is WitMode.TDMA:
            half = idx.size // 2
            Q[0, idx[:half]] = 1.0
            Q[1, idx[half:]] = 1.0
        else:
            Q[:, idx] = 1.0
    alloc = AllocationIC(charge, uplink, Q)
    Q = Q.copy()
    for k in range(2):
        budget = harvested_energy_ic(alloc, traj, k, cfg)
        spend = float((Q[k] * uplink).sum())
        Q[k] *= 0.999 * budget / spend if spend > 0 else 0.0
    return AllocationIC(charge, uplink, Q)


# ---------------------------------------------------------------------------
# Subproblems
# ---------------------------------------------------------------------------

def optimize_time_ic(cfg: ScenarioConfig, traj, tx_power,
                     options: KernelOptions | None = None) -> AllocationIC:
    """Exact epigraph LP over the per-slot charging/uplink durations."""
    N = cfg.num_slots
    g = gain_matrix(traj, cfg)
    Q = np.asarray(tx_power, dtype=float)
    n = 2 * N + 1  # [charge, uplink, R]
    c = np.zeros(n)
    c[-1] = 1.0
    rows, rhs = [], []
    for k in range(2):
        ko = 1 - k
        rate = np.log2(1.0 + Q[k] * g[k, k] / (Q[ko] * g[ko, k] + cfg.noise_power))
        harvest = cfg.eh_efficiency * cfg.uav_power * g[k].sum(axis=0)
        row = np.zeros(n)
        row[N:2 * N] = -rate / cfg.duration
        row[-1] = 1.0
        rows.append(row)
        rhs.append(0.0)
        row = np.zeros(n)
        row[:N] = -harvest
        row[N:2 * N] = Q[k]
        rows.append(row)
        rhs.append(0.0)
    pair = np.zeros((N, n))
    pair[:, :N] = np.eye(N)
    pair[:, N:2 * N] += np.eye(N)
    rows.append(pair)
    rhs.append(np.full(N, cfg.slot_duration))
    A = np.vstack([np.atleast_2d(r) for r in rows])
    b = np.concatenate([np.atleast_1d(r) for r in rhs])
    out = solve_lp(LinearProgram(c, a_ub=A, b_ub=b, lb=np.zeros(n)), options)
    x = np.clip(out.x, 0.0, None)
    return AllocationIC(x[:N], x[N:2 * N], Q.copy())


def _epigraph_floor(prob: Problem, x: np.ndarray, r_idx: int) -> float:
    """Smallest concave-row value at x with the epigraph variable zeroed."""
    saved = x[r_idx]
    x[r_idx] = 0.0
    best = min(row.value(x) for row in prob.conc_rows)
    x[r_idx] = saved
    return float(best)


def optimize_power_ic(cfg: ScenarioConfig, traj, alloc: AllocationIC,
                      sca_tol: float = 1e-4, max_iter: int = 30,
                      options: KernelOptions | None = None):
    """Iterative concave maximization of the transmit powers.

    Slots with no uplink time are frozen at the incumbent; each pass solves
    the tangent surrogate of the interference term and is accepted only if
    the true common throughput does not decrease.
    """
    uplink, charge = alloc.uplink_time, alloc.charge_time
    active = np.flatnonzero(uplink > 1e-12 * cfg.slot_duration)
    Q = alloc.tx_power.copy()
    trace = [common_throughput_ic(AllocationIC(charge, uplink, Q), traj, cfg)]
    if active.size == 0:
        return Q, trace
    g = gain_matrix(traj, cfg)
    budgets = [harvested_energy_ic(alloc, traj, k, cfg) for k in range(2)]
    A = active.size
    n = 2 * A + 1
    r_idx = 2 * A
    prev_surrogate = None
    for _ in range(max_iter):
        prob = Problem(n, np.eye(n)[r_idx])
        wt = uplink[active] / (cfg.duration * np.log(2.0))
        for k in range(2):
            ko = 1 - k
            ref_itf = Q[ko, active] * g[ko, k, active] + cfg.noise_power
            slope = g[ko, k, active] * LOG2E / ref_itf
            lin = np.zeros(n)
            lin[ko * A:(ko + 1) * A] = -uplink[active] / cfg.duration * slope
            lin[r_idx] = -1.0
            const = float((uplink[active] / cfg.duration
                           * (-np.log2(ref_itf) + slope * Q[ko, active])).sum())
            logs = LogGroup(
                idx=np.stack([np.arange(A), A + np.arange(A)], axis=1),
                coeffs=np.stack([g[0, k, active], g[1, k, active]], axis=1),
                offsets=np.full(A, cfg.noise_power),
                weights=wt,
            )
            prob.add_concave_ge(const=const, lin=lin, logs=(logs,))
            row = np.zeros(n)
            row[k * A:(k + 1) * A] = uplink[active]
            prob.add_affine(row, budgets[k])
        eye = np.eye(n)[:2 * A]
        prob.add_affine(-eye, np.zeros(2 * A))

        start = np.zeros(n)
        for k in range(2):
            q0 = np.maximum(Q[k, active], 1e-9 * (1.0 + budgets[k] / cfg.duration))
            spend = float((q0 * uplink[active]).sum())
            if spend >= budgets[k]:
                q0 = q0 * (0.999 * budgets[k] / spend)
            start[k * A:(k + 1) * A] = q0
        floor = _epigraph_floor(prob, start, r_idx)
        start[r_idx] = floor - 1e-6 * (1.0 + abs(floor))
        out = solve_concave(prob, start, options)
        Q_new = Q.copy()
        Q_new[0, active] = np.clip(out.x[:A], 0.0, None)
        Q_new[1, active] = np.clip(out.x[A:2 * A], 0.0, None)
        val = common_throughput_ic(AllocationIC(charge, uplink, Q_new), traj, cfg)
        if val < trace[-1] - 1e-12 * (1.0 + abs(trace[-1])):
            break
        Q = Q_new
        trace.append(val)
        sur = float(out.x[r_idx])
        if prev_surrogate is not None and \
                sur - prev_surrogate <= sca_tol * (1.0 + abs(prev_surrogate)):
            break
        prev_surrogate = sur
    return Q, trace


def _free_coords(cfg: ScenarioConfig, ref: np.ndarray, nv: int) -> np.ndarray:
    N = cfg.num_slots
    x = np.zeros(nv)
    for m in range(2):
        base = 2 * (N - 1) * m
        x[base: base + 2 * (N - 1)] = ref[m, 1:N, :].reshape(-1)
    return x


def traj_var_base(cfg: ScenarioConfig, m: int, slot: int) -> int:
    """Index of UAV m's x-coordinate at interior slot `slot` (1..N-1) in the
    trajectory subproblem layout shared by both engines."""
    return 2 * ((cfg.num_slots - 1) * m + (slot - 1))


def add_geometry_rows(prob: Problem, cfg: ScenarioConfig, ref: np.ndarray,
                      trust_radius=None) -> None:
    """Collision (affine minorant), speed and optional trust-region rows.

    Rows are relaxed just enough that the reference trajectory is strictly
    inside; the relaxations stay far below the feasibility tolerances.
    """
    N = cfg.num_slots
    nv = prob.n
    dmin2 = cfg.min_separation**2
    for n in range(1, N):
        d_ref = ref[0, n] - ref[1, n]
        nrm2 = float((d_ref**2).sum())
        eps = 1e-8 * max(1.0, dmin2) + max(0.0, dmin2 - nrm2)
        row = np.zeros(nv)
        row[traj_var_base(cfg, 0, n): traj_var_base(cfg, 0, n) + 2] = -2.0 * d_ref
        row[traj_var_base(cfg, 1, n): traj_var_base(cfg, 1, n) + 2] = 2.0 * d_ref
        prob.add_affine(row, -(dmin2 - eps) - nrm2)

    step2 = cfg.max_step**2
    for m in range(2):
        for n in range(N):
            ref_step = float(((ref[m, n + 1] - ref[m, n]) ** 2).sum())
            eps = 1e-8 * max(1.0, step2) + max(0.0, ref_step - step2)
            if 1 <= n <= N - 2:
                ia, ib = traj_var_base(cfg, m, n), traj_var_base(cfg, m, n + 1)
                idx = np.array([ia, ia + 1, ib, ib + 1])
                P = 2.0 * np.block([[np.eye(2), -np.eye(2)],
                                    [-np.eye(2), np.eye(2)]])
                prob.add_quad(blocks=((idx, P),), const=-step2 - eps)
            else:
                fixed = cfg.uav_initial[m] if n == 0 else cfg.uav_final[m]
                iv = traj_var_base(cfg, m, 1 if n == 0 else N - 1)
                diag = np.zeros(nv)
                diag[iv: iv + 2] = 2.0
                lin = np.zeros(nv)
                lin[iv: iv + 2] = -2.0 * fixed
                prob.add_quad(diag=diag, lin=lin,
                              const=float((fixed**2).sum()) - step2 - eps)

    if trust_radius is not None:
        for m in range(2):
            for n in range(1, N):
                base = traj_var_base(cfg, m, n)
                diag = np.zeros(nv)
                diag[base: base + 2] = 2.0
                lin = np.zeros(nv)
                lin[base: base + 2] = -2.0 * ref[m, n]
                prob.add_quad(diag=diag, lin=lin,
                              const=float((ref[m, n] ** 2).sum()) - trust_radius**2)


def _traj_subproblem_ic(cfg: ScenarioConfig, alloc: AllocationIC,
                        ref: np.ndarray, trust_radius):
    """Concave program of one trajectory SCA pass at the reference `ref`."""
    N = cfg.num_slots
    H2 = cfg.altitude**2
    b0 = cfg.ref_gain
    nv = 4 * (N - 1) + 1
    r_idx = nv - 1

    def var_base(m: int, slot: int) -> int:
        return 2 * ((N - 1) * m + (slot - 1))  # slot in 1..N-1

    uplink, charge, Q = alloc.uplink_time, alloc.charge_time, alloc.tx_power
    w = cfg.device_positions
    prob = Problem(nv, np.eye(nv)[r_idx])

    # Rate rows: one concave row per device (depends on its own UAV only).
    for k in range(2):
        ko = 1 - k
        const = 0.0
        lin = np.zeros(nv)
        diag = np.zeros(nv)
        nl_idx, nl_coeff, nl_off, nl_scale, nl_w = [], [], [], [], []
        for slot in np.flatnonzero(uplink > 1e-6 * cfg.slot_duration):
            n = int(slot) + 1
            wt = uplink[slot] / cfg.duration
            qk = ref[k, n]
            u_ref = ((qk - w) ** 2).sum(axis=-1)
            s_ref = (Q[0, slot] * b0 / (u_ref[0] + H2)
                     + Q[1, slot] * b0 / (u_ref[1] + H2) + cfg.noise_power)
            alpha = Q[:, slot] * b0 / (u_ref + H2) ** 2 * LOG2E / s_ref
            const += wt * float(np.log2(s_ref) + (alpha * u_ref).sum())
            if n <= N - 1:
                base = var_base(k, n)
                a_sum = float(alpha.sum())
                diag[base] += 2.0 * wt * a_sum
                diag[base + 1] += 2.0 * wt * a_sum
                lin[base] += 2.0 * wt * float((alpha * w[:, 0]).sum())
                lin[base + 1] += 2.0 * wt * float((alpha * w[:, 1]).sum())
                const -= wt * float((alpha * (w**2).sum(axis=1)).sum())
            else:
                const -= wt * float((alpha * u_ref).sum())  # fixed final point
            if Q[ko, slot] <= 0.0:
                const -= wt * np.log2(cfg.noise_power)
            elif n <= N - 1:
                base = var_base(k, n)
                grad = 2.0 * (qk - w[ko])
                off = float(u_ref[ko] + H2 - grad @ qk)
                nl_idx.append([base, base + 1])
                nl_coeff.append(grad)
                nl_off.append(off)
                nl_scale.append(Q[ko, slot] * b0)
                nl_w.append(wt / np.log(2.0))
                # Keep the affine squared-distance minorant inside the domain.
                row = np.zeros(nv)
                row[base: base + 2] = -grad
                prob.add_affine(row, off - 0.01 * H2)
            else:
                const -= wt * np.log2(cfg.noise_power
                                      + Q[ko, slot] * b0 / (u_ref[ko] + H2))
        lin[r_idx] = -1.0
        neglogs = ()
        if nl_idx:
            neglogs = (NegLogGroup(
                idx=np.asarray(nl_idx), coeffs=np.asarray(nl_coeff),
                offsets=np.asarray(nl_off), weights=np.asarray(nl_w),
                bases=np.full(len(nl_idx), cfg.noise_power),
                scales=np.asarray(nl_scale)),)
        prob.add_concave_ge(const=const, lin=lin, diag_neg=diag, neglogs=neglogs)

    x_ref = _free_coords(cfg, ref, nv)

    # Energy rows: spend - (tangent lower bound of harvested energy) <= 0.
    for k in range(2):
        spend = float((Q[k] * uplink).sum())
        diag = np.zeros(nv)
        lin = np.zeros(nv)
        const = spend
        for slot in np.flatnonzero(charge > 1e-6 * cfg.slot_duration):
            n = int(slot) + 1
            coef = cfg.eh_efficiency * cfg.uav_power * b0 * charge[slot]
            for m in range(2):
                u_ref = float(((ref[m, n] - w[k]) ** 2).sum())
                gamma = coef / (H2 + u_ref) ** 2
                const -= 2.0 * coef / (H2 + u_ref)
                if n <= N - 1:
                    base = var_base(m, n)
                    diag[base] += 2.0 * gamma
                    diag[base + 1] += 2.0 * gamma
                    lin[base: base + 2] += -2.0 * gamma * w[k]
                    const += gamma * float((w[k] ** 2).sum()) + gamma * H2
                else:
                    const += gamma * (H2 + u_ref)
        at_ref = 0.5 * float(diag @ (x_ref * x_ref)) + float(lin @ x_ref) + const
        eps = 1e-10 * (1.0 + spend) + max(0.0, at_ref)
        prob.add_quad(diag=diag, lin=lin, const=const - eps)

    add_geometry_rows(prob, cfg, ref, trust_radius)

    start = x_ref.copy()
    floor = _epigraph_floor(prob, start, r_idx)
    start[r_idx] = floor - 1e-6 * (1.0 + abs(floor))
    return prob, start


def optimize_traj_ic(cfg: ScenarioConfig, alloc: AllocationIC, traj: Trajectory,
                     sca_tol: float = 1e-4, max_iter: int = 30,
                     options: KernelOptions | None = None):
    """Iterative concave maximization of both UAV trajectories.

    A failed surrogate solve re-expands at the incumbent with a halving trust
    region; the incumbent itself is always surrogate-feasible, so the loop
    terminates."""
    best = common_throughput_ic(alloc, traj, cfg)
    trace = [best]
    positions = traj.positions.copy()
    N = cfg.num_slots
    for _ in range(max_iter):
        cand = None
        radius = None
        for _attempt in range(10):
            try:
                prob, start = _traj_subproblem_ic(cfg, alloc, positions, radius)
                out = solve_concave(prob, start, options)
                new_pos = positions.copy()
                for m in range(2):
                    base = 2 * (N - 1) * m
                    new_pos[m, 1:N, :] = out.x[base: base + 2 * (N - 1)].reshape(N - 1, 2)
                cand = new_pos
                break
            except (StartInfeasible, np.linalg.LinAlgError):
                radius = 10.0 * cfg.max_step if radius is None else radius / 2.0
                if radius < 1e-6 * cfg.max_step:
                    break
        if cand is None:
            break
        cand_traj = Trajectory(cand)
        ok = cand_traj.is_feasible(cfg)
        if ok:
            for k in range(2):
                spend = float((alloc.tx_power[k] * alloc.uplink_time).sum())
                if harvested_energy_ic(alloc, cand_traj, k, cfg) - spend < -1e-9:
                    ok = False
        val = common_throughput_ic(alloc, cand_traj, cfg)
        if not ok or val < best - 1e-12 * (1.0 + abs(best)):
            break
        improved = val - best
        positions, best = cand, val
        trace.append(val)
        if improved <= sca_tol * (1.0 + abs(best)):
            break
    return Trajectory(positions), trace


# ---------------------------------------------------------------------------
# Complete alternating solver
# ---------------------------------------------------------------------------

def _alternate_ic(cfg: ScenarioConfig, opts: SolveOptions, traj: Trajectory,
                  alloc: AllocationIC, init: Initialization, t0: float) -> SolveReport:
    trace = [common_throughput_ic(alloc, traj, cfg)]
    power_traces, traj_traces = [], []
    outer = 0
    for outer in range(1, opts.max_outer + 1):
        times = optimize_time_ic(cfg, traj, alloc.tx_power, opts.kernel)
        cand = AllocationIC(times.charge_time, times.uplink_time, alloc.tx_power)
        if common_throughput_ic(cand, traj, cfg) >= trace[-1] - 1e-12 * (1 + abs(trace[-1])):
            alloc = cand

        Q, ptrace = optimize_power_ic(cfg, traj, alloc, opts.inner_tol,
                                      opts.max_inner, opts.kernel)
        power_traces.append(ptrace)
        alloc = AllocationIC(alloc.charge_time, alloc.uplink_time, Q)

        if opts.optimize_trajectory and cfg.num_slots >= 2:
            traj, ttrace = optimize_traj_ic(cfg, alloc, traj, opts.inner_tol,
                                            opts.max_inner, opts.kernel)
            traj_traces.append(ttrace)

        value = common_throughput_ic(alloc, traj, cfg)
        improved = value - trace[-1]
        trace.append(value)
        if improved <= opts.outer_tol * (1.0 + abs(value)) and outer >= 2:
            break

    return SolveReport(
        trajectory=traj,
        allocation=alloc,
        common_rate=trace[-1],
        objective_trace=np.asarray(trace),
        power_traces=power_traces,
        traj_traces=traj_traces,
        residuals=dict(feasibility_report(cfg, traj, alloc)),
        initialization=init,
        outer_iterations=outer,
        wall_seconds=time.perf_counter() - t0,
    )


def solve_p1(cfg: ScenarioConfig, options: SolveOptions | None = None,
             hover: HoverSolutionIC | None = None) -> SolveReport:
    """Alternating time / power / trajectory optimization.

    Initialized from the hover-and-fly plan or from direct flight, whichever
    starts with the better objective (hover-and-fly can be dominated when the
    mission barely fits the visit legs)."""
    opts = options or SolveOptions()
    t0 = time.perf_counter()
    if hover is None:
        hover = solve_infinite_ic(cfg, tau_grid=opts.tau_grid)
    candidates = []
    built = _shf_ic(cfg, hover)
    if built is not None:
        traj, windows = built
        alloc = initial_allocation_ic(cfg, traj, hover, windows)
        candidates.append((traj, alloc, Initialization.SHF))
    traj = direct_flight_trajectory(cfg)
    alloc = initial_allocation_ic(cfg, traj, hover, None)
    candidates.append((traj, alloc, Initialization.DIRECT_FLIGHT))
    traj, alloc, init = _pick_start_ic(cfg, opts, candidates)
    return _alternate_ic(cfg, opts, traj, alloc, init, t0)


def _pick_start_ic(cfg: ScenarioConfig, opts: SolveOptions, candidates):
    """Rank candidate starts by one cheap time+power pass; the raw initial
    objective misjudges which basin the trajectory step can refine."""
    if len(candidates) == 1:
        return candidates[0]
    best = None
    for order, (traj, alloc, init) in enumerate(candidates):
        times = optimize_time_ic(cfg, traj, alloc.tx_power, opts.kernel)
        cand = AllocationIC(times.charge_time, times.uplink_time, alloc.tx_power)
        if common_throughput_ic(cand, traj, cfg) \
                >= common_throughput_ic(alloc, traj, cfg):
            probe = cand
        else:
            probe = alloc
        Q, _ = optimize_power_ic(cfg, traj, probe, opts.inner_tol, 5, opts.kernel)
        value = common_throughput_ic(
            AllocationIC(probe.charge_time, probe.uplink_time, Q), traj, cfg)
        if best is None or value > best[0]:
            best = (value, order, traj, alloc, init)
    return best[2], best[3], best[4]


def solve_p1_direct(cfg: ScenarioConfig, options: SolveOptions | None = None,
                    hover: HoverSolutionIC | None = None) -> SolveReport:
    """Benchmark: fixed straight-line flight, only time and power optimized."""
    opts = replace(options or SolveOptions(), optimize_trajectory=False)
    t0 = time.perf_counter()
    if hover is None:
        hover = solve_infinite_ic(cfg, tau_grid=opts.tau_grid)
    traj = direct_flight_trajectory(cfg)
    alloc = initial_allocation_ic(cfg, traj, hover, None)
    return _alternate_ic(cfg, opts, traj, alloc, Initialization.DIRECT_FLIGHT, t0)
