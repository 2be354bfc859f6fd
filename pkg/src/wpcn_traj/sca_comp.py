"""Finite-horizon alternating solver for the joint transmission/reception mode.

Same alternation skeleton as the coordination engine, with two twists: the
throughput objective uses the closed-form bound on the joint-reception rate,
and the trajectory subproblem introduces amplitude/gain slack variables so
the coherent charging term and the rate term become concave.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .hover_comp import HoverSolutionCoMP, solve_infinite_comp
from .kernel import (KernelOptions, LinearProgram, LogGroup, Problem,
                     StartInfeasible, solve_concave, solve_lp)
from .model import (AllocationCoMP, ScenarioConfig, Trajectory,
                    common_throughput_comp, comp_coherent_power,
                    comp_noncoherent_power, comp_rate_upper_bound,
                    feasibility_report, harvested_energy_comp)
from .sca_ic import (Initialization, SolveOptions, _SPEED_MARGIN, _epigraph_floor,
                     _leg_time, _sample_piecewise, _slots_in_window,
                     add_geometry_rows, build_visit_paths,
                     direct_flight_trajectory, traj_var_base)


@dataclass(frozen=True)
class SlackState:
    """Amplitude and inverse-gain slacks of the trajectory subproblem; at
    convergence both bind against the geometry (within solver tolerance)."""

    amp: np.ndarray       # (2 devices, 2 uavs, N); amp^2 <= gain
    inv_gain: np.ndarray  # (2 devices, 2 uavs, N); dist^2 + H^2 <= 1/inv_gain


@dataclass
class SolveReportCoMP:
    trajectory: Trajectory
    allocation: AllocationCoMP
    slack: SlackState
    common_rate: float
    objective_trace: np.ndarray
    power_traces: list
    traj_traces: list
    residuals: dict
    initialization: Initialization
    outer_iterations: int
    wall_seconds: float


def slack_at_equality(cfg: ScenarioConfig, traj) -> SlackState:
    """Slacks that make both defining inequalities tight for a trajectory."""
    pos = traj.slot_positions if isinstance(traj, Trajectory) else np.asarray(traj)
    d2 = ((pos[None, :, :, :] - cfg.device_positions[:, None, None, :]) ** 2).sum(axis=-1)
    inv = 1.0 / (d2 + cfg.altitude**2)
    return SlackState(amp=np.sqrt(cfg.ref_gain * inv), inv_gain=inv)


# ---------------------------------------------------------------------------
# Initial trajectory
# ---------------------------------------------------------------------------

def _staggered_paths(cfg: ScenarioConfig, waypoints, dwell_weights):
    """Serialize each transition (one UAV moves while the other holds) with a
    greedy per-leg order keeping the pair farthest apart."""
    v = cfg.max_speed * _SPEED_MARGIN
    n_legs = len(waypoints[0]) - 1
    wp = [[np.asarray(p, dtype=float) for p in waypoints[m]] for m in range(2)]
    t_fly = sum(float(np.linalg.norm(wp[m][i + 1] - wp[m][i])) / v
                for m in range(2) for i in range(n_legs))
    if t_fly > cfg.duration:
        return None
    slack = cfg.duration - t_fly
    weights = np.asarray(dwell_weights, dtype=float)
    dwells = slack * weights / weights.sum() if weights.sum() > 0 else np.zeros_like(weights)

    def min_sep_serial(first: int, cur, tgt) -> float:
        s = np.linspace(0.0, 1.0, 33)[:, None]
        second = 1 - first
        path1 = cur[first] + s * (tgt[first] - cur[first])
        sep1 = np.linalg.norm(path1 - cur[second], axis=1).min()
        path2 = cur[second] + s * (tgt[second] - cur[second])
        sep2 = np.linalg.norm(path2 - tgt[first], axis=1).min()
        return min(float(sep1), float(sep2))

    sched = {m: [(0.0, wp[m][0])] for m in range(2)}
    cur = [wp[0][0], wp[1][0]]
    t = 0.0
    windows = []
    for i in range(n_legs):
        tgt = [wp[0][i + 1], wp[1][i + 1]]
        first = 0 if min_sep_serial(0, cur, tgt) >= min_sep_serial(1, cur, tgt) else 1
        for m in (first, 1 - first):
            dur = float(np.linalg.norm(tgt[m] - cur[m])) / v
            if dur > 0.0:
                sched[m].append((t, cur[m]))
                sched[m].append((t + dur, tgt[m]))
                cur[m] = tgt[m]
                t += dur
        if i < n_legs - 1:
            windows.append((t, t + float(dwells[i])))
            t += float(dwells[i])
    at = cfg.slot_duration * np.arange(cfg.num_slots + 1)
    pos = np.empty((2, cfg.num_slots + 1, 2))
    for m in range(2):
        sched[m].append((cfg.duration, cur[m]))
        times = np.array([p[0] for p in sched[m]])
        pts = np.array([p[1] for p in sched[m]])
        pos[m] = _sample_piecewise(times, pts, at)
        pos[m, 0] = wp[m][0]
        pos[m, -1] = wp[m][-1]
    return pos, windows


def _shf_comp(cfg: ScenarioConfig, hover: HoverSolutionCoMP):
    x1, x2 = hover.wpt_hover_pair
    m1, m2 = hover.mirror_pair
    xi = hover.wit_hover_x
    wp = [
        [cfg.uav_initial[0], np.array([x1, 0.0]), np.array([-xi, 0.0]),
         np.array([m1, 0.0]), cfg.uav_final[0]],
        [cfg.uav_initial[1], np.array([x2, 0.0]), np.array([xi, 0.0]),
         np.array([m2, 0.0]), cfg.uav_final[1]],
    ]
    tau_e = hover.charge_time
    weights = [tau_e / 2.0, cfg.duration - tau_e, tau_e / 2.0]
    for builder in (build_visit_paths, _staggered_paths):
        built = builder(cfg, wp, weights)
        if built is None:
            continue
        traj = Trajectory(built[0])
        if traj.is_feasible(cfg):
            return traj, {"charge1": built[1][0], "uplink": built[1][1],
                          "charge2": built[1][2]}
    return None


def shf_trajectory_comp(cfg: ScenarioConfig, hover: HoverSolutionCoMP):
    """Hover-and-fly start visiting, in order, the first device's charging
    pair, the uplink pair and the second device's charging pair.  Transitions
    are serialized one UAV at a time when flying both at once would breach
    the separation; None when the mission is too short (direct flight)."""
    built = _shf_comp(cfg, hover)
    return None if built is None else built[0]


def initial_allocation_comp(cfg: ScenarioConfig, traj: Trajectory,
                            hover: HoverSolutionCoMP, windows=None) -> AllocationCoMP:
    N, d = cfg.num_slots, cfg.slot_duration
    beam = np.zeros((2, N))
    uplink = np.zeros(N)
    masks = None
    if windows is not None:
        masks = [_slots_in_window(cfg, windows[key])
                 for key in ("charge1", "uplink", "charge2")]
        if masks[1].sum() < 2:
            masks = None
    if masks is None:
        rho = min(max(hover.charge_time / cfg.duration, 0.05), 0.95)
        beam[:, :] = d * rho / 2.0
        uplink[:] = d * (1.0 - rho)
    else:
        c1, up, c2 = masks
        beam[0, c1] = d
        beam[1, c2] = d
        uplink[up] = d
        rest = ~(c1 | up | c2)
        beam[:, rest] = d / 2.0
    # Positive power floor on every slot: see initial_allocation_ic.
    Q = np.full((2, N), 0.05)
    Q[:, uplink > 0] = 1.0
    alloc = AllocationCoMP(beam, uplink, Q)
    Q = Q.copy()
    for k in range(2):
        budget = harvested_energy_comp(alloc, traj, k, cfg)
        spend = float((Q[k] * uplink).sum())
        Q[k] *= 0.999 * budget / spend if spend > 0 else 0.0
    return AllocationCoMP(beam, uplink, Q)


# ---------------------------------------------------------------------------
# Subproblems
# ---------------------------------------------------------------------------

def optimize_time_comp(cfg: ScenarioConfig, traj, tx_power,
                       options: KernelOptions | None = None) -> AllocationCoMP:
    """Exact epigraph LP over beam-time, beam-time and uplink-time."""
    N = cfg.num_slots
    pos = traj.slot_positions if isinstance(traj, Trajectory) else np.asarray(traj)
    Q = np.asarray(tx_power, dtype=float)
    n = 3 * N + 1  # [beam1, beam2, uplink, R]
    c = np.zeros(n)
    c[-1] = 1.0
    rows, rhs = [], []
    for k in range(2):
        ko = 1 - k
        rate = comp_rate_upper_bound(Q[k], pos, k, cfg)
        coh = comp_coherent_power(pos, k, cfg)
        non = comp_noncoherent_power(pos, k, cfg)
        row = np.zeros(n)
        row[2 * N:3 * N] = -rate / cfg.duration
        row[-1] = 1.0
        rows.append(row)
        rhs.append(0.0)
        row = np.zeros(n)
        row[k * N:(k + 1) * N] = -coh
        row[ko * N:(ko + 1) * N] = -non
        row[2 * N:3 * N] = Q[k]
        rows.append(row)
        rhs.append(0.0)
    budget = np.zeros((N, n))
    for j in range(3):
        budget[:, j * N:(j + 1) * N] += np.eye(N)
    rows.append(budget)
    rhs.append(np.full(N, cfg.slot_duration))
    A = np.vstack([np.atleast_2d(r) for r in rows])
    b = np.concatenate([np.atleast_1d(r) for r in rhs])
    out = solve_lp(LinearProgram(c, a_ub=A, b_ub=b, lb=np.zeros(n)), options)
    x = np.clip(out.x, 0.0, None)
    return AllocationCoMP(np.stack([x[:N], x[N:2 * N]]), x[2 * N:3 * N], Q.copy())


def optimize_power_comp(cfg: ScenarioConfig, traj, alloc: AllocationCoMP,
                        options: KernelOptions | None = None):
    """Exact concave maximization of the transmit powers (no iteration: the
    bound-rate is already concave in the powers)."""
    uplink = alloc.uplink_time
    active = np.flatnonzero(uplink > 1e-12 * cfg.slot_duration)
    Q = alloc.tx_power.copy()
    if active.size == 0:
        return Q
    pos = traj.slot_positions if isinstance(traj, Trajectory) else np.asarray(traj)
    d2 = ((pos[None, :, :, :] - cfg.device_positions[:, None, None, :]) ** 2).sum(axis=-1)
    csnr = 0.5 * cfg.ref_gain / cfg.noise_power * (1.0 / (d2 + cfg.altitude**2)).sum(axis=1)
    budgets = [harvested_energy_comp(alloc, traj, k, cfg) for k in range(2)]
    A = active.size
    n = 2 * A + 1
    r_idx = 2 * A
    prob = Problem(n, np.eye(n)[r_idx])
    wt = uplink[active] / (cfg.duration * np.log(2.0))
    for k in range(2):
        lin = np.zeros(n)
        lin[r_idx] = -1.0
        logs = LogGroup(
            idx=(k * A + np.arange(A))[:, None],
            coeffs=csnr[k, active][:, None],
            offsets=np.ones(A),
            weights=wt,
        )
        prob.add_concave_ge(lin=lin, logs=(logs,))
        row = np.zeros(n)
        row[k * A:(k + 1) * A] = uplink[active]
        prob.add_affine(row, budgets[k])
    prob.add_affine(-np.eye(n)[:2 * A], np.zeros(2 * A))
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
    Q[0, active] = np.clip(out.x[:A], 0.0, None)
    Q[1, active] = np.clip(out.x[A:2 * A], 0.0, None)
    return Q


def _traj_subproblem_comp(cfg: ScenarioConfig, alloc: AllocationCoMP,
                          ref: np.ndarray, slack_ref: SlackState, trust_radius):
    """Concave program of one trajectory SCA pass with slack variables."""
    N = cfg.num_slots
    H2 = cfg.altitude**2
    b0 = cfg.ref_gain
    w = cfg.device_positions
    beam, uplink, Q = alloc.beam_time, alloc.uplink_time, alloc.tx_power
    tol = 1e-6 * cfg.slot_duration

    beam_slots = [np.flatnonzero(beam[k] > tol) for k in range(2)]
    rate_slots = [np.flatnonzero((uplink > tol) & (Q[k] > 0.0)) for k in range(2)]

    nq = 4 * (N - 1)
    amp_index, inv_index = {}, {}
    nxt = nq
    for k in range(2):
        for slot in beam_slots[k]:
            for m in range(2):
                amp_index[(k, m, int(slot))] = nxt
                nxt += 1
    for k in range(2):
        for slot in rate_slots[k]:
            for m in range(2):
                inv_index[(k, m, int(slot))] = nxt
                nxt += 1
    r_idx = nxt
    nv = nxt + 1

    prob = Problem(nv, np.eye(nv)[r_idx])
    slot_pos = ref[:, 1:, :]  # (uav, N, 2)
    ref_d2 = ((slot_pos[None, :, :, :] - w[:, None, None, :]) ** 2).sum(axis=-1)  # (dev, uav, N)

    # Rate rows through the inverse-gain slacks.
    for k in range(2):
        lin = np.zeros(nv)
        lin[r_idx] = -1.0
        if rate_slots[k].size:
            idx = np.array([[inv_index[(k, 0, int(s))], inv_index[(k, 1, int(s))]]
                            for s in rate_slots[k]])
            coef = (Q[k, rate_slots[k]] * b0 / (2.0 * cfg.noise_power))[:, None]
            logs = (LogGroup(idx=idx, coeffs=np.repeat(coef, 2, axis=1),
                             offsets=np.ones(rate_slots[k].size),
                             weights=uplink[rate_slots[k]] / (cfg.duration * np.log(2.0))),)
        else:
            logs = ()
        prob.add_concave_ge(lin=lin, logs=logs)

    x_ref = np.zeros(nv)
    for m in range(2):
        base = 2 * (N - 1) * m
        x_ref[base: base + 2 * (N - 1)] = ref[m, 1:N, :].reshape(-1)
    for (k, m, slot), j in amp_index.items():
        x_ref[j] = slack_ref.amp[k, m, slot]
    for (k, m, slot), j in inv_index.items():
        x_ref[j] = slack_ref.inv_gain[k, m, slot]

    # Energy rows: coherent part through the amplitude slacks (tangent of the
    # squared sum), leaked part through the tangent bound in the positions.
    eta_p = cfg.eh_efficiency * cfg.uav_power
    for k in range(2):
        ko = 1 - k
        spend = float((Q[k] * uplink).sum())
        diag = np.zeros(nv)
        lin = np.zeros(nv)
        const = spend
        for slot in beam_slots[k]:
            s_ref = float(slack_ref.amp[k, :, slot].sum())
            scale = eta_p * beam[k, slot]
            for m in range(2):
                lin[amp_index[(k, m, int(slot))]] -= scale * 2.0 * s_ref
            const += scale * s_ref**2
        for slot in beam_slots[ko]:
            n = int(slot) + 1
            coef = eta_p * b0 * beam[ko, slot]
            for m in range(2):
                u_ref = float(ref_d2[k, m, slot])
                gamma = coef / (H2 + u_ref) ** 2
                const -= 2.0 * coef / (H2 + u_ref)
                if n <= N - 1:
                    base = traj_var_base(cfg, m, n)
                    diag[base] += 2.0 * gamma
                    diag[base + 1] += 2.0 * gamma
                    lin[base: base + 2] += -2.0 * gamma * w[k]
                    const += gamma * (float((w[k] ** 2).sum()) + H2)
                else:
                    const += gamma * (H2 + u_ref)
        at_ref = 0.5 * float(diag @ (x_ref * x_ref)) + float(lin @ x_ref) + const
        eps = 1e-10 * (1.0 + spend) + max(0.0, at_ref)
        prob.add_quad(diag=diag, lin=lin, const=const - eps)

    # Slack-definition rows, with the convex reciprocals linearized.
    def q_quad_parts(m: int, slot: int, kdev: int):
        """diag/lin/const pieces of ||q_m[n] - w_kdev||^2 + H^2."""
        n = int(slot) + 1
        diag = np.zeros(nv)
        lin = np.zeros(nv)
        if n <= N - 1:
            base = traj_var_base(cfg, m, n)
            diag[base: base + 2] = 2.0
            lin[base: base + 2] = -2.0 * w[kdev]
            const = float((w[kdev] ** 2).sum()) + H2
        else:
            const = float(ref_d2[kdev, m, slot]) + H2
        return diag, lin, const

    for (k, m, slot), j in amp_index.items():
        a_ref = float(slack_ref.amp[k, m, slot])
        diag, lin, const = q_quad_parts(m, slot, k)
        lin[j] += 2.0 * b0 / a_ref**3
        const -= 3.0 * b0 / a_ref**2
        at_ref = 0.5 * float(diag @ (x_ref * x_ref)) + float(lin @ x_ref) + const
        eps = 1e-9 * (1.0 + H2) + max(0.0, at_ref)
        prob.add_quad(diag=diag, lin=lin, const=const - eps)
        row = np.zeros(nv)
        row[j] = -1.0
        prob.add_affine(row, 0.0)

    for (k, m, slot), j in inv_index.items():
        b_ref = float(slack_ref.inv_gain[k, m, slot])
        diag, lin, const = q_quad_parts(m, slot, k)
        lin[j] += 1.0 / b_ref**2
        const -= 2.0 / b_ref
        at_ref = 0.5 * float(diag @ (x_ref * x_ref)) + float(lin @ x_ref) + const
        eps = 1e-9 * (1.0 + H2) + max(0.0, at_ref)
        prob.add_quad(diag=diag, lin=lin, const=const - eps)
        row = np.zeros(nv)
        row[j] = -1.0
        prob.add_affine(row, 0.0)

    add_geometry_rows(prob, cfg, ref, trust_radius)

    start = x_ref.copy()
    floor = _epigraph_floor(prob, start, r_idx)
    start[r_idx] = floor - 1e-6 * (1.0 + abs(floor))
    return prob, start, amp_index, inv_index


def optimize_traj_comp(cfg: ScenarioConfig, alloc: AllocationCoMP, traj: Trajectory,
                       slack: SlackState | None = None, sca_tol: float = 1e-4,
                       max_iter: int = 30, options: KernelOptions | None = None):
    """Iterative concave maximization of the trajectories and slacks."""
    best = common_throughput_comp(alloc, traj, cfg)
    trace = [best]
    positions = traj.positions.copy()
    state = slack or slack_at_equality(cfg, traj)
    N = cfg.num_slots
    for _ in range(max_iter):
        cand = None
        radius = None
        for _attempt in range(10):
            try:
                prob, start, amp_index, inv_index = _traj_subproblem_comp(
                    cfg, alloc, positions, state, radius)
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
        new_pos = cand
        cand_traj = Trajectory(new_pos)
        ok = cand_traj.is_feasible(cfg)
        if ok:
            for k in range(2):
                spend = float((alloc.tx_power[k] * alloc.uplink_time).sum())
                if harvested_energy_comp(alloc, cand_traj, k, cfg) - spend < -1e-9:
                    ok = False
        val = common_throughput_comp(alloc, cand_traj, cfg)
        if not ok or val < best - 1e-12 * (1.0 + abs(best)):
            break
        positions, best = new_pos, val
        # Each pass re-expands with the slacks tight against the accepted
        # geometry; raising them to equality keeps every surrogate row valid.
        state = slack_at_equality(cfg, cand_traj)
        trace.append(val)
        if val - trace[-2] <= sca_tol * (1.0 + abs(val)):
            break
    return Trajectory(positions), state, trace


# ---------------------------------------------------------------------------
# Complete alternating solver
# ---------------------------------------------------------------------------

def _alternate_comp(cfg: ScenarioConfig, opts: SolveOptions, traj: Trajectory,
                    alloc: AllocationCoMP, init: Initialization, t0: float) -> SolveReportCoMP:
    trace = [common_throughput_comp(alloc, traj, cfg)]
    power_traces, traj_traces = [], []
    state = slack_at_equality(cfg, traj)
    outer = 0
    for outer in range(1, opts.max_outer + 1):
        times = optimize_time_comp(cfg, traj, alloc.tx_power, opts.kernel)
        cand = AllocationCoMP(times.beam_time, times.uplink_time, alloc.tx_power)
        if common_throughput_comp(cand, traj, cfg) >= trace[-1] - 1e-12 * (1 + abs(trace[-1])):
            alloc = cand

        before = common_throughput_comp(alloc, traj, cfg)
        Q = optimize_power_comp(cfg, traj, alloc, opts.kernel)
        cand = AllocationCoMP(alloc.beam_time, alloc.uplink_time, Q)
        after = common_throughput_comp(cand, traj, cfg)
        power_traces.append([before, after])
        if after >= before - 1e-12 * (1 + abs(before)):
            alloc = cand

        if opts.optimize_trajectory and cfg.num_slots >= 2:
            traj, state, ttrace = optimize_traj_comp(cfg, alloc, traj, None,
                                                     opts.inner_tol, opts.max_inner,
                                                     opts.kernel)
            traj_traces.append(ttrace)

        value = common_throughput_comp(alloc, traj, cfg)
        improved = value - trace[-1]
        trace.append(value)
        if improved <= opts.outer_tol * (1.0 + abs(value)) and outer >= 2:
            break

    return SolveReportCoMP(
        trajectory=traj,
        allocation=alloc,
        slack=state,
        common_rate=trace[-1],
        objective_trace=np.asarray(trace),
        power_traces=power_traces,
        traj_traces=traj_traces,
        residuals=dict(feasibility_report(cfg, traj, alloc)),
        initialization=init,
        outer_iterations=outer,
        wall_seconds=time.perf_counter() - t0,
    )


def solve_p21(cfg: ScenarioConfig, options: SolveOptions | None = None,
              hover: HoverSolutionCoMP | None = None) -> SolveReportCoMP:
    """Alternating time / power / trajectory optimization of the joint mode.

    Initialized from the hover-and-fly plan or from direct flight, whichever
    starts with the better objective; the joint-mode visit plan crosses the
    whole device span twice, so it only pays off once the mission leaves
    enough hovering time."""
    opts = options or SolveOptions()
    t0 = time.perf_counter()
    if hover is None:
        hover = solve_infinite_comp(cfg, tau_grid=opts.tau_grid)
    candidates = []
    built = _shf_comp(cfg, hover)
    if built is not None:
        traj, windows = built
        alloc = initial_allocation_comp(cfg, traj, hover, windows)
        candidates.append((traj, alloc, Initialization.SHF))
    traj = direct_flight_trajectory(cfg)
    alloc = initial_allocation_comp(cfg, traj, hover, None)
    candidates.append((traj, alloc, Initialization.DIRECT_FLIGHT))
    traj, alloc, init = _pick_start_comp(cfg, opts, candidates)
    return _alternate_comp(cfg, opts, traj, alloc, init, t0)


def _pick_start_comp(cfg: ScenarioConfig, opts: SolveOptions, candidates):
    """Rank candidate starts by one cheap time+power pass (no trajectory
    step); the raw initial objective misjudges which basin pays off."""
    if len(candidates) == 1:
        return candidates[0]
    best = None
    for order, (traj, alloc, init) in enumerate(candidates):
        times = optimize_time_comp(cfg, traj, alloc.tx_power, opts.kernel)
        cand = AllocationCoMP(times.beam_time, times.uplink_time, alloc.tx_power)
        if common_throughput_comp(cand, traj, cfg) \
                >= common_throughput_comp(alloc, traj, cfg):
            probe = cand
        else:
            probe = alloc
        Q = optimize_power_comp(cfg, traj, probe, opts.kernel)
        value = common_throughput_comp(
            AllocationCoMP(probe.beam_time, probe.uplink_time, Q), traj, cfg)
        if best is None or value > best[0]:
            best = (value, order, traj, alloc, init)
    return best[2], best[3], best[4]


def solve_p21_direct(cfg: ScenarioConfig, options: SolveOptions | None = None,
                     hover: HoverSolutionCoMP | None = None) -> SolveReportCoMP:
    """Benchmark: fixed straight-line flight, only time and power optimized."""
    opts = replace(options or SolveOptions(), optimize_trajectory=False)
    t0 = time.perf_counter()
    if hover is None:
        hover = solve_infinite_comp(cfg, tau_grid=opts.tau_grid)
    traj = direct_flight_trajectory(cfg)
    alloc = initial_allocation_comp(cfg, traj, hover, None)
    return _alternate_comp(cfg, opts, traj, alloc, Initialization.DIRECT_FLIGHT, t0)
