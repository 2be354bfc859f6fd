"""Command-line front end: config ingestion, single solves, experiment sweeps
and bound verification, with deterministic CSV output plus a JSON manifest.

Config files are flat ``key = value`` text (units in the key names, dB/dBm
converted at ingestion); ``--set key=value`` overrides file values.  Result
CSVs are byte-identical across reruns of the same config and seed; wall-clock
timings go to the manifest instead.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .hover_comp import solve_infinite_comp
from .hover_ic import solve_infinite_ic
from .mc import sample_zf_rate
from .model import (ConfigError, ScenarioConfig, comp_rate_upper_bound,
                    db_to_linear, dbm_to_watt)
from .sca_comp import solve_p21, solve_p21_direct
from .sca_ic import SolveOptions, solve_p1, solve_p1_direct

SCHEMA_VERSION = 1

# key -> (type, default, help); None default means "derived".
CONFIG_KEYS = {
    "altitude_m": (float, 5.0, "UAV flight altitude"),
    "device_distance_m": (float, 15.0, "distance between the two devices"),
    "uav_power_dbm": (float, 40.0, "per-UAV transmit power"),
    "noise_dbm": (float, -100.0, "receiver noise power"),
    "ref_gain_db": (float, -30.0, "channel power gain at 1 m"),
    "eh_efficiency": (float, 0.6, "RF-to-DC conversion efficiency"),
    "max_speed_mps": (float, 5.0, "UAV speed cap"),
    "min_separation_m": (float, 1.0, "collision-avoidance distance"),
    "mission_s": (float, 10.0, "mission duration"),
    "slot_s": (float, 0.1, "target slot length when num_slots is derived"),
    "num_slots": (int, None, "slot count (default: mission_s / slot_s)"),
    "uav1_initial_x_m": (float, -2.0, ""),
    "uav1_initial_y_m": (float, -2.0, ""),
    "uav1_final_x_m": (float, -2.0, ""),
    "uav1_final_y_m": (float, 2.0, ""),
    "uav2_initial_x_m": (float, 2.0, ""),
    "uav2_initial_y_m": (float, -2.0, ""),
    "uav2_final_x_m": (float, 2.0, ""),
    "uav2_final_y_m": (float, 2.0, ""),
    "outer_tol": (float, 1e-4, "relative outer-loop stop tolerance"),
    "max_outer": (int, 50, "outer iteration cap"),
    "max_inner": (int, 30, "inner SCA iteration cap"),
    "inner_tol": (float, 1e-4, "relative inner SCA stop tolerance"),
    "tau_grid": (int, 400, "grid size of the 1-D charge-duration search"),
    "mc_samples": (int, 100000, "Monte-Carlo samples per bound check"),
    "mc_cases": (int, 50, "random geometries in verify-bound"),
}

RESULT_HEADER = ("sweep_value", "scenario", "common_rate_bps_hz", "mode",
                 "charge_time_s", "iterations", "max_residual")


def _parse_value(key: str, raw: str):
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown config key '{key}'")
    typ = CONFIG_KEYS[key][0]
    try:
        return typ(raw) if typ is not int else int(float(raw))
    except ValueError as exc:
        raise ConfigError(f"config key '{key}': cannot parse '{raw}'") from exc


def load_settings(config_path: str | None, overrides) -> dict:
    values = {k: v[1] for k, v in CONFIG_KEYS.items()}
    if config_path:
        text = Path(config_path).read_text()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{config_path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            values[key] = _parse_value(key, raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set needs key=value, got '{item}'")
        key, raw = (part.strip() for part in item.split("=", 1))
        values[key] = _parse_value(key, raw)
    return values


def scenario_from_settings(values: dict) -> ScenarioConfig:
    num_slots = values["num_slots"]
    if num_slots is None:
        num_slots = max(1, round(values["mission_s"] / values["slot_s"]))
    return ScenarioConfig(
        altitude=values["altitude_m"],
        device_distance=values["device_distance_m"],
        uav_power=dbm_to_watt(values["uav_power_dbm"]),
        eh_efficiency=values["eh_efficiency"],
        ref_gain=db_to_linear(values["ref_gain_db"]),
        noise_power=dbm_to_watt(values["noise_dbm"]),
        max_speed=values["max_speed_mps"],
        min_separation=values["min_separation_m"],
        duration=values["mission_s"],
        num_slots=int(num_slots),
        uav_initial=[[values["uav1_initial_x_m"], values["uav1_initial_y_m"]],
                     [values["uav2_initial_x_m"], values["uav2_initial_y_m"]]],
        uav_final=[[values["uav1_final_x_m"], values["uav1_final_y_m"]],
                   [values["uav2_final_x_m"], values["uav2_final_y_m"]]],
    )


def solver_options(values: dict) -> SolveOptions:
    return SolveOptions(outer_tol=values["outer_tol"], max_outer=values["max_outer"],
                        max_inner=values["max_inner"], inner_tol=values["inner_tol"],
                        tau_grid=values["tau_grid"])


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_manifest(out_dir: Path, command: str, values: dict, seed: int,
                   extra: dict) -> None:
    import scipy
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": {k: values[k] for k in sorted(values)},
        "seed": seed,
        "versions": {"wpcn_traj": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": sys.version.split()[0]},
    }
    manifest.update(extra)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_trajectory_csv(path: Path, cfg: ScenarioConfig, report, comp: bool) -> None:
    pos = report.trajectory.positions
    alloc = report.allocation
    if comp:
        header = ["n", "t", "x1", "y1", "x2", "y2", "rho_E1", "rho_E2", "rho_I",
                  "Q1", "Q2"]
    else:
        header = ["n", "t", "x1", "y1", "x2", "y2", "delta_E", "delta_I", "Q1", "Q2"]
    rows = []
    for n in range(cfg.num_slots + 1):
        row = [n, n * cfg.slot_duration,
               pos[0, n, 0], pos[0, n, 1], pos[1, n, 0], pos[1, n, 1]]
        if n == 0:
            row.extend([0.0] * (3 if comp else 2) + [0.0, 0.0])
        elif comp:
            row.extend([alloc.beam_time[0, n - 1], alloc.beam_time[1, n - 1],
                        alloc.uplink_time[n - 1],
                        alloc.tx_power[0, n - 1], alloc.tx_power[1, n - 1]])
        else:
            row.extend([alloc.charge_time[n - 1], alloc.uplink_time[n - 1],
                        alloc.tx_power[0, n - 1], alloc.tx_power[1, n - 1]])
        rows.append(row)
    write_csv(path, header, rows)


# ---------------------------------------------------------------------------
# Sweep tasks (module level so process pools can pickle them)
# ---------------------------------------------------------------------------

_LABEL_ORDER = ("ic-proposed", "comp-proposed", "ic-direct", "comp-direct",
                "ic-bound", "comp-bound")


def _run_label(args):
    label, sweep_value, cfg, opts = args
    if label == "ic-bound":
        sol = solve_infinite_ic(cfg, tau_grid=opts.tau_grid)
        return (label, sweep_value, sol.common_rate, sol.wit_mode.value,
                sol.charge_time, 0, 0.0, 0.0)
    if label == "comp-bound":
        sol = solve_infinite_comp(cfg, tau_grid=opts.tau_grid)
        return (label, sweep_value, sol.common_rate, "zero-forcing",
                sol.charge_time, 0, 0.0, 0.0)
    solver = {"ic-proposed": solve_p1, "comp-proposed": solve_p21,
              "ic-direct": solve_p1_direct, "comp-direct": solve_p21_direct}[label]
    rep = solver(cfg, opts)
    charge = rep.allocation.charge_time.sum() if hasattr(rep.allocation, "charge_time") \
        else rep.allocation.beam_time.sum()
    return (label, sweep_value, rep.common_rate, rep.initialization.value,
            float(charge), rep.outer_iterations,
            max(rep.residuals.values()), rep.wall_seconds)


def _run_tasks(tasks, jobs: int):
    if jobs <= 1:
        return [_run_label(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_label, tasks))


def _results_from(raw):
    order = {label: i for i, label in enumerate(_LABEL_ORDER)}
    raw = sorted(raw, key=lambda r: (r[1], order[r[0]]))
    rows = [(r[1], r[0], r[2], r[3], r[4], r[5], r[6]) for r in raw]
    timings = {f"{r[0]}@{_fmt(r[1])}": r[7] for r in raw}
    return rows, timings


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="flat key=value config file")(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                      help="override a config key")(fn)
    fn = click.option("--out", "out_dir", required=True,
                      type=click.Path(file_okay=False), help="output directory")(fn)
    fn = click.option("--jobs", default=1, show_default=True,
                      help="concurrent sweep points")(fn)
    fn = click.option("--seed", default=0, show_default=True)(fn)
    return fn


def _guarded(command, fn):
    try:
        fn()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(1)
    except Exception as exc:  # solver or I/O failure
        click.echo(f"{command} failed: {exc}", err=True)
        sys.exit(2)
    sys.exit(0)


def _prepare(config_path, overrides, out_dir):
    values = load_settings(config_path, overrides)
    cfg = scenario_from_settings(values)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return values, cfg, out


def _parse_values_list(text: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse sweep values '{text}'") from exc
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("sweep values must be non-empty and increasing")
    return vals


@click.group()
@click.version_option(__version__)
def main():
    """Two-UAV wireless-powered network trajectory/allocation solver."""


def _single_solve(command, config_path, overrides, out_dir, seed, comp: bool,
                  direct: bool):
    def body():
        values, cfg, out = _prepare(config_path, overrides, out_dir)
        opts = solver_options(values)
        if comp:
            rep = (solve_p21_direct if direct else solve_p21)(cfg, opts)
        else:
            rep = (solve_p1_direct if direct else solve_p1)(cfg, opts)
        label = ("comp" if comp else "ic") + ("-direct" if direct else "-proposed")
        rows = [(cfg.device_distance, label, rep.common_rate,
                 rep.initialization.value,
                 float(rep.allocation.beam_time.sum() if comp
                       else rep.allocation.charge_time.sum()),
                 rep.outer_iterations, max(rep.residuals.values()))]
        write_csv(out / "results.csv", RESULT_HEADER, rows)
        write_trajectory_csv(out / f"trajectory_{label}.csv", cfg, rep, comp)
        write_manifest(out, command, values, seed,
                       {"runtime_s": {label: rep.wall_seconds},
                        "files": ["results.csv", f"trajectory_{label}.csv"]})
    _guarded(command, body)


@main.command("solve-ic")
@_common_options
def solve_ic_cmd(config_path, overrides, out_dir, jobs, seed):
    """Finite-horizon solve, interference coordination."""
    _single_solve("solve-ic", config_path, overrides, out_dir, seed,
                  comp=False, direct=False)


@main.command("solve-comp")
@_common_options
def solve_comp_cmd(config_path, overrides, out_dir, jobs, seed):
    """Finite-horizon solve, joint transmission/reception."""
    _single_solve("solve-comp", config_path, overrides, out_dir, seed,
                  comp=True, direct=False)


def _infinite(command, config_path, overrides, out_dir, seed, comp: bool):
    def body():
        values, cfg, out = _prepare(config_path, overrides, out_dir)
        opts = solver_options(values)
        if comp:
            sol = solve_infinite_comp(cfg, tau_grid=opts.tau_grid)
            rows = [(cfg.device_distance, "comp-bound", sol.common_rate,
                     "zero-forcing", sol.charge_time, 0, 0.0)]
        else:
            sol = solve_infinite_ic(cfg, tau_grid=opts.tau_grid)
            rows = [(cfg.device_distance, "ic-bound", sol.common_rate,
                     sol.wit_mode.value, sol.charge_time, 0, 0.0)]
        write_csv(out / "results.csv", RESULT_HEADER, rows)
        write_manifest(out, command, values, seed, {"files": ["results.csv"]})
    _guarded(command, body)


@main.command("infinite-ic")
@_common_options
def infinite_ic_cmd(config_path, overrides, out_dir, jobs, seed):
    """Infinite-horizon hovering bound, interference coordination."""
    _infinite("infinite-ic", config_path, overrides, out_dir, seed, comp=False)


@main.command("infinite-comp")
@_common_options
def infinite_comp_cmd(config_path, overrides, out_dir, jobs, seed):
    """Infinite-horizon hovering bound, joint transmission/reception."""
    _infinite("infinite-comp", config_path, overrides, out_dir, seed, comp=True)


@main.command("benchmark-direct")
@_common_options
@click.option("--scenario", type=click.Choice(["both", "ic", "comp"]),
              default="both", show_default=True)
def benchmark_direct_cmd(config_path, overrides, out_dir, jobs, seed, scenario):
    """Straight-flight benchmark (time/power optimization only)."""
    def body():
        values, cfg, out = _prepare(config_path, overrides, out_dir)
        opts = solver_options(values)
        labels = {"both": ["ic-direct", "comp-direct"], "ic": ["ic-direct"],
                  "comp": ["comp-direct"]}[scenario]
        rows, timings, files = [], {}, ["results.csv"]
        for label in labels:
            comp = label.startswith("comp")
            rep = (solve_p21_direct if comp else solve_p1_direct)(cfg, opts)
            charge = rep.allocation.beam_time.sum() if comp \
                else rep.allocation.charge_time.sum()
            rows.append((cfg.device_distance, label, rep.common_rate,
                         rep.initialization.value, float(charge),
                         rep.outer_iterations, max(rep.residuals.values())))
            timings[label] = rep.wall_seconds
            name = f"trajectory_{label}.csv"
            write_trajectory_csv(out / name, cfg, rep, comp)
            files.append(name)
        write_csv(out / "results.csv", RESULT_HEADER, rows)
        write_manifest(out, "benchmark-direct", values, seed,
                       {"runtime_s": timings, "files": files})
    _guarded("benchmark-direct", body)


def _sweep(command, key, labels, config_path, overrides, out_dir, jobs, seed,
           values_text):
    def body():
        values, _, out = _prepare(config_path, overrides, out_dir)
        points = _parse_values_list(values_text)
        tasks = []
        for point in points:
            pv = dict(values)
            pv[key] = point
            cfg = scenario_from_settings(pv)
            opts = solver_options(pv)
            tasks.extend((label, point, cfg, opts) for label in labels)
        raw = _run_tasks(tasks, jobs)
        rows, timings = _results_from(raw)
        write_csv(out / "results.csv", RESULT_HEADER, rows)
        write_manifest(out, command, values, seed,
                       {"sweep_key": key, "sweep_values": points,
                        "runtime_s": timings, "files": ["results.csv"]})
    _guarded(command, body)


@main.command("sweep-D")
@_common_options
@click.option("--values", "values_text", required=True,
              help="comma-separated device distances, metres")
def sweep_d_cmd(config_path, overrides, out_dir, jobs, seed, values_text):
    """Throughput versus device distance for all four designs."""
    _sweep("sweep-D", "device_distance_m",
           ["ic-proposed", "comp-proposed", "ic-direct", "comp-direct"],
           config_path, overrides, out_dir, jobs, seed, values_text)


@main.command("sweep-T")
@_common_options
@click.option("--values", "values_text", required=True,
              help="comma-separated mission durations, seconds")
def sweep_t_cmd(config_path, overrides, out_dir, jobs, seed, values_text):
    """Throughput versus mission duration, including the hovering bounds."""
    _sweep("sweep-T", "mission_s",
           ["ic-proposed", "comp-proposed", "ic-direct", "comp-direct",
            "ic-bound", "comp-bound"],
           config_path, overrides, out_dir, jobs, seed, values_text)


@main.command("verify-bound")
@_common_options
def verify_bound_cmd(config_path, overrides, out_dir, jobs, seed):
    """Monte-Carlo check that the joint-reception rate bound dominates."""
    def body():
        values, cfg, out = _prepare(config_path, overrides, out_dir)
        rng = np.random.default_rng(seed)
        header = ["case", "x1", "y1", "x2", "y2", "tx_power_w", "device",
                  "mc_mean", "mc_stderr", "bound", "ok"]
        rows = []
        span = cfg.device_distance / 2.0 + cfg.altitude
        for case in range(values["mc_cases"]):
            pos = rng.uniform(-span, span, size=(2, 2))
            power = 10.0 ** rng.uniform(-7.0, -4.0)
            est = sample_zf_rate(cfg, pos, [power, power], values["mc_samples"],
                                 seed=int(rng.integers(2**63)))
            for k in range(2):
                bound = float(comp_rate_upper_bound(power, pos, k, cfg))
                ok = est[k].mean <= bound + 3.0 * est[k].stderr
                rows.append([case, pos[0, 0], pos[0, 1], pos[1, 0], pos[1, 1],
                             power, k + 1, est[k].mean, est[k].stderr, bound,
                             int(ok)])
        write_csv(out / "verify_bound.csv", header, rows)
        write_manifest(out, "verify-bound", values, seed,
                       {"files": ["verify_bound.csv"],
                        "all_ok": bool(all(r[-1] for r in rows))})
        if not all(r[-1] for r in rows):
            raise RuntimeError("bound violated beyond 3 standard errors")
    _guarded("verify-bound", body)


if __name__ == "__main__":
    main()
