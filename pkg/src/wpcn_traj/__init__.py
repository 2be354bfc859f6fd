"""Solvers for a two-UAV, two-device wireless-powered communication network:
closed-form infinite-horizon hovering solutions and finite-horizon alternating
optimization of trajectories, time allocation and transmit powers, for both
the interference-coordination and the joint transmission/reception modes."""

from .model import (AllocationCoMP, AllocationIC, ConfigError, ScenarioConfig,
                    Trajectory, channel_gain, common_throughput_comp,
                    common_throughput_ic, comp_coherent_power,
                    comp_noncoherent_power, comp_rate_upper_bound,
                    db_to_linear, dbm_to_watt, energy_residual_comp,
                    energy_residual_ic, feasibility_report, gain_matrix,
                    harvested_energy_comp, harvested_energy_ic, is_feasible,
                    rates_comp, rates_ic, sinr_ic, watt_to_dbm)
from .hover_ic import (HoverSolutionIC, WitMode, phi_derivative,
                       solve_infinite_ic, wit_mode1_hover, wit_mode2_rate,
                       wpt_hover_ic)
from .hover_comp import (EmptyFeasibleGrid, HoverSolutionCoMP,
                         solve_infinite_comp, wit_hover_comp, wpt_hover_comp)
from .kernel import (KernelOptions, LinearProgram, Problem, SolveOutcome,
                     StartInfeasible, Status, solve_concave, solve_lp)
from .mc import McEstimate, SingularChannel, sample_received_power, sample_zf_rate
from .sca_ic import (Initialization, SolveOptions, SolveReport,
                     direct_flight_trajectory, optimize_power_ic,
                     optimize_time_ic, optimize_traj_ic, shf_trajectory_ic,
                     solve_p1, solve_p1_direct)
from .sca_comp import (SlackState, SolveReportCoMP, optimize_power_comp,
                       optimize_time_comp, optimize_traj_comp,
                       shf_trajectory_comp, solve_p21, solve_p21_direct)

__version__ = "0.1.0"
