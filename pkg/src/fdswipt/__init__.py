"""Joint relay beamforming and power-splitting optimization for a
full-duplex two-way amplify-and-forward SWIPT relay."""

from .channels import (ChannelRealization, SystemParams, derive_seed,
                       project_complement, project_onto, sample_channels)
from .errors import (DegenerateBasisError, DegenerateChannelWarning,
                     FdswiptError, InfeasibleError, InfeasibleHarvestError,
                     InfeasiblePowerError, InternalSolverError, ParameterError)
from .harness import (SweepConfig, SweepResult, SweepRow, emit, emit_text,
                      parse_file, parse_text, run_single, run_sweep, summarize)
from .joint import (JointConfig, JointSolution, solve_fixed_alpha, solve_joint,
                    solution_diagnostics, zero_rsi_reference)
from .metrics import (BeamformingSolution, LinkReport, effective_gains,
                      harvested_energy, link_report, relay_power, sinr_pair,
                      sum_rate)
from .power_split import RhoSolution, optimal_rho, rho_candidate, self_consistent_rho
from .rx_beam import AlphaGrid, build_wr, search_alpha
from .tx_beam_dc import (DcTrace, ReducedProblem, build_reduced_problem,
                         dc_optimize_wt, f_concave, g_convex, g_linearized,
                         objective_F, solve_subproblem, zf_complement_basis)

__version__ = "0.1.0"

__all__ = [
    "AlphaGrid", "BeamformingSolution", "ChannelRealization", "DcTrace",
    "DegenerateBasisError", "DegenerateChannelWarning", "FdswiptError",
    "InfeasibleError", "InfeasibleHarvestError", "InfeasiblePowerError",
    "InternalSolverError", "JointConfig", "JointSolution", "LinkReport",
    "ParameterError", "ReducedProblem", "RhoSolution", "SweepConfig",
    "SweepResult", "SweepRow", "SystemParams", "build_reduced_problem",
    "build_wr", "dc_optimize_wt", "derive_seed", "effective_gains", "emit",
    "emit_text", "f_concave", "g_convex", "g_linearized", "harvested_energy",
    "link_report", "objective_F", "optimal_rho", "parse_file", "parse_text",
    "project_complement", "project_onto", "relay_power", "rho_candidate",
    "run_single", "run_sweep", "sample_channels", "search_alpha",
    "self_consistent_rho", "sinr_pair", "solution_diagnostics",
    "solve_fixed_alpha", "solve_joint", "solve_subproblem", "sum_rate",
    "summarize", "zero_rsi_reference", "zf_complement_basis",
]
