"""Estimation of a quadratic map's control parameter and initial condition
from a censored binary symbolic sequence.

The pipeline: simulate censored bits from the map, maximize the cumulative
estimating strength of Gibbs running-average candidates over zooming theta
grids, refine the candidate backwards through the signed inverse map from a
high-strength anchor, then polish (theta, y0) to high accuracy with a
parameter-augmented chain on epsilon-refined cells.
"""

from ._backend import active_backend, available_backends
from .dynamics import (MapModel, Orbit, QUADRATIC_MAP, evaluate, inverse_branch,
                       iterate, simulate_symbolic)
from .grid_search import GridSpec, ZoomResult, evaluate_grid, run_zooming, zoom
from .pipeline import (RunConfig, RunReport, cmd_estimate, cmd_full,
                       cmd_polish, cmd_report, cmd_simulate)
from .polish_mcmc import (PolishConfig, PolishEstimate, run_polish,
                          theta_conditional_params)
from .samplers import (RngStream, SlicePieces, quadratic_slice_pieces,
                       sample_from_pieces, sample_truncated_exponential,
                       sample_truncated_normal, sample_uniform)
from .strength import (StrengthProfile, backward_refine, cumulative_strength,
                       point_strength, select_anchor)
from .strength_mcmc import (ChainState, GibbsConfig, StrengthChainResult,
                            gibbs_sweep, init_chain, run_strength_chain)
from .symbolic import (Interval, RefinedCells, SymbolicData, cells_from_bits,
                       intersect, length, refine_cells)

__version__ = "0.1.0"
