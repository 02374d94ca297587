"""Boundary-element solver for Laplace-domain linear thermoelasticity.

Combined Dirichlet-Neumann (SD) and Neumann-Dirichlet (DS) boundary
problems on smooth 2D curves, solved by a Nystrom method with staggered
collocation, plus convolution-quadrature marching for causal time-domain
solutions.  See the README for the CLI and configuration reference.
"""

from .cq import (CQConfig, TimeSignal, build_transfer, cache_root,
                 cq_frequencies, march, smooth_ramp)
from .errors import (CausalityError, ConditioningError, ConfigError,
                     DegenerateRootError, ParameterDomainError,
                     SingularityError, ThermoBEMError)
from .fundamental import eval_kernel_jet
from .geometry import BoundaryCurve, make_circle, make_curve, make_kite
from .io_utils import (DataSpec, RunConfig, load_config, validate_manifest,
                       write_csv, write_manifest)
from .kernels import bessel_k0, bessel_k1, radial_log_parts, radial_parts
from .operators import (Assembler, CoercivityReport, SolveResult,
                        energy_pairing, eval_potential, field_traces,
                        point_source_field, point_source_rhs,
                        probe_coercivity, solve_bie)
from .params import (LaplaceFrequency, PhysicalParams, WaveNumbers,
                     compute_coupling, compute_wave_numbers)
from .verification import run_verification

__version__ = "0.1.0"

__all__ = [
    "Assembler", "BoundaryCurve", "CQConfig", "CausalityError",
    "CoercivityReport", "ConditioningError", "ConfigError", "DataSpec",
    "DegenerateRootError", "LaplaceFrequency", "ParameterDomainError",
    "PhysicalParams", "RunConfig", "SingularityError", "SolveResult",
    "ThermoBEMError", "TimeSignal", "WaveNumbers", "bessel_k0", "bessel_k1",
    "build_transfer", "cache_root", "compute_coupling",
    "compute_wave_numbers", "cq_frequencies", "energy_pairing",
    "eval_kernel_jet", "eval_potential", "field_traces", "load_config",
    "make_circle", "make_curve", "make_kite", "march", "point_source_field",
    "point_source_rhs", "probe_coercivity", "radial_log_parts",
    "radial_parts", "run_verification", "smooth_ramp", "solve_bie",
    "validate_manifest", "write_csv", "write_manifest",
]
