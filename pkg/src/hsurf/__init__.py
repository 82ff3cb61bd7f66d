"""Surface strips with prescribed, Gauss-map-dependent mean curvature.

Given an analytic curve ``beta(s)``, an analytic field ``B(s)`` with
``|beta'| = |B|`` and ``<beta', B> = 0``, and a curvature law ``h`` on
the unit sphere, the package marches the unique conformal strip through
the curve whose mean curvature at every point equals ``h`` of its unit
normal, verifies the structural identities of the solution, and exports
the strip (or its half-turn quotient) as a triangle mesh.
"""

from .expr import (EvalError, Expr, ParseError, VecExpr3, derivative_expr,
                   eval_complex, eval_real, eval_series, free_vars,
                   parse_expr, parse_vec3, to_string)
from .series import SeriesDomainError, TruncSeries, cross3, dot3
from .grid import GridAlignmentError, SGrid, lowpass_filter
from .data import (BjorlingData, DataError, Periodicity, PrescribedH,
                   ValidationReport, check_antipodal_antisymmetry,
                   classify_periodicity, from_normal_field, geodesic_data,
                   make_bended_helicoid_data, sphere_samples, validate_data,
                   verify_periodicity)
from .strip import CoeffTensor, SolutionStrip
from .ck import (BlowUpError, DegenerateImmersionError, RadiusEstimate,
                 SolverError, estimate_radius, evaluate_strip,
                 expand_coefficients, s_derivative)
from .fd import FDConfig, march
from .validators import (CheckReport, conformality_check, mean_curvature_check,
                         mobius_involution_check, normal_antipodality_check,
                         symmetry_check)
from .oracle import (ProfileCurve, QuadratureError, distance_to_profile,
                     revolve_profile_strip, schwarz_solve,
                     translator_profile_ode)
from .mesh import (MeshError, SurfaceMesh, boundary_loops,
                   euler_characteristic, is_orientable, mobius_glue,
                   strip_to_mesh, write_obj, write_ply)
from .config import ConfigError, RunConfig, parse_config, parse_config_file

__version__ = "0.1.0"
