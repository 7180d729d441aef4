"""xi-lab: numerical laboratory for the simplified xi kernel.

Evaluates eta(z) = int_0^inf G(t) cosh(zt) dt through certified series and
quadrature, locates and classifies critical-line zeros, builds the p/q
interval decomposition, and maps the sign structure of the critical strip.
"""

from .theta import (TruncationPolicy, TruncatedValue, RATIO_BOUND,
                    F_eval, G_eval, G_deriv, psi, terms_needed)
from .eta import (QuadratureSpec, EvalResult, UV, uv, xi_oracle,
                  transform, cutoff_T, integrand_bound)
from .critical_line import (ZeroRecord, StationaryPoint, PQValue,
                            u_line, scan_zeros, refine_zero, classify_zero,
                            stationary_points, pq, pq_table, ode_residual)
from .strip import (Region, SignGrid, Curve, sign_grid, trace_curves,
                    curve_audit, off_line_min_modulus, anomaly_scan)
from .verify import run_verify, VerifyReport

__version__ = "0.1.0"
