"""Canal and tubular hypersurface toolkit for low-dimensional Euclidean spaces.

Construction of canal hypersurfaces around unit-speed center curves, their
closed-form curvature apparatus in E^4, an independent finite-difference /
exact-jet oracle for cross-validation, and executable classification theorems
(flatness, minimality, Weingarten relations).
"""

from .canal import (CanalPatch, RadiusProfile, canal_partials_closed,
                    canal_point, constant_profile, linear_profile, make_probe,
                    offset_coefficients, poly_trig_profile, table_profile,
                    tubular_point)
from .classify import (CatenoidProfile, ClassificationVerdict, classify_flat,
                       classify_minimal, implicit_relation_residuals,
                       linear_weingarten_check, solve_catenoid,
                       weingarten_residual)
from .config import RunConfig, load_run_config, parse_patch
from .curve import (CenterCurve, FrenetData, circle, frenet_apparatus, line,
                    poly_trig, quad_helix, reparametrize_arclength,
                    transform_curve)
from .curvature4 import (curvature_report, first_form, forms_bundle,
                         gaussian_curvature, identity_residual,
                         mean_curvature, principal_curvatures, second_form,
                         shape_operator, tubular_curvatures, unit_normal)
from .errors import (ConfigError, ContractError, GeometryError,
                     InconsistencyError, NumericDomainError, RegularityError)
from .oracle import ImmersionProbe, OracleForms, fd_jet, oracle_forms

__version__ = "1.0.0"
