"""Translation surfaces that are singular minimal under semi-symmetric connections.

Layers, bottom up: profile jets (``jets``), surface jets and meshes
(``surface``), connections and mean curvature (``connections``),
singular-minimality residuals and the weighted area (``singular``),
solution families (``solutions`` with ``ode`` and ``quadrature``), and the
spec-file/CLI front end (``specfile``, ``cli``).
"""
from .connections import (ConnectionKind, CurvatureReport, covariant_derivative, covariant_second,
                          mean_curvature, mean_curvature_closed_form, metricity_defect, torsion)
from .errors import (BadParam, ConstraintError, DegenerateCurve, DegenerateMetric, DomainError,
                     FlatSolution, HalfspaceViolation, ParseError, SingminError, StepFailure,
                     UnsupportedConnection, UnsupportedOrder, UnsupportedPair)
from .jets import (ConstantProfile, Interval, LinearProfile, PolynomialProfile, Profile,
                   ProfileKind, ScalarJet, eval_jet, fd_jet)
from .ode import OdeSolveConfig, TabulatedProfile
from .quadrature import InverseQuadratureProfile, QuadratureProfile
from .singular import (Bump, ResidualReport, SingularConfig, curve_catenary_residual,
                       first_variation, graph_curve_jet, potential_energy, surface_residual)
from .solutions import (CATALOG, Family, SolutionSpec, emden_fowler_residual, make_catenary,
                        make_quadrature_profile, make_thm1_cylinder, make_thm2_cylinder,
                        solve_abel_thm1, solve_abel_thm2, solve_thm3_autonomous)
from .specfile import SurfaceSpec, parse_spec
from .surface import Mesh, SurfaceJet, SurfaceType, TranslationSurface, make_mesh, surface_jet

__version__ = "0.1.0"

__all__ = [
    "ConnectionKind",
    "CurvatureReport",
    "covariant_derivative",
    "covariant_second",
    "mean_curvature",
    "mean_curvature_closed_form",
    "metricity_defect",
    "torsion",
    "BadParam",
    "ConstraintError",
    "DegenerateCurve",
    "DegenerateMetric",
    "DomainError",
    "FlatSolution",
    "HalfspaceViolation",
    "ParseError",
    "SingminError",
    "StepFailure",
    "UnsupportedConnection",
    "UnsupportedOrder",
    "UnsupportedPair",
    "ConstantProfile",
    "Interval",
    "LinearProfile",
    "PolynomialProfile",
    "Profile",
    "ProfileKind",
    "ScalarJet",
    "eval_jet",
    "fd_jet",
    "OdeSolveConfig",
    "TabulatedProfile",
    "InverseQuadratureProfile",
    "QuadratureProfile",
    "Bump",
    "ResidualReport",
    "SingularConfig",
    "curve_catenary_residual",
    "first_variation",
    "graph_curve_jet",
    "potential_energy",
    "surface_residual",
    "CATALOG",
    "Family",
    "SolutionSpec",
    "emden_fowler_residual",
    "make_catenary",
    "make_quadrature_profile",
    "make_thm1_cylinder",
    "make_thm2_cylinder",
    "solve_abel_thm1",
    "solve_abel_thm2",
    "solve_thm3_autonomous",
    "SurfaceSpec",
    "parse_spec",
    "Mesh",
    "SurfaceJet",
    "SurfaceType",
    "TranslationSurface",
    "make_mesh",
    "surface_jet",
]
