"""Certified flat-distance and Gromov-Hausdorff bounds for rotationally
symmetric asymptotically flat manifolds built from Hawking-mass profiles."""

from .certificates import (DeltaBudget, FlatCertificate, WellCut,
                           delta_budget, flat_certificate, switch_bounds,
                           well_cut)
from .config import Tolerances, default_tolerances
from .embedding import (EmbeddingConstants, ambient_product_distance,
                        annulus_distance, budget_embedding_constants,
                        embedding_constant_bound,
                        metric_embedding_check, q_slope)
from .errors import (CertificateError, DomainError, InvalidProfileError,
                     MassflatError, ProfileFormatError, QuadratureError,
                     RangeError, WindowOverflowError)
from .geometry import (CSV_COLUMNS, ManifoldModel, TubularWindow,
                       euclidean_annulus_volume, model_table,
                       tubular_window, write_model_csv)
from .ghdist import (GHBound, SegmentBound, best_gh_bound, gh_bound,
                     segment_limit_bound)
from .mesh import MeshGeodesicOracle, mesh_distance
from .profiles import (ConstantPiece, CubicSplinePiece, HawkingProfile,
                       PowerLawPiece, StripePiece, ValidationIssue,
                       ValidationReport, deep_well, deep_well_parameters,
                       flat, monotone_slopes, schwarzschild, stripes,
                       unit_sphere_area, validate)
from .serialization import (canonical_json, dumps_profile, loads_profile,
                            profile_from_dict, profile_to_dict, read_profile,
                            write_profile)
from .sweeps import SWEEP_COLUMNS, run_sweep, write_sweep_csv

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "CertificateError",
    "ConstantPiece",
    "CubicSplinePiece",
    "DeltaBudget",
    "DomainError",
    "EmbeddingConstants",
    "FlatCertificate",
    "GHBound",
    "HawkingProfile",
    "InvalidProfileError",
    "ManifoldModel",
    "MassflatError",
    "MeshGeodesicOracle",
    "PowerLawPiece",
    "ProfileFormatError",
    "QuadratureError",
    "RangeError",
    "SWEEP_COLUMNS",
    "SegmentBound",
    "StripePiece",
    "Tolerances",
    "TubularWindow",
    "ValidationIssue",
    "ValidationReport",
    "WellCut",
    "WindowOverflowError",
    "ambient_product_distance",
    "annulus_distance",
    "best_gh_bound",
    "budget_embedding_constants",
    "canonical_json",
    "deep_well",
    "deep_well_parameters",
    "default_tolerances",
    "delta_budget",
    "dumps_profile",
    "embedding_constant_bound",
    "euclidean_annulus_volume",
    "flat",
    "flat_certificate",
    "gh_bound",
    "loads_profile",
    "mesh_distance",
    "metric_embedding_check",
    "model_table",
    "monotone_slopes",
    "profile_from_dict",
    "profile_to_dict",
    "q_slope",
    "read_profile",
    "run_sweep",
    "schwarzschild",
    "segment_limit_bound",
    "stripes",
    "switch_bounds",
    "tubular_window",
    "unit_sphere_area",
    "validate",
    "well_cut",
    "write_model_csv",
    "write_profile",
    "write_sweep_csv",
]
