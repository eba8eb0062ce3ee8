"""Flag curvature of invariant Kropina metrics on homogeneous spaces."""
from .algebra import LieAlgebra, ReductiveSplit, check_jacobi, check_split
from .curvature import CurvatureContext, structural_report
from .errors import (
    DegenerateDirection,
    DegenerateFlag,
    DimensionMismatch,
    KropinaError,
    ModelFileError,
    OffSubspaceError,
    StructureError,
    UnsupportedModel,
    ValidationError,
)
from .kropina import Flag, FlagCurvatureResult, KropinaStructure, ScanRow, scan
from .metric import InvariantMetric, check_metric
from .modelfile import dumps_model, load_model, loads_model, save_model
from .models import ModelSpec, builtin, catalog, random_phi
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "Check",
    "CurvatureContext",
    "DegenerateDirection",
    "DegenerateFlag",
    "DimensionMismatch",
    "Flag",
    "FlagCurvatureResult",
    "InvariantMetric",
    "KropinaError",
    "KropinaStructure",
    "LieAlgebra",
    "ModelFileError",
    "ModelSpec",
    "OffSubspaceError",
    "ReductiveSplit",
    "Report",
    "ScanRow",
    "StructureError",
    "UnsupportedModel",
    "ValidationError",
    "builtin",
    "catalog",
    "check_jacobi",
    "check_metric",
    "check_split",
    "dumps_model",
    "load_model",
    "loads_model",
    "random_phi",
    "save_model",
    "scan",
    "structural_report",
]
