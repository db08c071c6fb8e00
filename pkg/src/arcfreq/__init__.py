"""In-plane free vibration of stepped circular nano-arches with crack defects.

Two independent solution paths are provided: a characteristic-determinant
method built on the closed-form segment basis, and a finite-difference
generalized eigensolver used as a cross-validation oracle.
"""

from .assembly import DeterminantValue, GlobalSystem, determinant, global_system
from .eigensolve import ModeResult, modes, refine, scan
from .fracture import (ComplianceModel, LocalCompliance, ShapeFunction,
                       compliance, crack_flexibility, shape_f1, shape_f2,
                       shape_tada, spring_flexibility)
from .model import (ArchGeometry, BoundarySpec, BoundaryType, CrackSpec,
                    DimensionlessProblem, Material, SegmentSpan,
                    ValidationReport, nondimensionalize, validate)
from .oracle import FdMesh, fd_eigen, make_mesh
from .segment import (BasisEval, Regime, SegmentParams, basis_eval,
                      frequency_params)

__version__ = "0.1.0"

__all__ = [
    "ArchGeometry", "BasisEval", "BoundarySpec", "BoundaryType",
    "ComplianceModel", "CrackSpec", "DeterminantValue", "DimensionlessProblem",
    "FdMesh", "GlobalSystem", "LocalCompliance", "Material", "ModeResult",
    "Regime", "SegmentParams", "SegmentSpan", "ShapeFunction",
    "ValidationReport", "basis_eval", "compliance", "crack_flexibility",
    "determinant", "fd_eigen", "frequency_params", "global_system",
    "make_mesh", "modes", "nondimensionalize", "refine", "scan",
    "shape_f1", "shape_f2", "shape_tada", "spring_flexibility", "validate",
]
