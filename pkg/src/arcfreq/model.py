"""Dimensional input data and its reduction to the canonical dimensionless problem.

All downstream solvers consume a :class:`DimensionlessProblem`: angles in
radians, lengths divided by the arch radius, frequencies expressed as

    omega_dimensionless = omega * R^2 * sqrt(12 rho / E) / h0

so that the first segment's inertia coefficient equals the dimensionless
frequency squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .fracture import ComplianceModel, LocalCompliance, ShapeFunction, crack_flexibility

TWO_PI = 2.0 * math.pi
_RING_TOL = 1e-9


class BoundaryType(Enum):
    CLAMPED_FREE = "clamped_free"
    CLAMPED_CLAMPED = "clamped_clamped"
    PERIODIC_RING = "periodic_ring"


@dataclass(frozen=True)
class Material:
    """Linear elastic material with a nonlocal length scale.

    ``nonlocal_length_sq`` is the squared material length (e0*a)^2 in m^2.
    """

    youngs_modulus: float
    poisson_ratio: float
    density: float
    nonlocal_length_sq: float = 0.0


@dataclass(frozen=True)
class ArchGeometry:
    """Stepped circular arch of rectangular cross-section.

    ``interface_angles`` lists all interface angles including the ends:
    alpha_0 = 0, ..., alpha_{n+1} = central_angle.  ``thicknesses`` has one
    entry per segment (one fewer than the angle list).
    """

    radius: float
    width: float
    central_angle: float
    interface_angles: tuple[float, ...]
    thicknesses: tuple[float, ...]

    @staticmethod
    def uniform(radius: float, width: float, central_angle: float,
                thickness: float,
                interior_angles: Sequence[float] = ()) -> "ArchGeometry":
        """Uniform-thickness arch, optionally pre-split at interior angles."""
        inner = tuple(sorted(interior_angles))
        angles = (0.0,) + inner + (central_angle,)
        return ArchGeometry(radius=radius, width=width,
                            central_angle=central_angle,
                            interface_angles=angles,
                            thicknesses=(thickness,) * (len(angles) - 1))

    @property
    def n_segments(self) -> int:
        return len(self.thicknesses)

    @property
    def n_interior_interfaces(self) -> int:
        return len(self.interface_angles) - 2


@dataclass(frozen=True)
class CrackSpec:
    """A crack at interior interface ``interface_index`` (1-based)."""

    interface_index: int
    depth_ratio: float
    shape_function: ShapeFunction = ShapeFunction.POLY31_32


@dataclass(frozen=True)
class BoundarySpec:
    kind: BoundaryType


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SegmentSpan:
    """Angular span and relative thickness of one segment."""

    start: float
    end: float
    thickness_ratio: float

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class CrackSpring:
    """Rotational spring representing one crack, in dimensionless form."""

    interface_index: int
    angle: float
    depth_ratio: float
    flexibility: float
    compliance: LocalCompliance


@dataclass(frozen=True)
class DimensionlessProblem:
    """Canonical problem: immutable, safe to share across workers."""

    eta: float
    segments: tuple[SegmentSpan, ...]
    cracks: tuple[CrackSpring, ...]
    boundary: BoundaryType
    slenderness: float

    @property
    def total_angle(self) -> float:
        return self.segments[-1].end

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def interface_angles(self) -> tuple[float, ...]:
        return tuple(seg.end for seg in self.segments[:-1])

    def flexibility_at(self, interface_index: int) -> float:
        for crack in self.cracks:
            if crack.interface_index == interface_index:
                return crack.flexibility
        return 0.0

    def frequency_scale(self, material: Material, geometry: ArchGeometry) -> float:
        """rad/s per unit of dimensionless frequency."""
        return (geometry.thicknesses[0] / geometry.radius**2
                * math.sqrt(material.youngs_modulus / (12.0 * material.density)))


def validate(material: Material, geometry: ArchGeometry,
             cracks: Sequence[CrackSpec] = (),
             boundary: BoundarySpec | BoundaryType = BoundaryType.CLAMPED_FREE,
             ) -> ValidationReport:
    """Check every type invariant; returns a report instead of raising."""
    kind = boundary.kind if isinstance(boundary, BoundarySpec) else boundary
    bad: list[str] = []

    if not material.youngs_modulus > 0:
        bad.append("material: Young's modulus must be positive")
    if not 0.0 <= material.poisson_ratio < 0.5:
        bad.append("material: Poisson ratio must lie in [0, 0.5)")
    if not material.density > 0:
        bad.append("material: density must be positive")
    if material.nonlocal_length_sq < 0:
        bad.append("material: nonlocal length squared must be non-negative")

    if not geometry.radius > 0:
        bad.append("geometry: radius must be positive")
    if not geometry.width > 0:
        bad.append("geometry: width must be positive")
    if not 0.0 < geometry.central_angle <= TWO_PI + _RING_TOL:
        bad.append("geometry: central angle must lie in (0, 2*pi]")
    angles = geometry.interface_angles
    if len(angles) < 2 or len(geometry.thicknesses) != len(angles) - 1:
        bad.append("geometry: need one thickness per segment "
                   "(len(interface_angles) - 1 entries)")
    else:
        if abs(angles[0]) > 0:
            bad.append("geometry: first interface angle must be 0")
        if abs(angles[-1] - geometry.central_angle) > _RING_TOL:
            bad.append("geometry: last interface angle must equal the central angle")
        if any(b <= a for a, b in zip(angles, angles[1:])):
            bad.append("geometry: interface angles must be strictly increasing")
    if any(h <= 0 for h in geometry.thicknesses):
        bad.append("geometry: thicknesses must be positive")

    n_interior = geometry.n_interior_interfaces
    for crack in cracks:
        if not 0.0 <= crack.depth_ratio < 1.0:
            bad.append(f"crack at interface {crack.interface_index}: "
                       "through-crack forbidden (depth ratio must be < 1)")
        if not 1 <= crack.interface_index <= n_interior:
            bad.append(f"crack at interface {crack.interface_index}: "
                       "cracks must sit on an interior interface")
    indices = [c.interface_index for c in cracks]
    if len(set(indices)) != len(indices):
        bad.append("cracks: at most one crack per interface")

    if kind is BoundaryType.PERIODIC_RING and abs(geometry.central_angle - TWO_PI) > _RING_TOL:
        bad.append("boundary: ring requires full circle (central angle 2*pi)")

    return ValidationReport(violations=tuple(bad))


def nondimensionalize(material: Material, geometry: ArchGeometry,
                      cracks: Sequence[CrackSpec] = (),
                      boundary: BoundarySpec | BoundaryType = BoundaryType.CLAMPED_FREE,
                      compliance_model: ComplianceModel = ComplianceModel.PAPER,
                      ) -> DimensionlessProblem:
    """Reduce validated inputs to the canonical dimensionless problem.

    Raises ``ValueError`` listing all violations when validation fails.
    """
    report = validate(material, geometry, cracks, boundary)
    if not report.ok:
        raise ValueError("invalid configuration: " + "; ".join(report.violations))
    kind = boundary.kind if isinstance(boundary, BoundarySpec) else boundary

    h0 = geometry.thicknesses[0]
    eta = material.nonlocal_length_sq / geometry.radius**2
    segments = tuple(
        SegmentSpan(start=a, end=b, thickness_ratio=h / h0)
        for a, b, h in zip(geometry.interface_angles,
                           geometry.interface_angles[1:],
                           geometry.thicknesses)
    )

    springs = []
    for crack in sorted(cracks, key=lambda c: c.interface_index):
        j = crack.interface_index
        h_ref = min(geometry.thicknesses[j - 1], geometry.thicknesses[j])
        kappa, comp = crack_flexibility(
            crack.depth_ratio, h_ref / geometry.radius,
            selector=crack.shape_function, model=compliance_model, eta=eta)
        springs.append(CrackSpring(
            interface_index=j,
            angle=geometry.interface_angles[j],
            depth_ratio=crack.depth_ratio,
            flexibility=kappa,
            compliance=comp,
        ))

    return DimensionlessProblem(
        eta=eta,
        segments=segments,
        cracks=tuple(springs),
        boundary=kind,
        slenderness=h0 / geometry.radius,
    )
