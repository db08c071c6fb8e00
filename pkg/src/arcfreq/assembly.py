"""Global homogeneous system and characteristic determinant.

Each segment contributes the four coefficients of its closed-form basis;
boundary conditions plus four continuity/jump conditions per interior
interface give a square system of size ``4 * n_segments``.  Eigenfrequencies
are the frequencies at which its determinant vanishes.

Determinant evaluation uses the smooth-kernel basis (second function of each
pair divided by its characteristic root); the textbook and smooth systems
differ only by positive column scalings, so roots and determinant signs
coincide while the smooth form stays regular through regime boundaries and
free of overflow for large hyperbolic arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BoundaryType, DimensionlessProblem
from .segment import SegmentParams, basis_matrix, frequency_params

FREE_EDGE_MODES = ("consistent", "paper_literal")


class AssemblyError(RuntimeError):
    """Non-finite entries while building or factorizing the system."""


@dataclass(frozen=True)
class GlobalSystem:
    """Square system in the textbook basis, with row-equilibration data."""

    matrix: np.ndarray
    row_scale: np.ndarray
    row_labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def equilibrated(self) -> np.ndarray:
        return self.matrix / self.row_scale[:, None]


@dataclass(frozen=True)
class DeterminantValue:
    """Sign and log-magnitude of the row-equilibrated determinant."""

    sign: float
    log_abs: float

    @property
    def is_zero(self) -> bool:
        return self.sign == 0.0


def segment_params_at(omega: float, problem: DimensionlessProblem) -> tuple[SegmentParams, ...]:
    return tuple(frequency_params(omega, seg.thickness_ratio, problem.eta)
                 for seg in problem.segments)


def _moment_coeff(params: SegmentParams, eta: float, free_edge: str) -> float:
    """Coefficient of X in the bending-moment bracket ``X'' + coeff * X``."""
    if free_edge == "paper_literal":
        return 1.0 + params.freq_sq
    return 1.0 + params.freq_sq * eta


def _check_free_edge(free_edge: str) -> None:
    if free_edge not in FREE_EDGE_MODES:
        raise ValueError(f"free_edge must be one of {FREE_EDGE_MODES}, got {free_edge!r}")


def boundary_rows(boundary: BoundaryType, params: tuple[SegmentParams, ...],
                  problem: DimensionlessProblem, free_edge: str = "consistent",
                  scaled: bool = False) -> list[tuple[str, np.ndarray]]:
    """The four boundary rows of the global system."""
    _check_free_edge(free_edge)
    n = problem.n_segments
    dim = 4 * n

    def place(seg: int, block: np.ndarray) -> np.ndarray:
        row = np.zeros(dim)
        row[4 * seg:4 * seg + 4] = block
        return row

    first = basis_matrix(params[0], 0.0, scaled=scaled)
    last_len = problem.segments[-1].length
    last = basis_matrix(params[-1], last_len, scaled=scaled)
    rows: list[tuple[str, np.ndarray]] = []

    if boundary is BoundaryType.CLAMPED_FREE:
        rows.append(("clamp@0:value", place(0, first[0])))
        rows.append(("clamp@0:slope", place(0, first[1])))
        c = _moment_coeff(params[-1], problem.eta, free_edge)
        rows.append(("free@end:moment", place(n - 1, last[2] + c * last[0])))
        rows.append(("free@end:shear", place(n - 1, last[3] + c * last[1])))
    elif boundary is BoundaryType.CLAMPED_CLAMPED:
        rows.append(("clamp@0:value", place(0, first[0])))
        rows.append(("clamp@0:slope", place(0, first[1])))
        rows.append(("clamp@end:value", place(n - 1, last[0])))
        rows.append(("clamp@end:slope", place(n - 1, last[1])))
    elif boundary is BoundaryType.PERIODIC_RING:
        # Seam between the last segment's right edge and the first's left
        # edge: continuity of value, slope, moment and its derivative, with
        # the cubed thickness ratios weighting the stiffness-carrying rows.
        t0 = problem.segments[0].thickness_ratio ** 3
        tn = problem.segments[-1].thickness_ratio ** 3
        c0 = 1.0 + params[0].freq_sq * problem.eta
        cn = 1.0 + params[-1].freq_sq * problem.eta
        rows.append(("seam:value", place(0, first[0]) - place(n - 1, last[0])))
        rows.append(("seam:slope", place(0, first[1]) - place(n - 1, last[1])))
        rows.append(("seam:moment",
                     t0 * place(0, first[2] + c0 * first[0])
                     - tn * place(n - 1, last[2] + cn * last[0])))
        rows.append(("seam:shear",
                     t0 * place(0, first[3] + c0 * first[1])
                     - tn * place(n - 1, last[3] + cn * last[1])))
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown boundary type {boundary!r}")
    return rows


def interface_rows(j: int, params_left: SegmentParams, params_right: SegmentParams,
                   kappa: float, eta: float, left_length: float,
                   scaled: bool = False) -> list[tuple[str, np.ndarray]]:
    """Continuity/jump rows of interface ``j`` as 8-wide blocks.

    Block columns are the left segment's four coefficients followed by the
    right segment's.  Conditions: value continuity, slope jump driven by the
    left-limit bending moment, moment continuity and continuity of the
    moment derivative (shear), the latter two weighted by the cubed
    thickness ratios.
    """
    left = basis_matrix(params_left, left_length, scaled=scaled)
    right = basis_matrix(params_right, 0.0, scaled=scaled)
    c_left = 1.0 + params_left.freq_sq * eta
    c_right = 1.0 + params_right.freq_sq * eta
    t_left = params_left.thickness_ratio ** 3
    t_right = params_right.thickness_ratio ** 3

    def combine(left_block: np.ndarray, right_block: np.ndarray) -> np.ndarray:
        return np.concatenate([left_block, right_block])

    rows = [
        (f"iface{j}:value", combine(-left[0], right[0])),
        (f"iface{j}:slope",
         combine(-left[1] + kappa / (1.0 + eta) * (left[2] + c_left * left[0]),
                 right[1])),
        (f"iface{j}:moment",
         combine(-t_left * (left[2] + c_left * left[0]),
                 t_right * (right[2] + c_right * right[0]))),
        (f"iface{j}:shear",
         combine(-t_left * (left[3] + c_left * left[1]),
                 t_right * (right[3] + c_right * right[1]))),
    ]
    return rows


def _assemble(omega: float, problem: DimensionlessProblem, free_edge: str,
              scaled: bool) -> tuple[np.ndarray, tuple[str, ...]]:
    params = segment_params_at(omega, problem)
    n = problem.n_segments
    dim = 4 * n
    matrix = np.zeros((dim, dim))
    labels: list[str] = []
    r = 0
    for label, row in boundary_rows(problem.boundary, params, problem,
                                    free_edge=free_edge, scaled=scaled):
        matrix[r] = row
        labels.append(label)
        r += 1
    for j in range(1, n):
        kappa = problem.flexibility_at(j)
        block = interface_rows(j, params[j - 1], params[j], kappa, problem.eta,
                               problem.segments[j - 1].length, scaled=scaled)
        for label, row in block:
            matrix[r, 4 * (j - 1):4 * (j + 1)] = row
            labels.append(label)
            r += 1
    return matrix, tuple(labels)


def global_system(omega: float, problem: DimensionlessProblem,
                  free_edge: str = "consistent") -> GlobalSystem:
    """Assemble the textbook-basis system with row-equilibration data."""
    matrix, labels = _assemble(omega, problem, free_edge, scaled=False)
    if not np.all(np.isfinite(matrix)):
        raise AssemblyError(f"non-finite entries in global system at omega={omega}")
    scale = np.max(np.abs(matrix), axis=1)
    scale[scale == 0.0] = 1.0
    return GlobalSystem(matrix=matrix, row_scale=scale, row_labels=labels)


def smooth_system(omega: float, problem: DimensionlessProblem,
                  free_edge: str = "consistent") -> np.ndarray:
    """Row-equilibrated system in the smooth-kernel basis."""
    matrix, _ = _assemble(omega, problem, free_edge, scaled=True)
    if not np.all(np.isfinite(matrix)):
        raise AssemblyError(f"non-finite entries in global system at omega={omega}")
    scale = np.max(np.abs(matrix), axis=1)
    scale[scale == 0.0] = 1.0
    return matrix / scale[:, None]


def determinant(omega: float, problem: DimensionlessProblem,
                free_edge: str = "consistent") -> DeterminantValue:
    """Sign and log-magnitude of the scaled characteristic determinant.

    Continuous in frequency; its zero crossings (and, for degenerate ring
    modes, tangential touches) locate the eigenfrequencies.
    """
    eq = smooth_system(omega, problem, free_edge)
    sign, log_abs = np.linalg.slogdet(eq)
    if math.isnan(log_abs):
        raise AssemblyError(f"determinant evaluation failed at omega={omega}")
    return DeterminantValue(sign=float(sign), log_abs=float(log_abs))
