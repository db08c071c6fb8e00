"""Root location and refinement of the characteristic determinant.

The determinant is scanned on a frequency grid; sign changes are refined by
bisection, tangential touches (double roots of closed rings) by golden-section
minimization of the log-magnitude with a depth-acceptance test.  Mode shapes
come from the null vector of the assembled system at the refined root.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor

from .assembly import determinant, segment_params_at, smooth_system
from .model import BoundaryType, DimensionlessProblem
from .segment import SegmentParams, basis_matrix, second_pair_multipliers

DEFAULT_OMEGA_MIN = 1e-3
DEFAULT_SCAN_POINTS = 2000
DEFAULT_REFINE_TOL = 1e-10
TANGENTIAL_DEPTH_DECADES = 6.0
_TANGENTIAL_FLAG_DECADES = 2.0
_LOG_FLOOR = -745.0
_MERGE_REL_TOL = 1e-8
# Closed-ring compatibility: a normalized shape whose mean radial deflection
# exceeds this is the spurious uniform-breathing solution of the radial-only
# reduction (its tangential displacement would not be single-valued).
_RING_MEAN_LIMIT = 0.5


class RootSpacingWarning(UserWarning):
    """Adjacent roots closer than twice the scan step; roots may be missed."""


class TangentialRejectedWarning(UserWarning):
    """A tangential candidate failed the depth-acceptance test."""


class PartialResultWarning(UserWarning):
    """Fewer modes than requested below the scan ceiling."""


@dataclass(frozen=True)
class Bracket:
    """A frequency interval flagged by the scan."""

    kind: str  # "sign_change" | "tangential"
    lo: float
    hi: float
    log_lo: float
    log_hi: float


@dataclass(frozen=True)
class RefinedRoot:
    omega: float
    kind: str
    multiplicity: int


@dataclass(frozen=True)
class ModeResult:
    """One natural mode: frequency, basis coefficients and sampled shape."""

    index: int
    omega: float
    root_kind: str
    multiplicity: int
    coefficients: np.ndarray  # (n_segments, 4), textbook basis, local angles
    grid: np.ndarray
    shape: np.ndarray


def _log_det(problem: DimensionlessProblem, omega: float, free_edge: str) -> tuple[float, float]:
    d = determinant(omega, problem, free_edge=free_edge)
    return d.sign, max(d.log_abs, _LOG_FLOOR)


def scan(problem: DimensionlessProblem, omega_min: float, omega_max: float,
         step: float | None = None, free_edge: str = "consistent") -> list[Bracket]:
    """Locate sign-change intervals and tangential-zero candidates.

    One level of automatic step halving sharpens cells next to candidates so
    that closely spaced root pairs either split into two brackets or trigger
    a :class:`RootSpacingWarning`.
    """
    if omega_min < 0 or omega_max < omega_min:
        raise ValueError("scan range must satisfy 0 <= omega_min <= omega_max")
    if omega_min == omega_max:
        return []
    if step is None:
        step = (omega_max - omega_min) / DEFAULT_SCAN_POINTS
    if step <= 0:
        raise ValueError("scan step must be positive")

    n_cells = max(1, int(math.ceil((omega_max - omega_min) / step)))
    xs = np.linspace(omega_min, omega_max, n_cells + 1)
    signs = np.empty(xs.size)
    logs = np.empty(xs.size)
    for i, x in enumerate(xs):
        signs[i], logs[i] = _log_det(problem, x, free_edge)

    crossing_cells = {i for i in range(n_cells) if signs[i] * signs[i + 1] < 0
                      or signs[i] == 0.0 or signs[i + 1] == 0.0}

    brackets: list[Bracket] = []
    for i in sorted(crossing_cells):
        # One halving level: keep the half (or halves) that still cross.
        mid = 0.5 * (xs[i] + xs[i + 1])
        s_mid, l_mid = _log_det(problem, mid, free_edge)
        halves = [(xs[i], mid, logs[i], l_mid, signs[i], s_mid),
                  (mid, xs[i + 1], l_mid, logs[i + 1], s_mid, signs[i + 1])]
        kept = [(a, b, la, lb) for a, b, la, lb, sa, sb in halves if sa * sb <= 0]
        if not kept:  # numerically flat; keep the original cell
            kept = [(xs[i], xs[i + 1], logs[i], logs[i + 1])]
        for a, b, la, lb in kept:
            brackets.append(Bracket("sign_change", a, b, la, lb))

    # Tangential candidates: interior dips of log|D| away from crossings.
    for i in range(1, n_cells):
        if logs[i] >= logs[i - 1] or logs[i] >= logs[i + 1]:
            continue
        if {i - 1, i} & crossing_cells:
            continue
        # Halve both neighbouring cells; a hidden crossing becomes a bracket.
        found_crossing = False
        refined = []
        for a, b in ((xs[i - 1], xs[i]), (xs[i], xs[i + 1])):
            mid = 0.5 * (a + b)
            s_mid, l_mid = _log_det(problem, mid, free_edge)
            refined.append((mid, s_mid, l_mid))
        sign_here = signs[i]
        pts = [(xs[i - 1], signs[i - 1], logs[i - 1]), (refined[0][0],) + refined[0][1:],
               (xs[i], sign_here, logs[i]), (refined[1][0],) + refined[1][1:],
               (xs[i + 1], signs[i + 1], logs[i + 1])]
        for (a, sa, la), (b, sb, lb) in zip(pts, pts[1:]):
            if sa * sb < 0 or sa == 0.0 or sb == 0.0:
                brackets.append(Bracket("sign_change", a, b, la, lb))
                found_crossing = True
        if found_crossing:
            continue
        depth = min(logs[i - 1], logs[i + 1]) - min(logs[i], refined[0][2], refined[1][2])
        if depth >= _TANGENTIAL_FLAG_DECADES * math.log(10.0):
            brackets.append(Bracket("tangential", xs[i - 1], xs[i + 1],
                                    logs[i - 1], logs[i + 1]))

    brackets.sort(key=lambda b: 0.5 * (b.lo + b.hi))
    mids = [0.5 * (b.lo + b.hi) for b in brackets]
    for a, b in zip(mids, mids[1:]):
        if b - a < 2.0 * step:
            warnings.warn(
                f"adjacent root candidates at {a:.6g} and {b:.6g} are closer "
                f"than twice the scan step {step:.3g}; roots may be missed",
                RootSpacingWarning, stacklevel=2)
            break
    return brackets


def refine(problem: DimensionlessProblem, bracket: Bracket,
           tol: float = DEFAULT_REFINE_TOL,
           free_edge: str = "consistent") -> RefinedRoot | None:
    """Refine one bracket to a root, or discard a shallow tangential candidate."""
    lo, hi = bracket.lo, bracket.hi
    if bracket.kind == "sign_change":
        s_lo, _ = _log_det(problem, lo, free_edge)
        while hi - lo > tol * max(1.0, 0.5 * (lo + hi)):
            mid = 0.5 * (lo + hi)
            s_mid, _ = _log_det(problem, mid, free_edge)
            if s_mid == 0.0:
                return RefinedRoot(mid, "sign_change", 1)
            if s_lo * s_mid < 0:
                hi = mid
            else:
                lo, s_lo = mid, s_mid
        return RefinedRoot(0.5 * (lo + hi), "sign_change", 1)

    # Tangential: golden-section minimization of log|D|.
    s_lo, _ = _log_det(problem, lo, free_edge)
    s_hi, _ = _log_det(problem, hi, free_edge)
    if s_lo * s_hi < 0:  # misclassified: an ordinary crossing
        return refine(problem, Bracket("sign_change", lo, hi,
                                       bracket.log_lo, bracket.log_hi),
                      tol=tol, free_edge=free_edge)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    _, fc = _log_det(problem, c, free_edge)
    _, fd = _log_det(problem, d, free_edge)
    best_x, best_f = (c, fc) if fc < fd else (d, fd)
    while b - a > tol * max(1.0, 0.5 * (a + b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            _, fc = _log_det(problem, c, free_edge)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            _, fd = _log_det(problem, d, free_edge)
        x, f = (c, fc) if fc < fd else (d, fd)
        if f < best_f:
            best_x, best_f = x, f
    neighborhood = min(bracket.log_lo, bracket.log_hi)
    if best_f > neighborhood - TANGENTIAL_DEPTH_DECADES * math.log(10.0):
        warnings.warn(
            f"tangential candidate near omega={best_x:.6g} rejected: "
            f"|D| dips only {(neighborhood - best_f) / math.log(10.0):.2f} "
            "decades below its neighborhood", TangentialRejectedWarning,
            stacklevel=2)
        return None
    return RefinedRoot(best_x, "tangential", 2)


def _null_vector(matrix: np.ndarray) -> np.ndarray:
    """Null vector via the LU factorization's most-degenerate pivot column."""
    n = matrix.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, _ = lu_factor(matrix, check_finite=False)
    diag = np.abs(np.diag(lu))
    col = int(np.argmin(diag))
    x = np.zeros(n)
    x[col] = 1.0
    for i in range(col - 1, -1, -1):
        x[i] = -(lu[i, i + 1:col + 1] @ x[i + 1:col + 1]) / lu[i, i]
    norm = np.linalg.norm(x)
    x /= norm
    # Fall back to SVD if upstream pivots were too degenerate to back-solve.
    if not np.all(np.isfinite(x)) or np.linalg.norm(matrix @ x) > 1e-6 * np.linalg.norm(matrix):
        x = np.linalg.svd(matrix)[2][-1]
    return x


def extract_mode(problem: DimensionlessProblem, omega: float,
                 free_edge: str = "consistent",
                 shape_points: int = 601) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients (textbook basis) and sampled normalized shape at a root."""
    eq = smooth_system(omega, problem, free_edge=free_edge)
    params = segment_params_at(omega, problem)
    coeffs = _null_vector(eq).reshape(problem.n_segments, 4)

    beta = problem.total_angle
    grid = np.linspace(0.0, beta, shape_points)
    inner_ends = np.array([seg.end for seg in problem.segments[:-1]])
    seg_idx = np.searchsorted(inner_ends, grid, side="right")
    shape = np.empty(shape_points)
    for i, phi in enumerate(grid):
        s = int(seg_idx[i])
        local = phi - problem.segments[s].start
        shape[i] = basis_matrix(params[s], local, scaled=True)[0] @ coeffs[s]

    peak = shape[int(np.argmax(np.abs(shape)))]
    shape = shape / peak
    coeffs = coeffs / peak

    textbook = coeffs.copy()
    for s, p in enumerate(params):
        k1, k2 = second_pair_multipliers(p)
        textbook[s, 1] /= k1
        textbook[s, 3] /= k2
    return textbook, grid, shape


def _ring_incompatible(problem: DimensionlessProblem, shape: np.ndarray) -> bool:
    if problem.boundary is not BoundaryType.PERIODIC_RING:
        return False
    return abs(float(np.mean(shape))) > _RING_MEAN_LIMIT


def _merged(roots: list[RefinedRoot]) -> list[RefinedRoot]:
    out: list[RefinedRoot] = []
    for root in sorted(roots, key=lambda r: r.omega):
        if out and abs(root.omega - out[-1].omega) <= _MERGE_REL_TOL * max(1.0, root.omega):
            prev = out[-1]
            kind = "tangential" if "tangential" in (prev.kind, root.kind) else prev.kind
            mult = max(prev.multiplicity, root.multiplicity)
            out[-1] = RefinedRoot(prev.omega, kind, mult)
        else:
            out.append(root)
    return out


def modes(problem: DimensionlessProblem, k: int, *,
          omega_min: float = DEFAULT_OMEGA_MIN,
          omega_max: float | None = None,
          scan_points: int = DEFAULT_SCAN_POINTS,
          free_edge: str = "consistent",
          tol: float = DEFAULT_REFINE_TOL,
          shape_points: int = 601) -> list[ModeResult]:
    """The ``k`` lowest modes (tangential double roots count twice).

    When no ceiling is given the scan range doubles until enough roots are
    found; if the final ceiling still yields fewer, the partial list is
    returned with a :class:`PartialResultWarning`.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ceilings = ([omega_max] if omega_max is not None
                else [50.0 * 2**i for i in range(7)])
    results: list[ModeResult] = []
    for ceiling in ceilings:
        step = (ceiling - omega_min) / scan_points
        brackets = scan(problem, omega_min, ceiling, step=step, free_edge=free_edge)
        roots = [r for b in brackets
                 if (r := refine(problem, b, tol=tol, free_edge=free_edge)) is not None]
        results = []
        count = 0
        for root in _merged(roots):
            coeffs, grid, shape = extract_mode(problem, root.omega,
                                               free_edge=free_edge,
                                               shape_points=shape_points)
            if _ring_incompatible(problem, shape):
                continue
            results.append(ModeResult(index=len(results) + 1, omega=root.omega,
                                      root_kind=root.kind,
                                      multiplicity=root.multiplicity,
                                      coefficients=coeffs, grid=grid, shape=shape))
            count += root.multiplicity
            if count >= k:
                break
        if count >= k:
            return results
    warnings.warn(
        f"found {count} of {k} requested modes below the scan ceiling "
        f"{ceilings[-1]:.6g}", PartialResultWarning, stacklevel=2)
    return results
