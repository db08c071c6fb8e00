"""Independent finite-difference eigensolver for cross-validation.

Discretizes the segment equation with second-order central differences on a
uniform angle grid, doubling the unknowns at every interface so that crack
jump conditions couple the two sides through the spring flexibility.  The
frequency-squared dependence is affine throughout (including the nonlocal
boundary terms), so the problem is a generalized pencil ``K x = omega^2 M x``
with the nonlocal parameter weighting second differences on the mass side.

This path shares no code with the characteristic-determinant solver beyond
the problem description itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import eig as dense_eig
from scipy.sparse.linalg import splu

from .model import BoundaryType, DimensionlessProblem

MIN_NODES = 200
_MIN_CELLS_PER_SEGMENT = 4
DENSE_NODE_THRESHOLD = 1200
_SEED = 20240801
_MAX_ITERATIONS = 400
_RITZ_TOL = 1e-12
_COMPLEX_LEAK_TOL = 1e-8
_RING_MEAN_LIMIT = 0.5


class ComplexLeakageWarning(UserWarning):
    """Ritz values acquired an imaginary part beyond the reporting threshold."""


class OracleConvergenceError(RuntimeError):
    """The shift-invert eigeniteration failed to converge."""


@dataclass(frozen=True)
class FdMesh:
    """Uniform angle grid with interfaces snapped to nodes.

    ``segment_cells`` holds the number of grid cells per segment; each
    segment additionally carries two ghost nodes beyond either end through
    which boundary and interface conditions are imposed.
    """

    n_nodes: int
    spacing: float
    segment_cells: tuple[int, ...]
    interface_indices: tuple[int, ...]  # global node index per interior interface

    @property
    def snapped_angles(self) -> tuple[float, ...]:
        return tuple(i * self.spacing for i in self.interface_indices)


def make_mesh(problem: DimensionlessProblem, n_nodes: int) -> FdMesh:
    """Build the mesh; every interface lands exactly on a grid node."""
    if n_nodes < MIN_NODES:
        raise ValueError(f"mesh needs at least {MIN_NODES} nodes, got {n_nodes}")
    beta = problem.total_angle
    h = beta / (n_nodes - 1)
    indices = [0]
    for angle in problem.interface_angles:
        indices.append(int(round(angle / h)))
    indices.append(n_nodes - 1)
    cells = tuple(b - a for a, b in zip(indices, indices[1:]))
    if any(c < _MIN_CELLS_PER_SEGMENT for c in cells):
        raise ValueError(
            f"mesh too coarse: a segment received fewer than "
            f"{_MIN_CELLS_PER_SEGMENT} cells (cells per segment: {cells})")
    return FdMesh(n_nodes=n_nodes, spacing=h, segment_cells=cells,
                  interface_indices=tuple(indices[1:-1]))


# Stencils as (offset, coefficient) pairs; h-powers applied at build time.
_D0 = ((0, 1.0),)
_D1 = ((-1, -0.5), (1, 0.5))
_D2 = ((-1, 1.0), (0, -2.0), (1, 1.0))
_D3 = ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5))
_D4 = ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0))


def _build_pencil(problem: DimensionlessProblem, mesh: FdMesh,
                  free_edge: str = "consistent",
                  corrupt_kappa_sign: bool = False,
                  ) -> tuple[sparse.csc_matrix, sparse.csc_matrix, np.ndarray]:
    """Assemble K, M and the mask of real (non-ghost) unknowns."""
    h = mesh.spacing
    eta = problem.eta
    n_seg = problem.n_segments
    t = [seg.thickness_ratio for seg in problem.segments]

    offsets = []
    pos = 0
    for cells in mesh.segment_cells:
        offsets.append(pos)
        pos += cells + 5  # cells+1 real nodes plus 2 ghosts per end
    dim = pos

    scale = {id(_D0): 1.0, id(_D1): 1.0 / h, id(_D2): 1.0 / h**2,
             id(_D3): 1.0 / h**3, id(_D4): 1.0 / h**4}

    K = sparse.lil_matrix((dim, dim))
    M = sparse.lil_matrix((dim, dim))
    real_mask = np.zeros(dim, dtype=bool)
    for seg, cells in enumerate(mesh.segment_cells):
        real_mask[offsets[seg] + 2:offsets[seg] + 2 + cells + 1] = True

    def gidx(seg: int, node: int) -> int:
        return offsets[seg] + 2 + node

    def add(mat, row: int, seg: int, node: int, stencil, factor: float) -> None:
        base = gidx(seg, node)
        f = factor * scale[id(stencil)]
        for off, c in stencil:
            mat[row, base + off] += f * c

    row = 0
    # Interior equation at every real node of every segment.
    for seg, cells in enumerate(mesh.segment_cells):
        inv_t2 = 1.0 / t[seg] ** 2
        for node in range(cells + 1):
            add(K, row, seg, node, _D4, 1.0)
            add(K, row, seg, node, _D2, 2.0)
            add(K, row, seg, node, _D0, 1.0)
            add(M, row, seg, node, _D0, inv_t2)
            add(M, row, seg, node, _D2, -eta * inv_t2)
            row += 1

    def clamped(seg: int, node: int) -> None:
        nonlocal row
        add(K, row, seg, node, _D0, 1.0)
        row += 1
        add(K, row, seg, node, _D1, 1.0)
        row += 1

    def free(seg: int, node: int) -> None:
        nonlocal row
        # moment: X'' + X = -omega^2 * (w/t^2) X, w = eta (consistent) or 1
        w = eta if free_edge == "consistent" else 1.0
        inv_t2 = 1.0 / t[seg] ** 2
        add(K, row, seg, node, _D2, 1.0)
        add(K, row, seg, node, _D0, 1.0)
        add(M, row, seg, node, _D0, -w * inv_t2)
        row += 1
        add(K, row, seg, node, _D3, 1.0)
        add(K, row, seg, node, _D1, 1.0)
        add(M, row, seg, node, _D1, -w * inv_t2)
        row += 1

    def junction(seg_l: int, node_l: int, seg_r: int, node_r: int,
                 kappa: float) -> None:
        """Four continuity/jump rows tying two segment ends together."""
        nonlocal row
        if corrupt_kappa_sign:
            kappa = -kappa
        tl, tr = t[seg_l], t[seg_r]
        tl3, tr3 = tl**3, tr**3
        # value continuity
        add(K, row, seg_l, node_l, _D0, 1.0)
        add(K, row, seg_r, node_r, _D0, -1.0)
        row += 1
        # slope jump driven by the left-limit bending moment
        cj = kappa / (1.0 + eta)
        add(K, row, seg_r, node_r, _D1, 1.0)
        add(K, row, seg_l, node_l, _D1, -1.0)
        add(K, row, seg_l, node_l, _D2, cj)
        add(K, row, seg_l, node_l, _D0, cj)
        add(M, row, seg_l, node_l, _D0, -cj * eta / tl**2)
        row += 1
        # moment continuity, thickness-cubed weighted
        add(K, row, seg_r, node_r, _D2, tr3)
        add(K, row, seg_r, node_r, _D0, tr3)
        add(K, row, seg_l, node_l, _D2, -tl3)
        add(K, row, seg_l, node_l, _D0, -tl3)
        add(M, row, seg_r, node_r, _D0, -eta * tr)
        add(M, row, seg_l, node_l, _D0, eta * tl)
        row += 1
        # shear continuity (derivative of the moment bracket)
        add(K, row, seg_r, node_r, _D3, tr3)
        add(K, row, seg_r, node_r, _D1, tr3)
        add(K, row, seg_l, node_l, _D3, -tl3)
        add(K, row, seg_l, node_l, _D1, -tl3)
        add(M, row, seg_r, node_r, _D1, -eta * tr)
        add(M, row, seg_l, node_l, _D1, eta * tl)
        row += 1

    for j in range(1, n_seg):
        junction(j - 1, mesh.segment_cells[j - 1], j, 0, problem.flexibility_at(j))

    if problem.boundary is BoundaryType.CLAMPED_FREE:
        clamped(0, 0)
        free(n_seg - 1, mesh.segment_cells[-1])
    elif problem.boundary is BoundaryType.CLAMPED_CLAMPED:
        clamped(0, 0)
        clamped(n_seg - 1, mesh.segment_cells[-1])
    elif problem.boundary is BoundaryType.PERIODIC_RING:
        junction(n_seg - 1, mesh.segment_cells[-1], 0, 0, 0.0)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown boundary type {problem.boundary!r}")

    assert row == dim, f"assembled {row} equations for {dim} unknowns"
    return K.tocsc(), M.tocsc(), real_mask


def _select(lams: np.ndarray, vecs: np.ndarray, k: int, real_mask: np.ndarray,
            is_ring: bool) -> np.ndarray:
    """Filter to physical eigenvalues and return the k smallest frequencies."""
    finite = np.isfinite(lams)
    leak = np.abs(lams.imag) > _COMPLEX_LEAK_TOL * np.maximum(1.0, np.abs(lams))
    if np.any(leak & finite & (lams.real > 0)):
        worst = np.max(np.abs(lams.imag[leak & finite]) /
                       np.maximum(1.0, np.abs(lams[leak & finite])))
        warnings.warn(f"complex leakage in oracle eigenvalues "
                      f"(relative imaginary part up to {worst:.2e})",
                      ComplexLeakageWarning, stacklevel=3)
    keep = finite & ~leak & (lams.real > 0)
    lams_r = lams.real[keep]
    vecs_r = vecs[:, keep].real
    order = np.argsort(lams_r)
    out = []
    for idx in order:
        if is_ring:
            shape = vecs_r[real_mask, idx]
            peak = np.max(np.abs(shape))
            if peak > 0 and abs(np.mean(shape)) > _RING_MEAN_LIMIT * peak:
                continue  # breathing solution: incompatible with a closed ring
        out.append(math.sqrt(lams_r[idx]))
        if len(out) == k:
            break
    return np.array(out)


def _shift_invert(K: sparse.csc_matrix, M: sparse.csc_matrix, k: int,
                  sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic shift-invert subspace iteration on the pencil."""
    dim = K.shape[0]
    q = min(dim, max(2 * k + 8, 16))
    lu = None
    for attempt in range(4):
        try:
            lu = splu((K - sigma * M).tocsc())
            break
        except RuntimeError:
            sigma = sigma * 1.618 + 1e-3 * (attempt + 1)
    if lu is None:
        raise OracleConvergenceError("could not factorize the shifted pencil")

    rng = np.random.default_rng(_SEED)
    v, _ = np.linalg.qr(rng.standard_normal((dim, q)))
    previous = None
    for _ in range(_MAX_ITERATIONS):
        z = lu.solve(M @ v)
        h = v.T @ z
        theta, y = np.linalg.eig(h)
        order = np.argsort(-np.abs(theta))
        theta = theta[order]
        y = y[:, order]
        with np.errstate(divide="ignore", invalid="ignore"):
            lams = sigma + 1.0 / theta
        positive = np.sort(lams[np.isfinite(lams) & (np.abs(lams.imag) <
                           1e-10 * np.maximum(1.0, np.abs(lams))) &
                           (lams.real > 0)].real)[:k]
        if previous is not None and positive.size >= min(k, previous.size) and \
                previous.size == positive.size and positive.size > 0:
            if np.max(np.abs(positive - previous) /
                      np.maximum(1.0, np.abs(positive))) < _RITZ_TOL:
                return lams, v @ y
        previous = positive
        v, _ = np.linalg.qr(z)
    raise OracleConvergenceError(
        f"shift-invert iteration did not converge in {_MAX_ITERATIONS} steps")


def fd_eigen(problem: DimensionlessProblem, n_nodes: int, k: int, *,
             free_edge: str = "consistent", shift: float | None = None,
             dense_threshold: int = DENSE_NODE_THRESHOLD,
             _corrupt_kappa_sign: bool = False) -> np.ndarray:
    """First ``k`` dimensionless frequencies from the finite-difference path.

    Degenerate ring modes appear twice, once per eigenvector.  ``shift``
    overrides the shift-invert target (default just below the expected
    fundamental); below ``dense_threshold`` nodes a dense generalized solve
    replaces the iteration.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    mesh = make_mesh(problem, n_nodes)
    K, M, real_mask = _build_pencil(problem, mesh, free_edge=free_edge,
                                    corrupt_kappa_sign=_corrupt_kappa_sign)
    is_ring = problem.boundary is BoundaryType.PERIODIC_RING
    if n_nodes < dense_threshold:
        lams, vecs = dense_eig(K.toarray(), M.toarray(), right=True)
    else:
        sigma = shift if shift is not None else 1e-2
        lams, vecs = _shift_invert(K, M, k, sigma)
    out = _select(np.asarray(lams), np.asarray(vecs), k, real_mask, is_ring)
    if out.size < k:
        warnings.warn(f"oracle found only {out.size} of {k} requested modes",
                      UserWarning, stacklevel=2)
    return out
