"""
Equispaced quadrature for L^1 and H^1(S^1_d) norms on the torus.

|p| is not a trigonometric polynomial, so no finite rule is exact. Norms are
computed on nodes t_j = j/M with M at least OVERSAMPLING_FACTOR times the
bandwidth, and, unless a grid is imposed, the grid is doubled until two
successive values agree.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.schatten.norms import batched_trace_norms
from src.torus.fourier import MatrixTrigPoly, ScalarTrigPoly, matrix_node_values, node_values

logger = logging.getLogger(__name__)

OVERSAMPLING_FACTOR = 8
CONVERGENCE_RTOL = 1e-8
MAX_SCALAR_NODES = 2**20
MAX_MATRIX_NODES = 2**14


class GridTooCoarse(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureGrid:
    """M equispaced nodes j/M on [0, 1)."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"grid needs at least one node, got {self.M}")

    @classmethod
    def for_bandwidth(cls, bandwidth: int, factor: int = OVERSAMPLING_FACTOR) -> QuadratureGrid:
        return cls(factor * (bandwidth + 1))

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.M) / self.M

    def refined(self) -> QuadratureGrid:
        return QuadratureGrid(2 * self.M)

    def require(self, bandwidth: int, factor: int = OVERSAMPLING_FACTOR) -> None:
        needed = factor * (bandwidth + 1)
        if self.M < needed:
            raise GridTooCoarse(
                f"grid of {self.M} nodes is too coarse for bandwidth {bandwidth} (needs >= {needed})"
            )


def _l1_on_grid(p: ScalarTrigPoly, M: int) -> float:
    return float(np.mean(np.abs(node_values(p, M))))


def _h1_on_grid(F: MatrixTrigPoly, M: int) -> float:
    return float(np.mean(batched_trace_norms(matrix_node_values(F, M))))


def _converge(integrate, bandwidth: int, tol: float, max_nodes: int) -> float:
    grid = QuadratureGrid.for_bandwidth(bandwidth)
    value = integrate(grid.M)
    while True:
        finer = grid.refined()
        if finer.M > max_nodes:
            logger.warning("quadrature not converged at %d nodes (value %.17g)", grid.M, value)
            return value
        refined_value = integrate(finer.M)
        if abs(refined_value - value) <= tol * max(abs(refined_value), np.finfo(float).tiny):
            return refined_value
        grid, value = finer, refined_value


def l1_norm(
    p: ScalarTrigPoly,
    grid: QuadratureGrid | None = None,
    *,
    tol: float = CONVERGENCE_RTOL,
    max_nodes: int = MAX_SCALAR_NODES,
) -> float:
    """
    L^1(T) norm (1/M) sum_j |p(t_j)|.

    The polynomial is first shifted to start at frequency 0 (|p| is
    translation invariant), so huge frequencies cost nothing.

    Args:
        p: Polynomial
        grid: Fixed grid; if None the grid is doubled until convergence
        tol: Relative agreement required between successive grids
        max_nodes: Largest grid tried by the doubling loop

    Returns:
        Non-negative norm

    Raises:
        GridTooCoarse: the fixed grid violates the oversampling condition.
            The condition is judged on the bandwidth max - min of the
            support, not on the largest frequency: an 8-node grid accepts
            e_m for any m, however large.
    """
    q = p.normalized()
    if not q:
        return 0.0
    if grid is not None:
        grid.require(q.bandwidth)
        return _l1_on_grid(q, grid.M)
    return _converge(lambda M: _l1_on_grid(q, M), q.bandwidth, tol, max_nodes)


def h1_matrix_norm(
    F: MatrixTrigPoly,
    grid: QuadratureGrid | None = None,
    *,
    tol: float = CONVERGENCE_RTOL,
    max_nodes: int = MAX_MATRIX_NODES,
) -> float:
    """
    H^1(S^1_d) norm (1/M) sum_j ||F(t_j)||_{S^1}.

    F is demodulated by row/column potentials first; this conjugates F(t)
    by diagonal unitaries at every t and leaves the trace norm unchanged.
    Elements of the form diag(e_a) X diag(e_b) become constants.
    """
    G = F.balanced()
    if not G:
        return 0.0
    if grid is not None:
        grid.require(G.bandwidth)
        return _h1_on_grid(G, grid.M)
    return _converge(lambda M: _h1_on_grid(G, M), G.bandwidth, tol, max_nodes)
