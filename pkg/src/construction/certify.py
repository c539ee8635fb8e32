"""
Transfer certificates: lower bounds for sup_a ||sum_k a_k P_k (x) Id_{S^1_d}||.

With Z = diag(e_alpha) X diag(e_beta), conditions (i)/(ii) give
||(phi_n (x) Id)(Z) - (Id (x) T)(Z)|| <= eps_n d^2 ||X||_1, and
||(Id (x) T)(Z)|| = ||T(X)||_1, so the mask phi_n has ratio at least
(||T(X)||_1 - eps_n d^2 ||X||_1) / ||X||_1 on Z.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from src.construction.state import ConstructionState
from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.sums import amplified_apply
from src.schatten.growth import estimate_triangular_norms, log_slope
from src.schatten.norms import SchattenMatrix, as_array, trace_norm
from src.schatten.truncation import diag_modulate, triangular_truncation
from src.schatten.witnesses import cauchy_witness, elementary
from src.tasks import run_tasks
from src.torus.fourier import MatrixTrigPoly
from src.torus.quadrature import QuadratureGrid, h1_matrix_norm

logger = logging.getLogger(__name__)

TRANSFER_RTOL = 1e-8
ASYMPTOTIC_SLOPE_FROM = 16
WITNESS_STRATEGIES = ("best", "cauchy", "e12")


class TransferInequalityViolated(ArithmeticError):
    pass


@dataclass(frozen=True)
class Certificate:
    d: int
    epsilon: float
    A: float
    B: float
    slack: float
    C_lb: float
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    mask_intervals: tuple[tuple[int, int], ...]
    witness: SchattenMatrix
    witness_tag: str = ""

    @property
    def degenerate(self) -> bool:
        """d = 1 (T vanishes) or a non-positive bound."""
        return self.d == 1 or self.C_lb <= 0

    @property
    def witness_ratio(self) -> float:
        return self.B / self.witness.norm


def transfer_element(state: ConstructionState, X) -> MatrixTrigPoly:
    d = as_array(X).shape[0]
    return diag_modulate(X, list(state.alpha[:d]), list(state.beta[:d]))


def certify(
    D: MultiplierDecomposition,
    state: ConstructionState,
    d: int,
    X,
    grid: QuadratureGrid | None = None,
    *,
    witness_tag: str = "",
    rtol: float = TRANSFER_RTOL,
) -> Certificate:
    """
    Certificate for the final mask of `state` at matrix size d.

    Raises:
        ValueError: fewer than d levels, wrong witness size or zero witness
        TransferInequalityViolated: |A - B| exceeds slack + rtol ||X||_1
    """
    X = as_array(X)
    if X.shape != (d, d):
        raise ValueError(f"witness of shape {X.shape} for d={d}")
    if state.level < d:
        raise ValueError(f"state has {state.level} levels, certificate needs {d}")
    norm = trace_norm(X)
    if norm == 0:
        raise ValueError("witness must be nonzero")
    Z = transfer_element(state, X)
    A = h1_matrix_norm(amplified_apply(D, state.coefficients(), Z), grid)
    B = trace_norm(triangular_truncation(X))
    epsilon = float(state.epsilon)
    slack = epsilon * d * d * norm
    if abs(A - B) > slack + rtol * norm:
        raise TransferInequalityViolated(
            f"d={d}: |A - B| = {abs(A - B):.3e} exceeds slack {slack:.3e} (+ {rtol} ||X||)"
        )
    return Certificate(
        d=d,
        epsilon=epsilon,
        A=A,
        B=B,
        slack=slack,
        C_lb=(B - slack) / norm,
        alpha=tuple(state.alpha[:d]),
        beta=tuple(state.beta[:d]),
        mask_intervals=state.mask,
        witness=SchattenMatrix(X),
        witness_tag=witness_tag,
    )


def strategy_witness(strategy: str, d: int) -> tuple[str, np.ndarray]:
    """Fixed witnesses; the "best" strategy goes through estimate_triangular_norms."""
    if strategy == "cauchy":
        return "cauchy", cauchy_witness(d) if d > 1 else elementary(1, 0, 0)
    if strategy == "e12":
        return ("e12", elementary(d, 0, 1)) if d > 1 else ("e11", elementary(1, 0, 0))
    raise ValueError(f"unknown witness strategy {strategy!r}")


@dataclass(frozen=True)
class SweepFailure:
    d: int
    kind: str
    message: str


@dataclass(frozen=True)
class SweepResult:
    certificates: tuple[Certificate, ...]
    failures: tuple[SweepFailure, ...] = field(default_factory=tuple)
    slope: float = float("nan")
    asymptotic_slope: float = float("nan")


def _certify_task(item: tuple[int, str, np.ndarray], D: MultiplierDecomposition, state: ConstructionState, rtol: float):
    d, tag, X = item
    try:
        return certify(D, state, d, X, witness_tag=tag, rtol=rtol), None
    except TransferInequalityViolated as exc:
        return None, SweepFailure(d, "transfer-inequality", str(exc))
    except ValueError as exc:
        return None, SweepFailure(d, "invalid", str(exc))


def sweep(
    D: MultiplierDecomposition,
    state: ConstructionState,
    d_list: list[int],
    witness: str = "best",
    *,
    seed: int = 0,
    restarts: int = 4,
    jobs: int = 1,
    slope_from: int = 2,
    asymptotic_from: int = ASYMPTOTIC_SLOPE_FROM,
    rtol: float = TRANSFER_RTOL,
) -> SweepResult:
    """
    Certificates for every d, in increasing d. Per-d failures are collected
    and the sweep continues. The slope is the least-squares slope of C_lb
    against ln d over the certificates with d >= slope_from; the asymptotic
    slope restricts the fit to d >= asymptotic_from.
    """
    if witness not in WITNESS_STRATEGIES:
        raise ValueError(f"unknown witness strategy {witness!r}")
    ds = sorted(set(d_list))
    if not ds:
        return SweepResult(())
    if witness == "best":
        estimates = estimate_triangular_norms(ds, restarts=restarts, seed=seed, jobs=jobs)
        items = [(e.d, f"best:{e.witness_tag}", e.witness.entries) for e in estimates]
    else:
        items = [(d, *strategy_witness(witness, d)) for d in ds]
    results = run_tasks(functools.partial(_certify_task, D=D, state=state, rtol=rtol), items, jobs)
    certificates = tuple(c for c, _ in results if c is not None)
    failures = tuple(f for _, f in results if f is not None)
    for failure in failures:
        logger.warning("d=%d: %s", failure.d, failure.message)
    return SweepResult(
        certificates, failures,
        _slope_over(certificates, max(slope_from, 2)),
        _slope_over(certificates, max(asymptotic_from, 2)),
    )


def _slope_over(certificates: tuple[Certificate, ...], d_from: int) -> float:
    used = [c for c in certificates if c.d >= d_from]
    return log_slope([c.d for c in used], [c.C_lb for c in used])
