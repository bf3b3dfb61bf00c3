"""Dense phase-1 simplex for small linear feasibility problems."""

import logging

import numpy as np

from ..config import settings
from ..core.exceptions import DimensionMismatchError, SolverError

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-12


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def find_feasible_point(
    A: np.ndarray,
    b: np.ndarray,
    tol: float | None = None,
    max_iterations: int | None = None,
) -> np.ndarray | None:
    """Find ``x >= 0`` with ``A @ x = b`` or prove there is none.

    Minimizes the sum of artificial variables with Bland's smallest-index rule,
    so the method terminates on degenerate problems. The returned point is a
    basic solution: at most ``A.shape[0]`` entries are nonzero.

    Returns:
        The feasible point, or ``None`` when the phase-1 optimum exceeds ``tol``

    Raises:
        SolverError: If the iteration limit is reached
    """
    tol = settings.feasibility_tol if tol is None else tol
    max_iterations = settings.simplex_max_iterations if max_iterations is None else max_iterations
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).ravel()
    if A.ndim != 2 or A.shape[0] != b.size:
        raise DimensionMismatchError(f"Constraint matrix {A.shape} does not match right-hand side of length {b.size}")
    rows, cols = A.shape

    negative = b < 0
    A[negative] *= -1.0
    b[negative] *= -1.0

    tableau = np.zeros((rows + 1, cols + rows + 1))
    tableau[:rows, :cols] = A
    tableau[:rows, cols : cols + rows] = np.eye(rows)
    tableau[:rows, -1] = b
    tableau[-1, :cols] = -A.sum(axis=0)
    tableau[-1, -1] = -b.sum()
    basis = list(range(cols, cols + rows))

    for iteration in range(max_iterations):
        entering = np.flatnonzero(tableau[-1, :-1] < -_PIVOT_TOL)
        if not entering.size:
            break
        col = int(entering[0])
        column = tableau[:rows, col]
        eligible = np.flatnonzero(column > _PIVOT_TOL)
        if not eligible.size:
            # the phase-1 objective is bounded below by zero
            raise SolverError("Phase-1 simplex found an unbounded direction", details={"column": col})
        ratios = tableau[eligible, -1] / column[eligible]
        best = ratios.min()
        tied = eligible[ratios <= best + _PIVOT_TOL]
        row = int(min(tied, key=basis.__getitem__))
        _pivot(tableau, row, col)
        basis[row] = col
    else:
        raise SolverError(
            f"Phase-1 simplex did not converge in {max_iterations} iterations",
            details={"iterations": max_iterations, "rows": rows, "cols": cols},
        )

    infeasibility = -tableau[-1, -1]
    logger.debug(f"Phase-1 simplex stopped after {iteration} pivots, infeasibility {infeasibility:.3e}")
    if infeasibility > tol:
        return None
    x = np.zeros(cols)
    for row, var in enumerate(basis):
        if var < cols:
            x[var] = max(tableau[row, -1], 0.0)
    return x
