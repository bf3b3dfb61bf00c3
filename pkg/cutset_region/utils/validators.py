"""Validation utilities for probability tables and distortion data."""

import numpy as np

from ..config import settings
from ..core.exceptions import InvariantViolationError, NormalizationError, TableSizeExceededError


def validate_table_size(entries: int, cap: int | None = None) -> None:
    """Validate that a dense table fits under the entry cap.

    Args:
        entries: Number of entries the table would hold
        cap: Override for ``settings.max_table_entries``

    Raises:
        TableSizeExceededError: If the table is too large
    """
    cap = settings.max_table_entries if cap is None else cap
    if entries > cap:
        raise TableSizeExceededError(
            f"Table with {entries} entries exceeds the cap of {cap}",
            details={"entries": entries, "cap": cap},
        )


def validate_pmf_table(table: np.ndarray, tol: float | None = None) -> None:
    """Validate a joint probability table.

    Args:
        table: Dense array of probabilities
        tol: Allowed deviation of the total mass from 1

    Raises:
        NormalizationError: If an entry is negative or the mass is not 1
    """
    tol = settings.normalization_tol if tol is None else tol
    if not np.all(np.isfinite(table)):
        raise NormalizationError("Probability table contains non-finite entries")
    if np.any(table < 0):
        flat = int(np.flatnonzero(table.ravel() < 0)[0])
        raise NormalizationError(
            f"Probability table has a negative entry at position {flat}",
            details={"position": flat, "value": float(table.ravel()[flat])},
        )
    total = float(table.sum())
    if abs(total - 1.0) > tol:
        raise NormalizationError(
            f"Probability table sums to {total!r}, expected 1",
            details={"sum": total},
        )


def validate_conditional_table(table: np.ndarray, input_ndim: int, tol: float | None = None) -> None:
    """Validate a conditional table whose leading ``input_ndim`` axes are the conditions.

    Each conditional slice (one input configuration, flattened row-major) must be
    nonnegative and sum to 1.

    Raises:
        NormalizationError: Naming the first offending row and its sum
    """
    tol = settings.normalization_tol if tol is None else tol
    rows = table.reshape(int(np.prod(table.shape[:input_ndim], dtype=np.int64)), -1)
    if not np.all(np.isfinite(rows)):
        raise NormalizationError("Channel table contains non-finite entries")
    negative = np.flatnonzero((rows < 0).any(axis=1))
    if negative.size:
        row = int(negative[0])
        raise NormalizationError(
            f"Channel row {row} has a negative entry",
            details={"row": row},
        )
    sums = rows.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        row = int(bad[0])
        raise NormalizationError(
            f"Channel row {row} sums to {float(sums[row])!r}, expected 1",
            details={"row": row, "sum": float(sums[row])},
        )


def validate_distortion_matrix(matrix: np.ndarray, party: int) -> None:
    """Validate a distortion matrix: square, nonnegative, zero diagonal.

    Raises:
        InvariantViolationError: Citing the violated condition
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvariantViolationError(
            f"Distortion matrix of party {party} must be square, got shape {matrix.shape}",
            details={"party": party, "shape": list(matrix.shape)},
        )
    if np.any(matrix < 0):
        raise InvariantViolationError(
            f"Distortion matrix of party {party} has negative entries",
            details={"party": party},
        )
    diagonal = np.diag(matrix)
    if np.any(diagonal != 0):
        symbol = int(np.flatnonzero(diagonal)[0])
        raise InvariantViolationError(
            f"Distortion matrix of party {party} violates Δ(m,m)=0 at symbol {symbol}",
            details={"party": party, "symbol": symbol, "value": float(diagonal[symbol])},
        )
