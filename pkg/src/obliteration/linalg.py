"""Row reduction over any field whose elements support ``is_zero()``.

Numeric elements (anything with ``__abs__`` that is not an exact rational)
are pivoted by largest magnitude; exact fields take the first nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .polyring import is_zero

__all__ = ["rref", "rank", "kernel_basis"]


def _pick_pivot(rows: list[list[Any]], start: int, col: int) -> int | None:
    best = None
    best_mag = None
    for r in range(start, len(rows)):
        v = rows[r][col]
        if is_zero(v):
            continue
        if isinstance(v, (int, Fraction)) or not hasattr(v, "__abs__") or not hasattr(v, "value"):
            return r
        mag = abs(v)
        if best is None or mag > best_mag:
            best, best_mag = r, mag
    return best


def rref(matrix: Sequence[Sequence[Any]]) -> tuple[list[list[Any]], list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    rows = [list(r) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        piv = _pick_pivot(rows, r, c)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if isinstance(lead, int):
            lead = Fraction(lead)
        rows[r] = [v / lead for v in rows[r]]
        rows[r][c] = rows[r][c] * 0 + 1
        for i in range(len(rows)):
            if i != r and not is_zero(rows[i][c]):
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
                rows[i][c] = rows[i][c] * 0
        pivots.append(c)
        r += 1
    return rows[: len(pivots)], pivots


def rank(matrix: Sequence[Sequence[Any]]) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix: Sequence[Sequence[Any]], ncols: int, one: Any = 1, zero: Any = 0):
    """Basis of the right kernel as an ``ncols x (ncols - rank)`` matrix whose
    columns span it, plus the list of free columns."""
    red, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = [[zero for _ in free] for _ in range(ncols)]
    for k, f in enumerate(free):
        basis[f][k] = one
        for row, p in zip(red, pivots):
            basis[p][k] = -row[f]
    return basis, free
