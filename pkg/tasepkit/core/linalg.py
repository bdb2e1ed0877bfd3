"""Determinants in both arithmetic modes.

Exact mode uses fraction-free Bareiss elimination (every intermediate
division is exact); float mode uses an LU factorization with partial
pivoting from scipy.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import lu_factor

from .params import ModelParams, Scalar

logger = logging.getLogger(__name__)


def bareiss_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square matrix of Fractions (or ints)."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(v) for v in row] for row in matrix]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def lu_det(matrix) -> float:
    """Float determinant via LU with partial pivoting."""
    arr = np.asarray(matrix, dtype=float)
    if arr.size == 0:
        return 1.0
    lu, piv = lu_factor(arr, check_finite=False)
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def det(matrix: Sequence[Sequence[Scalar]], params: ModelParams) -> Scalar:
    """Determinant in the arithmetic mode of ``params``."""
    if params.exact:
        return bareiss_det(matrix)  # type: ignore[arg-type]
    return lu_det(matrix)
