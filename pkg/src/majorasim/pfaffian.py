"""Pfaffian of a real antisymmetric matrix.

Parlett-Reid style elimination with partial pivoting (the L T L^T scheme):
repeated rank-2 updates reduce the matrix to 2x2 blocks whose off-diagonal
entries multiply into the Pfaffian, with a sign flip per row/column swap.
O(n^3), numerically stable for the dims used here (<= a few hundred), and
Pf(A)^2 = det(A).
"""

from __future__ import annotations

import numpy as np

from .backend import maybe_jit


def _pfaffian_ltl(a: np.ndarray) -> float:
    # destroys its argument
    n = a.shape[0]
    value = 1.0
    for k in range(0, n - 1, 2):
        pivot_row = k + 1 + np.argmax(np.abs(a[k + 1 :, k]))
        if pivot_row != k + 1:
            for col in range(k, n):
                tmp = a[k + 1, col]
                a[k + 1, col] = a[pivot_row, col]
                a[pivot_row, col] = tmp
            for row in range(k, n):
                tmp = a[row, k + 1]
                a[row, k + 1] = a[row, pivot_row]
                a[row, pivot_row] = tmp
            value = -value
        if a[k + 1, k] == 0.0:
            return 0.0
        value *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2 :] / a[k, k + 1]
            col = a[k + 2 :, k + 1]
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return value


_pfaffian_kernel = maybe_jit(_pfaffian_ltl)


def pfaffian(a: np.ndarray) -> float:
    """Pfaffian of a real antisymmetric matrix of even dimension.

    The input is antisymmetrized defensively; small symmetric contamination
    (integrator roundoff) therefore cannot bias the sign.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n % 2 != 0:
        raise ValueError(f"Pfaffian needs even dimension, got {n}")
    if n == 0:
        return 1.0
    work = np.ascontiguousarray((a - a.T) / 2.0)
    return float(_pfaffian_kernel(work))
