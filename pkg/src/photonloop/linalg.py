"""Dense real linear algebra: reference oracles and the accuracy metric.

Everything downstream of the loop simulator is validated against this
module, so the inversion here is a plain partial-pivoting elimination
rather than a wrapper around a black-box solver.
"""

import numpy as np

from .errors import ShapeMismatch, SingularMatrix, ZeroReference

PIVOT_THRESHOLD = 1e-12


def as_matrix(values, name="matrix"):
    """Coerce to a 2-D float64 array, rejecting empty or non-finite input."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be 2-D with at least one row and column, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(values, name="vector"):
    """Coerce to a 1-D float64 array, rejecting empty or non-finite input."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ShapeMismatch(f"{name} must be 1-D and non-empty, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError(f"{name} contains non-finite entries")
    return v


def frobenius_norm(m):
    m = np.asarray(m, dtype=np.float64)
    return float(np.sqrt((m * m).sum()))


def spectral_norm(m):
    """Largest singular value; reported alongside Frobenius in diagnostics."""
    return float(np.linalg.norm(np.atleast_2d(np.asarray(m, dtype=np.float64)), 2))


def matmul(a, b):
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matadd(a, b, sign=1):
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot add {a.shape} and {b.shape}")
    return a + sign * b


def dense_invert(a):
    """Invert by Gauss-Jordan elimination with partial (row) pivoting.

    Raises SingularMatrix when the best available pivot magnitude drops
    below ``PIVOT_THRESHOLD``.
    """
    a = as_matrix(a)
    n, ncols = a.shape
    if n != ncols:
        raise ShapeMismatch(f"inversion needs a square matrix, got {a.shape}")
    work = a.copy()
    inv = np.eye(n)
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        pivot = work[pivot_row, col]
        if abs(pivot) < PIVOT_THRESHOLD:
            raise SingularMatrix(f"pivot {pivot:.3e} below {PIVOT_THRESHOLD:.0e} in column {col}")
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
            inv[[col, pivot_row]] = inv[[pivot_row, col]]
        scale = 1.0 / pivot
        work[col] *= scale
        inv[col] *= scale
        for row in range(n):
            if row != col and work[row, col] != 0.0:
                factor = work[row, col]
                work[row] -= factor * work[col]
                inv[row] -= factor * inv[col]
    return inv


def dense_solve(a, rhs):
    """Direct solve via ``dense_invert``; oracle-side convenience."""
    rhs = as_vector(rhs, "rhs")
    inv = dense_invert(a)
    if inv.shape[1] != rhs.shape[0]:
        raise ShapeMismatch(f"rhs length {rhs.shape[0]} does not match {inv.shape}")
    return inv @ rhs


def spectral_radius_estimate(m, iters=50):
    """Estimate the spectral radius as ||M^k||_2^(1/k) with k = iters.

    The operator 2-norm of powers is exact for normal matrices at any k
    and an upper bound that tightens with larger ``iters`` otherwise, so
    rho_hat < 1 certifies convergence of the recirculation.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"spectral radius needs a square matrix, got {m.shape}")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    power = m.copy()
    log_scale = 0.0
    for _ in range(iters - 1):
        scale = frobenius_norm(power)
        if scale == 0.0:
            return 0.0
        # Rescale to dodge overflow/underflow on long power chains.
        if scale > 1e100 or scale < 1e-100:
            power /= scale
            log_scale += np.log(scale)
        power = power @ m
    norm = spectral_norm(power)
    if norm == 0.0:
        return 0.0
    return float(np.exp((np.log(norm) + log_scale) / iters))


def accuracy_percent(measured, ideal, norm="fro"):
    """Relative-error accuracy, as a percentage.

    Computes (1 - ||measured - ideal|| / ||ideal||) * 100 with the
    Frobenius norm by default; ``norm="spectral"`` uses the 2-norm.
    """
    measured = np.asarray(measured, dtype=np.float64)
    ideal = np.asarray(ideal, dtype=np.float64)
    if measured.shape != ideal.shape:
        raise ShapeMismatch(f"shapes differ: {measured.shape} vs {ideal.shape}")
    norm_fn = {"fro": frobenius_norm, "spectral": spectral_norm}[norm]
    ref = norm_fn(ideal)
    if ref == 0.0:
        raise ZeroReference("reference has zero norm")
    return float((1.0 - norm_fn(measured - ideal) / ref) * 100.0)
