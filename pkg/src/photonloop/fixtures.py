"""Built-in demonstration operands for the CLI and test suites."""

import numpy as np

# Near-identity symmetric operand; all encoded loop weights stay small.
DEMO1 = np.array([
    [0.92, -0.07, -0.06, -0.06],
    [-0.07, 0.94, -0.05, -0.04],
    [-0.06, -0.05, 0.97, -0.02],
    [-0.06, -0.04, -0.02, 0.99],
])

# Banded (tridiagonal, non-symmetric) operand.
DEMO2 = np.array([
    [0.98, -0.26, 0.0, 0.0],
    [-0.19, 0.98, -0.25, 0.0],
    [0.0, -0.2, 0.98, -0.24],
    [0.0, 0.0, -0.21, 0.98],
])

DEMO_MATRICES = {"demo1": DEMO1, "demo2": DEMO2, "identity": np.eye(4)}


def fixture_matrix(name):
    """Copy of a named built-in operand."""
    try:
        return DEMO_MATRICES[name].copy()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(DEMO_MATRICES)}") from None


def random_diagonally_dominant(n, rng, diag=1.0, spread=0.05):
    """Symmetric test matrix with unit-scale diagonal and small couplings."""
    off = rng.uniform(-spread, spread, (n, n))
    off = (off + off.T) / 2.0
    np.fill_diagonal(off, 0.0)
    return np.eye(n) * diag + off
