"""Pure-Python circulation kernels (fallback for the compiled extension).

The arithmetic here is written so every floating-point operation happens
in the same order as in the compiled twin (``_kernels.pyx``): results are
bit-identical across backends, which the test suite asserts.
"""

import math

STATUS_CONVERGED = 0
STATUS_BUDGET_EXHAUSTED = 1
STATUS_DIVERGED = 2


def run_recursive_solve(weights, gain, inject, noise, tol, max_circulations,
                        divergence_cap, states, rel_changes):
    """Iterate x <- gain*W@x + noise + inject until the relative change
    drops to ``tol``, the norm passes ``divergence_cap``, or the budget runs out.

    ``noise`` is a pre-drawn (max_circulations, 4) table (row k-1 is applied
    at circulation k) or a zero-row array for the noiseless path. Outputs are
    written into ``states`` and ``rel_changes``; returns ``(k_used, status)``.
    """
    w0 = weights[:, 0]
    w1 = weights[:, 1]
    w2 = weights[:, 2]
    w3 = weights[:, 3]
    has_noise = noise.shape[0] > 0
    x = inject.copy()
    xnorm = math.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3])
    for k in range(1, max_circulations + 1):
        y = gain * (w0 * x[0] + w1 * x[1] + w2 * x[2] + w3 * x[3])
        if has_noise:
            y = y + noise[k - 1]
        y = y + inject
        d0 = y[0] - x[0]
        d1 = y[1] - x[1]
        d2 = y[2] - x[2]
        d3 = y[3] - x[3]
        dnorm = math.sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3)
        ynorm = math.sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3])
        denom = xnorm if xnorm > 1e-30 else 1e-30
        rel = dnorm / denom
        states[k - 1] = y
        rel_changes[k - 1] = rel
        if ynorm > divergence_cap:
            return k, STATUS_DIVERGED
        if rel <= tol:
            return k, STATUS_CONVERGED
        x = y
        xnorm = ynorm
    return max_circulations, STATUS_BUDGET_EXHAUSTED


def run_two_circulation(weights, gain, first, second, noise, out):
    """Single bank pass on ``first`` plus injection of ``second``.

    out = gain*W@first + noise + second, written in place.
    """
    y = gain * (weights[:, 0] * first[0] + weights[:, 1] * first[1]
                + weights[:, 2] * first[2] + weights[:, 3] * first[3])
    if noise.shape[0] > 0:
        y = y + noise
    y = y + second
    out[:] = y
