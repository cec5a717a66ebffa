# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled circulation kernels.

Mirrors ``_kernels_py`` operation for operation (same evaluation order,
compiled with FP contraction disabled) so both backends produce
bit-identical results.
"""

from libc.math cimport sqrt

STATUS_CONVERGED = 0
STATUS_BUDGET_EXHAUSTED = 1
STATUS_DIVERGED = 2


def run_recursive_solve(double[:, ::1] weights, double gain, double[::1] inject,
                        double[:, ::1] noise, double tol, int max_circulations,
                        double divergence_cap, double[:, ::1] states,
                        double[::1] rel_changes):
    cdef double x0 = inject[0]
    cdef double x1 = inject[1]
    cdef double x2 = inject[2]
    cdef double x3 = inject[3]
    cdef double xnorm = sqrt(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3)
    cdef bint has_noise = noise.shape[0] > 0
    cdef int k
    cdef double y0, y1, y2, y3, d0, d1, d2, d3
    cdef double dnorm, ynorm, denom, rel
    for k in range(1, max_circulations + 1):
        y0 = gain * (weights[0, 0] * x0 + weights[0, 1] * x1 + weights[0, 2] * x2 + weights[0, 3] * x3)
        y1 = gain * (weights[1, 0] * x0 + weights[1, 1] * x1 + weights[1, 2] * x2 + weights[1, 3] * x3)
        y2 = gain * (weights[2, 0] * x0 + weights[2, 1] * x1 + weights[2, 2] * x2 + weights[2, 3] * x3)
        y3 = gain * (weights[3, 0] * x0 + weights[3, 1] * x1 + weights[3, 2] * x2 + weights[3, 3] * x3)
        if has_noise:
            y0 = y0 + noise[k - 1, 0]
            y1 = y1 + noise[k - 1, 1]
            y2 = y2 + noise[k - 1, 2]
            y3 = y3 + noise[k - 1, 3]
        y0 = y0 + inject[0]
        y1 = y1 + inject[1]
        y2 = y2 + inject[2]
        y3 = y3 + inject[3]
        d0 = y0 - x0
        d1 = y1 - x1
        d2 = y2 - x2
        d3 = y3 - x3
        dnorm = sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3)
        ynorm = sqrt(y0 * y0 + y1 * y1 + y2 * y2 + y3 * y3)
        denom = xnorm if xnorm > 1e-30 else 1e-30
        rel = dnorm / denom
        states[k - 1, 0] = y0
        states[k - 1, 1] = y1
        states[k - 1, 2] = y2
        states[k - 1, 3] = y3
        rel_changes[k - 1] = rel
        if ynorm > divergence_cap:
            return k, STATUS_DIVERGED
        if rel <= tol:
            return k, STATUS_CONVERGED
        x0 = y0
        x1 = y1
        x2 = y2
        x3 = y3
        xnorm = ynorm
    return max_circulations, STATUS_BUDGET_EXHAUSTED


def run_two_circulation(double[:, ::1] weights, double gain, double[::1] first,
                        double[::1] second, double[::1] noise, double[::1] out):
    cdef double y0, y1, y2, y3
    y0 = gain * (weights[0, 0] * first[0] + weights[0, 1] * first[1] + weights[0, 2] * first[2] + weights[0, 3] * first[3])
    y1 = gain * (weights[1, 0] * first[0] + weights[1, 1] * first[1] + weights[1, 2] * first[2] + weights[1, 3] * first[3])
    y2 = gain * (weights[2, 0] * first[0] + weights[2, 1] * first[1] + weights[2, 2] * first[2] + weights[2, 3] * first[3])
    y3 = gain * (weights[3, 0] * first[0] + weights[3, 1] * first[1] + weights[3, 2] * first[2] + weights[3, 3] * first[3])
    if noise.shape[0] > 0:
        y0 = y0 + noise[0]
        y1 = y1 + noise[1]
        y2 = y2 + noise[2]
        y3 = y3 + noise[3]
    out[0] = y0 + second[0]
    out[1] = y1 + second[1]
    out[2] = y2 + second[2]
    out[3] = y3 + second[3]
