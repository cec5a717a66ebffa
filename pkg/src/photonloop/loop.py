"""Circulation protocols on the simulated loop.

Multi-circulation inversion (stationary iteration with a re-injected
weighted unit vector each round trip) and the two-circulation add,
subtract and multiply configurations.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ._backend import kernels
from .errors import Diverged, NoConvergentOmega, NotConverged, NotEncodable
from .hardware import (
    LOOP_STREAM,
    TILE_SIZE,
    NoiseConfig,
    derive_rng,
    detect,
    encodable_violations,
    encode_weight_bank,
)
from .linalg import as_matrix, spectral_radius_estimate

DIVERGENCE_CAP = 1e6
DEFAULT_LOOP_TIME = 130e-9
RADIUS_ITERS = 50

_EMPTY_NOISE = np.zeros((0, TILE_SIZE))
_EMPTY_ROW = np.zeros((0,))


@dataclass(frozen=True)
class LoopConfig:
    """Loop operating point.

    omega is the relaxation factor of the inversion iteration (None means
    pick automatically per matrix). tap_ratio is the output splitter tap,
    retained for power-budget reporting; its loss is part of the calibrated
    loop gain. tol is the relative-change stop threshold.
    """

    omega: float | None = None
    tap_ratio: float = 0.5
    loop_time: float = DEFAULT_LOOP_TIME
    tol: float = 1e-4
    max_circulations: int = 1000
    detection: str = "coherent"
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if self.omega is not None and not self.omega > 0:
            raise ValueError("omega must be positive")
        if not 0 < self.tap_ratio < 1:
            raise ValueError("tap_ratio must be in (0, 1)")
        if not 0 < self.tol < 1:
            raise ValueError("tol must be in (0, 1)")
        if self.max_circulations < 1:
            raise ValueError("max_circulations must be >= 1")
        if self.loop_time <= 0:
            raise ValueError("loop_time must be positive")
        if self.detection not in ("coherent", "direct"):
            raise ValueError("detection must be 'coherent' or 'direct'")


@dataclass
class IterationTrace:
    """Per-circulation history of one column solve."""

    outputs: np.ndarray        # (circulations_used, 4)
    rel_changes: np.ndarray    # (circulations_used,)
    circulations_used: int
    converged: bool
    omega: float


def check_encodable(m):
    """Violations list for entries the passive bank cannot realize (empty = pass)."""
    return encodable_violations(as_matrix(m))


def select_omega(a, iters=RADIUS_ITERS):
    """Relaxation factor making the encoded loop matrix convergent.

    Prefers omega = 1 in the near-identity regime; otherwise starts from
    2 / (inf-norm + 1-norm) and halves until the estimated radius drops
    below one and the encoded matrix fits the bank.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("omega selection needs a square matrix")
    eye = np.eye(a.shape[0])
    m = eye - a
    if spectral_radius_estimate(m, iters) < 0.95 and not encodable_violations(m):
        return 1.0
    norm_inf = float(np.abs(a).sum(axis=1).max())
    norm_one = float(np.abs(a).sum(axis=0).max())
    omega = 2.0 / (norm_inf + norm_one)
    for _ in range(41):
        m = eye - omega * a
        if spectral_radius_estimate(m, iters) < 1.0 and not encodable_violations(m):
            return omega
        omega /= 2.0
    raise NoConvergentOmega(
        "no omega found in 40 halvings; the spectrum likely straddles zero"
    )


def _ase_table(noise, rows, stream):
    """(rows, 4) noise table for a multi-circulation run, or (0, 4) when off."""
    if noise.sigma_ase <= 0.0:
        return _EMPTY_NOISE
    rng = derive_rng(noise.rng_seed, LOOP_STREAM, *stream)
    return rng.normal(0.0, noise.sigma_ase, (rows, TILE_SIZE))


def _ase_row(noise, stream):
    """Single-circulation noise vector, or (0,) when off."""
    if noise.sigma_ase <= 0.0:
        return _EMPTY_ROW
    rng = derive_rng(noise.rng_seed, LOOP_STREAM, *stream)
    return rng.normal(0.0, noise.sigma_ase, TILE_SIZE)


def richardson_invert_column(bank, column, cfg, stream=()):
    """Multi-circulation solve for one column of the inverse.

    The bank must already encode I - omega*A for cfg.omega. Injects
    omega * e_column every circulation and stops on the relative-change
    threshold. Returns the detected output and the full trace; raises
    NotConverged or Diverged (trace attached) otherwise.
    """
    if cfg.omega is None:
        raise ValueError("cfg.omega must be resolved before a column solve")
    if not 0 <= column < TILE_SIZE:
        raise ValueError(f"column must be in [0, {TILE_SIZE})")
    inject = np.zeros(TILE_SIZE)
    inject[column] = cfg.omega
    noise_table = _ase_table(cfg.noise, cfg.max_circulations, (*stream, column))
    states = np.empty((cfg.max_circulations, TILE_SIZE))
    rels = np.empty(cfg.max_circulations)
    used, status = kernels.run_recursive_solve(
        np.ascontiguousarray(bank.realized),
        1.0 + cfg.noise.gain_mismatch_delta,
        inject, noise_table,
        cfg.tol, cfg.max_circulations, DIVERGENCE_CAP, states, rels,
    )
    trace = IterationTrace(
        outputs=states[:used].copy(),
        rel_changes=rels[:used].copy(),
        circulations_used=used,
        converged=status == kernels.STATUS_CONVERGED,
        omega=cfg.omega,
    )
    if status == kernels.STATUS_DIVERGED:
        raise Diverged(f"norm passed {DIVERGENCE_CAP:.0e} at circulation {used}", trace)
    if status == kernels.STATUS_BUDGET_EXHAUSTED:
        raise NotConverged(
            f"no convergence within {cfg.max_circulations} circulations "
            f"(last relative change {trace.rel_changes[-1]:.3e})",
            trace,
        )
    out = detect(trace.outputs[-1], cfg.detection, cfg.noise.sigma_ase)
    return out, trace


def invert_matrix(a, cfg, cals=None, strict=True, stream=()):
    """Invert a 4x4 matrix column by column on the loop.

    Columns use independent seed-derived noise streams (keyed by column
    index) so sequential and concurrent execution agree bit for bit. With
    ``strict=False`` a column that runs out of circulations contributes its
    final iterate instead of raising; divergence always raises.
    """
    a = as_matrix(a)
    if a.shape != (TILE_SIZE, TILE_SIZE):
        raise ValueError(f"loop inversion handles {TILE_SIZE}x{TILE_SIZE} operands, got {a.shape}")
    omega = cfg.omega if cfg.omega is not None else select_omega(a)
    cfg = replace(cfg, omega=omega)
    m = np.eye(TILE_SIZE) - omega * a
    violations = check_encodable(m)
    if violations:
        raise NotEncodable(violations)
    bank = encode_weight_bank(m, cals, cfg.noise, stream=stream)
    result = np.zeros((TILE_SIZE, TILE_SIZE))
    traces = []
    for j in range(TILE_SIZE):
        try:
            column, trace = richardson_invert_column(bank, j, cfg, stream=stream)
        except NotConverged as err:
            if strict:
                raise NotConverged(f"column {j}: {err}", err.trace) from err
            trace = err.trace
            column = detect(trace.outputs[-1], cfg.detection, cfg.noise.sigma_ase)
        except Diverged as err:
            raise Diverged(f"column {j}: {err}", err.trace) from err
        result[:, j] = column
        traces.append(trace)
    return result, traces


def _two_circulation_columns(bank, injected, cfg, stream):
    """Run the two-circulation protocol for each injected column."""
    weights = np.ascontiguousarray(bank.realized)
    gain = 1.0 + cfg.noise.gain_mismatch_delta
    result = np.zeros((TILE_SIZE, TILE_SIZE))
    out = np.zeros(TILE_SIZE)
    for j, (first, second) in enumerate(injected):
        ase = _ase_row(cfg.noise, (*stream, j))
        kernels.run_two_circulation(weights, gain, first, second, ase, out)
        result[:, j] = detect(out, cfg.detection, cfg.noise.sigma_ase)
    return result


def loop_add(bank, b, sign=1, cfg=None, stream=()):
    """A +/- B in two circulations per column.

    Circulation one injects a unit vector to pull one column of the
    bank-encoded operand; circulation two injects the matching column of B
    (phase-flipped for subtraction) on top of it.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    cfg = cfg or LoopConfig()
    b = as_matrix(b, "added operand")
    if b.shape != (TILE_SIZE, TILE_SIZE):
        raise ValueError(f"operand must be {TILE_SIZE}x{TILE_SIZE}, got {b.shape}")
    eye = np.eye(TILE_SIZE)
    injected = [(eye[:, j].copy(), sign * b[:, j]) for j in range(TILE_SIZE)]
    return _two_circulation_columns(bank, injected, cfg, stream)


def loop_multiply(bank, b, cfg=None, stream=()):
    """A @ B in two circulations per column: columns of B are injected and
    read back after one pass through the bank."""
    cfg = cfg or LoopConfig()
    b = as_matrix(b, "multiplied operand")
    if b.shape != (TILE_SIZE, TILE_SIZE):
        raise ValueError(f"operand must be {TILE_SIZE}x{TILE_SIZE}, got {b.shape}")
    zero = np.zeros(TILE_SIZE)
    injected = [(np.ascontiguousarray(b[:, j]), zero) for j in range(TILE_SIZE)]
    return _two_circulation_columns(bank, injected, cfg, stream)


def throughput(trace, loop_time=DEFAULT_LOOP_TIME):
    """Operations per second implied by a circulation count and loop time."""
    count = trace.circulations_used if isinstance(trace, IterationTrace) else int(trace)
    if count < 1:
        raise ValueError("circulation count must be >= 1")
    if loop_time <= 0:
        raise ValueError("loop_time must be positive")
    return 1.0 / (count * loop_time)
