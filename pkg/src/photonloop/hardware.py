"""Physical model of the weight bank and loop hardware.

Covers the interferometer transmission curve, calibration lookup with DAC
voltage quantization, per-element static encoding error, the lumped loop
gain factor, amplifier noise added per circulation, and detection.
"""

import json
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .errors import (
    NotEncodable,
    SignAmbiguityWarning,
    UnreachableWeight,
    VoltageOutOfRange,
)
from .linalg import as_matrix, as_vector

TILE_SIZE = 4

# Stream tags keep bank-encoding draws independent of circulation draws.
BANK_STREAM = 1
LOOP_STREAM = 2

_EMPTY_NOISE_ROW = np.zeros((0,))


def derive_rng(seed, *key):
    """Deterministic, order-independent RNG stream for (seed, key...)."""
    return np.random.default_rng([int(seed), *[int(k) for k in key]])


@dataclass(frozen=True)
class MZICalibration:
    """Transmission model of one thermo-optically tuned interferometer.

    Amplitude transmission is cos((phase_offset + volt_to_phase * V^2) / 2);
    the heater phase grows with electrical power, hence with V^2. Negative
    weights are reached by driving the phase past the transmission null.
    """

    phase_offset: float = 0.0
    volt_to_phase: float = 2.0 * np.pi / 1296.0  # full [-1, 1] span over the sweep
    v_max: float = 36.0
    v_step: float = 0.0437

    def __post_init__(self):
        if self.v_step <= 0:
            raise ValueError("v_step must be positive")
        if self.v_max <= self.v_step:
            raise ValueError("v_max must exceed v_step")
        if self.volt_to_phase <= 0:
            raise ValueError("volt_to_phase must be positive")


def default_calibration():
    return MZICalibration()


def default_calibration_grid(cal=None):
    """4x4 grid of identical calibrations (element variation via files)."""
    cal = cal or default_calibration()
    return [[cal for _ in range(TILE_SIZE)] for _ in range(TILE_SIZE)]


def load_calibration_file(path):
    """Read a 4x4 calibration grid from a JSON array of 16 objects.

    Each object carries row, col (0-based), phase_offset_rad,
    volt_to_phase_rad_per_V2, v_max_V and v_step_V.
    """
    with open(path, encoding="utf-8") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list) or len(entries) != TILE_SIZE * TILE_SIZE:
        raise ValueError(f"calibration file must hold exactly {TILE_SIZE * TILE_SIZE} entries")
    grid = [[None] * TILE_SIZE for _ in range(TILE_SIZE)]
    for entry in entries:
        row, col = int(entry["row"]), int(entry["col"])
        if not (0 <= row < TILE_SIZE and 0 <= col < TILE_SIZE):
            raise ValueError(f"calibration indices ({row}, {col}) out of range")
        if grid[row][col] is not None:
            raise ValueError(f"duplicate calibration for element ({row}, {col})")
        grid[row][col] = MZICalibration(
            phase_offset=float(entry["phase_offset_rad"]),
            volt_to_phase=float(entry["volt_to_phase_rad_per_V2"]),
            v_max=float(entry["v_max_V"]),
            v_step=float(entry["v_step_V"]),
        )
    return grid


def transmission(cal, volts):
    """Amplitude transmission at a drive voltage; |t| <= 1 always."""
    if volts < 0.0 or volts > cal.v_max:
        raise VoltageOutOfRange(f"{volts:.4f} V outside [0, {cal.v_max}] V")
    return float(np.cos((cal.phase_offset + cal.volt_to_phase * volts * volts) / 2.0))


@lru_cache(maxsize=64)
def voltage_grid(cal):
    """All DAC-reachable voltages and their transmissions, cached per calibration."""
    count = int(np.floor(cal.v_max / cal.v_step)) + 1
    volts = np.arange(count) * cal.v_step
    phases = cal.phase_offset + cal.volt_to_phase * volts * volts
    return volts, np.cos(phases / 2.0)


@lru_cache(maxsize=64)
def quantization_bound(cal):
    """Worst-case |realized - target| from voltage snapping alone.

    max |dt/dV| * v_step / 2, with the slope maximized on a dense sweep.
    """
    volts = np.linspace(0.0, cal.v_max, 20001)
    phases = cal.phase_offset + cal.volt_to_phase * volts * volts
    slope = np.abs(np.sin(phases / 2.0)) * cal.volt_to_phase * volts
    return float(slope.max() * cal.v_step / 2.0)


def voltage_for_weight(cal, weight, quantized=True):
    """Drive voltage realizing ``weight``, snapped to the DAC grid.

    With ``quantized=False`` the continuous-voltage solution is returned
    (the idealized, infinitely fine DAC).
    """
    if abs(weight) > 1.0:
        raise UnreachableWeight(f"|{weight:.6g}| exceeds unit transmission")
    if quantized:
        volts, trans = voltage_grid(cal)
        idx = int(np.abs(trans - weight).argmin())
        residual = abs(float(trans[idx]) - weight)
        if residual > 10.0 * quantization_bound(cal):
            raise UnreachableWeight(
                f"best grid residual {residual:.3e} for weight {weight:.6g}"
            )
        return float(volts[idx])
    phase = 2.0 * np.arccos(weight)
    if phase < cal.phase_offset:
        raise UnreachableWeight(f"weight {weight:.6g} below the phase-offset ceiling")
    volts = float(np.sqrt((phase - cal.phase_offset) / cal.volt_to_phase))
    if volts > cal.v_max:
        raise UnreachableWeight(f"weight {weight:.6g} needs {volts:.2f} V > {cal.v_max} V")
    return volts


@dataclass(frozen=True)
class NoiseConfig:
    """Hardware imperfection knobs.

    sigma_weight: static per-element encoding error (std of a Gaussian
        added to each realized weight).
    sigma_ase: amplitude noise std added per circulation by the amplifier.
    gain_mismatch_delta: residual loop round-trip gain is (1 + delta).
    quantize: snap drive voltages to the DAC grid; False models an
        infinitely fine DAC (the ideal limit).
    """

    sigma_weight: float = 0.0
    sigma_ase: float = 0.0
    gain_mismatch_delta: float = 0.0
    rng_seed: int = 0
    quantize: bool = True

    def __post_init__(self):
        if self.sigma_weight < 0 or self.sigma_ase < 0:
            raise ValueError("noise stds must be non-negative")
        if not abs(self.gain_mismatch_delta) < 1:
            raise ValueError("|gain_mismatch_delta| must be < 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")

    @classmethod
    def ideal(cls, rng_seed=0):
        """No quantization, no static error, no loop noise, unit gain."""
        return cls(0.0, 0.0, 0.0, rng_seed, quantize=False)

    @property
    def is_ideal(self):
        return (self.sigma_weight == 0.0 and self.sigma_ase == 0.0
                and self.gain_mismatch_delta == 0.0 and not self.quantize)


@dataclass(frozen=True)
class WeightBank:
    """A 4x4 matrix as loaded into the interferometer array."""

    target: np.ndarray
    realized: np.ndarray
    voltages: np.ndarray

    def __post_init__(self):
        for name in ("target", "realized", "voltages"):
            arr = getattr(self, name)
            if arr.shape != (TILE_SIZE, TILE_SIZE):
                raise ValueError(f"{name} must be {TILE_SIZE}x{TILE_SIZE}")
        if np.abs(self.target).max() > 1.0 or np.abs(self.realized).max() > 1.0:
            raise ValueError("bank weights must stay within [-1, 1]")

    @property
    def size(self):
        return TILE_SIZE


def encodable_violations(m):
    """(row, col, value) triples where |entry| > 1."""
    m = np.asarray(m, dtype=np.float64)
    rows, cols = np.nonzero(np.abs(m) > 1.0)
    return [(int(r), int(c), float(m[r, c])) for r, c in zip(rows, cols)]


def encode_weight_bank(target, cals=None, noise=None, stream=()):
    """Load a 4x4 matrix into the bank through the calibration lookup.

    Each element's voltage comes from its own calibration curve; the
    realized weight is the transmission at that (quantized) voltage plus a
    seeded Gaussian static error, clamped to the passive range.
    """
    target = as_matrix(target, "target")
    if target.shape != (TILE_SIZE, TILE_SIZE):
        raise ValueError(f"weight bank holds {TILE_SIZE}x{TILE_SIZE} matrices, got {target.shape}")
    violations = encodable_violations(target)
    if violations:
        raise NotEncodable(violations)
    if cals is None:
        cals = default_calibration_grid()
    elif isinstance(cals, MZICalibration):
        cals = default_calibration_grid(cals)
    noise = noise or NoiseConfig()

    voltages = np.zeros((TILE_SIZE, TILE_SIZE))
    realized = np.zeros((TILE_SIZE, TILE_SIZE))
    for i in range(TILE_SIZE):
        for j in range(TILE_SIZE):
            volts = voltage_for_weight(cals[i][j], target[i, j], quantized=noise.quantize)
            voltages[i, j] = volts
            if noise.quantize:
                realized[i, j] = transmission(cals[i][j], volts)
            else:
                # infinitely fine DAC: the lookup inverts exactly, so skip
                # the arccos/cos round trip and its float dirt
                realized[i, j] = target[i, j]
    if noise.sigma_weight > 0.0:
        rng = derive_rng(noise.rng_seed, BANK_STREAM, *stream)
        realized = realized + rng.normal(0.0, noise.sigma_weight, (TILE_SIZE, TILE_SIZE))
    realized = np.clip(realized, -1.0, 1.0)
    return WeightBank(target=target.copy(), realized=realized, voltages=voltages)


def apply_loop_transfer(bank, x, noise=None, rng=None):
    """One pass through the loop: y = (1 + delta) * W @ x + ase_noise."""
    x = as_vector(x, "input")
    if x.shape[0] != TILE_SIZE:
        raise ValueError(f"loop carries {TILE_SIZE} channels, got {x.shape[0]}")
    noise = noise or NoiseConfig()
    if noise.sigma_ase > 0.0:
        if rng is None:
            raise ValueError("sigma_ase > 0 requires an explicit rng stream")
        ase = rng.normal(0.0, noise.sigma_ase, TILE_SIZE)
    else:
        ase = _EMPTY_NOISE_ROW
    out = np.zeros(TILE_SIZE)
    kernels.run_two_circulation(
        np.ascontiguousarray(bank.realized), 1.0 + noise.gain_mismatch_delta,
        np.ascontiguousarray(x), np.zeros(TILE_SIZE), ase, out,
    )
    return out


def detect(amplitudes, mode="coherent", sigma_ase=0.0):
    """Convert loop amplitudes to detector readings.

    Coherent detection keeps signs; direct detection returns magnitudes and
    warns when an amplitude is negative beyond three noise sigmas (the sign
    is then genuinely lost, not just noise-flipped).
    """
    amplitudes = as_vector(amplitudes, "amplitudes")
    if mode == "coherent":
        return amplitudes.copy()
    if mode != "direct":
        raise ValueError(f"unknown detection mode {mode!r}")
    if (amplitudes < -3.0 * sigma_ase).any():
        worst = float(amplitudes.min())
        warnings.warn(
            f"direct detection dropped the sign of an amplitude ({worst:.4g})",
            SignAmbiguityWarning,
            stacklevel=2,
        )
    return np.abs(amplitudes)
