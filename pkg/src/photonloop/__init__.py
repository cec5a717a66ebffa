"""Simulator of a recirculating photonic 4x4 linear-operator processor.

A weighted interferometer bank sits in an amplified optical loop; matrix
inversion runs as a stationary iteration over many circulations, matrix
add/subtract/multiply complete in two, and larger problems are tiled onto
the 4x4 core. Hardware imperfections (DAC quantization, static encoding
error, loop gain mismatch, amplifier noise) are modelled and every result
can be scored against dense oracles.
"""

from ._backend import backend_name
from .blocks import (
    TileGrid,
    assemble,
    block_add,
    block_invert,
    block_multiply,
    extract,
    pad,
    partition,
)
from .equations import (
    Grid1D,
    Grid2D,
    LinearSystem,
    assemble_fredholm,
    assemble_ode,
    assemble_poisson,
    solve_system,
)
from .errors import (
    ConfigInvalid,
    DimensionNotTileable,
    Diverged,
    NoConvergentOmega,
    NotConverged,
    NotEncodable,
    PhotonLoopError,
    ShapeMismatch,
    SignAmbiguityWarning,
    SingularLeadingBlock,
    SingularMatrix,
    UnreachableWeight,
    VerificationFailed,
    VoltageOutOfRange,
    ZeroReference,
)
from .fixtures import DEMO_MATRICES, fixture_matrix
from .hardware import (
    MZICalibration,
    NoiseConfig,
    WeightBank,
    apply_loop_transfer,
    default_calibration,
    default_calibration_grid,
    detect,
    encode_weight_bank,
    load_calibration_file,
    quantization_bound,
    transmission,
    voltage_for_weight,
)
from .linalg import (
    accuracy_percent,
    dense_invert,
    dense_solve,
    frobenius_norm,
    matadd,
    matmul,
    spectral_norm,
    spectral_radius_estimate,
)
from .loop import (
    IterationTrace,
    LoopConfig,
    check_encodable,
    invert_matrix,
    loop_add,
    loop_multiply,
    richardson_invert_column,
    select_omega,
    throughput,
)

__version__ = "0.1.0"
