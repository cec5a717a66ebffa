"""Tiling of arbitrary N x N computations onto the 4x4 loop.

Large operands are padded to a multiple of the tile size, split into 4x4
slices, and processed slice by slice: adds and multiplies map directly to
the two-circulation protocols, inversion recurses on 2x2 superblocks via
Schur complements with 4x4 loop inversions at the base.

Tiles whose entries leave the passive range [-1, 1] are rescaled by an
exact power of two for the duration of one operation and unwound on the
result, so the ideal limit stays bit-exact.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionNotTileable,
    NoConvergentOmega,
    SingularLeadingBlock,
    VerificationFailed,
)
from .hardware import TILE_SIZE, encode_weight_bank
from .linalg import as_matrix, frobenius_norm
from .loop import LoopConfig, invert_matrix, loop_add, loop_multiply

# Stream ids of the sub-operations inside one Schur recursion step.
_S_INV11, _S_INVS, _S_P, _S_Q, _S_PA12, _S_SCHUR, _S_T, _S_B12, _S_B11M, _S_B11A = range(1, 11)
_S_BASE = 19


@dataclass(frozen=True)
class TileGrid:
    """A padded square matrix stored as 4x4 slices in row-major block order."""

    n_orig: int
    n_padded: int
    tiles: np.ndarray  # (nb, nb, TILE_SIZE, TILE_SIZE)

    def __post_init__(self):
        nb = self.n_padded // TILE_SIZE
        if self.n_padded % TILE_SIZE or self.n_padded < TILE_SIZE:
            raise DimensionNotTileable(f"padded dim {self.n_padded} is not a positive multiple of {TILE_SIZE}")
        if self.tiles.shape != (nb, nb, TILE_SIZE, TILE_SIZE):
            raise ValueError(f"tiles shape {self.tiles.shape} inconsistent with dim {self.n_padded}")
        if not 1 <= self.n_orig <= self.n_padded:
            raise ValueError("n_orig must lie in [1, n_padded]")

    @property
    def blocks(self):
        return self.n_padded // TILE_SIZE


def padded_dim(n):
    """Smallest multiple of the tile size that holds an n x n operand."""
    return max(TILE_SIZE, TILE_SIZE * ((n + TILE_SIZE - 1) // TILE_SIZE))


def pad(a, mode="zero"):
    """Embed a matrix top-left in a tile-aligned square.

    ``zero`` fills with zeros (add/multiply operands); ``identity`` puts
    ones on the remaining diagonal so invertibility is preserved and the
    inverse of the padded matrix carries the original inverse top-left.
    """
    if mode not in ("zero", "identity"):
        raise ValueError("mode must be 'zero' or 'identity'")
    a = as_matrix(a)
    rows, cols = a.shape
    if mode == "identity" and rows != cols:
        raise ValueError("identity padding needs a square input")
    dim = padded_dim(max(rows, cols))
    if (rows, cols) == (dim, dim):
        return a.copy()
    out = np.zeros((dim, dim))
    out[:rows, :cols] = a
    if mode == "identity":
        for k in range(rows, dim):
            out[k, k] = 1.0
    return out


def partition(a, n_orig=None):
    """Split a tile-aligned square matrix into its 4x4 slices."""
    a = as_matrix(a)
    rows, cols = a.shape
    if rows != cols:
        raise DimensionNotTileable(f"partition needs a square matrix, got {a.shape}")
    if rows % TILE_SIZE or rows < TILE_SIZE:
        raise DimensionNotTileable(f"dim {rows} is not a positive multiple of {TILE_SIZE}")
    nb = rows // TILE_SIZE
    tiles = (
        a.reshape(nb, TILE_SIZE, nb, TILE_SIZE).transpose(0, 2, 1, 3).copy()
    )
    return TileGrid(n_orig=n_orig or rows, n_padded=rows, tiles=tiles)


def assemble(grid):
    """Rebuild the padded matrix from its slices (exact round trip)."""
    return _matrix_of(grid.tiles)


def extract(grid):
    """The original (pre-padding) top-left block of an assembled grid."""
    return assemble(grid)[: grid.n_orig, : grid.n_orig]


def _matrix_of(tiles):
    nbr, nbc = tiles.shape[:2]
    return tiles.transpose(0, 2, 1, 3).reshape(nbr * TILE_SIZE, nbc * TILE_SIZE).copy()


def pow2_scale(m):
    """Exact power-of-two factor bringing all entries into [-1, 1]."""
    peak = float(np.abs(m).max())
    if peak <= 1.0:
        return 1.0
    return float(2.0 ** int(np.ceil(np.log2(peak))))


def _tile_add(a, b, sign, cfg, cals, stream):
    factor = max(pow2_scale(a), pow2_scale(b))
    bank = encode_weight_bank(a / factor, cals, cfg.noise, stream=(*stream, 0))
    out = loop_add(bank, b / factor, sign, cfg, stream=(*stream, 1))
    return factor * out


def _tile_mul(a, b, cfg, cals, stream):
    fa = pow2_scale(a)
    fb = pow2_scale(b)
    bank = encode_weight_bank(a / fa, cals, cfg.noise, stream=(*stream, 0))
    out = loop_multiply(bank, b / fb, cfg, stream=(*stream, 1))
    return (fa * fb) * out


def _badd(a_tiles, b_tiles, sign, cfg, cals, stream):
    nbr, nbc = a_tiles.shape[:2]
    out = np.empty_like(a_tiles)
    for bi in range(nbr):
        for bj in range(nbc):
            out[bi, bj] = _tile_add(a_tiles[bi, bj], b_tiles[bi, bj], sign, cfg, cals,
                                    (*stream, bi, bj))
    return out


def _bmm(a_tiles, b_tiles, cfg, cals, stream):
    """Block-row by block-column products, accumulated in ascending k."""
    nbr, inner = a_tiles.shape[:2]
    nbc = b_tiles.shape[1]
    out = np.empty((nbr, nbc, TILE_SIZE, TILE_SIZE))
    for bi in range(nbr):
        for bj in range(nbc):
            acc = _tile_mul(a_tiles[bi, 0], b_tiles[0, bj], cfg, cals, (*stream, bi, bj, 0))
            for k in range(1, inner):
                prod = _tile_mul(a_tiles[bi, k], b_tiles[k, bj], cfg, cals, (*stream, bi, bj, k))
                acc = _tile_add(acc, prod, 1, cfg, cals, (*stream, bi, bj, k, 1))
            out[bi, bj] = acc
    return out


def _check_compatible(a, b):
    if a.n_padded != b.n_padded or a.n_orig != b.n_orig:
        raise ValueError(
            f"grids disagree: {a.n_padded}/{a.n_orig} vs {b.n_padded}/{b.n_orig}"
        )


def block_add(a, b, sign=1, cfg=None, cals=None, stream=()):
    """Slice-wise A +/- B on the loop."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_compatible(a, b)
    cfg = cfg or LoopConfig()
    tiles = _badd(a.tiles, b.tiles, sign, cfg, cals, stream)
    return TileGrid(a.n_orig, a.n_padded, tiles)


def block_multiply(a, b, cfg=None, cals=None, stream=()):
    """Block matrix product A @ B with loop multiplies and loop-added accumulation."""
    _check_compatible(a, b)
    cfg = cfg or LoopConfig()
    tiles = _bmm(a.tiles, b.tiles, cfg, cals, stream)
    return TileGrid(a.n_orig, a.n_padded, tiles)


def _invert_tiles(tiles, cfg, cals, stream, level):
    nb = tiles.shape[0]
    if nb == 1:
        try:
            inv, _ = invert_matrix(tiles[0, 0], cfg, cals=cals, stream=(*stream, _S_BASE))
        except NoConvergentOmega as err:
            raise SingularLeadingBlock(level, f"4x4 base block not invertible on the loop: {err}") from err
        return inv.reshape(1, 1, TILE_SIZE, TILE_SIZE)
    split = (nb + 1) // 2
    a11 = tiles[:split, :split]
    a12 = tiles[:split, split:]
    a21 = tiles[split:, :split]
    a22 = tiles[split:, split:]

    inv11 = _invert_tiles(a11, cfg, cals, (*stream, _S_INV11), level + 1)
    p = _bmm(a21, inv11, cfg, cals, (*stream, _S_P))            # A21 A11^-1
    q = _bmm(inv11, a12, cfg, cals, (*stream, _S_Q))            # A11^-1 A12
    pa12 = _bmm(p, a12, cfg, cals, (*stream, _S_PA12))
    schur = _badd(a22, pa12, -1, cfg, cals, (*stream, _S_SCHUR))
    inv_s = _invert_tiles(schur, cfg, cals, (*stream, _S_INVS), level + 1)

    t = _bmm(inv_s, p, cfg, cals, (*stream, _S_T))              # S^-1 A21 A11^-1
    b12 = -_bmm(q, inv_s, cfg, cals, (*stream, _S_B12))
    b11 = _badd(inv11, _bmm(q, t, cfg, cals, (*stream, _S_B11M)), 1, cfg, cals,
                (*stream, _S_B11A))
    b21 = -t

    out = np.empty((nb, nb, TILE_SIZE, TILE_SIZE))
    out[:split, :split] = b11
    out[:split, split:] = b12
    out[split:, :split] = b21
    out[split:, split:] = inv_s
    return out


def block_invert(a, cfg=None, cals=None, verify_threshold=None, stream=()):
    """Recursive Schur-complement inversion of a tiled matrix.

    Every leading block met in the recursion must be invertible (no block
    pivoting). When ``verify_threshold`` is given, the assembled result is
    residual-checked against the input and VerificationFailed raised if
    ||A @ inv - I||_F exceeds it; leave it None for noisy configurations
    where the caller owns the acceptable residual.
    """
    cfg = cfg or LoopConfig()
    tiles = _invert_tiles(a.tiles, cfg, cals, stream, level=0)
    result = TileGrid(a.n_orig, a.n_padded, tiles)
    if verify_threshold is not None:
        residual = frobenius_norm(assemble(a) @ assemble(result) - np.eye(a.n_padded))
        if residual > verify_threshold:
            raise VerificationFailed(residual, verify_threshold)
    return result
