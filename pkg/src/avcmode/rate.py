"""Surrogate rate model: zig-zag run/level costing and macroblock headers.

Every implementation detail here is deterministic so two encoders given the
same levels produce identical bit counts. The model replaces real entropy
coding with universal Exp-Golomb code lengths.
"""

from __future__ import annotations

import numpy as np

from .modes import Choice, InterChoice, IntraChoice, MbMode
from .transform import se_bits, ue_bits

# Standard 4x4 zig-zag scan order.
ZIGZAG_4X4 = (
    (0, 0), (0, 1), (1, 0), (2, 0),
    (1, 1), (0, 2), (0, 3), (1, 2),
    (2, 1), (3, 0), (3, 1), (2, 2),
    (1, 3), (2, 3), (3, 2), (3, 3),
)

_ZZ_ROWS = np.array([p[0] for p in ZIGZAG_4X4])
_ZZ_COLS = np.array([p[1] for p in ZIGZAG_4X4])

INTRA4X4_MODE_BITS = 4    # fixed-cost signaling per 4x4 luma mode
INTRA16X16_MODE_BITS = 2
CHROMA_MODE_BITS = 2
SKIP_FLAG_BITS = 1


def lambda_mode(qp: int) -> float:
    """Lagrange multiplier for mode decision: 0.85 * 2^((qp - 12) / 3)."""
    if not 0 <= qp <= 51:
        raise ValueError(f"qp {qp} out of range 0..51")
    return 0.85 * 2.0 ** ((qp - 12) / 3.0)


def zigzag_scan(block: np.ndarray) -> np.ndarray:
    return np.asarray(block)[..., _ZZ_ROWS, _ZZ_COLS]


def coeff_block_bits_batch(blocks: np.ndarray) -> np.ndarray:
    """Run/level cost per 4x4 block: ue(run) + se(level) per pair, + 1 EOB bit.

    Vectorized over a (..., 4, 4) batch; returns the per-block bit counts.
    """
    from .transform import se_bits_array, ue_bits_array

    scanned = zigzag_scan(np.asarray(blocks, dtype=np.int64))
    nz = scanned != 0
    pos = np.arange(16)
    # index of the previous nonzero (exclusive), -1 when there is none
    marked = np.where(nz, pos, -1)
    acc = np.maximum.accumulate(marked, axis=-1)
    prev = np.concatenate(
        [np.full(acc.shape[:-1] + (1,), -1, dtype=np.int64), acc[..., :-1]], axis=-1
    )
    runs = pos - prev - 1
    run_bits = np.where(nz, ue_bits_array(runs), 0)
    level_bits = np.where(nz, se_bits_array(scanned), 0)
    return 1 + (run_bits + level_bits).sum(axis=-1)


def coeff_block_bits(block: np.ndarray) -> int:
    return int(coeff_block_bits_batch(np.asarray(block).reshape(1, 4, 4))[0])


def cbp_surrogate(levels) -> int:
    """Coded-block-pattern stand-in: number of 4x4 blocks with any nonzero level."""
    arr = np.asarray(levels)
    return int(np.any(arr.reshape(arr.shape[0], -1), axis=-1).sum())


def residual_bits(levels) -> int:
    arr = np.asarray(levels)
    return ue_bits(cbp_surrogate(arr)) + int(coeff_block_bits_batch(arr).sum())


def rate_mode(choice: Choice, levels: list[np.ndarray]) -> int:
    """Total surrogate bits for a coded macroblock hypothesis.

    SKIP costs exactly one flag bit. Other modes pay the mode header, motion
    or intra signaling, the cbp surrogate, and per-block coefficient bits for
    every block in `levels`.
    """
    if isinstance(choice, InterChoice) and choice.mb_mode == MbMode.SKIP:
        return SKIP_FLAG_BITS
    bits = ue_bits(int(choice.mb_mode))
    if isinstance(choice, InterChoice):
        if choice.mb_mode == MbMode.P8X8:
            for sub in choice.sub_modes or ():
                bits += ue_bits(int(sub))
        for part in choice.parts:
            bits += se_bits(part.mvd.dx) + se_bits(part.mvd.dy)
    else:
        if choice.mb_mode == MbMode.INTRA4X4:
            bits += 16 * INTRA4X4_MODE_BITS
        else:
            bits += INTRA16X16_MODE_BITS
        bits += CHROMA_MODE_BITS
    return bits + residual_bits(levels)
