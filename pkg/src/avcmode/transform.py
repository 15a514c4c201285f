"""4x4 integer transform, quantization, Hadamard SATD and Exp-Golomb code lengths.

All functions accept either a single (4, 4) block or a batch (..., 4, 4) and
operate in exact integer arithmetic so outputs are bit-identical across runs.
"""

from __future__ import annotations

import numpy as np

# Forward core: W = C @ X @ C.T
C_FWD = np.array(
    [[1, 1, 1, 1],
     [2, 1, -1, -2],
     [1, -1, -1, 1],
     [1, -2, 2, -1]], dtype=np.int64)

# 4x4 Hadamard for SATD.
H4 = np.array(
    [[1, 1, 1, 1],
     [1, 1, -1, -1],
     [1, -1, -1, 1],
     [1, -1, 1, -1]], dtype=np.int64)

# Quantizer multipliers (a, b, c) per qp % 6.
_MF_ABC = (
    (13107, 5243, 8066),
    (11916, 4660, 7490),
    (10082, 4194, 6554),
    (9362, 3647, 5825),
    (8192, 3355, 5243),
    (7282, 2893, 4559),
)

# Dequantizer scales (a, b, c) per qp % 6.
_V_ABC = (
    (10, 16, 13),
    (11, 18, 14),
    (13, 20, 16),
    (14, 23, 18),
    (16, 25, 20),
    (18, 29, 23),
)

# Position classes inside a 4x4 block: 0 -> a, 1 -> b, 2 -> c.
_POS_CLASS = np.array(
    [[0, 2, 0, 2],
     [2, 1, 2, 1],
     [0, 2, 0, 2],
     [2, 1, 2, 1]], dtype=np.int64)


def _abc_matrix(table) -> list[np.ndarray]:
    mats = []
    for a, b, c in table:
        lut = np.array([a, b, c], dtype=np.int64)
        mats.append(lut[_POS_CLASS])
    return mats

_MF_MATS = _abc_matrix(_MF_ABC)
_V_MATS = _abc_matrix(_V_ABC)

# Per-position rescale that makes the shift-based inverse lossless:
# inverse(forward(x) * EXACT_INVERSE_SCALE) == 25 * x  for any integer block.
EXACT_INVERSE_SCALE = np.outer([10, 8, 10, 8], [10, 8, 10, 8]).astype(np.int64)


def _check_qp(qp: int) -> None:
    if not 0 <= qp <= 51:
        raise ValueError(f"qp {qp} out of range 0..51")


def forward_transform_4x4(residual: np.ndarray) -> np.ndarray:
    """W = C @ X @ C.T, exact integer arithmetic, no rounding."""
    x = np.asarray(residual, dtype=np.int64)
    return C_FWD @ x @ C_FWD.T


def inverse_transform_4x4(coeffs: np.ndarray) -> np.ndarray:
    """Shift-based inverse core with the final (x + 32) >> 6 rounding.

    Expects dequantized coefficients; the half taps are arithmetic shifts.
    """
    w = np.asarray(coeffs, dtype=np.int64)
    t = np.empty_like(w)
    w0, w1, w2, w3 = w[..., 0, :], w[..., 1, :], w[..., 2, :], w[..., 3, :]
    e0 = w0 + w2
    e1 = w0 - w2
    e2 = (w1 >> 1) - w3
    e3 = w1 + (w3 >> 1)
    t[..., 0, :] = e0 + e3
    t[..., 1, :] = e1 + e2
    t[..., 2, :] = e1 - e2
    t[..., 3, :] = e0 - e3
    out = np.empty_like(w)
    t0, t1, t2, t3 = t[..., :, 0], t[..., :, 1], t[..., :, 2], t[..., :, 3]
    f0 = t0 + t2
    f1 = t0 - t2
    f2 = (t1 >> 1) - t3
    f3 = t1 + (t3 >> 1)
    out[..., :, 0] = f0 + f3
    out[..., :, 1] = f1 + f2
    out[..., :, 2] = f1 - f2
    out[..., :, 3] = f0 - f3
    return (out + 32) >> 6


def exact_inverse_4x4(coeffs: np.ndarray) -> np.ndarray:
    """Lossless inversion of forward_transform_4x4 for quantization-bypassed tests.

    Pre-scales the coefficients so the shift-based inverse lands on exactly
    25x the original block, then divides the 25 back out.
    """
    scaled = np.asarray(coeffs, dtype=np.int64) * EXACT_INVERSE_SCALE
    out = inverse_transform_4x4(scaled)
    if np.any(out % 25):
        raise ValueError("input is not a forward transform of an integer block")
    return out // 25


def quantize(coeffs: np.ndarray, qp: int, is_intra: bool) -> np.ndarray:
    """Z = sign(W) * ((|W| * MF + f) >> qbits), f = 2^qbits / 3 (intra) or / 6."""
    _check_qp(qp)
    w = np.asarray(coeffs, dtype=np.int64)
    qbits = 15 + qp // 6
    f = (1 << qbits) // (3 if is_intra else 6)
    mf = _MF_MATS[qp % 6]
    mag = (np.abs(w) * mf + f) >> qbits
    return np.sign(w) * mag


def dequantize(levels: np.ndarray, qp: int) -> np.ndarray:
    """W' = Z * V(qp % 6, pos) * 2^(qp // 6)."""
    _check_qp(qp)
    z = np.asarray(levels, dtype=np.int64)
    return (z * _V_MATS[qp % 6]) << (qp // 6)


def hadamard_4x4(block: np.ndarray) -> np.ndarray:
    return H4 @ np.asarray(block, dtype=np.int64) @ H4.T


def satd_4x4(diff: np.ndarray) -> int:
    """Sum of absolute 4x4 Hadamard coefficients, halved (integer division)."""
    return int(np.abs(hadamard_4x4(diff)).sum()) // 2


def ue_bits(v: int) -> int:
    """Bit length of the unsigned Exp-Golomb code for v."""
    if v < 0 or v >= 1 << 32:
        raise ValueError(f"ue code operand {v} out of range")
    return 2 * ((v + 1).bit_length() - 1) + 1


def se_bits(v: int) -> int:
    """Bit length of the signed Exp-Golomb code: maps v to 2|v|-1 or -2v."""
    mapped = 2 * v - 1 if v > 0 else -2 * v
    return ue_bits(mapped)


def ue_bits_array(v: np.ndarray) -> np.ndarray:
    """Vectorized ue_bits; exact for values below 2^52."""
    v = np.asarray(v, dtype=np.int64)
    return (2 * np.floor(np.log2(v + 1)) + 1).astype(np.int64)


def se_bits_array(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    mapped = np.where(v > 0, 2 * v - 1, -2 * v)
    return ue_bits_array(mapped)
