"""Intra prediction: 9 luma 4x4 modes, 4 luma 16x16 modes, 4 chroma 8x8 modes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# 4x4 luma mode indices
V4, H4X4, DC4, DDL4, DDR4, VR4, HD4, VL4, HU4 = range(9)
# 16x16 luma and 8x8 chroma mode indices (same ordering for both)
V16, H16, DC16, PLANE16 = range(4)

MODE4_NAMES = ("vertical", "horizontal", "dc", "diag-down-left", "diag-down-right",
               "vertical-right", "horizontal-down", "vertical-left", "horizontal-up")
MODE16_NAMES = ("vertical", "horizontal", "dc", "plane")


class IntraModeUnavailable(ValueError):
    """Requested mode needs neighbor samples that do not exist."""


@dataclass
class Neighborhood:
    """Reconstructed border samples around a block.

    `top` holds 2N samples for NxN blocks (the right half is the top-right
    extension, replicated from the last real sample when that side is
    missing). Values are only meaningful where the matching flag is set.
    """

    top: np.ndarray
    left: np.ndarray
    top_left: int
    avail_top: bool
    avail_left: bool
    avail_top_left: bool
    avail_top_right: bool


def neighborhood_from(
    plane: np.ndarray,
    y: int,
    x: int,
    size: int,
    avail_top: bool,
    avail_left: bool,
    avail_top_left: bool,
    avail_top_right: bool = False,
    top_right_len: int = 0,
) -> Neighborhood:
    """Collect border samples for a size x size block at (y, x) in `plane`."""
    top = np.zeros(2 * size, dtype=np.int64)
    left = np.zeros(size, dtype=np.int64)
    top_left = 0
    if avail_top:
        top[:size] = plane[y - 1, x : x + size]
        if avail_top_right and top_right_len > 0:
            top[size : size + top_right_len] = plane[y - 1, x + size : x + size + top_right_len]
            top[size + top_right_len :] = top[size + top_right_len - 1]
        else:
            top[size:] = top[size - 1]
    if avail_left:
        left[:] = plane[y : y + size, x - 1]
    if avail_top_left:
        top_left = int(plane[y - 1, x - 1])
    return Neighborhood(top, left, top_left, avail_top, avail_left, avail_top_left, avail_top_right)


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise IntraModeUnavailable(f"{what} prediction needs unavailable neighbors")


def _dc_value(nb: Neighborhood, size: int) -> int:
    if nb.avail_top and nb.avail_left:
        total = int(nb.top[:size].sum() + nb.left.sum())
        return (total + size) >> (size.bit_length())          # (sum + N) / 2N
    if nb.avail_top:
        return (int(nb.top[:size].sum()) + size // 2) >> (size.bit_length() - 1)
    if nb.avail_left:
        return (int(nb.left.sum()) + size // 2) >> (size.bit_length() - 1)
    return 128


def predict_4x4(mode: int, nb: Neighborhood) -> np.ndarray:
    """Standard 4x4 luma prediction. Raises IntraModeUnavailable when the
    required border is missing; callers filter with available_4x4_modes."""
    t = nb.top
    l = nb.left
    tl = nb.top_left
    pred = np.empty((4, 4), dtype=np.int64)

    if mode == V4:
        _require(nb.avail_top, "vertical")
        pred[:] = t[:4][None, :]
    elif mode == H4X4:
        _require(nb.avail_left, "horizontal")
        pred[:] = l[:, None]
    elif mode == DC4:
        pred[:] = _dc_value(nb, 4)
    elif mode == DDL4:
        _require(nb.avail_top, "diag-down-left")
        for y in range(4):
            for x in range(4):
                if x == 3 and y == 3:
                    pred[y, x] = (t[6] + 3 * t[7] + 2) >> 2
                else:
                    pred[y, x] = (t[x + y] + 2 * t[x + y + 1] + t[x + y + 2] + 2) >> 2
    elif mode == DDR4:
        _require(nb.avail_top and nb.avail_left and nb.avail_top_left, "diag-down-right")
        for y in range(4):
            for x in range(4):
                if x > y:
                    z = x - y
                    a = tl if z - 2 < 0 else t[z - 2]
                    b = tl if z - 1 < 0 else t[z - 1]
                    pred[y, x] = (a + 2 * b + t[z] + 2) >> 2
                elif x < y:
                    z = y - x
                    a = tl if z - 2 < 0 else l[z - 2]
                    b = tl if z - 1 < 0 else l[z - 1]
                    pred[y, x] = (a + 2 * b + l[z] + 2) >> 2
                else:
                    pred[y, x] = (t[0] + 2 * tl + l[0] + 2) >> 2
    elif mode == VR4:
        _require(nb.avail_top and nb.avail_left and nb.avail_top_left, "vertical-right")
        for y in range(4):
            for x in range(4):
                z = 2 * x - y
                if z >= 0 and z % 2 == 0:
                    k = x - (y >> 1)
                    a = tl if k - 1 < 0 else t[k - 1]
                    pred[y, x] = (a + t[k] + 1) >> 1
                elif z >= 0:
                    k = x - (y >> 1)
                    a = tl if k - 2 < 0 else t[k - 2]
                    b = tl if k - 1 < 0 else t[k - 1]
                    pred[y, x] = (a + 2 * b + t[k] + 2) >> 2
                elif z == -1:
                    pred[y, x] = (t[0] + 2 * tl + l[0] + 2) >> 2
                else:
                    k = y - 2 * x
                    a = tl if k - 3 < 0 else l[k - 3]
                    pred[y, x] = (l[k - 1] + 2 * l[k - 2] + a + 2) >> 2
    elif mode == HD4:
        _require(nb.avail_top and nb.avail_left and nb.avail_top_left, "horizontal-down")
        for y in range(4):
            for x in range(4):
                z = 2 * y - x
                if z >= 0 and z % 2 == 0:
                    k = y - (x >> 1)
                    a = tl if k - 1 < 0 else l[k - 1]
                    pred[y, x] = (a + l[k] + 1) >> 1
                elif z >= 0:
                    k = y - (x >> 1)
                    a = tl if k - 2 < 0 else l[k - 2]
                    b = tl if k - 1 < 0 else l[k - 1]
                    pred[y, x] = (a + 2 * b + l[k] + 2) >> 2
                elif z == -1:
                    pred[y, x] = (l[0] + 2 * tl + t[0] + 2) >> 2
                else:
                    k = x - 2 * y
                    a = tl if k - 3 < 0 else t[k - 3]
                    pred[y, x] = (t[k - 1] + 2 * t[k - 2] + a + 2) >> 2
    elif mode == VL4:
        _require(nb.avail_top, "vertical-left")
        for y in range(4):
            for x in range(4):
                k = x + (y >> 1)
                if y % 2 == 0:
                    pred[y, x] = (t[k] + t[k + 1] + 1) >> 1
                else:
                    pred[y, x] = (t[k] + 2 * t[k + 1] + t[k + 2] + 2) >> 2
    elif mode == HU4:
        _require(nb.avail_left, "horizontal-up")
        for y in range(4):
            for x in range(4):
                z = x + 2 * y
                if z > 5:
                    pred[y, x] = l[3]
                elif z == 5:
                    pred[y, x] = (l[2] + 3 * l[3] + 2) >> 2
                elif z % 2 == 0:
                    k = y + (x >> 1)
                    pred[y, x] = (l[k] + l[k + 1] + 1) >> 1
                else:
                    k = y + (x >> 1)
                    pred[y, x] = (l[k] + 2 * l[k + 1] + l[k + 2] + 2) >> 2
    else:
        raise ValueError(f"4x4 mode {mode} out of range 0..8")
    return pred


def available_4x4_modes(nb: Neighborhood) -> list[int]:
    modes = [DC4]
    if nb.avail_top:
        modes += [V4, DDL4, VL4]
    if nb.avail_left:
        modes += [H4X4, HU4]
    if nb.avail_top and nb.avail_left and nb.avail_top_left:
        modes += [DDR4, VR4, HD4]
    return sorted(modes)


def _plane_prediction(nb: Neighborhood, size: int) -> np.ndarray:
    """Least-squares-style plane fit from the border samples."""
    half = size // 2
    t = nb.top
    l = nb.left
    h = sum((k + 1) * (int(t[half + k]) - int(t[half - 2 - k] if half - 2 - k >= 0 else nb.top_left))
            for k in range(half))
    v = sum((k + 1) * (int(l[half + k]) - int(l[half - 2 - k] if half - 2 - k >= 0 else nb.top_left))
            for k in range(half))
    a = 16 * (int(t[size - 1]) + int(l[size - 1]))
    if size == 16:
        b = (5 * h + 32) >> 6
        c = (5 * v + 32) >> 6
    else:
        b = (17 * h + 16) >> 5
        c = (17 * v + 16) >> 5
    ys = np.arange(size)[:, None] - (half - 1)
    xs = np.arange(size)[None, :] - (half - 1)
    pred = (a + b * xs + c * ys + 16) >> 5
    return np.clip(pred, 0, 255).astype(np.int64)


def _predict_block(mode: int, nb: Neighborhood, size: int) -> np.ndarray:
    if mode == V16:
        _require(nb.avail_top, "vertical")
        return np.broadcast_to(nb.top[:size][None, :], (size, size)).copy()
    if mode == H16:
        _require(nb.avail_left, "horizontal")
        return np.broadcast_to(nb.left[:, None], (size, size)).copy()
    if mode == DC16:
        return np.full((size, size), _dc_value(nb, size), dtype=np.int64)
    if mode == PLANE16:
        _require(nb.avail_top and nb.avail_left and nb.avail_top_left, "plane")
        return _plane_prediction(nb, size)
    raise ValueError(f"mode {mode} out of range 0..3")


def predict_16x16(mode: int, nb: Neighborhood) -> np.ndarray:
    """16x16 luma prediction: vertical, horizontal, DC (with fallbacks), plane."""
    return _predict_block(mode, nb, 16)


def predict_chroma(mode: int, nb: Neighborhood) -> np.ndarray:
    """8x8 chroma prediction using the same four modes as the 16x16 luma path."""
    return _predict_block(mode, nb, 8)


def available_block_modes(nb: Neighborhood) -> list[int]:
    modes = [DC16]
    if nb.avail_top:
        modes.append(V16)
    if nb.avail_left:
        modes.append(H16)
    if nb.avail_top and nb.avail_left and nb.avail_top_left:
        modes.append(PLANE16)
    return sorted(modes)
