"""Raw planar YUV 4:2:0 handling: frames, I420 byte streams, synthetic sequences, PSNR."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

PSNR_CAP_DB = 100.0

# 64-bit LCG used for all deterministic synthetic noise/texture.
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class FormatError(ValueError):
    """Malformed raw I420 byte stream."""


class DimensionError(ValueError):
    """Frame dimensions the macroblock pipeline cannot handle."""


@dataclass(frozen=True)
class Frame:
    """One planar 8-bit YUV 4:2:0 picture; dimensions must be multiples of 16."""

    width: int
    height: int
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if self.width % 16 or self.height % 16 or self.width <= 0 or self.height <= 0:
            raise DimensionError(
                f"frame dimensions {self.width}x{self.height} must be positive multiples of 16"
            )
        expect = {
            "y": (self.height, self.width),
            "u": (self.height // 2, self.width // 2),
            "v": (self.height // 2, self.width // 2),
        }
        for name, shape in expect.items():
            plane = getattr(self, name)
            if plane.shape != shape:
                raise DimensionError(f"{name} plane shape {plane.shape} != {shape}")
            if plane.dtype != np.uint8:
                object.__setattr__(self, name, plane.astype(np.uint8))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
        )

    def to_bytes(self) -> bytes:
        return self.y.tobytes() + self.u.tobytes() + self.v.tobytes()


@dataclass(frozen=True)
class Sequence:
    """An ordered list of same-sized frames. frame_rate is metadata only."""

    frames: list[Frame]
    frame_rate: float = 30.0

    def __post_init__(self):
        if not self.frames:
            raise FormatError("a sequence needs at least one frame")
        w, h = self.frames[0].width, self.frames[0].height
        for i, f in enumerate(self.frames):
            if f.width != w or f.height != h:
                raise DimensionError(f"frame {i} is {f.width}x{f.height}, expected {w}x{h}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return len(self.frames) == len(other.frames) and all(
            a == b for a, b in zip(self.frames, other.frames)
        )

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height


def frame_size_bytes(width: int, height: int) -> int:
    return width * height * 3 // 2


def read_yuv(data: bytes, width: int, height: int) -> Sequence:
    """Parse a headerless I420 stream (Y then U then V per frame, row-major)."""
    if width % 16 or height % 16 or width <= 0 or height <= 0:
        raise DimensionError(f"dimensions {width}x{height} must be positive multiples of 16")
    fsize = frame_size_bytes(width, height)
    total = len(data)
    if total == 0 or total % fsize:
        raise FormatError(
            f"truncated stream: {total} bytes is not a positive multiple of the "
            f"{fsize}-byte frame size; incomplete frame starts at byte offset "
            f"{(total // fsize) * fsize}"
        )
    ysize = width * height
    csize = ysize // 4
    frames = []
    raw = np.frombuffer(data, dtype=np.uint8)
    for k in range(total // fsize):
        off = k * fsize
        y = raw[off : off + ysize].reshape(height, width).copy()
        u = raw[off + ysize : off + ysize + csize].reshape(height // 2, width // 2).copy()
        v = raw[off + ysize + csize : off + fsize].reshape(height // 2, width // 2).copy()
        frames.append(Frame(width, height, y, u, v))
    return Sequence(frames)


def write_yuv(seq: Sequence) -> bytes:
    """Serialize a sequence back to the headerless I420 layout."""
    return b"".join(f.to_bytes() for f in seq.frames)


class PlanePsnr(NamedTuple):
    psnr_y: float
    psnr_u: float
    psnr_v: float


def _plane_psnr(a: np.ndarray, b: np.ndarray) -> float:
    diff = a.astype(np.int64) - b.astype(np.int64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return PSNR_CAP_DB
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def psnr(a: Frame, b: Frame) -> PlanePsnr:
    """Per-plane PSNR in dB, capped at 100.0 for identical planes."""
    if a.width != b.width or a.height != b.height:
        raise DimensionError("psnr requires frames of identical dimensions")
    return PlanePsnr(
        _plane_psnr(a.y, b.y),
        _plane_psnr(a.u, b.u),
        _plane_psnr(a.v, b.v),
    )


class _Lcg:
    """Deterministic 64-bit linear congruential generator (top 16 bits used)."""

    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def next_u16(self) -> int:
        self.state = (self.state * _LCG_MULT + _LCG_INC) & _LCG_MASK
        return self.state >> 48

    def fill_mod(self, shape: tuple[int, int], modulus: int, offset: int = 0) -> np.ndarray:
        out = np.empty(shape[0] * shape[1], dtype=np.int32)
        nxt = self.next_u16
        for i in range(out.size):
            out[i] = nxt() % modulus + offset
        return out.reshape(shape)


def make_flat_frame(width: int, height: int, value: int = 128) -> Frame:
    y = np.full((height, width), value, dtype=np.uint8)
    u = np.full((height // 2, width // 2), value, dtype=np.uint8)
    v = np.full((height // 2, width // 2), value, dtype=np.uint8)
    return Frame(width, height, y, u, v)


def make_gradient_frame(width: int, height: int, slope: int = 1, base: int = 16) -> Frame:
    """Smooth diagonal luminance ramp; chroma ramps at half resolution."""
    ys = np.arange(height)[:, None]
    xs = np.arange(width)[None, :]
    y = np.clip(base + slope * (ys + xs), 0, 255).astype(np.uint8)
    cy = np.arange(height // 2)[:, None]
    cx = np.arange(width // 2)[None, :]
    u = np.clip(base + slope * (cy + cx), 0, 255).astype(np.uint8)
    v = np.clip(255 - base - slope * (cy + cx), 0, 255).astype(np.uint8)
    return Frame(width, height, y, u, v)


def make_texture_frame(width: int, height: int, seed: int = 1) -> Frame:
    """Full-range pseudo-random texture, deterministic in the seed."""
    gen = _Lcg(seed)
    y = gen.fill_mod((height, width), 256).astype(np.uint8)
    u = gen.fill_mod((height // 2, width // 2), 256).astype(np.uint8)
    v = gen.fill_mod((height // 2, width // 2), 256).astype(np.uint8)
    return Frame(width, height, y, u, v)


def _shift_plane(plane: np.ndarray, sx: int, sy: int) -> np.ndarray:
    """Translate content by (sx, sy) with clamp-to-edge replication."""
    h, w = plane.shape
    rows = np.clip(np.arange(h) - sy, 0, h - 1)
    cols = np.clip(np.arange(w) - sx, 0, w - 1)
    return plane[np.ix_(rows, cols)]


def _translated(base: Frame, sx: int, sy: int) -> Frame:
    return Frame(
        base.width,
        base.height,
        _shift_plane(base.y, sx, sy),
        # chroma moves at half the luma displacement, floor division
        _shift_plane(base.u, sx // 2, sy // 2),
        _shift_plane(base.v, sx // 2, sy // 2),
    )


def _noisy(base: Frame, gen: _Lcg, amplitude: int) -> Frame:
    span = 2 * amplitude + 1
    planes = []
    for plane in (base.y, base.u, base.v):
        noise = gen.fill_mod(plane.shape, span, -amplitude)
        planes.append(np.clip(plane.astype(np.int32) + noise, 0, 255).astype(np.uint8))
    return Frame(base.width, base.height, *planes)


def generate_synthetic(
    kind: str,
    base: Frame,
    count: int,
    *,
    dx: int = 0,
    dy: int = 0,
    amplitude: int = 0,
    at: int | None = None,
    seed: int = 1,
) -> Sequence:
    """Build a deterministic test sequence from a base frame.

    Kinds: "static" repeats the base; "pan" translates it by (k*dx, k*dy)
    with edge clamping; "noise" adds fresh seeded uniform noise in
    [-amplitude, amplitude] each frame; "cut" switches to an unrelated
    texture at frame `at`.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind == "static":
        return Sequence([base] * count)
    if kind == "pan":
        if abs(dx) > 16 or abs(dy) > 16:
            raise ValueError(f"pan displacement ({dx},{dy}) exceeds the +/-16 search range")
        return Sequence([_translated(base, k * dx, k * dy) for k in range(count)])
    if kind == "noise":
        if amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        gen = _Lcg(seed)
        return Sequence([_noisy(base, gen, amplitude) for _ in range(count)])
    if kind == "cut":
        if at is None or not 0 < at:
            raise ValueError("cut requires a positive 'at' frame index")
        other = make_texture_frame(base.width, base.height, seed ^ 0x9E3779B97F4A7C15)
        return Sequence([base if k < at else other for k in range(count)])
    raise ValueError(f"unknown synthetic kind {kind!r}")
