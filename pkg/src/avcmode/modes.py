"""Shared mode vocabulary: partition shapes, choices, costs, decisions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

import numpy as np


class MbMode(IntEnum):
    """Macroblock-level coding modes; values double as rate-model indices."""

    SKIP = 0
    P16X16 = 1
    P16X8 = 2
    P8X16 = 3
    P8X8 = 4
    INTRA4X4 = 5
    INTRA16X16 = 6


class SubMode(IntEnum):
    """Per-8x8 sub-partition modes; values double as rate-model indices."""

    S8X8 = 0
    S8X4 = 1
    S4X8 = 2
    S4X4 = 3


# Deterministic evaluation / tie-break order for macroblock candidates.
CANONICAL_ORDER = (
    MbMode.SKIP,
    MbMode.P16X16,
    MbMode.P16X8,
    MbMode.P8X16,
    MbMode.P8X8,
    MbMode.INTRA16X16,
    MbMode.INTRA4X4,
)

# Complexity classes used by the fast selector's probability machinery.
LOW_MODES = frozenset({MbMode.SKIP, MbMode.P16X16, MbMode.P16X8, MbMode.P8X16})
HIGH_MODES = frozenset({MbMode.P8X8, MbMode.INTRA4X4, MbMode.INTRA16X16})


class TableClass(IntEnum):
    """Per-frame frequency buckets for the mode probability table."""

    SKIP = 0
    P16X16 = 1
    P16X8 = 2
    P8X16 = 3
    P8X8 = 4      # P8X8 macroblock whose four regions all stayed 8x8
    SUB = 5       # P8X8 macroblock using any 8x4 / 4x8 / 4x4 sub-partition
    INTRA = 6


class MV(NamedTuple):
    dx: int
    dy: int


ZERO_MV = MV(0, 0)


class Rect(NamedTuple):
    """A luma partition rectangle, offsets relative to the macroblock."""

    y: int
    x: int
    h: int
    w: int


# Top-level inter partition tilings (SKIP and P8X8 are handled separately).
MB_PART_RECTS = {
    MbMode.P16X16: (Rect(0, 0, 16, 16),),
    MbMode.P16X8: (Rect(0, 0, 8, 16), Rect(8, 0, 8, 16)),
    MbMode.P8X16: (Rect(0, 0, 16, 8), Rect(0, 8, 16, 8)),
}

# Raster order of the four 8x8 regions inside a macroblock.
REGION_OFFSETS = ((0, 0), (0, 8), (8, 0), (8, 8))

# Sub-partition tilings relative to an 8x8 region origin.
SUB_PART_RECTS = {
    SubMode.S8X8: (Rect(0, 0, 8, 8),),
    SubMode.S8X4: (Rect(0, 0, 4, 8), Rect(4, 0, 4, 8)),
    SubMode.S4X8: (Rect(0, 0, 8, 4), Rect(0, 4, 8, 4)),
    SubMode.S4X4: (Rect(0, 0, 4, 4), Rect(0, 4, 4, 4), Rect(4, 0, 4, 4), Rect(4, 4, 4, 4)),
}


def region_sub_rects(region: int, sub: SubMode) -> tuple[Rect, ...]:
    """Sub-partition rectangles of one 8x8 region, in macroblock coordinates."""
    ry, rx = REGION_OFFSETS[region]
    return tuple(Rect(ry + r.y, rx + r.x, r.h, r.w) for r in SUB_PART_RECTS[sub])


@dataclass
class PartitionMV:
    """One searched partition: rectangle, motion vector, coded difference."""

    rect: Rect
    mv: MV
    mvd: MV


@dataclass
class InterChoice:
    """A fully specified inter coding hypothesis for one macroblock."""

    mb_mode: MbMode
    parts: list[PartitionMV] = field(default_factory=list)
    sub_modes: tuple[SubMode, ...] | None = None  # one per 8x8 region when P8X8
    ssd: int | None = None
    bits: int | None = None
    motion_cost: float | None = None


@dataclass
class IntraChoice:
    """A fully specified intra coding hypothesis for one macroblock."""

    mb_mode: MbMode
    modes4: tuple[int, ...] | None = None  # 16 block modes when INTRA4X4
    mode16: int | None = None              # 16x16 mode when INTRA16X16
    chroma_mode: int = 0
    ssd: int | None = None
    bits: int | None = None


Choice = InterChoice | IntraChoice


@dataclass(frozen=True)
class RdCost:
    """Lagrangian mode cost J = ssd + lam * bits."""

    ssd: int
    bits: int
    lam: float
    j: float

    @classmethod
    def compute(cls, ssd: int, bits: int, lam: float) -> "RdCost":
        return cls(ssd=ssd, bits=bits, lam=lam, j=ssd + lam * bits)


@dataclass
class ReconstructedMB:
    """Reconstruction samples plus the quantized levels that produced them."""

    y: np.ndarray              # (16, 16) int32
    u: np.ndarray              # (8, 8) int32
    v: np.ndarray              # (8, 8) int32
    levels: list[np.ndarray]   # 16 luma + 4 U + 4 V blocks of (4, 4) levels
    cbp: int                   # count of blocks with any nonzero level


@dataclass
class TraceEntry:
    """One candidate evaluation. Region-level sub-mode trials carry mode=None."""

    label: str
    j: float
    mode: MbMode | None = None
    choice: Choice | None = None


@dataclass
class ModeDecision:
    """Final decision for one macroblock plus its evaluation audit trail."""

    mode: MbMode
    choice: Choice
    cost: RdCost
    recon: ReconstructedMB
    evaluation_count: int
    trace: list[TraceEntry]
    predicted_class: str | None = None  # "low" / "high" when the fast path implies one
    path: str = ""

    @property
    def table_class(self) -> TableClass:
        return table_class_of(self.choice)


def table_class_of(choice: Choice) -> TableClass:
    if isinstance(choice, IntraChoice):
        return TableClass.INTRA
    if choice.mb_mode == MbMode.SKIP:
        return TableClass.SKIP
    if choice.mb_mode == MbMode.P16X16:
        return TableClass.P16X16
    if choice.mb_mode == MbMode.P16X8:
        return TableClass.P16X8
    if choice.mb_mode == MbMode.P8X16:
        return TableClass.P8X16
    if all(s == SubMode.S8X8 for s in choice.sub_modes or ()):
        return TableClass.P8X8
    return TableClass.SUB


def canonical_rank(mode: MbMode) -> int:
    return CANONICAL_ORDER.index(mode)
