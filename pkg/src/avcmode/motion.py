"""Integer-pel block motion estimation over the full +/-range window."""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .context import MacroblockContext
from .modes import (
    MB_PART_RECTS,
    MV,
    InterChoice,
    MbMode,
    PartitionMV,
    Rect,
    SubMode,
    ZERO_MV,
    region_sub_rects,
)
from .transform import H4, se_bits_array


def _tie_break_pick(grid: np.ndarray, search_range: int) -> tuple[int, int]:
    """Index of the grid minimum; ties go to smaller |dx|+|dy|, then dy, then dx."""
    best = grid.min()
    ys, xs = np.nonzero(grid == best)
    r = search_range
    key = min(
        (abs(int(x) - r) + abs(int(y) - r), int(y) - r, int(x) - r)
        for y, x in zip(ys, xs)
    )
    return key[1] + r, key[2] + r  # (row, col) back in grid coordinates


def full_search(
    cur_block: np.ndarray,
    ref_plane: np.ndarray,
    origin: tuple[int, int],
    search_range: int = 16,
) -> tuple[MV, int]:
    """Exhaustive SAD search of a block over the (2R+1)^2 window.

    `origin` is the (y, x) position of the block in plane coordinates; reads
    outside the reference are clamp-to-edge padded.
    """
    cur = np.asarray(cur_block, dtype=np.int32)
    h, w = cur.shape
    y, x = origin
    r = search_range
    padded = np.pad(np.asarray(ref_plane, dtype=np.int32), r, mode="edge")
    region = padded[y : y + h + 2 * r, x : x + w + 2 * r]
    windows = sliding_window_view(region, (h, w))
    sad = np.abs(windows.astype(np.int64) - cur).sum(axis=(2, 3))
    row, col = _tie_break_pick(sad, r)
    return MV(col - r, row - r), int(sad[row, col])


def mvp_median(
    left: MV | None,
    top: MV | None,
    top_right: MV | None,
    avail: tuple[bool, bool, bool],
) -> MV:
    """Componentwise median predictor; lone left neighbor passes through."""
    if avail[0] and not avail[1] and not avail[2]:
        assert left is not None
        return left
    vals = []
    for mv, ok in zip((left, top, top_right), avail):
        vals.append(mv if ok and mv is not None else ZERO_MV)
    dx = sorted(v.dx for v in vals)[1]
    dy = sorted(v.dy for v in vals)[1]
    return MV(dx, dy)


def mb_difference(mb: MacroblockContext) -> int:
    """SAD of the 16x16 luma block against the co-located reference block."""
    if not mb.state.has_ref:
        raise ValueError("mb_difference needs a reference frame")
    ref = mb.ref_luma_block(0, 0, 16, 16, ZERO_MV)
    return int(np.abs(mb.orig_y - ref).sum())


def skip_choice(mb: MacroblockContext) -> InterChoice:
    """SKIP hypothesis: co-located prediction, zero vector, one flag bit."""
    ref_y, ref_u, ref_v = mb.colocated_ref()  # raises on the first frame
    ssd = int(((mb.orig_y - ref_y) ** 2).sum())
    ssd += int(((mb.orig_u - ref_u) ** 2).sum())
    ssd += int(((mb.orig_v - ref_v) ** 2).sum())
    return InterChoice(MbMode.SKIP, parts=[], ssd=ssd, bits=1)


evaluate_skip = skip_choice


class MvScratch:
    """Causal motion context for partition searches inside one macroblock.

    Lookups outside the macroblock fall through to the frame's committed 4x4
    motion field; cells inside reflect partitions already searched for the
    current candidate only.
    """

    def __init__(self, mb: MacroblockContext):
        self.mb = mb
        self.local = np.zeros((4, 4, 2), dtype=np.int32)
        self.valid = np.zeros((4, 4), dtype=bool)

    def fork(self) -> "MvScratch":
        twin = MvScratch.__new__(MvScratch)
        twin.mb = self.mb
        twin.local = self.local.copy()
        twin.valid = self.valid.copy()
        return twin

    def adopt(self, other: "MvScratch") -> None:
        self.local = other.local
        self.valid = other.valid

    def _cell(self, cy: int, cx: int) -> MV | None:
        base_y, base_x = self.mb.mby * 4, self.mb.mbx * 4
        ly, lx = cy - base_y, cx - base_x
        if 0 <= ly < 4 and 0 <= lx < 4:
            if not self.valid[ly, lx]:
                return None
            return MV(int(self.local[ly, lx, 0]), int(self.local[ly, lx, 1]))
        return self.mb.state.cell_mv(cy, cx)

    def mvp_for(self, rect: Rect) -> MV:
        cy0 = self.mb.mby * 4 + rect.y // 4
        cx0 = self.mb.mbx * 4 + rect.x // 4
        left = self._cell(cy0, cx0 - 1)
        top = self._cell(cy0 - 1, cx0)
        top_right = self._cell(cy0 - 1, cx0 + rect.w // 4)
        return mvp_median(
            left, top, top_right,
            (left is not None, top is not None, top_right is not None),
        )

    def commit(self, rect: Rect, mv: MV) -> None:
        ly, lx = rect.y // 4, rect.x // 4
        self.local[ly : ly + rect.h // 4, lx : lx + rect.w // 4] = (mv.dx, mv.dy)
        self.valid[ly : ly + rect.h // 4, lx : lx + rect.w // 4] = True


class MotionSearcher:
    """Shared SATD search engine for all partitions of one macroblock.

    Hadamard transforms of the current tiles and of every 4x4 patch of the
    reference window are computed once; each partition search then reduces to
    summing cached per-tile cost grids and adding vector-rate terms.
    """

    def __init__(self, mb: MacroblockContext):
        self.mb = mb
        self.range = mb.state.search_range
        self._href: np.ndarray | None = None
        self._hcur: np.ndarray | None = None
        self._tile_grids: dict[tuple[int, int], np.ndarray] = {}
        r = self.range
        self._offsets = np.arange(-r, r + 1)

    def _ensure_transforms(self) -> None:
        if self._href is not None:
            return
        mb, r = self.mb, self.range
        st = mb.state
        y0 = mb.mby * 16 + st.luma_pad - r
        x0 = mb.mbx * 16 + st.luma_pad - r
        region = st.ref_y_padded[y0 : y0 + 16 + 2 * r, x0 : x0 + 16 + 2 * r]
        patches = sliding_window_view(region, (4, 4))
        self._href = (H4 @ patches.astype(np.int64) @ H4.T).astype(np.int32)
        tiles = mb.orig_y.reshape(4, 4, 4, 4).swapaxes(1, 2)
        self._hcur = (H4 @ tiles.astype(np.int64) @ H4.T).astype(np.int32)

    def _tile_grid(self, ty: int, tx: int) -> np.ndarray:
        grid = self._tile_grids.get((ty, tx))
        if grid is None:
            self._ensure_transforms()
            n = 2 * self.range + 1
            window = self._href[4 * ty : 4 * ty + n, 4 * tx : 4 * tx + n]
            diff = np.abs(window - self._hcur[ty, tx])
            grid = diff.sum(axis=(-1, -2), dtype=np.int64) // 2
            self._tile_grids[(ty, tx)] = grid
        return grid

    def search(self, rect: Rect, mvp: MV, lam_motion: float) -> tuple[MV, int, int]:
        """Best vector for one partition under satd + lam_motion * mvd bits.

        Returns (mv, satd, mvd_bits) at the chosen vector.
        """
        satd = None
        for ty in range(rect.y // 4, (rect.y + rect.h) // 4):
            for tx in range(rect.x // 4, (rect.x + rect.w) // 4):
                g = self._tile_grid(ty, tx)
                satd = g.copy() if satd is None else satd + g
        col_bits = se_bits_array(self._offsets - mvp.dx)
        row_bits = se_bits_array(self._offsets - mvp.dy)
        bits = row_bits[:, None] + col_bits[None, :]
        cost = satd + lam_motion * bits
        row, col = _tie_break_pick(cost, self.range)
        mv = MV(col - self.range, row - self.range)
        return mv, int(satd[row, col]), int(bits[row, col])


def search_partitions(
    mb: MacroblockContext,
    rects: tuple[Rect, ...],
    searcher: MotionSearcher,
    scratch: MvScratch,
    lam_motion: float,
) -> tuple[list[PartitionMV], float]:
    """Search rectangles in order, threading the causal predictor context."""
    parts: list[PartitionMV] = []
    total_cost = 0.0
    for rect in rects:
        mvp = scratch.mvp_for(rect)
        mv, satd, bits = searcher.search(rect, mvp, lam_motion)
        scratch.commit(rect, mv)
        parts.append(PartitionMV(rect, mv, MV(mv.dx - mvp.dx, mv.dy - mvp.dy)))
        total_cost += satd + lam_motion * bits
    return parts, total_cost


def evaluate_partition(
    mb: MacroblockContext,
    shape: MbMode | SubMode,
    lam_motion: float,
    searcher: MotionSearcher | None = None,
    scratch: MvScratch | None = None,
) -> InterChoice:
    """Motion-search one partition shape across the macroblock.

    Sub-macroblock shapes are applied to all four 8x8 regions. The result
    carries vectors, coded differences, and the motion search cost; residual
    coding and the final mode cost happen downstream.
    """
    if not mb.state.has_ref:
        raise ValueError("inter partitions need a reference frame")
    searcher = searcher or MotionSearcher(mb)
    scratch = scratch or MvScratch(mb)
    if isinstance(shape, SubMode):
        rects = tuple(r for reg in range(4) for r in region_sub_rects(reg, shape))
        mode = MbMode.P8X8
        sub_modes: tuple[SubMode, ...] | None = (shape,) * 4
    else:
        rects = MB_PART_RECTS[shape]
        mode = shape
        sub_modes = None
    parts, cost = search_partitions(mb, rects, searcher, scratch, lam_motion)
    return InterChoice(mode, parts=parts, sub_modes=sub_modes, motion_cost=cost)
