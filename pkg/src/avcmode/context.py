"""Per-frame coding state and macroblock access helpers."""

from __future__ import annotations

import numpy as np

from .modes import (
    MV,
    InterChoice,
    IntraChoice,
    MbMode,
    ModeDecision,
    ZERO_MV,
)
from .video_io import Frame


class FrameState:
    """Mutable raster-order coding state for one frame.

    Holds the original planes, the growing reconstruction, the previous
    frame's reconstruction (clamp-padded for motion reads) and per-macroblock
    causal metadata: final modes, the 4x4-granular motion vector field, and
    mean motion per macroblock.
    """

    def __init__(self, frame: Frame, ref: Frame | None, search_range: int = 16):
        self.width = frame.width
        self.height = frame.height
        self.mb_cols = frame.width // 16
        self.mb_rows = frame.height // 16
        self.search_range = search_range

        self.orig_y = frame.y.astype(np.int32)
        self.orig_u = frame.u.astype(np.int32)
        self.orig_v = frame.v.astype(np.int32)

        self.recon_y = np.zeros_like(self.orig_y)
        self.recon_u = np.zeros_like(self.orig_u)
        self.recon_v = np.zeros_like(self.orig_v)

        self.has_ref = ref is not None
        if ref is not None:
            pad = search_range
            cpad = search_range // 2
            self.ref_y = ref.y.astype(np.int32)
            self.ref_u = ref.u.astype(np.int32)
            self.ref_v = ref.v.astype(np.int32)
            self.ref_y_padded = np.pad(self.ref_y, pad, mode="edge")
            self.ref_u_padded = np.pad(self.ref_u, cpad, mode="edge")
            self.ref_v_padded = np.pad(self.ref_v, cpad, mode="edge")
            self.luma_pad = pad
            self.chroma_pad = cpad

        # -1 marks undecided macroblocks.
        self.mb_mode = np.full((self.mb_rows, self.mb_cols), -1, dtype=np.int32)
        self.mb_mean_mv = np.zeros((self.mb_rows, self.mb_cols, 2), dtype=np.float64)
        self.mb_is_inter = np.zeros((self.mb_rows, self.mb_cols), dtype=bool)

        # Motion field at 4x4 granularity; valid only for decided inter blocks.
        self.mv4 = np.zeros((self.mb_rows * 4, self.mb_cols * 4, 2), dtype=np.int32)
        self.mv4_valid = np.zeros((self.mb_rows * 4, self.mb_cols * 4), dtype=bool)

    def cell_mv(self, cy: int, cx: int) -> MV | None:
        """Motion vector of one decided 4x4 cell, or None if unavailable."""
        if cy < 0 or cx < 0 or cy >= self.mb_rows * 4 or cx >= self.mb_cols * 4:
            return None
        if not self.mv4_valid[cy, cx]:
            return None
        return MV(int(self.mv4[cy, cx, 0]), int(self.mv4[cy, cx, 1]))

    def neighbor_mode(self, mbx: int, mby: int) -> MbMode | None:
        if mbx < 0 or mby < 0 or mbx >= self.mb_cols or mby >= self.mb_rows:
            return None
        m = self.mb_mode[mby, mbx]
        return MbMode(int(m)) if m >= 0 else None

    def commit(self, mbx: int, mby: int, decision: ModeDecision) -> None:
        """Write a final decision: reconstruction, mode grid, motion field."""
        y0, x0 = mby * 16, mbx * 16
        rec = decision.recon
        self.recon_y[y0 : y0 + 16, x0 : x0 + 16] = rec.y
        self.recon_u[y0 // 2 : y0 // 2 + 8, x0 // 2 : x0 // 2 + 8] = rec.u
        self.recon_v[y0 // 2 : y0 // 2 + 8, x0 // 2 : x0 // 2 + 8] = rec.v
        self.mb_mode[mby, mbx] = int(decision.mode)

        choice = decision.choice
        cy0, cx0 = mby * 4, mbx * 4
        if isinstance(choice, IntraChoice):
            return
        self.mb_is_inter[mby, mbx] = True
        if choice.mb_mode == MbMode.SKIP:
            self.mv4[cy0 : cy0 + 4, cx0 : cx0 + 4] = 0
            self.mv4_valid[cy0 : cy0 + 4, cx0 : cx0 + 4] = True
            self.mb_mean_mv[mby, mbx] = (0.0, 0.0)
            return
        for part in choice.parts:
            ry, rx = cy0 + part.rect.y // 4, cx0 + part.rect.x // 4
            rh, rw = part.rect.h // 4, part.rect.w // 4
            self.mv4[ry : ry + rh, rx : rx + rw, 0] = part.mv.dx
            self.mv4[ry : ry + rh, rx : rx + rw, 1] = part.mv.dy
            self.mv4_valid[ry : ry + rh, rx : rx + rw] = True
        mvs = np.array([(p.mv.dx, p.mv.dy) for p in choice.parts], dtype=np.float64)
        self.mb_mean_mv[mby, mbx] = mvs.mean(axis=0)

    def recon_frame(self) -> Frame:
        return Frame(
            self.width,
            self.height,
            np.clip(self.recon_y, 0, 255).astype(np.uint8),
            np.clip(self.recon_u, 0, 255).astype(np.uint8),
            np.clip(self.recon_v, 0, 255).astype(np.uint8),
        )


class MacroblockContext:
    """One macroblock's view of the frame state."""

    def __init__(self, state: FrameState, mbx: int, mby: int):
        self.state = state
        self.mbx = mbx
        self.mby = mby
        y0, x0 = mby * 16, mbx * 16
        self.orig_y = state.orig_y[y0 : y0 + 16, x0 : x0 + 16]
        self.orig_u = state.orig_u[y0 // 2 : y0 // 2 + 8, x0 // 2 : x0 // 2 + 8]
        self.orig_v = state.orig_v[y0 // 2 : y0 // 2 + 8, x0 // 2 : x0 // 2 + 8]

    @property
    def has_left(self) -> bool:
        return self.mbx > 0

    @property
    def has_top(self) -> bool:
        return self.mby > 0

    @property
    def has_top_left(self) -> bool:
        return self.mbx > 0 and self.mby > 0

    @property
    def has_top_right(self) -> bool:
        return self.mby > 0 and self.mbx < self.state.mb_cols - 1

    @property
    def is_boundary(self) -> bool:
        """True on the first macroblock row or column of the frame."""
        return self.mbx == 0 or self.mby == 0

    def ref_luma_block(self, rect_y: int, rect_x: int, h: int, w: int, mv: MV) -> np.ndarray:
        """Motion-compensated luma read from the clamp-padded reference."""
        st = self.state
        y = self.mby * 16 + rect_y + mv.dy + st.luma_pad
        x = self.mbx * 16 + rect_x + mv.dx + st.luma_pad
        return st.ref_y_padded[y : y + h, x : x + w]

    def ref_chroma_block(self, plane: str, rect_y: int, rect_x: int, h: int, w: int, mv: MV) -> np.ndarray:
        """Chroma read at half resolution; luma vectors floor-divide by two."""
        st = self.state
        src = st.ref_u_padded if plane == "u" else st.ref_v_padded
        y = self.mby * 8 + rect_y + (mv.dy >> 1) + st.chroma_pad
        x = self.mbx * 8 + rect_x + (mv.dx >> 1) + st.chroma_pad
        return src[y : y + h, x : x + w]

    def colocated_ref(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.state.has_ref:
            raise ValueError("no reference frame available")
        return (
            self.ref_luma_block(0, 0, 16, 16, ZERO_MV),
            self.ref_chroma_block("u", 0, 0, 8, 8, ZERO_MV),
            self.ref_chroma_block("v", 0, 0, 8, 8, ZERO_MV),
        )

    def neighbor_modes(self) -> dict[str, MbMode | None]:
        """Causal neighbor modes: A left, B top, C top-right, D top-left."""
        st = self.state
        return {
            "A": st.neighbor_mode(self.mbx - 1, self.mby),
            "B": st.neighbor_mode(self.mbx, self.mby - 1),
            "C": st.neighbor_mode(self.mbx + 1, self.mby - 1),
            "D": st.neighbor_mode(self.mbx - 1, self.mby - 1),
        }
