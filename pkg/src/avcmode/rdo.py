"""Per-mode encode pipeline: predict, code residual, reconstruct, cost.

Everything below runs in exact integer arithmetic except the Lagrangian J
itself, which is a double. Candidates are therefore bit-identical across
runs; only the final comparison involves floating point, with a fixed
strictly-less, canonical-order tie-break applied by the selectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intra
from .context import MacroblockContext
from .modes import (
    Choice,
    InterChoice,
    IntraChoice,
    MbMode,
    RdCost,
    ReconstructedMB,
    SubMode,
    region_sub_rects,
)
from .rate import (
    INTRA4X4_MODE_BITS,
    coeff_block_bits_batch,
    lambda_mode,
    rate_mode,
)
from .transform import (
    dequantize,
    forward_transform_4x4,
    inverse_transform_4x4,
    quantize,
    se_bits,
    ue_bits,
)

__all__ = [
    "lambda_mode",
    "ssd_mode",
    "encode_mb_with_mode",
    "best_intra",
    "IntraSearchResult",
    "region_cost",
]


def ssd_mode(
    orig: tuple[np.ndarray, np.ndarray, np.ndarray],
    recon: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> int:
    """Luma plus both chroma sums of squared differences."""
    total = 0
    for a, b in zip(orig, recon):
        d = a.astype(np.int64) - b.astype(np.int64)
        total += int((d * d).sum())
    return total


def _blocks_of(plane: np.ndarray) -> np.ndarray:
    """Split an (h, w) plane into raster-ordered (n, 4, 4) blocks."""
    h, w = plane.shape
    return plane.reshape(h // 4, 4, w // 4, 4).swapaxes(1, 2).reshape(-1, 4, 4)


def _join_blocks(blocks: np.ndarray, h: int, w: int) -> np.ndarray:
    return blocks.reshape(h // 4, w // 4, 4, 4).swapaxes(1, 2).reshape(h, w)


def code_residual(
    orig: np.ndarray, pred: np.ndarray, qp: int, is_intra: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Transform-code one region; returns (reconstruction, (n, 4, 4) levels)."""
    res = orig.astype(np.int64) - pred.astype(np.int64)
    blocks = _blocks_of(res)
    coeffs = forward_transform_4x4(blocks)
    levels = quantize(coeffs, qp, is_intra)
    rec_res = inverse_transform_4x4(dequantize(levels, qp))
    h, w = orig.shape
    recon = np.clip(pred + _join_blocks(rec_res, h, w), 0, 255)
    return recon, levels


def _inter_prediction(
    mb: MacroblockContext, choice: InterChoice
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    pred_y = np.empty((16, 16), dtype=np.int64)
    pred_u = np.empty((8, 8), dtype=np.int64)
    pred_v = np.empty((8, 8), dtype=np.int64)
    for part in choice.parts:
        r = part.rect
        pred_y[r.y : r.y + r.h, r.x : r.x + r.w] = mb.ref_luma_block(r.y, r.x, r.h, r.w, part.mv)
        cy, cx, ch, cw = r.y // 2, r.x // 2, r.h // 2, r.w // 2
        pred_u[cy : cy + ch, cx : cx + cw] = mb.ref_chroma_block("u", cy, cx, ch, cw, part.mv)
        pred_v[cy : cy + ch, cx : cx + cw] = mb.ref_chroma_block("v", cy, cx, ch, cw, part.mv)
    return pred_y, pred_u, pred_v


def _luma16_neighborhood(mb: MacroblockContext) -> intra.Neighborhood:
    return intra.neighborhood_from(
        mb.state.recon_y, mb.mby * 16, mb.mbx * 16, 16,
        mb.has_top, mb.has_left, mb.has_top_left,
    )


def _chroma_neighborhood(mb: MacroblockContext, plane: np.ndarray) -> intra.Neighborhood:
    return intra.neighborhood_from(
        plane, mb.mby * 8, mb.mbx * 8, 8,
        mb.has_top, mb.has_left, mb.has_top_left,
    )


def _code_chroma_intra(
    mb: MacroblockContext, chroma_mode: int, qp: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    nb_u = _chroma_neighborhood(mb, mb.state.recon_u)
    nb_v = _chroma_neighborhood(mb, mb.state.recon_v)
    rec_u, lv_u = code_residual(mb.orig_u, intra.predict_chroma(chroma_mode, nb_u), qp, True)
    rec_v, lv_v = code_residual(mb.orig_v, intra.predict_chroma(chroma_mode, nb_v), qp, True)
    return rec_u, rec_v, np.concatenate([lv_u, lv_v])


class _Intra4Buffer:
    """Working luma buffer for block-sequential 4x4 intra coding.

    Row 0 and column 0 hold the macroblock's top / left reconstructed border
    (with the 8-sample top-right extension); inner cells fill up as blocks
    are coded so later blocks predict from earlier reconstructions.
    """

    def __init__(self, mb: MacroblockContext):
        self.mb = mb
        buf = np.zeros((17, 25), dtype=np.int64)
        st = mb.state
        y0, x0 = mb.mby * 16, mb.mbx * 16
        if mb.has_top:
            take = min(24, st.width - x0)
            buf[0, 1 : 1 + take] = st.recon_y[y0 - 1, x0 : x0 + take]
        if mb.has_left:
            buf[1:17, 0] = st.recon_y[y0 : y0 + 16, x0 - 1]
        if mb.has_top_left:
            buf[0, 0] = st.recon_y[y0 - 1, x0 - 1]
        self.buf = buf

    def block_neighborhood(self, by: int, bx: int) -> intra.Neighborhood:
        mb = self.mb
        avail_top = by > 0 or mb.has_top
        avail_left = bx > 0 or mb.has_left
        avail_tl = avail_top and avail_left
        if by == 0:
            avail_tr = mb.has_top and (bx < 3 or mb.has_top_right)
        else:
            avail_tr = bx < 3
        return intra.neighborhood_from(
            self.buf, 1 + 4 * by, 1 + 4 * bx, 4,
            avail_top, avail_left, avail_tl, avail_tr, top_right_len=4,
        )

    def write(self, by: int, bx: int, recon: np.ndarray) -> None:
        self.buf[1 + 4 * by : 5 + 4 * by, 1 + 4 * bx : 5 + 4 * bx] = recon

    def luma(self) -> np.ndarray:
        return self.buf[1:17, 1:17].copy()


def _encode_intra4_luma(
    mb: MacroblockContext, modes4: tuple[int, ...], qp: int
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Code the 16 luma blocks in raster order with the given modes."""
    work = _Intra4Buffer(mb)
    levels: list[np.ndarray] = []
    for idx, mode in enumerate(modes4):
        by, bx = divmod(idx, 4)
        nb = work.block_neighborhood(by, bx)
        pred = intra.predict_4x4(mode, nb)
        orig = mb.orig_y[4 * by : 4 * by + 4, 4 * bx : 4 * bx + 4]
        recon, lv = code_residual(orig, pred, qp, True)
        work.write(by, bx, recon)
        levels.extend(lv)
    return work.luma(), levels


def encode_mb_with_mode(
    mb: MacroblockContext, choice: Choice, qp: int
) -> tuple[ReconstructedMB, RdCost]:
    """Run the full predict/transform/reconstruct pipeline for one hypothesis.

    SKIP bypasses residual coding. All other modes code 16 luma and 8 chroma
    4x4 blocks; the rate model sees every one of them.
    """
    lam = lambda_mode(qp)
    if isinstance(choice, InterChoice):
        if choice.mb_mode == MbMode.SKIP:
            ref_y, ref_u, ref_v = mb.colocated_ref()
            levels = [np.zeros((4, 4), dtype=np.int64) for _ in range(24)]
            recon = ReconstructedMB(ref_y.copy(), ref_u.copy(), ref_v.copy(), levels, 0)
            ssd = ssd_mode((mb.orig_y, mb.orig_u, mb.orig_v), (recon.y, recon.u, recon.v))
            return recon, RdCost.compute(ssd, 1, lam)
        pred_y, pred_u, pred_v = _inter_prediction(mb, choice)
        rec_y, lv_y = code_residual(mb.orig_y, pred_y, qp, False)
        rec_u, lv_u = code_residual(mb.orig_u, pred_u, qp, False)
        rec_v, lv_v = code_residual(mb.orig_v, pred_v, qp, False)
        levels = lv_y + lv_u + lv_v
    else:
        if choice.mb_mode == MbMode.INTRA16X16:
            pred_y = intra.predict_16x16(choice.mode16, _luma16_neighborhood(mb))
            rec_y, lv_y = code_residual(mb.orig_y, pred_y, qp, True)
        else:
            rec_y, lv_y = _encode_intra4_luma(mb, choice.modes4, qp)
        rec_u, rec_v, lv_c = _code_chroma_intra(mb, choice.chroma_mode, qp)
        levels = lv_y + lv_c
    ssd = ssd_mode((mb.orig_y, mb.orig_u, mb.orig_v), (rec_y, rec_u, rec_v))
    bits = rate_mode(choice, levels)
    cbp = sum(1 for blk in levels if np.any(blk))
    recon = ReconstructedMB(rec_y, rec_u, rec_v, levels, cbp)
    choice.ssd, choice.bits = ssd, bits
    return recon, RdCost.compute(ssd, bits, lam)


def region_cost(
    mb: MacroblockContext,
    region: int,
    sub: SubMode,
    parts,
    qp: int,
    lam: float,
) -> float:
    """J contribution of one 8x8 region under a sub-partition hypothesis.

    Covers the region's 8x8 luma and its two co-sited 4x4 chroma blocks:
    ssd + lam * (sub-mode index + vector bits + coefficient bits).
    """
    ry, rx = region_sub_rects(region, SubMode.S8X8)[0].y, region_sub_rects(region, SubMode.S8X8)[0].x
    cy, cx = ry // 2, rx // 2
    pred_y = np.empty((8, 8), dtype=np.int64)
    pred_u = np.empty((4, 4), dtype=np.int64)
    pred_v = np.empty((4, 4), dtype=np.int64)
    for part in parts:
        r = part.rect
        pred_y[r.y - ry : r.y - ry + r.h, r.x - rx : r.x - rx + r.w] = mb.ref_luma_block(
            r.y, r.x, r.h, r.w, part.mv
        )
        py, px, ph, pw = r.y // 2, r.x // 2, r.h // 2, r.w // 2
        pred_u[py - cy : py - cy + ph, px - cx : px - cx + pw] = mb.ref_chroma_block(
            "u", py, px, ph, pw, part.mv
        )
        pred_v[py - cy : py - cy + ph, px - cx : px - cx + pw] = mb.ref_chroma_block(
            "v", py, px, ph, pw, part.mv
        )
    orig_y = mb.orig_y[ry : ry + 8, rx : rx + 8]
    orig_u = mb.orig_u[cy : cy + 4, cx : cx + 4]
    orig_v = mb.orig_v[cy : cy + 4, cx : cx + 4]
    rec_y, lv_y = code_residual(orig_y, pred_y, qp, False)
    rec_u, lv_u = code_residual(orig_u, pred_u, qp, False)
    rec_v, lv_v = code_residual(orig_v, pred_v, qp, False)
    ssd = ssd_mode((orig_y, orig_u, orig_v), (rec_y, rec_u, rec_v))
    bits = ue_bits(int(sub))
    for part in parts:
        bits += se_bits(part.mvd.dx) + se_bits(part.mvd.dy)
    bits += int(coeff_block_bits_batch(np.concatenate([lv_y, lv_u, lv_v])).sum())
    return ssd + lam * bits


@dataclass
class IntraSearchResult:
    """Both intra hypotheses for a macroblock plus trial instrumentation."""

    choice16: IntraChoice
    cost16: RdCost
    recon16: ReconstructedMB
    choice4: IntraChoice
    cost4: RdCost
    recon4: ReconstructedMB
    trials: int

    def best(self) -> tuple[IntraChoice, RdCost, ReconstructedMB]:
        if self.cost4.j < self.cost16.j:
            return self.choice4, self.cost4, self.recon4
        return self.choice16, self.cost16, self.recon16


def _pick_chroma_mode(mb: MacroblockContext) -> int:
    """Chroma mode by prediction SSD alone, summed over both planes."""
    nb_u = _chroma_neighborhood(mb, mb.state.recon_u)
    nb_v = _chroma_neighborhood(mb, mb.state.recon_v)
    best_mode, best_ssd = 0, None
    for mode in intra.available_block_modes(nb_u):
        du = mb.orig_u - intra.predict_chroma(mode, nb_u)
        dv = mb.orig_v - intra.predict_chroma(mode, nb_v)
        ssd = int((du * du).sum() + (dv * dv).sum())
        if best_ssd is None or ssd < best_ssd:
            best_mode, best_ssd = mode, ssd
    return best_mode


def best_intra(mb: MacroblockContext, lam: float, qp: int) -> IntraSearchResult:
    """Greedy 4x4 search plus exhaustive 16x16 search, both fully costed.

    Per 4x4 block the greedy criterion is block ssd + lam * (fixed mode
    signaling + coefficient bits); the two assembled hypotheses are then
    compared on their full macroblock J.
    """
    trials = 0
    chroma_mode = _pick_chroma_mode(mb)

    # greedy per-block 4x4 modes
    work = _Intra4Buffer(mb)
    modes4: list[int] = []
    for idx in range(16):
        by, bx = divmod(idx, 4)
        nb = work.block_neighborhood(by, bx)
        orig = mb.orig_y[4 * by : 4 * by + 4, 4 * bx : 4 * bx + 4]
        best = None
        for mode in intra.available_4x4_modes(nb):
            trials += 1
            pred = intra.predict_4x4(mode, nb)
            recon, lv = code_residual(orig, pred, qp, True)
            d = orig - recon
            cost = int((d * d).sum()) + lam * (
                INTRA4X4_MODE_BITS + sum(coeff_block_bits(b) for b in lv)
            )
            if best is None or cost < best[0]:
                best = (cost, mode, recon)
        modes4.append(best[1])
        work.write(by, bx, best[2])
    choice4 = IntraChoice(MbMode.INTRA4X4, modes4=tuple(modes4), chroma_mode=chroma_mode)
    recon4, cost4 = encode_mb_with_mode(mb, choice4, qp)

    # exhaustive 16x16 modes on full macroblock cost
    nb16 = _luma16_neighborhood(mb)
    best16 = None
    for mode in intra.available_block_modes(nb16):
        trials += 1
        cand = IntraChoice(MbMode.INTRA16X16, mode16=mode, chroma_mode=chroma_mode)
        recon, cost = encode_mb_with_mode(mb, cand, qp)
        if best16 is None or cost.j < best16[1].j:
            best16 = (cand, cost, recon)
    return IntraSearchResult(best16[0], best16[1], best16[2], choice4, cost4, recon4, trials)
