"""IPPP sequence encoding driver: first frame intra, the rest P-frames."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .context import FrameState, MacroblockContext
from .exhaustive import CandidateEvaluator, pick_decision, select_exhaustive
from .fast import FastConfig, ModeProbabilityTable, select_fast, update_probability_table
from .modes import MbMode, ModeDecision, TableClass, TraceEntry
from .video_io import Frame, PlanePsnr, Sequence, psnr

SELECTORS = ("fast", "exhaustive")


@dataclass
class DecisionRecord:
    """Flat per-macroblock record kept for dumps and classifier metrics."""

    frame: int
    mbx: int
    mby: int
    mode: MbMode
    table_class: TableClass
    predicted_class: str | None
    path: str
    j: float
    bits: int
    evaluations: int


@dataclass
class FrameStats:
    frame: int
    bits: int
    psnr: PlanePsnr
    mode_evaluations: int
    time_ms: float
    mode_counts: dict[TableClass, int]


def intra_frame_decision(mb: MacroblockContext, qp: int) -> ModeDecision:
    """I-frame macroblock: both intra hypotheses, nothing else."""
    ev = CandidateEvaluator(mb, qp)  # the motion searcher stays untouched
    c16, c4 = ev.eval_intra()
    trace = [
        TraceEntry(c16.mode.name.lower(), c16.cost.j, c16.mode, c16.choice),
        TraceEntry(c4.mode.name.lower(), c4.cost.j, c4.mode, c4.choice),
    ]
    return pick_decision({c16.mode: c16, c4.mode: c4}, trace, path="intra_frame")


def encode_sequence(
    seq: Sequence,
    qp: int,
    selector: str = "exhaustive",
    fast_cfg: FastConfig | None = None,
    search_range: int = 16,
    max_frames: int | None = None,
    on_decision=None,
) -> tuple[list[FrameStats], list[list[DecisionRecord]], list[Frame]]:
    """Encode an IPPP sequence with the chosen selector.

    Returns per-frame stats, per-frame decision records, and the
    reconstructed frames. `on_decision(mb, decision)` fires before each
    macroblock commit, which acceptance checks use for independent
    re-evaluation.
    """
    if selector not in SELECTORS:
        raise ValueError(f"selector must be one of {SELECTORS}")
    cfg = fast_cfg or FastConfig()
    frames = seq.frames[:max_frames] if max_frames else seq.frames
    stats: list[FrameStats] = []
    records: list[list[DecisionRecord]] = []
    recons: list[Frame] = []
    table = ModeProbabilityTable.uniform()
    prev_recon: Frame | None = None

    for fidx, frame in enumerate(frames):
        state = FrameState(frame, prev_recon, search_range)
        t0 = time.perf_counter()
        frame_records: list[DecisionRecord] = []
        bits = evals = 0
        counts = {cls_: 0 for cls_ in TableClass}
        for mby in range(state.mb_rows):
            for mbx in range(state.mb_cols):
                mb = MacroblockContext(state, mbx, mby)
                if fidx == 0:
                    decision = intra_frame_decision(mb, qp)
                elif selector == "fast":
                    decision = select_fast(mb, qp, cfg, table)
                else:
                    decision = select_exhaustive(mb, qp)
                if on_decision is not None:
                    on_decision(mb, decision)
                state.commit(mbx, mby, decision)
                bits += decision.cost.bits
                evals += decision.evaluation_count
                counts[decision.table_class] += 1
                frame_records.append(
                    DecisionRecord(
                        frame=fidx,
                        mbx=mbx,
                        mby=mby,
                        mode=decision.mode,
                        table_class=decision.table_class,
                        predicted_class=decision.predicted_class,
                        path=decision.path,
                        j=decision.cost.j,
                        bits=decision.cost.bits,
                        evaluations=decision.evaluation_count,
                    )
                )
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        recon = state.recon_frame()
        stats.append(
            FrameStats(
                frame=fidx,
                bits=bits,
                psnr=psnr(frame, recon),
                mode_evaluations=evals,
                time_ms=elapsed_ms,
                mode_counts=counts,
            )
        )
        records.append(frame_records)
        recons.append(recon)
        if fidx >= 1:
            table = update_probability_table(r.table_class for r in frame_records)
        prev_recon = recon
    return stats, records, recons
