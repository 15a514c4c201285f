"""Brute-force mode selection: evaluate everything, keep the J minimum."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .context import MacroblockContext
from .modes import (
    CANONICAL_ORDER,
    MB_PART_RECTS,
    Choice,
    InterChoice,
    MbMode,
    ModeDecision,
    RdCost,
    ReconstructedMB,
    SubMode,
    TraceEntry,
    region_sub_rects,
)
from .motion import MotionSearcher, MvScratch, search_partitions, skip_choice
from .rate import lambda_mode
from .rdo import best_intra, encode_mb_with_mode, region_cost


@dataclass
class Candidate:
    mode: MbMode
    choice: Choice
    cost: RdCost
    recon: ReconstructedMB


class CandidateEvaluator:
    """Evaluates macroblock mode hypotheses; shared by both selectors.

    One instance per macroblock decision: the motion search caches and the
    Lagrange multipliers live here.
    """

    def __init__(self, mb: MacroblockContext, qp: int):
        self.mb = mb
        self.qp = qp
        self.lam = lambda_mode(qp)
        self.lam_motion = math.sqrt(self.lam)
        self.searcher = MotionSearcher(mb)

    def _finish(self, mode: MbMode, choice: Choice) -> Candidate:
        recon, cost = encode_mb_with_mode(self.mb, choice, self.qp)
        return Candidate(mode, choice, cost, recon)

    def eval_skip(self) -> Candidate:
        return self._finish(MbMode.SKIP, skip_choice(self.mb))

    def eval_inter(self, mode: MbMode) -> Candidate:
        scratch = MvScratch(self.mb)
        parts, cost = search_partitions(
            self.mb, MB_PART_RECTS[mode], self.searcher, scratch, self.lam_motion
        )
        return self._finish(mode, InterChoice(mode, parts=parts, motion_cost=cost))

    def eval_p8x8(self) -> tuple[Candidate, list[TraceEntry], int]:
        """Per-region argmin over the four sub-modes, then the full encode.

        Returns the macroblock candidate, one trace entry per sub-mode trial,
        and the number of regions that rejected the plain 8x8 sub-mode.
        """
        scratch = MvScratch(self.mb)
        region_trace: list[TraceEntry] = []
        sub_modes: list[SubMode] = []
        all_parts = []
        for region in range(4):
            best = None
            for sub in SubMode:
                fork = scratch.fork()
                parts, _ = search_partitions(
                    self.mb, region_sub_rects(region, sub), self.searcher, fork, self.lam_motion
                )
                j = region_cost(self.mb, region, sub, parts, self.qp, self.lam)
                region_trace.append(TraceEntry(f"p8x8/r{region}/{sub.name.lower()}", j))
                if best is None or j < best[0]:
                    best = (j, sub, parts, fork)
            sub_modes.append(best[1])
            all_parts.extend(best[2])
            scratch.adopt(best[3])
        choice = InterChoice(MbMode.P8X8, parts=all_parts, sub_modes=tuple(sub_modes))
        cand = self._finish(MbMode.P8X8, choice)
        n_not_8x8 = sum(1 for s in sub_modes if s != SubMode.S8X8)
        return cand, region_trace, n_not_8x8

    def eval_intra(self) -> tuple[Candidate, Candidate]:
        """Both intra hypotheses, 16x16 first (canonical order)."""
        result = best_intra(self.mb, self.lam, self.qp)
        c16 = Candidate(MbMode.INTRA16X16, result.choice16, result.cost16, result.recon16)
        c4 = Candidate(MbMode.INTRA4X4, result.choice4, result.cost4, result.recon4)
        return c16, c4


def pick_decision(
    candidates: dict[MbMode, Candidate],
    trace: list[TraceEntry],
    path: str,
    predicted_class: str | None = None,
) -> ModeDecision:
    """Argmin J in the fixed canonical order with a strictly-less tie-break."""
    best: Candidate | None = None
    for mode in CANONICAL_ORDER:
        cand = candidates.get(mode)
        if cand is None:
            continue
        if best is None or cand.cost.j < best.cost.j:
            best = cand
    assert best is not None
    return ModeDecision(
        mode=best.mode,
        choice=best.choice,
        cost=best.cost,
        recon=best.recon,
        evaluation_count=len(trace),
        trace=trace,
        predicted_class=predicted_class,
        path=path,
    )


def select_exhaustive(mb: MacroblockContext, qp: int) -> ModeDecision:
    """Evaluate every mode and sub-mode; the oracle for selector comparisons."""
    ev = CandidateEvaluator(mb, qp)
    trace: list[TraceEntry] = []
    candidates: dict[MbMode, Candidate] = {}

    def note(cand: Candidate) -> None:
        candidates[cand.mode] = cand
        trace.append(TraceEntry(cand.mode.name.lower(), cand.cost.j, cand.mode, cand.choice))

    note(ev.eval_skip())
    note(ev.eval_inter(MbMode.P16X16))
    note(ev.eval_inter(MbMode.P16X8))
    note(ev.eval_inter(MbMode.P8X16))
    cand8, region_trace, _ = ev.eval_p8x8()
    trace.extend(region_trace)
    note(cand8)
    c16, c4 = ev.eval_intra()
    note(c16)
    note(c4)
    return pick_decision(candidates, trace, path="exhaustive")
