"""Fast mode selection: threshold gates, probability and motion classifiers.

The selector short-circuits cheap cases (boundary delegation, scene-change
intra routing, skip detection) and otherwise routes each macroblock through
a classifier-driven subset of the candidate modes, so it never evaluates
more than the brute-force baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .context import MacroblockContext
from .modes import (
    HIGH_MODES,
    MbMode,
    ModeDecision,
    TableClass,
    TraceEntry,
)
from .exhaustive import Candidate, CandidateEvaluator, pick_decision, select_exhaustive
from .motion import mb_difference


class MbClass(Enum):
    LMB = "lmb"
    HMB = "hmb"
    TRUE_HMB = "true_hmb"


class Motion(Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"


@dataclass(frozen=True)
class NeighborWeights:
    """Trust given to the left / top / top-right / top-left neighbors."""

    w_a: float = 0.3
    w_b: float = 0.3
    w_c: float = 0.2
    w_d: float = 0.2

    def as_dict(self) -> dict[str, float]:
        return {"A": self.w_a, "B": self.w_b, "C": self.w_c, "D": self.w_d}


@dataclass(frozen=True)
class FastConfig:
    """Tunable gates for the fast selector; defaults match the benchmark setup."""

    phi_skip: int = 192          # skip when the co-located difference stays under this
    phi_inter: int = 20000       # route to intra above this (scene change)
    homog_16: int = 20000        # 16x16 homogeneity threshold
    homog_8: int = 5000          # 8x8 homogeneity threshold
    weights: NeighborWeights = field(default_factory=NeighborWeights)
    motion_var_threshold: float = 4.0   # neighbor vector variance, pel^2 per component
    true_hmb_sum_rule: bool = False     # alternative reading of the true-HMB gate


@dataclass(frozen=True)
class ModeProbabilityTable:
    """Mode frequencies of the previous frame and the derived LMB/HMB cut."""

    freqs: tuple[float, ...]  # indexed by TableClass

    @classmethod
    def uniform(cls) -> "ModeProbabilityTable":
        return cls(freqs=(1.0 / 7.0,) * 7)

    @property
    def p_mode_cut(self) -> float:
        cut = 1.0 - (
            self.freqs[TableClass.SKIP]
            + self.freqs[TableClass.P16X16]
            + self.freqs[TableClass.P8X8]
        )
        return min(1.0, max(0.0, cut))

    def freq(self, cls_: TableClass) -> float:
        return self.freqs[cls_]


def update_probability_table(prev_decisions) -> ModeProbabilityTable:
    """Frequencies over one decided frame's per-macroblock table classes."""
    counts = [0] * 7
    total = 0
    for item in prev_decisions:
        cls_ = item.table_class if isinstance(item, ModeDecision) else TableClass(item)
        counts[cls_] += 1
        total += 1
    if total == 0:
        return ModeProbabilityTable.uniform()
    return ModeProbabilityTable(freqs=tuple(c / total for c in counts))


def neighbor_probability(
    neighbor_modes: dict[str, MbMode | None],
    weights: NeighborWeights,
) -> tuple[float, float]:
    """Weighted vote of decided neighbors for the low/high mode classes.

    Weights renormalize over available neighbors; returns (p_low, p_high)
    summing to one. At least one neighbor must be decided.
    """
    wmap = weights.as_dict()
    total = 0.0
    high = 0.0
    for key, mode in neighbor_modes.items():
        if mode is None:
            continue
        w = wmap[key]
        total += w
        if mode in HIGH_MODES:
            high += w
    if total == 0.0:
        raise ValueError("no decided neighbors; use the boundary path instead")
    p_high = high / total
    return 1.0 - p_high, p_high


def classify_probability(
    p_high: float, table: ModeProbabilityTable, cfg: FastConfig | None = None
) -> MbClass:
    """LMB below the cut; HMB otherwise, upgraded to TRUE_HMB per the gate."""
    cut = table.p_mode_cut
    if p_high < cut:
        return MbClass.LMB
    if cfg is not None and cfg.true_hmb_sum_rule:
        gate = (
            table.freq(TableClass.SKIP)
            + table.freq(TableClass.P16X16)
            + table.freq(TableClass.P8X8)
        )
    else:
        gate = min(
            table.freq(TableClass.SKIP),
            table.freq(TableClass.P16X16),
            table.freq(TableClass.P8X8),
        )
    return MbClass.TRUE_HMB if cut > gate else MbClass.HMB


def homogeneity(block: np.ndarray) -> int:
    """Edge energy: summed absolute horizontal plus vertical adjacent differences."""
    b = np.asarray(block, dtype=np.int64)
    horiz = np.abs(b[:, 1:] - b[:, :-1]).sum()
    vert = np.abs(b[1:, :] - b[:-1, :]).sum()
    return int(horiz + vert)


def classify_motion(mb: MacroblockContext, cfg: FastConfig, delta: int) -> Motion:
    """COMPLEX when causal neighbor motion disagrees or the block moved a lot.

    Uses the per-neighbor mean vectors; population variance above the
    threshold on either component, or delta above 4x the 8x8 homogeneity
    threshold, marks complex motion.
    """
    st = mb.state
    vecs = []
    for dx_mb, dy_mb in ((-1, 0), (0, -1), (1, -1), (-1, -1)):
        nx, ny = mb.mbx + dx_mb, mb.mby + dy_mb
        if 0 <= nx < st.mb_cols and 0 <= ny < st.mb_rows and st.mb_is_inter[ny, nx]:
            vecs.append(st.mb_mean_mv[ny, nx])
    if delta > 4 * cfg.homog_8:
        return Motion.COMPLEX
    if len(vecs) >= 2:
        arr = np.array(vecs)
        var = arr.var(axis=0)
        if var[0] > cfg.motion_var_threshold or var[1] > cfg.motion_var_threshold:
            return Motion.COMPLEX
    return Motion.SIMPLE


def select_fast(
    mb: MacroblockContext,
    qp: int,
    cfg: FastConfig,
    table: ModeProbabilityTable,
) -> ModeDecision:
    """Classifier-guided mode decision for one P-frame macroblock."""
    # boundary macroblocks get the full treatment
    if mb.is_boundary:
        decision = select_exhaustive(mb, qp)
        decision.path = "boundary"
        return decision

    ev = CandidateEvaluator(mb, qp)
    trace: list[TraceEntry] = []
    candidates: dict[MbMode, Candidate] = {}

    def note(cand: Candidate) -> None:
        candidates[cand.mode] = cand
        trace.append(TraceEntry(cand.mode.name.lower(), cand.cost.j, cand.mode, cand.choice))

    def finish(path: str, predicted: str | None) -> ModeDecision:
        return pick_decision(candidates, trace, path=path, predicted_class=predicted)

    delta = mb_difference(mb)

    # scene-change gate: very large difference routes to intra, with a
    # single large-partition inter candidate as a safety net
    if delta > cfg.phi_inter:
        note(ev.eval_inter(MbMode.P16X16))
        c16, c4 = ev.eval_intra()
        note(c16)
        note(c4)
        return finish("intra_route", "high")

    # skip gate: essentially no co-located change
    if delta <= cfg.phi_skip:
        note(ev.eval_skip())
        return finish("skip_gate", "low")

    p_low, p_high = neighbor_probability(mb.neighbor_modes(), cfg.weights)
    mb_class = classify_probability(p_high, table, cfg)
    homogeneous = homogeneity(mb.orig_y) < cfg.homog_16

    def eval_intra_pair() -> None:
        c16, c4 = ev.eval_intra()
        note(c16)
        note(c4)

    def eval_p8x8_full() -> int:
        cand8, region_trace, n_not = ev.eval_p8x8()
        trace.extend(region_trace)
        note(cand8)
        return n_not

    if mb_class is MbClass.LMB:
        # large partitions plus the intra pair
        note(ev.eval_inter(MbMode.P16X16))
        note(ev.eval_inter(MbMode.P16X8))
        note(ev.eval_inter(MbMode.P8X16))
        eval_intra_pair()
        return finish("lmb_large", "low")

    if mb_class is MbClass.TRUE_HMB:
        note(ev.eval_inter(MbMode.P16X16))
        eval_p8x8_full()
        return finish("true_hmb", "high")

    # plain HMB: homogeneity arbitrates, then the motion classifier
    if not homogeneous and classify_motion(mb, cfg, delta) is Motion.COMPLEX:
        # sub-partition route
        n_not = eval_p8x8_full()
        if n_not > 2:
            eval_intra_pair()
            return finish("hmb_complex_intra", "high")
        j8 = candidates[MbMode.P8X8].cost.j
        for mode in (MbMode.P16X16, MbMode.P16X8, MbMode.P8X16):
            cand = ev.eval_inter(mode)
            note(cand)
            if cand.cost.j > j8:
                break
        return finish("hmb_complex_large", "high")

    # homogeneous or simple motion: try large partitions first
    c16 = ev.eval_inter(MbMode.P16X16)
    note(c16)
    c168 = ev.eval_inter(MbMode.P16X8)
    note(c168)
    if not c16.cost.j < c168.cost.j:
        note(ev.eval_inter(MbMode.P8X16))
        eval_p8x8_full()
    eval_intra_pair()
    return finish("hmb_simple", "high")


@dataclass(frozen=True)
class ClassificationMetrics:
    correct_ratio: float
    hmb_err_ratio: float
    lmb_err_ratio: float


def classification_metrics(fast_decisions, exhaustive_decisions) -> ClassificationMetrics:
    """Agreement of the fast selector with the exhaustive oracle.

    correct_ratio compares final macroblock modes. The error ratios count
    macroblocks whose oracle mode class contradicts the class the fast path
    implied; macroblocks without an implied class (boundary delegation) only
    enter the correct_ratio denominator.
    """
    fast = list(fast_decisions)
    exh = list(exhaustive_decisions)
    if len(fast) != len(exh):
        raise ValueError(f"decision streams differ in length: {len(fast)} != {len(exh)}")
    if not fast:
        raise ValueError("empty decision streams")
    n = len(fast)
    correct = hmb_err = lmb_err = 0
    for f, e in zip(fast, exh):
        if f.mode == e.mode:
            correct += 1
        exh_high = e.mode in HIGH_MODES
        if exh_high and f.predicted_class == "low":
            hmb_err += 1
        if not exh_high and f.predicted_class == "high":
            lmb_err += 1
    return ClassificationMetrics(correct / n, hmb_err / n, lmb_err / n)
