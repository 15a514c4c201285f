"""Benchmark harness: encode runs, machine-readable reports, selector deltas."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .encoder import DecisionRecord, encode_sequence
from .fast import FastConfig, NeighborWeights
from .modes import TableClass
from .video_io import (
    Frame,
    Sequence,
    frame_size_bytes,
    generate_synthetic,
    make_flat_frame,
    make_gradient_frame,
    make_texture_frame,
    read_yuv,
)

DEFAULT_QPS = (28, 32, 36, 40)
DEFAULT_SEARCH_RANGE = 16

CSV_COLUMNS = (
    "frame", "selector", "qp", "bits", "psnr_y", "psnr_u", "psnr_v",
    "mode_evals", "time_ms", "n_skip", "n_16x16", "n_16x8", "n_8x16",
    "n_8x8", "n_sub", "n_intra",
)


@dataclass(frozen=True)
class EncodeConfig:
    """One harness invocation: input, geometry, qp set, selector, gates."""

    input: str
    width: int
    height: int
    frames: int
    qps: tuple[int, ...] = DEFAULT_QPS
    selector: str = "fast"
    search_range: int = DEFAULT_SEARCH_RANGE
    fast: FastConfig = field(default_factory=FastConfig)


@dataclass
class ReportRow:
    frame: int
    selector: str
    qp: int
    bits: int
    psnr_y: float
    psnr_u: float
    psnr_v: float
    mode_evals: int
    time_ms: float
    n_skip: int
    n_16x16: int
    n_16x8: int
    n_8x16: int
    n_8x8: int
    n_sub: int
    n_intra: int


@dataclass
class EncodeReport:
    rows: list[ReportRow]
    decisions: dict[int, list[list[DecisionRecord]]] = field(default_factory=dict, repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EncodeReport):
            return NotImplemented
        return self.rows == other.rows

    def aggregate(self) -> dict:
        """Sums and means recomputed from the rows."""
        n = len(self.rows)
        agg = {
            "frames": n,
            "bits": sum(r.bits for r in self.rows),
            "mode_evals": sum(r.mode_evals for r in self.rows),
            "time_ms": sum(r.time_ms for r in self.rows),
        }
        if n:
            agg["psnr_y_mean"] = sum(r.psnr_y for r in self.rows) / n
            agg["psnr_u_mean"] = sum(r.psnr_u for r in self.rows) / n
            agg["psnr_v_mean"] = sum(r.psnr_v for r in self.rows) / n
        for col in CSV_COLUMNS[9:]:
            agg[col] = sum(getattr(r, col) for r in self.rows)
        return agg

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(CSV_COLUMNS) + "\n")
        for r in self.rows:
            out.write(
                f"{r.frame},{r.selector},{r.qp},{r.bits},"
                f"{r.psnr_y:.6f},{r.psnr_u:.6f},{r.psnr_v:.6f},"
                f"{r.mode_evals},{r.time_ms:.3f},"
                f"{r.n_skip},{r.n_16x16},{r.n_16x8},{r.n_8x16},"
                f"{r.n_8x8},{r.n_sub},{r.n_intra}\n"
            )
        return out.getvalue()

    def to_json(self) -> str:
        payload = {
            "rows": [vars(r) for r in self.rows],
            "aggregate": self.aggregate(),
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EncodeReport":
        payload = json.loads(text)
        return cls(rows=[ReportRow(**row) for row in payload["rows"]])

    @classmethod
    def from_csv(cls, text: str) -> "EncodeReport":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        rows = []
        for ln in lines[1:]:
            f = ln.split(",")
            rows.append(
                ReportRow(
                    frame=int(f[0]), selector=f[1], qp=int(f[2]), bits=int(f[3]),
                    psnr_y=float(f[4]), psnr_u=float(f[5]), psnr_v=float(f[6]),
                    mode_evals=int(f[7]), time_ms=float(f[8]),
                    n_skip=int(f[9]), n_16x16=int(f[10]), n_16x8=int(f[11]),
                    n_8x16=int(f[12]), n_8x8=int(f[13]), n_sub=int(f[14]),
                    n_intra=int(f[15]),
                )
            )
        return cls(rows=rows)


_BASE_BUILDERS = {
    "gradient": make_gradient_frame,
    "texture": make_texture_frame,
    "flat": make_flat_frame,
}


def parse_synthetic_spec(spec: str, width: int, height: int, count: int) -> Sequence:
    """Build a sequence from a CLI spec like synthetic:pan:dx=2,dy=0,base=texture."""
    parts = spec.split(":")
    if parts[0] != "synthetic" or len(parts) < 2:
        raise ValueError(f"bad synthetic spec {spec!r}")
    kind = parts[1]
    params: dict[str, str] = {}
    if len(parts) > 2 and parts[2]:
        for kv in parts[2].split(","):
            k, _, v = kv.partition("=")
            if not v:
                raise ValueError(f"bad synthetic parameter {kv!r} in {spec!r}")
            params[k] = v
    base_kind = params.pop("base", "gradient")
    if base_kind not in _BASE_BUILDERS:
        raise ValueError(f"unknown base {base_kind!r}; choose from {sorted(_BASE_BUILDERS)}")
    builder = _BASE_BUILDERS[base_kind]
    base_seed = int(params.pop("base_seed", "1"))
    base = builder(width, height, base_seed) if base_kind == "texture" else builder(width, height)
    kwargs = {k: int(v) for k, v in params.items()}
    return generate_synthetic(kind, base, count, **kwargs)


def load_input(cfg: EncodeConfig) -> Sequence:
    if cfg.input.startswith("synthetic:"):
        return parse_synthetic_spec(cfg.input, cfg.width, cfg.height, cfg.frames)
    data = Path(cfg.input).read_bytes()
    seq = read_yuv(data, cfg.width, cfg.height)
    if len(seq.frames) < cfg.frames:
        raise ValueError(
            f"{cfg.input} holds {len(seq.frames)} frames, {cfg.frames} requested"
        )
    return Sequence(seq.frames[: cfg.frames], seq.frame_rate)


def run_encode(cfg: EncodeConfig, on_decision=None) -> EncodeReport:
    """Encode the configured input once per qp and collect report rows."""
    seq = load_input(cfg)
    rows: list[ReportRow] = []
    decisions: dict[int, list[list[DecisionRecord]]] = {}
    for qp in cfg.qps:
        stats, records, _ = encode_sequence(
            seq,
            qp,
            selector=cfg.selector,
            fast_cfg=cfg.fast,
            search_range=cfg.search_range,
            on_decision=on_decision,
        )
        decisions[qp] = records
        for st in stats:
            c = st.mode_counts
            rows.append(
                ReportRow(
                    frame=st.frame,
                    selector=cfg.selector,
                    qp=qp,
                    bits=st.bits,
                    psnr_y=st.psnr.psnr_y,
                    psnr_u=st.psnr.psnr_u,
                    psnr_v=st.psnr.psnr_v,
                    mode_evals=st.mode_evaluations,
                    time_ms=st.time_ms,
                    n_skip=c[TableClass.SKIP],
                    n_16x16=c[TableClass.P16X16],
                    n_16x8=c[TableClass.P16X8],
                    n_8x16=c[TableClass.P8X16],
                    n_8x8=c[TableClass.P8X8],
                    n_sub=c[TableClass.SUB],
                    n_intra=c[TableClass.INTRA],
                )
            )
    return EncodeReport(rows=rows, decisions=decisions)


def dump_decisions_csv(report: EncodeReport) -> str:
    out = io.StringIO()
    out.write("qp,frame,mb_x,mb_y,mode,table_class,classification,path,j,bits,evals\n")
    for qp in sorted(report.decisions):
        for frame_records in report.decisions[qp]:
            for r in frame_records:
                out.write(
                    f"{qp},{r.frame},{r.mbx},{r.mby},{r.mode.name},"
                    f"{r.table_class.name},{r.predicted_class or '-'},{r.path},"
                    f"{r.j:.3f},{r.bits},{r.evaluations}\n"
                )
    return out.getvalue()


@dataclass(frozen=True)
class CompareResult:
    delta_time_pct: float
    delta_psnr_db: float
    delta_bitrate_pct: float
    delta_evaluations_pct: float


def compare(ref: EncodeReport, proposed: EncodeReport) -> CompareResult:
    """Relative deltas of a proposed run against a reference run.

    Time and bitrate are percentage changes of the aggregate sums; the PSNR
    delta is the difference of per-frame luma means. Both runs must cover
    the same frames and qp values.
    """
    if len(ref.rows) != len(proposed.rows):
        raise ValueError("reports cover different frame counts")
    for a, b in zip(ref.rows, proposed.rows):
        if (a.frame, a.qp) != (b.frame, b.qp):
            raise ValueError("reports cover different frame/qp grids")
    ra, pa = ref.aggregate(), proposed.aggregate()
    if ra["time_ms"] <= 0 or ra["bits"] <= 0 or ra["mode_evals"] <= 0:
        raise ValueError("reference aggregates must be positive")
    return CompareResult(
        delta_time_pct=(pa["time_ms"] - ra["time_ms"]) / ra["time_ms"] * 100.0,
        delta_psnr_db=pa["psnr_y_mean"] - ra["psnr_y_mean"],
        delta_bitrate_pct=(pa["bits"] - ra["bits"]) / ra["bits"] * 100.0,
        delta_evaluations_pct=(pa["mode_evals"] - ra["mode_evals"]) / ra["mode_evals"] * 100.0,
    )


def load_report(path: str | Path) -> EncodeReport:
    text = Path(path).read_text()
    if str(path).endswith(".json"):
        return EncodeReport.from_json(text)
    return EncodeReport.from_csv(text)


def write_report(report: EncodeReport, path: str | Path) -> None:
    text = report.to_json() if str(path).endswith(".json") else report.to_csv()
    Path(path).write_text(text)
