"""Command line front end: encode sequences and compare selector runs."""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from .bench import (
    DEFAULT_QPS,
    EncodeConfig,
    compare as compare_reports,
    dump_decisions_csv,
    load_report,
    run_encode,
    write_report,
)
from .fast import FastConfig, NeighborWeights


@click.group()
def main():
    """Macroblock mode-decision benchmark harness for raw I420 video."""


@main.command()
@click.option("--input", "input_", required=True,
              help="I420 file path or synthetic:KIND[:k=v,...] spec "
                   "(kinds: static, pan, noise, cut; e.g. synthetic:pan:dx=2,dy=0).")
@click.option("--width", required=True, type=int, help="Frame width, multiple of 16.")
@click.option("--height", required=True, type=int, help="Frame height, multiple of 16.")
@click.option("--frames", required=True, type=int, help="Number of frames to encode.")
@click.option("--qp", "qps", multiple=True, type=click.IntRange(0, 51),
              help="Quantizer; repeatable. Defaults to the 28/32/36/40 sweep.")
@click.option("--selector", type=click.Choice(["fast", "exhaustive"]), default="fast",
              show_default=True, help="Mode-decision strategy.")
@click.option("--phi-skip", type=int, default=None, help="Skip-gate difference threshold.")
@click.option("--phi-inter", type=int, default=None, help="Intra-route difference threshold.")
@click.option("--homog16", type=int, default=None, help="16x16 homogeneity threshold.")
@click.option("--homog8", type=int, default=None, help="8x8 homogeneity threshold.")
@click.option("--wa", type=float, default=None, help="Left neighbor weight.")
@click.option("--wb", type=float, default=None, help="Top neighbor weight.")
@click.option("--wc", type=float, default=None, help="Top-right neighbor weight.")
@click.option("--wd", type=float, default=None, help="Top-left neighbor weight.")
@click.option("--report", "report_path", required=True, type=click.Path(),
              help="Output report path (.json for JSON, anything else for CSV).")
@click.option("--dump-decisions", "dump_path", type=click.Path(), default=None,
              help="Optional per-macroblock decision dump (CSV).")
def encode(input_, width, height, frames, qps, selector, phi_skip, phi_inter,
           homog16, homog8, wa, wb, wc, wd, report_path, dump_path):
    """Encode a sequence and write the per-frame report."""
    base_cfg = FastConfig()
    weights = base_cfg.weights
    if any(v is not None for v in (wa, wb, wc, wd)):
        weights = NeighborWeights(
            w_a=wa if wa is not None else weights.w_a,
            w_b=wb if wb is not None else weights.w_b,
            w_c=wc if wc is not None else weights.w_c,
            w_d=wd if wd is not None else weights.w_d,
        )
    fast_cfg = dataclasses.replace(
        base_cfg,
        phi_skip=phi_skip if phi_skip is not None else base_cfg.phi_skip,
        phi_inter=phi_inter if phi_inter is not None else base_cfg.phi_inter,
        homog_16=homog16 if homog16 is not None else base_cfg.homog_16,
        homog_8=homog8 if homog8 is not None else base_cfg.homog_8,
        weights=weights,
    )
    cfg = EncodeConfig(
        input=input_,
        width=width,
        height=height,
        frames=frames,
        qps=tuple(qps) if qps else DEFAULT_QPS,
        selector=selector,
        fast=fast_cfg,
    )
    try:
        report = run_encode(cfg)
    except (ValueError, OSError) as exc:
        raise click.ClickException(f"{input_}: {exc}") from exc
    write_report(report, report_path)
    if dump_path:
        Path(dump_path).write_text(dump_decisions_csv(report))
    agg = report.aggregate()
    click.echo(
        f"encoded {agg['frames']} rows: {agg['bits']} bits, "
        f"{agg['mode_evals']} mode evaluations, {agg['time_ms']:.1f} ms"
    )


@main.command()
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True),
              help="Reference report (csv or json).")
@click.option("--proposed", "proposed_path", required=True, type=click.Path(exists=True),
              help="Proposed report (csv or json).")
def compare(ref_path, proposed_path):
    """Print time / psnr / bitrate / evaluation deltas as JSON."""
    try:
        result = compare_reports(load_report(ref_path), load_report(proposed_path))
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(json.dumps(dataclasses.asdict(result), indent=2))


if __name__ == "__main__":
    sys.exit(main())
