"""Desk-scale AVC-style encoding core with fast and exhaustive mode selection."""

from .bench import (
    CompareResult,
    EncodeConfig,
    EncodeReport,
    compare,
    run_encode,
)
from .context import FrameState, MacroblockContext
from .encoder import encode_sequence
from .exhaustive import select_exhaustive
from .fast import (
    ClassificationMetrics,
    FastConfig,
    ModeProbabilityTable,
    NeighborWeights,
    classification_metrics,
    classify_motion,
    classify_probability,
    homogeneity,
    neighbor_probability,
    select_fast,
    update_probability_table,
)
from .modes import (
    InterChoice,
    IntraChoice,
    MbMode,
    ModeDecision,
    MV,
    RdCost,
    SubMode,
    TableClass,
)
from .motion import evaluate_skip, full_search, mb_difference, mvp_median
from .rate import lambda_mode, rate_mode
from .rdo import best_intra, encode_mb_with_mode, ssd_mode
from .transform import (
    dequantize,
    exact_inverse_4x4,
    forward_transform_4x4,
    inverse_transform_4x4,
    quantize,
    satd_4x4,
    se_bits,
    ue_bits,
)
from .video_io import (
    DimensionError,
    FormatError,
    Frame,
    PlanePsnr,
    Sequence,
    generate_synthetic,
    make_flat_frame,
    make_gradient_frame,
    make_texture_frame,
    psnr,
    read_yuv,
    write_yuv,
)

__version__ = "0.1.0"
