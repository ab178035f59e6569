"""figflow: synthetic geometric figures, a stroke-flow sequence codec with a
configurable perceptual ruler, SVG/PNG rendering, and line-IoU evaluation."""

from .codec import (
    FlowChain,
    FlowSequence,
    ParseError,
    ParseIssue,
    PerceptualRuler,
    collapse,
    decompose,
    encode,
    jitter_gaze,
    parse,
    parse_lenient,
    serialize,
    subdivide,
)
from .engine import GenConfig, GenerationError, PointWeights, generate, generate_sample
from .evaluate import EvalReport, MatchResult, line_iou, match, score
from .geometry import (
    Circle,
    Figure,
    GeometryError,
    Point,
    Segment,
    angle_deg,
    canonicalize,
    length,
    quantize,
    quantize_value,
)
from .render import RenderConfig, StrokeStyle, perturb_image, render_raster, render_vector
from .transform import PixelFrame, to_normalized, to_pixel

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "EvalReport",
    "Figure",
    "FlowChain",
    "FlowSequence",
    "GenConfig",
    "GenerationError",
    "GeometryError",
    "MatchResult",
    "ParseError",
    "ParseIssue",
    "PerceptualRuler",
    "PixelFrame",
    "Point",
    "PointWeights",
    "RenderConfig",
    "Segment",
    "StrokeStyle",
    "angle_deg",
    "canonicalize",
    "collapse",
    "decompose",
    "encode",
    "generate",
    "generate_sample",
    "jitter_gaze",
    "length",
    "line_iou",
    "match",
    "parse",
    "parse_lenient",
    "perturb_image",
    "quantize",
    "quantize_value",
    "render_raster",
    "render_vector",
    "score",
    "serialize",
    "subdivide",
    "to_normalized",
    "to_pixel",
]
