"""Stroke-flow sequence codec.

A figure is first reduced to independent line and circle units, then every
line is expanded into a flow chain ``start -> gaze points -> end`` whose
step length is bounded by a perceptual ruler ``d`` (``n = ceil(len / d)``
sub-strokes).  Chains serialize to a line-oriented text grammar and collapse
back to endpoint geometry; interior gaze points never survive a collapse.

Grammar (strict form)::

    sequence   = lines-sec [circles-sec] [labels-sec]
    lines-sec  = "Lines:" NL *(chain NL)
    chain      = point *("--" point)
    circles-sec= "Circles:" NL *(circle NL)
    circle     = "(" num "," num "," num ")"
    labels-sec = "Labels:" NL *(letter ":" point NL)
    point      = "(" num "," num ")"
    num        = ["-"] 1*2DIGIT "." 2DIGIT

UTF-8, LF line endings, no trailing whitespace.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .geometry import (
    COORD_MAX,
    Circle,
    Figure,
    GeometryError,
    Point,
    Segment,
    length,
    quantize,
    quantize_value,
)

# Slack for the equal-spacing and collinearity invariants of subdivided
# chains: exact spacing is impossible on a 0.01 grid.
SPACING_SLACK = 0.015


@dataclass(frozen=True)
class PerceptualRuler:
    """Maximum single-step tracing distance; infinite recovers the baseline."""

    d: float

    def __post_init__(self) -> None:
        if not self.d > 0:
            raise ValueError(f"perceptual ruler must be positive: {self.d!r}")

    @classmethod
    def infinite(cls) -> "PerceptualRuler":
        return cls(math.inf)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.d)

    def __str__(self) -> str:
        return "inf" if not self.is_finite else f"{self.d:g}"


@dataclass(frozen=True)
class FlowChain:
    """One segment traced as an ordered point chain.

    ``ruler`` is provenance metadata (the grammar does not record it) and is
    excluded from equality.
    """

    points: tuple[Point, ...]
    ruler: PerceptualRuler | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        if not pts:
            raise ValueError("a flow chain needs at least one point")
        object.__setattr__(self, "points", pts)

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    @property
    def gaze_points(self) -> tuple[Point, ...]:
        return self.points[1:-1]

    def segment(self) -> Segment:
        """Collapse to the underlying segment; raises on degenerate chains."""
        return Segment(self.start, self.end)


def _chain_sort_key(chain: FlowChain):
    lo, hi = sorted((chain.start, chain.end))
    return (lo, hi, chain.points)


@dataclass(frozen=True)
class FlowSequence:
    """An ordered, serializable set of flow chains plus circles and labels.

    Chains are kept sorted by the canonical (start, end) of their underlying
    segment.  ``ruler`` is provenance metadata, excluded from equality.
    """

    chains: tuple[FlowChain, ...] = ()
    circles: tuple[Circle, ...] = ()
    labels: Mapping[str, Point] = field(default_factory=dict)
    ruler: PerceptualRuler | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "chains", tuple(sorted(self.chains, key=_chain_sort_key))
        )
        object.__setattr__(self, "circles", tuple(self.circles))
        object.__setattr__(self, "labels", dict(sorted(self.labels.items())))

    def point_count(self) -> int:
        """Total number of serialized chain points (the token-cost proxy)."""
        return sum(len(c.points) for c in self.chains)


# ---------------------------------------------------------------------------
# encoding


def decompose(fig: Figure) -> tuple[tuple[Segment, ...], tuple[Circle, ...]]:
    """Reduce a figure to independent line and circle units.

    No polygon grouping survives; segments come out canonical and sorted.
    """
    return fig.segments, fig.circles


def subdivide(seg: Segment, ruler: PerceptualRuler) -> FlowChain:
    """Trace a segment from its canonical start in steps of at most ``d``."""
    a, b = seg.a, seg.b
    if not ruler.is_finite:
        return FlowChain((a, b), ruler)
    seg_len = length(seg)
    n = math.ceil(seg_len / ruler.d)
    if n <= 1:
        return FlowChain((a, b), ruler)
    ux = (b.x - a.x) / seg_len
    uy = (b.y - a.y) / seg_len
    pts = [a]
    for i in range(1, n):
        t = i * ruler.d
        pts.append(quantize(a.x + ux * t, a.y + uy * t))
    pts.append(b)
    return FlowChain(tuple(pts), ruler)


def encode(fig: Figure, ruler: PerceptualRuler) -> FlowSequence:
    """Full encoding: decompose, then subdivide every line unit."""
    segments, circles = decompose(fig)
    chains = tuple(subdivide(s, ruler) for s in segments)
    return FlowSequence(chains, circles, dict(fig.labels), ruler)


def jitter_gaze(
    chain: FlowChain, rng: np.random.Generator, max_frac: float
) -> FlowChain:
    """Displace interior gaze points along the chain's line direction.

    Each gaze point moves by a uniform draw in [-max_frac*L, +max_frac*L]
    (L = endpoint distance), clamped to the open segment.  Endpoints are
    untouched and point ordering along the segment is preserved.  The
    displacement bound holds for the quantized result: a draw is shrunk
    until grid snapping cannot push the point past the bound.
    """
    if not 0.0 <= max_frac <= 0.1:
        raise ValueError(f"max_frac must be in [0, 0.1]: {max_frac!r}")
    if len(chain.points) <= 2:
        return chain
    a, b = chain.start, chain.end
    seg_len = math.hypot(b.x - a.x, b.y - a.y)
    if seg_len == 0.0:
        return chain
    ux = (b.x - a.x) / seg_len
    uy = (b.y - a.y) / seg_len
    bound = max_frac * seg_len
    t_lo, t_hi = 0.02, seg_len - 0.02

    jittered: list[tuple[float, Point]] = []
    for p in chain.gaze_points:
        t_orig = (p.x - a.x) * ux + (p.y - a.y) * uy
        u = float(rng.uniform(-bound, bound)) if bound > 0 else 0.0
        cand = p
        for _ in range(60):
            t_new = min(max(t_orig + u, t_lo), t_hi)
            cand = quantize(a.x + ux * t_new, a.y + uy * t_new)
            if math.hypot(cand.x - p.x, cand.y - p.y) <= bound:
                break
            u *= 0.5
        else:
            cand = p
        t_cand = (cand.x - a.x) * ux + (cand.y - a.y) * uy
        jittered.append((t_cand, cand))

    jittered.sort(key=lambda item: (item[0], item[1]))
    pts = (a, *(p for _, p in jittered), b)
    return FlowChain(pts, chain.ruler)


# ---------------------------------------------------------------------------
# serialization


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _fmt_point(p: Point) -> str:
    return f"({_fmt(p.x)},{_fmt(p.y)})"


def serialize(seq: FlowSequence) -> str:
    """Emit the canonical text form: deterministic, LF-terminated lines."""
    lines = ["Lines:"]
    for chain in seq.chains:
        lines.append("--".join(_fmt_point(p) for p in chain.points))
    if seq.circles:
        lines.append("Circles:")
        for c in seq.circles:
            lines.append(f"({_fmt(c.center.x)},{_fmt(c.center.y)},{_fmt(c.radius)})")
    if seq.labels:
        lines.append("Labels:")
        for letter, p in seq.labels.items():
            lines.append(f"{letter}:{_fmt_point(p)}")
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    """Strict-mode parse failure, pinned to a line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ParseIssue:
    """One statement skipped by the lenient parser."""

    statement: int
    line: int
    reason: str


_NUM_STRICT = r"-?\d{1,2}\.\d{2}"
_POINT_STRICT = re.compile(rf"\(({_NUM_STRICT}),({_NUM_STRICT})\)")
_CIRCLE_STRICT = re.compile(
    rf"^\(({_NUM_STRICT}),({_NUM_STRICT}),({_NUM_STRICT})\)$"
)
_LABEL_STRICT = re.compile(rf"^([A-Z]):\(({_NUM_STRICT}),({_NUM_STRICT})\)$")

_NUM_LENIENT = r"[-+]?\d+(?:\.\d+)?"
_POINT_LENIENT = re.compile(rf"\(\s*({_NUM_LENIENT})\s*,\s*({_NUM_LENIENT})\s*\)")
_CIRCLE_LENIENT = re.compile(
    rf"^\(\s*({_NUM_LENIENT})\s*,\s*({_NUM_LENIENT})\s*,\s*({_NUM_LENIENT})\s*\)$"
)
_LABEL_LENIENT = re.compile(
    rf"^([A-Za-z])\s*:\s*\(\s*({_NUM_LENIENT})\s*,\s*({_NUM_LENIENT})\s*\)$"
)

_SECTION_HEADERS = {"Lines:": "lines", "Circles:": "circles", "Labels:": "labels"}


def _strict_coord(text: str, line_no: int, col: int) -> float:
    v = float(text)
    if abs(v) > COORD_MAX:
        raise ParseError(f"coordinate out of range: {text}", line_no, col)
    return v


def _parse_chain_strict(line: str, line_no: int) -> FlowChain:
    pos = 0
    pts: list[Point] = []
    while True:
        m = _POINT_STRICT.match(line, pos)
        if not m:
            raise ParseError("expected point", line_no, pos + 1)
        x = _strict_coord(m.group(1), line_no, m.start(1) + 1)
        y = _strict_coord(m.group(2), line_no, m.start(2) + 1)
        pts.append(Point(x, y))
        pos = m.end()
        if pos == len(line):
            break
        if not line.startswith("--", pos):
            raise ParseError("expected '--' between points", line_no, pos + 1)
        pos += 2
    return FlowChain(tuple(pts))


def parse(text: str) -> FlowSequence:
    """Strict parse: exact grammar, first malformed statement raises."""
    if text and not text.endswith("\n"):
        raise ParseError("missing trailing newline", text.count("\n") + 1, 1)
    lines = text.split("\n")[:-1] if text else []
    if not lines or lines[0] != "Lines:":
        raise ParseError("sequence must begin with 'Lines:'", 1, 1)

    chains: list[FlowChain] = []
    circles: list[Circle] = []
    labels: dict[str, Point] = {}
    section = "lines"
    seen = {"lines"}
    for idx, line in enumerate(lines[1:], start=2):
        if line in _SECTION_HEADERS:
            nxt = _SECTION_HEADERS[line]
            if nxt in seen or (nxt == "circles" and "labels" in seen):
                raise ParseError(f"unexpected section {line!r}", idx, 1)
            seen.add(nxt)
            section = nxt
            continue
        if line != line.rstrip():
            raise ParseError("trailing whitespace", idx, len(line.rstrip()) + 1)
        if not line:
            raise ParseError("blank line", idx, 1)
        if section == "lines":
            chains.append(_parse_chain_strict(line, idx))
        elif section == "circles":
            m = _CIRCLE_STRICT.match(line)
            if not m:
                raise ParseError("expected circle (x,y,r)", idx, 1)
            cx = _strict_coord(m.group(1), idx, m.start(1) + 1)
            cy = _strict_coord(m.group(2), idx, m.start(2) + 1)
            r = float(m.group(3))
            try:
                circles.append(Circle(Point(cx, cy), r))
            except GeometryError as exc:
                raise ParseError(str(exc), idx, 1) from exc
        else:
            m = _LABEL_STRICT.match(line)
            if not m:
                raise ParseError("expected label LETTER:(x,y)", idx, 1)
            letter = m.group(1)
            if letter in labels:
                raise ParseError(f"duplicate label {letter}", idx, 1)
            x = _strict_coord(m.group(2), idx, m.start(2) + 1)
            y = _strict_coord(m.group(3), idx, m.start(3) + 1)
            labels[letter] = Point(x, y)
    return FlowSequence(tuple(chains), tuple(circles), labels)


def parse_lenient(text: str) -> tuple[FlowSequence, list[ParseIssue]]:
    """Never fails: malformed statements are skipped and reported.

    Coordinates are quantized (and thereby clamped into range), so slightly
    off-grid model output still lands on valid geometry.
    """
    issues: list[ParseIssue] = []
    chains: list[FlowChain] = []
    circles: list[Circle] = []
    labels: dict[str, Point] = {}
    section = "lines"
    statement = 0
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        header = line.rstrip(":") + ":"
        if header in _SECTION_HEADERS and line.endswith(":"):
            section = _SECTION_HEADERS[header]
            continue
        statement += 1
        if section == "lines":
            pts = [
                quantize(float(m.group(1)), float(m.group(2)))
                for m in _POINT_LENIENT.finditer(line)
            ]
            leftover = _POINT_LENIENT.sub("", line).replace("--", "").strip()
            if not pts or leftover:
                issues.append(ParseIssue(statement, idx, f"malformed chain: {raw!r}"))
                continue
            chains.append(FlowChain(tuple(pts)))
        elif section == "circles":
            m = _CIRCLE_LENIENT.match(line)
            if not m:
                issues.append(ParseIssue(statement, idx, f"malformed circle: {raw!r}"))
                continue
            center = quantize(float(m.group(1)), float(m.group(2)))
            radius = quantize_value(float(m.group(3)))
            try:
                circles.append(Circle(center, radius))
            except GeometryError as exc:
                issues.append(ParseIssue(statement, idx, str(exc)))
        else:
            m = _LABEL_LENIENT.match(line)
            if not m:
                issues.append(ParseIssue(statement, idx, f"malformed label: {raw!r}"))
                continue
            letter = m.group(1).upper()
            if letter in labels:
                issues.append(ParseIssue(statement, idx, f"duplicate label {letter}"))
                continue
            labels[letter] = quantize(float(m.group(2)), float(m.group(3)))
    return FlowSequence(tuple(chains), tuple(circles), labels), issues


# ---------------------------------------------------------------------------
# decoding


def collapse(seq: FlowSequence, diagnostics: list[str] | None = None) -> Figure:
    """Reduce a sequence to endpoint geometry.

    Each chain contributes the segment (start, end); interior gaze points
    are discarded, duplicates merge, degenerate chains are dropped (with a
    note when a ``diagnostics`` sink is provided), and labels not bound to a
    surviving vertex are dropped likewise.
    """
    segments: list[Segment] = []
    for i, chain in enumerate(seq.chains):
        if chain.start == chain.end:
            if diagnostics is not None:
                diagnostics.append(
                    f"chain {i} degenerate after quantization at {chain.start}: dropped"
                )
            continue
        segments.append(chain.segment())
    endpoints = {p for s in segments for p in (s.a, s.b)}
    labels = {}
    for letter, pt in seq.labels.items():
        if pt in endpoints:
            labels[letter] = pt
        elif diagnostics is not None:
            diagnostics.append(f"label {letter} at {pt} not bound to a vertex: dropped")
    return Figure(tuple(segments), seq.circles, labels)
