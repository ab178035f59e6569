"""Synthetic figure engine.

A sample grows from a base quadrilateral: one of eight substrate kinds is
placed at a random pose, a vertex may be deleted (quad -> triangle) or 1-6
points are added on sides / side extensions (mid- and trisection points get
boosted weight) and joined to base vertices, then an inscribed or enclosing
circle and vertex labels may be attached.  Everything is driven by
per-sample sub-seeds, so samples are independent and the stream is
reproducible for any worker layout.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .geometry import (
    Circle,
    Figure,
    GeometryError,
    Point,
    Segment,
    quantize,
    sorted_vertices,
)
from .render import DASHED, DPI_MAX, DPI_MIN, SOLID, RenderConfig

QUAD_KINDS = (
    "square",
    "rectangle",
    "parallelogram",
    "rhombus",
    "trapezoid",
    "isosceles_trapezoid",
    "right_trapezoid",
    "arbitrary",
)

_RANGE_MARGIN = 0.005  # raw coordinates stay clear of the clamp boundary
_SUBSTRATE_ATTEMPTS = 100
_SAMPLE_RETRIES = 100
_PLACE_ATTEMPTS = 8

LABEL_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class GenerationError(RuntimeError):
    """A sample could not be produced within the retry budget."""


@dataclass(frozen=True)
class PointWeights:
    """Relative weights for where an added point lands on its host side."""

    midpoint: float = 0.3
    trisection: float = 0.3
    uniform: float = 0.3
    extension: float = 0.1


@dataclass(frozen=True)
class GenConfig:
    quad_types: tuple[str, ...] = QUAD_KINDS
    delete_prob: float = 0.2
    add_count_range: tuple[int, int] = (1, 6)
    special_weight: float = 2.0
    point_weights: PointWeights = PointWeights()
    circle_prob: float = 0.3
    label_prob: float = 0.5
    label_alphabet: str = LABEL_ALPHABET
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.quad_types:
            raise ValueError("quad_types must be non-empty")
        unknown = set(self.quad_types) - set(QUAD_KINDS)
        if unknown:
            raise ValueError(f"unknown quad types: {sorted(unknown)}")
        for name in ("delete_prob", "circle_prob", "label_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]: {v}")
        lo, hi = self.add_count_range
        if not (0 <= lo <= hi <= 6):
            raise ValueError(f"add_count_range must be within [0, 6]: {self.add_count_range}")
        if self.special_weight < 0:
            raise ValueError("special_weight must be >= 0")


# ---------------------------------------------------------------------------
# substrate


def _base_quad(kind: str, rng: np.random.Generator) -> list[tuple[float, float]]:
    u = rng.uniform
    if kind == "square":
        s = u(3.5, 8.5)
        return [(0, 0), (s, 0), (s, s), (0, s)]
    if kind == "rectangle":
        w = u(4.0, 9.0)
        h = w * u(0.45, 0.85)
        return [(0, 0), (w, 0), (w, h), (0, h)]
    if kind == "parallelogram":
        b = u(3.5, 8.5)
        s = u(2.5, 6.0)
        alpha = math.radians(u(30.0, 75.0))
        ox, oy = s * math.cos(alpha), s * math.sin(alpha)
        return [(0, 0), (b, 0), (b + ox, oy), (ox, oy)]
    if kind == "rhombus":
        s = u(3.0, 7.0)
        alpha = math.radians(u(30.0, 75.0))
        ox, oy = s * math.cos(alpha), s * math.sin(alpha)
        return [(0, 0), (s, 0), (s + ox, oy), (ox, oy)]
    if kind in ("trapezoid", "isosceles_trapezoid", "right_trapezoid"):
        a = u(4.5, 9.0)
        c = u(2.0, a - 1.5)
        h = u(2.5, 6.0)
        if kind == "right_trapezoid":
            o = 0.0
        elif kind == "isosceles_trapezoid":
            o = (a - c) / 2.0
        else:
            o = u(0.3, a - c - 0.3)
            for _ in range(20):
                if abs(o - (a - c) / 2.0) >= 0.2:
                    break
                o = u(0.3, a - c - 0.3)
        return [(0, 0), (a, 0), (o + c, h), (o, h)]
    if kind == "arbitrary":
        pts = []
        for i in range(4):
            phi = math.radians(90.0 * i + u(-32.0, 32.0))
            r = u(2.2, 6.0)
            pts.append((r * math.cos(phi), r * math.sin(phi)))
        return pts
    raise ValueError(f"unknown substrate kind: {kind!r}")


def _poly_area(pts: Sequence[tuple[float, float]]) -> float:
    acc = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + [pts[0]]):
        acc += x1 * y2 - x2 * y1
    return 0.5 * abs(acc)


def _corner_cross(pts: Sequence[tuple[float, float]], i: int) -> float:
    n = len(pts)
    (x0, y0), (x1, y1), (x2, y2) = pts[i - 1], pts[i], pts[(i + 1) % n]
    return (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)


def _well_shaped(pts: Sequence[tuple[float, float]]) -> bool:
    if _poly_area(pts) < 5.0:
        return False
    for i in range(len(pts)):
        if abs(_corner_cross(pts, i)) < 1.0:
            return False
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % len(pts)]
        if math.hypot(x2 - x1, y2 - y1) < 1.2:
            return False
    return True


def _place(
    pts: Sequence[tuple[float, float]], rng: np.random.Generator
) -> list[Point] | None:
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    rotated = [
        (
            (x - cx) * cos_t - (y - cy) * sin_t,
            (x - cx) * sin_t + (y - cy) * cos_t,
        )
        for x, y in pts
    ]
    lim = 10.0 - _RANGE_MARGIN
    min_x = min(p[0] for p in rotated)
    max_x = max(p[0] for p in rotated)
    min_y = min(p[1] for p in rotated)
    max_y = max(p[1] for p in rotated)
    if max_x - min_x > 2 * lim or max_y - min_y > 2 * lim:
        return None
    tx = rng.uniform(-lim - min_x, lim - max_x)
    ty = rng.uniform(-lim - min_y, lim - max_y)
    placed = [quantize(x + tx, y + ty) for x, y in rotated]
    if len(set(placed)) != len(placed):
        return None
    return placed


def sample_substrate(cfg: GenConfig, rng: np.random.Generator) -> Figure:
    """Sample a placed, quantized, non-self-intersecting base quadrilateral."""
    for _ in range(_SUBSTRATE_ATTEMPTS):
        kind = cfg.quad_types[int(rng.integers(len(cfg.quad_types)))]
        raw = _base_quad(kind, rng)
        if not _well_shaped(raw):
            continue
        placed = _place(raw, rng)
        if placed is None:
            continue
        try:
            segments = tuple(
                Segment(placed[i], placed[(i + 1) % 4]) for i in range(4)
            )
        except GeometryError:
            continue
        return Figure(segments)
    raise GenerationError("substrate did not fit the coordinate range")


# ---------------------------------------------------------------------------
# base-cycle recovery


def base_cycle(fig: Figure) -> tuple[Point, ...]:
    """Recover the polygon cycle of a figure whose segments form one loop."""
    adjacency: dict[Point, list[Point]] = defaultdict(list)
    for seg in fig.segments:
        adjacency[seg.a].append(seg.b)
        adjacency[seg.b].append(seg.a)
    if not adjacency or any(len(nbrs) != 2 for nbrs in adjacency.values()):
        raise GenerationError("figure segments do not form a single closed polygon")
    start = min(adjacency)
    cycle = [start]
    prev, cur = None, start
    for _ in range(len(adjacency) - 1):
        nbrs = sorted(adjacency[cur])
        nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
        cycle.append(nxt)
        prev, cur = cur, nxt
    last = sorted(adjacency[cur])
    if start not in last or len(cycle) != len(adjacency):
        raise GenerationError("figure segments do not form a single closed polygon")
    return tuple(cycle)


def _cycle_segments(cycle: Sequence[Point]) -> tuple[Segment, ...]:
    n = len(cycle)
    return tuple(Segment(cycle[i], cycle[(i + 1) % n]) for i in range(n))


# ---------------------------------------------------------------------------
# point mutation


def _point_line_distance(p: Point, a: Point, b: Point) -> float:
    vx, vy = b.x - a.x, b.y - a.y
    seg_len = math.hypot(vx, vy)
    return abs(vx * (p.y - a.y) - vy * (p.x - a.x)) / seg_len


def _delete_vertex(base: Sequence[Point], rng: np.random.Generator) -> Figure:
    idx = int(rng.integers(len(base)))
    remaining = [base[i] for i in range(len(base)) if i != idx]
    return Figure(_cycle_segments(remaining))


def _sample_host_t(
    cfg: GenConfig, rng: np.random.Generator
) -> tuple[str, float]:
    w = cfg.point_weights
    boost = cfg.special_weight
    weights = np.array(
        [boost * w.midpoint, boost * w.trisection, w.uniform, w.extension]
    )
    total = weights.sum()
    if total <= 0:
        weights = np.array([0.0, 0.0, 1.0, 0.0])
        total = 1.0
    mode = ("mid", "tri", "uni", "ext")[int(rng.choice(4, p=weights / total))]
    if mode == "mid":
        return mode, 0.5
    if mode == "tri":
        return mode, float(rng.choice([1.0 / 3.0, 2.0 / 3.0]))
    if mode == "uni":
        return mode, float(rng.uniform(0.0, 1.0))
    # extension: land beyond a random endpoint by up to half the side length
    e = float(rng.uniform(0.0, 0.5))
    return mode, (1.0 + e) if rng.uniform() < 0.5 else -e


def _add_points(
    fig: Figure, base: Sequence[Point], cfg: GenConfig, rng: np.random.Generator, k: int
) -> Figure:
    segments = set(fig.segments)
    vertices = set(fig.vertices())
    lim = 10.0 - _RANGE_MARGIN
    for _ in range(k):
        for _ in range(_PLACE_ATTEMPTS):
            side = int(rng.integers(len(base)))
            va, vb = base[side], base[(side + 1) % len(base)]
            _, t = _sample_host_t(cfg, rng)
            raw_x = va.x + t * (vb.x - va.x)
            raw_y = va.y + t * (vb.y - va.y)
            if abs(raw_x) > lim or abs(raw_y) > lim:
                continue
            added = quantize(raw_x, raw_y)
            if added in vertices:
                continue
            candidates = [
                v for v in base if _point_line_distance(v, va, vb) > 0.05
            ]
            if not candidates:
                continue
            n_conn = min(1 + int(rng.uniform() < 0.5), len(candidates))
            picked = rng.choice(len(candidates), size=n_conn, replace=False)
            new_segs = []
            for c in sorted(int(i) for i in picked):
                seg = Segment(added, candidates[c])
                if seg not in segments:
                    new_segs.append(seg)
            if not new_segs:
                continue
            segments.update(new_segs)
            vertices.add(added)
            break
        # exhausted attempts: the point is skipped
    return Figure(tuple(segments), fig.circles, dict(fig.labels), fig.render_meta)


def mutate_points(fig: Figure, cfg: GenConfig, rng: np.random.Generator) -> Figure:
    """Delete one vertex (with delete_prob) or add 1-6 connected points."""
    base = base_cycle(fig)
    if rng.uniform() < cfg.delete_prob:
        return _delete_vertex(base, rng)
    lo, hi = cfg.add_count_range
    k = int(rng.integers(lo, hi + 1))
    if k == 0:
        return fig
    return _add_points(fig, base, cfg, rng, k)


# ---------------------------------------------------------------------------
# circles


def _point_in_polygon(x: float, y: float, poly: Sequence[Point]) -> bool:
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
            if x < x_cross:
                inside = not inside
    return inside


def _distance_to_boundary(x: float, y: float, poly: Sequence[Point]) -> float:
    best = math.inf
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        vx, vy = b.x - a.x, b.y - a.y
        ln2 = vx * vx + vy * vy
        t = ((x - a.x) * vx + (y - a.y) * vy) / ln2
        t = min(max(t, 0.0), 1.0)
        best = min(best, math.hypot(x - a.x - t * vx, y - a.y - t * vy))
    return best


def _chebyshev_center(poly: Sequence[Point]) -> tuple[float, float, float]:
    # Grid search over interior points maximizing distance to the boundary,
    # refined until the cell size is below half the grid step.
    xs = [p.x for p in poly]
    ys = [p.y for p in poly]
    cx, cy = (min(xs) + max(xs)) / 2.0, (min(ys) + max(ys)) / 2.0
    half_w = (max(xs) - min(xs)) / 2.0
    half_h = (max(ys) - min(ys)) / 2.0
    best = (0.0, cx, cy)
    while max(half_w, half_h) > 0.005:
        grid = np.linspace(-1.0, 1.0, 13)
        for gx in grid:
            for gy in grid:
                x, y = cx + gx * half_w, cy + gy * half_h
                if not _point_in_polygon(x, y, poly):
                    continue
                d = _distance_to_boundary(x, y, poly)
                if d > best[0]:
                    best = (d, x, y)
        cx, cy = best[1], best[2]
        half_w /= 3.0
        half_h /= 3.0
    return best[1], best[2], best[0]  # (x, y, radius)


def _triangle_incircle(poly: Sequence[Point]) -> tuple[float, float, float]:
    (ax, ay), (bx, by), (cx, cy) = poly
    la = math.hypot(cx - bx, cy - by)
    lb = math.hypot(cx - ax, cy - ay)
    lc = math.hypot(bx - ax, by - ay)
    perimeter = la + lb + lc
    x = (la * ax + lb * bx + lc * cx) / perimeter
    y = (la * ay + lb * by + lc * cy) / perimeter
    area = abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)) / 2.0
    return x, y, 2.0 * area / perimeter


def _diagonal_intersection(poly: Sequence[Point]) -> tuple[float, float] | None:
    (ax, ay), (bx, by), (cx, cy), (dx, dy) = poly
    r_x, r_y = cx - ax, cy - ay
    s_x, s_y = dx - bx, dy - by
    denom = r_x * s_y - r_y * s_x
    if abs(denom) < 1e-12:
        return None
    t = ((bx - ax) * s_y - (by - ay) * s_x) / denom
    return ax + t * r_x, ay + t * r_y


def inscribed_circle(poly: Sequence[Point]) -> Circle | None:
    """Largest circle inside the polygon, radius floored onto the grid."""
    if len(poly) == 3:
        x, y, r = _triangle_incircle(poly)
    elif len(poly) == 4:
        side_lens = [
            math.hypot(poly[(i + 1) % 4].x - poly[i].x, poly[(i + 1) % 4].y - poly[i].y)
            for i in range(4)
        ]
        if max(side_lens) - min(side_lens) < 0.03:
            # square/rhombus: the incenter is the diagonal intersection
            hit = _diagonal_intersection(poly)
            if hit is None:
                x, y, r = _chebyshev_center(poly)
            else:
                x, y = hit
                r = _distance_to_boundary(x, y, poly)
        else:
            x, y, r = _chebyshev_center(poly)
    else:
        x, y, r = _chebyshev_center(poly)
    center = quantize(x, y)
    radius = math.floor(r * 100.0 + 1e-9) / 100.0
    if radius <= 0:
        return None
    if abs(center.x) + radius > 10.0 or abs(center.y) + radius > 10.0:
        return None
    return Circle(center, radius)


def _circumcircle(a: Point, b: Point, c: Point) -> tuple[float, float, float] | None:
    d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y))
    if abs(d) < 1e-12:
        return None
    a2 = a.x * a.x + a.y * a.y
    b2 = b.x * b.x + b.y * b.y
    c2 = c.x * c.x + c.y * c.y
    ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d
    uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d
    return ux, uy, math.hypot(a.x - ux, a.y - uy)


def enclosing_circle(points: Sequence[Point]) -> Circle | None:
    """Minimum enclosing circle of few points, radius ceiled onto the grid."""
    pts = list(points)
    best: tuple[float, float, float] | None = None
    slack = 1e-9

    def covers(x: float, y: float, r: float) -> bool:
        return all(math.hypot(p.x - x, p.y - y) <= r + slack for p in pts)

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            x = (pts[i].x + pts[j].x) / 2.0
            y = (pts[i].y + pts[j].y) / 2.0
            r = math.hypot(pts[i].x - x, pts[i].y - y)
            if covers(x, y, r) and (best is None or r < best[2]):
                best = (x, y, r)
    if best is None:
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                for k in range(j + 1, len(pts)):
                    hit = _circumcircle(pts[i], pts[j], pts[k])
                    if hit and covers(*hit) and (best is None or hit[2] < best[2]):
                        best = hit
    if best is None:
        return None
    center = quantize(best[0], best[1])
    radius = math.ceil(best[2] * 100.0 - 1e-9) / 100.0
    if radius <= 0 or abs(center.x) + radius > 10.0 or abs(center.y) + radius > 10.0:
        return None
    return Circle(center, radius)


def add_circles(
    fig: Figure,
    cfg: GenConfig,
    rng: np.random.Generator,
    base: Sequence[Point] | None = None,
) -> Figure:
    """With circle_prob, add the incircle or the enclosing circle of the base.

    ``base`` names the base polygon cycle; when omitted the figure's
    segments must form a single closed polygon.  A circle that would leave
    the coordinate range is skipped.
    """
    if rng.uniform() >= cfg.circle_prob:
        return fig
    cycle = tuple(base) if base is not None else base_cycle(fig)
    if rng.uniform() < 0.5:
        circle = inscribed_circle(cycle)
    else:
        circle = enclosing_circle(cycle)
    if circle is None:
        return fig
    return Figure(fig.segments, fig.circles + (circle,), dict(fig.labels), fig.render_meta)


# ---------------------------------------------------------------------------
# labels


def add_labels(fig: Figure, cfg: GenConfig, rng: np.random.Generator) -> Figure:
    """With label_prob, letter the vertices in lexicographic traversal order."""
    if rng.uniform() >= cfg.label_prob:
        return fig
    verts = sorted_vertices(fig)
    labels = {
        cfg.label_alphabet[i]: v
        for i, v in enumerate(verts[: len(cfg.label_alphabet)])
    }
    return Figure(fig.segments, fig.circles, labels, fig.render_meta)


# ---------------------------------------------------------------------------
# the sample stream


def _rng_for(cfg: GenConfig, index: int, stream: int, attempt: int = 0):
    return np.random.default_rng(
        np.random.SeedSequence((cfg.seed, index, stream, attempt))
    )


def _sample_render_config(rng: np.random.Generator, index: int) -> RenderConfig:
    # Every fourth sample is pinned at 96 dpi; the rest draw uniformly.
    if index % 4 == 3:
        dpi = 96
    else:
        dpi = int(rng.integers(DPI_MIN, DPI_MAX + 1))
    line_width = float(rng.uniform(0.8, 3.0))
    line_style = DASHED if rng.uniform() < 0.3 else SOLID
    return RenderConfig.from_dpi(dpi, line_width, line_style)


def generate_sample(cfg: GenConfig, index: int) -> tuple[Figure, RenderConfig]:
    """Produce sample ``index`` deterministically from (cfg, index)."""
    last: Exception | None = None
    for attempt in range(_SAMPLE_RETRIES):
        rng = _rng_for(cfg, index, 0, attempt)
        try:
            fig = sample_substrate(cfg, rng)
            base = base_cycle(fig)
            fig = mutate_points(fig, cfg, rng)
            if not set(_cycle_segments(base)) <= set(fig.segments):
                base = base_cycle(fig)  # a vertex was deleted
            fig = add_circles(fig, cfg, rng, base=base)
            fig = add_labels(fig, cfg, rng)
        except GenerationError as exc:
            last = exc
            continue
        rc = _sample_render_config(rng, index)
        return Figure(fig.segments, fig.circles, dict(fig.labels), rc), rc
    raise GenerationError(f"sample {index} failed after {_SAMPLE_RETRIES} retries: {last}")


def generate(cfg: GenConfig, count: int) -> Iterator[tuple[Figure, RenderConfig]]:
    """Deterministic stream of (figure, render config) pairs."""
    if count <= 0:
        raise ValueError(f"count must be positive: {count}")
    for index in range(count):
        yield generate_sample(cfg, index)
