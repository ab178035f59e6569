"""Figure rendering: SVG vector documents and anti-aliased grayscale rasters.

The canvas is a square 5.0-inch virtual page scaled by dpi, so dpi alone
controls resolution and integer dpi always yields integer pixel sizes.
Rasters are drawn supersampled and box-filtered down, which is where the
anti-aliasing comes from.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from .geometry import Figure, GeometryError, Point
from .transform import Y_DOWN, PixelFrame, to_pixel

CANVAS_INCHES = 5.0
DPI_MIN, DPI_MAX = 36, 300

SOLID = "solid"
DASHED = "dashed"


@dataclass(frozen=True)
class RenderConfig:
    dpi: int = 96
    line_width: float = 1.5
    line_style: str = SOLID
    image_size: tuple[int, int] = (480, 480)

    def __post_init__(self) -> None:
        if not DPI_MIN <= self.dpi <= DPI_MAX:
            raise GeometryError(f"dpi out of range [{DPI_MIN}, {DPI_MAX}]: {self.dpi}")
        if self.line_style not in (SOLID, DASHED):
            raise GeometryError(f"unknown line style: {self.line_style!r}")
        if not self.line_width > 0:
            raise GeometryError("line width must be positive")
        w, h = self.image_size
        if w <= 0 or h <= 0:
            raise GeometryError(f"invalid image size: {self.image_size}")

    @classmethod
    def from_dpi(
        cls, dpi: int, line_width: float = 1.5, line_style: str = SOLID
    ) -> "RenderConfig":
        side = round(CANVAS_INCHES * dpi)
        return cls(dpi, line_width, line_style, (side, side))


@dataclass(frozen=True)
class StrokeStyle:
    width: float
    pattern: str = SOLID
    dash_on: float = 6.0
    dash_off: float = 4.0
    color: int = 0

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise GeometryError("stroke width must be positive")
        if not (self.dash_on > 0 and self.dash_off > 0):
            raise GeometryError("dash lengths must be positive")
        if self.pattern not in (SOLID, DASHED):
            raise GeometryError(f"unknown stroke pattern: {self.pattern!r}")


def stroke_for(rc: RenderConfig) -> StrokeStyle:
    scale = rc.dpi / 96.0
    return StrokeStyle(
        width=rc.line_width,
        pattern=rc.line_style,
        dash_on=6.0 * scale,
        dash_off=4.0 * scale,
    )


def frame_for(rc: RenderConfig) -> PixelFrame:
    w, h = rc.image_size
    return PixelFrame(w, h, Y_DOWN)


def _label_anchor(fig: Figure, p: Point, frame: PixelFrame) -> tuple[float, float]:
    # Push the label away from the scene centroid so it clears the strokes.
    verts = fig.vertices()
    cx = sum(v.x for v in verts) / len(verts)
    cy = sum(v.y for v in verts) / len(verts)
    dx, dy = p.x - cx, p.y - cy
    norm = math.hypot(dx, dy)
    if norm < 1e-9:
        dx, dy = 0.0, 1.0
        norm = 1.0
    off = 0.5  # normalized units, a fixed fraction of the 20-unit canvas
    px, py = to_pixel(p, frame)
    ox = dx / norm * off / 20.0 * frame.width
    oy = -dy / norm * off / 20.0 * frame.height  # frame is y-down
    margin = 0.02 * min(frame.width, frame.height)
    return (
        min(max(px + ox, margin), frame.width - margin),
        min(max(py + oy, margin), frame.height - margin),
    )


def _grayhex(level: int) -> str:
    return f"#{level:02x}{level:02x}{level:02x}"


def render_vector(fig: Figure, rc: RenderConfig) -> str:
    """Emit an SVG 1.1 subset document: path per segment, circle, text."""
    w, h = rc.image_size
    frame = frame_for(rc)
    style = stroke_for(rc)
    stroke = _grayhex(style.color)
    dash = (
        f' stroke-dasharray="{style.dash_on:.2f},{style.dash_off:.2f}"'
        if style.pattern == DASHED
        else ""
    )
    font_px = max(10, round(12 * rc.dpi / 96))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    for seg in fig.segments:
        x1, y1 = to_pixel(seg.a, frame)
        x2, y2 = to_pixel(seg.b, frame)
        out.append(
            f'<path d="M {x1:.2f} {y1:.2f} L {x2:.2f} {y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{style.width:.2f}" '
            f'stroke-linecap="round" fill="none"{dash}/>'
        )
    for circle in fig.circles:
        cx, cy = to_pixel(circle.center, frame)
        r = circle.radius / 20.0 * w
        out.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" '
            f'stroke="{stroke}" stroke-width="{style.width:.2f}" fill="none"{dash}/>'
        )
    for letter, p in fig.labels.items():
        tx, ty = _label_anchor(fig, p, frame)
        out.append(
            f'<text x="{tx:.2f}" y="{ty:.2f}" font-family="sans-serif" '
            f'font-size="{font_px}" fill="{stroke}" '
            f'text-anchor="middle">{letter}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _dash_spans(x1, y1, x2, y2, on, off):
    total = math.hypot(x2 - x1, y2 - y1)
    if total <= 0:
        return
    ux, uy = (x2 - x1) / total, (y2 - y1) / total
    t = 0.0
    while t < total:
        t_end = min(t + on, total)
        yield (x1 + ux * t, y1 + uy * t, x1 + ux * t_end, y1 + uy * t_end)
        t = t_end + off


def render_raster(
    fig: Figure, rc: RenderConfig, supersample: int | None = None
) -> np.ndarray:
    """Rasterize to an 8-bit grayscale bitmap, strokes dark on white."""
    w, h = rc.image_size
    style = stroke_for(rc)
    ss = supersample if supersample else (4 if rc.dpi <= 150 else 2)
    big = Image.new("L", (w * ss, h * ss), 255)
    draw = ImageDraw.Draw(big)
    frame = PixelFrame(w * ss, h * ss, Y_DOWN)
    lw = max(1, round(style.width * ss))
    color = style.color

    for seg in fig.segments:
        x1, y1 = to_pixel(seg.a, frame)
        x2, y2 = to_pixel(seg.b, frame)
        if style.pattern == DASHED:
            for sx1, sy1, sx2, sy2 in _dash_spans(
                x1, y1, x2, y2, style.dash_on * ss, style.dash_off * ss
            ):
                draw.line([(sx1, sy1), (sx2, sy2)], fill=color, width=lw)
        else:
            draw.line([(x1, y1), (x2, y2)], fill=color, width=lw)

    for circle in fig.circles:
        cx, cy = to_pixel(circle.center, frame)
        r = circle.radius / 20.0 * (w * ss)
        bbox = (cx - r, cy - r, cx + r, cy + r)
        if style.pattern == DASHED:
            circumference = 2.0 * math.pi * r
            step = math.degrees(
                (style.dash_on + style.dash_off) * ss / circumference * 2.0 * math.pi
            ) if circumference > 0 else 360.0
            on_deg = step * style.dash_on / (style.dash_on + style.dash_off)
            ang = 0.0
            while ang < 360.0:
                draw.arc(bbox, ang, min(ang + on_deg, 360.0), fill=color, width=lw)
                ang += step
        else:
            draw.ellipse(bbox, outline=color, width=lw)

    img = big.resize((w, h), Image.BOX)
    if fig.labels:
        draw = ImageDraw.Draw(img)
        font = ImageFont.load_default(size=max(10, round(12 * rc.dpi / 96)))
        final_frame = frame_for(rc)
        for letter, p in fig.labels.items():
            tx, ty = _label_anchor(fig, p, final_frame)
            draw.text((tx, ty), letter, fill=color, font=font, anchor="mm")
    return np.asarray(img)


def perturb_image(
    img: np.ndarray,
    rng: np.random.Generator,
    brightness: float = 0.0,
    contrast: float = 0.0,
    noise_sigma: float = 0.0,
) -> np.ndarray:
    """Brightness/contrast jitter plus additive Gaussian noise, clamped to uint8.

    The all-zero configuration is the exact identity.
    """
    arr = np.asarray(img, dtype=np.float64)
    delta = float(rng.uniform(-brightness, brightness)) if brightness else 0.0
    factor = float(rng.uniform(1.0 - contrast, 1.0 + contrast)) if contrast else 1.0
    out = (arr - 127.5) * factor + 127.5 + delta
    if noise_sigma:
        out = out + rng.normal(0.0, noise_sigma, arr.shape)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def png_bytes(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img, dtype=np.uint8), "L").save(buf, "PNG")
    return buf.getvalue()


def save_png(img: np.ndarray, path) -> None:
    with open(path, "wb") as fh:
        fh.write(png_bytes(img))
