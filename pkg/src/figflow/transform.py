"""Bidirectional mapping between pixel space and the normalized [-10, 10] space.

The frame is always the full image canvas.  Normalized space uses
mathematical orientation (y up); raster formats are y-down, so frames
declare their orientation and the flip happens here, in one place.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Point, quantize

Y_UP = "up"
Y_DOWN = "down"


class FrameError(ValueError):
    """Pixel coordinate outside the frame, or an invalid frame."""


@dataclass(frozen=True)
class PixelFrame:
    width: float
    height: float
    y_axis: str = Y_DOWN

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise FrameError(f"frame must have positive size: {self}")
        if self.y_axis not in (Y_UP, Y_DOWN):
            raise FrameError(f"y_axis must be 'up' or 'down': {self.y_axis!r}")


def to_normalized(px: float, py: float, frame: PixelFrame) -> Point:
    """Map a pixel coordinate into quantized normalized space."""
    if not (0.0 <= px <= frame.width) or not (0.0 <= py <= frame.height):
        raise FrameError(
            f"pixel ({px}, {py}) outside frame {frame.width}x{frame.height}"
        )
    if frame.y_axis == Y_DOWN:
        py = frame.height - py
    x = (px / frame.width) * 20.0 - 10.0
    y = (py / frame.height) * 20.0 - 10.0
    return quantize(x, y)


def to_pixel(p: Point, frame: PixelFrame) -> tuple[float, float]:
    """Inverse of :func:`to_normalized`, up to quantization."""
    px = (p.x + 10.0) / 20.0 * frame.width
    py = (p.y + 10.0) / 20.0 * frame.height
    if frame.y_axis == Y_DOWN:
        py = frame.height - py
    return px, py
