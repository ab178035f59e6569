"""
Pixel space vs normalized label space
=====================================

Labels live in a [-10, 10] grid with two-decimal precision; images live in
pixels.  The mapping divides by the full canvas size, rescales to 20 units
and recenters.  Raster files are y-down, the label space is y-up; the
frame records which way its y axis points so the flip happens in exactly
one place.
"""

from figflow import PixelFrame, Point, to_normalized, to_pixel

frame_up = PixelFrame(400, 400, "up")
frame_down = PixelFrame(400, 400, "down")

print("pixel (0, 0), y-up frame      ->", to_normalized(0, 0, frame_up))
print("pixel (200, 200), y-up frame  ->", to_normalized(200, 200, frame_up))
print("pixel (300, 100), y-down frame->", to_normalized(300, 100, frame_down))

p = Point(5.0, 5.0)
print(f"\n{p} -> pixels in the y-down frame:", to_pixel(p, frame_down))

# Round trips are bounded by half a quantization step plus the pixel pitch.
worst = 0.0
for cx in range(-10, 11):
    for cy in range(-10, 11):
        p = Point(float(cx), float(cy))
        back = to_normalized(*to_pixel(p, frame_down), frame_down)
        worst = max(worst, abs(back.x - p.x), abs(back.y - p.y))
print(f"worst grid round-trip error on a 400px frame: {worst:.4f}")

# Manual annotations arrive as pixel coordinates; a figure JSON file with a
# "frame" key is normalized on ingestion (see README for the schema).
from figflow.dataset import figure_from_json

annotated = figure_from_json(
    {
        "frame": {"width": 400, "height": 400, "y_axis": "down"},
        "segments": [[[0, 400], [400, 0]]],
    }
)
print("\npixel-annotated diagonal ingests as:", annotated.segments[0])
