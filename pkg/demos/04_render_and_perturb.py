"""
Rendering figures to SVG and PNG
================================

Rendering targets a square 5-inch canvas scaled by dpi, so a 96 dpi image
is 480x480 and a 300 dpi image is 1500x1500.  The vector document carries
one path per segment and one circle element per circle; the raster is
drawn supersampled and box-filtered for anti-aliasing.  Training-style
photometric noise (brightness/contrast jitter plus Gaussian noise) is a
separate, seeded step.
"""

from pathlib import Path

import numpy as np

from figflow import (
    Circle,
    Figure,
    GenConfig,
    Point,
    RenderConfig,
    Segment,
    generate_sample,
    perturb_image,
    render_raster,
    render_vector,
)
from figflow.render import save_png

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

square = Figure(
    (
        Segment(Point(-4.0, -4.0), Point(4.0, -4.0)),
        Segment(Point(4.0, -4.0), Point(4.0, 4.0)),
        Segment(Point(4.0, 4.0), Point(-4.0, 4.0)),
        Segment(Point(-4.0, 4.0), Point(-4.0, -4.0)),
    ),
    (Circle(Point(0.0, 0.0), 4.0),),
    {"A": Point(-4.0, -4.0), "B": Point(4.0, -4.0)},
)

for dpi, style in ((96, "solid"), (72, "dashed")):
    rc = RenderConfig.from_dpi(dpi, line_width=2.0, line_style=style)
    svg = render_vector(square, rc)
    img = render_raster(square, rc)
    (OUT / f"square_{dpi}_{style}.svg").write_text(svg, encoding="utf-8")
    save_png(img, OUT / f"square_{dpi}_{style}.png")
    print(f"{dpi:>3} dpi {style:<6}: raster {img.shape}, svg {len(svg)} bytes")

# A generated sample carries its own style; render it as sampled.
fig, rc = generate_sample(GenConfig(seed=21, label_prob=1.0), 0)
save_png(render_raster(fig, rc), OUT / "sample.png")
print(f"generated sample at {rc.dpi} dpi -> {OUT / 'sample.png'}")

# Photometric perturbation: dims unchanged, intensities clamped to uint8.
rng = np.random.default_rng(4)
noisy = perturb_image(
    render_raster(square, RenderConfig.from_dpi(96)),
    rng,
    brightness=20.0,
    contrast=0.2,
    noise_sigma=8.0,
)
save_png(noisy, OUT / "square_noisy.png")
print("perturbed copy ->", OUT / "square_noisy.png")
