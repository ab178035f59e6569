"""
Scoring predictions with line IoU
=================================

A predicted segment scores against a ground-truth segment by the mean of
the 1-D IoUs of their x- and y-axis projections.  Predictions are matched
one to one (maximum cardinality, then maximum total IoU); precision,
recall and F1 are micro-averaged at IoU 0.75 and the stricter 0.9, and
split into short/long buckets at normalized length 8.
"""

import random

from figflow import Figure, GenConfig, Point, Segment, generate, line_iou, quantize, score
from figflow.evaluate import format_table

print("line IoU of a segment against its own first half:",
      line_iou(Segment(Point(0.0, 0.0), Point(4.0, 4.0)),
               Segment(Point(0.0, 0.0), Point(2.0, 2.0))))

# Build a small corpus of (prediction, ground truth) pairs: predictions are
# the truth with every endpoint nudged by up to half a unit, plus one
# spurious segment per image.
rnd = random.Random(99)
corpus = []
for fig, _ in generate(GenConfig(seed=99), 60):
    noisy = []
    for seg in fig.segments:
        try:
            noisy.append(
                Segment(
                    quantize(seg.a.x + rnd.uniform(-0.4, 0.4),
                             seg.a.y + rnd.uniform(-0.4, 0.4)),
                    quantize(seg.b.x + rnd.uniform(-0.4, 0.4),
                             seg.b.y + rnd.uniform(-0.4, 0.4)),
                )
            )
        except Exception:
            pass
    noisy.append(Segment(Point(-9.5, 9.0), Point(-8.5, 9.5)))
    corpus.append((Figure(tuple(noisy)), fig))

report = score(corpus)
print("\nnoisy predictions vs ground truth on 60 figures:")
print(format_table(report))

perfect = score([(gt, gt) for _, gt in corpus])
print("\nself-evaluation (the fixed point):")
print(format_table(perfect))
