"""Line-IoU scoring of predicted figures against ground truth.

The IoU of two segments is the mean of the 1-D interval IoUs of their x-
and y-axis projections.  Predictions and ground truths are matched one to
one (maximum cardinality, then maximum total IoU), and precision / recall /
F1 are micro-averaged over the corpus at each threshold, split into short
and long buckets at normalized length 8.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import Figure, Segment, length

DEFAULT_THRESHOLDS = (0.75, 0.9)
SHORT_LONG_SPLIT = 8.0
BUCKETS = ("all", "short", "long")

# Both projections shorter than this count as degenerate (axis-aligned
# segments project to a single coordinate on one axis).
DEGENERATE_EPS = 1e-6


def _projection(p: Segment, axis: int, pad: float) -> tuple[float, float]:
    a = p.a[axis]
    b = p.b[axis]
    lo, hi = (a, b) if a <= b else (b, a)
    return lo - pad, hi + pad


def _interval_iou(p: tuple[float, float], t: tuple[float, float]) -> float:
    p_len = p[1] - p[0]
    t_len = t[1] - t[0]
    if p_len <= DEGENERATE_EPS and t_len <= DEGENERATE_EPS:
        # Two collapsed intervals: same position means a perfect component.
        return 1.0 if abs(p[0] - t[0]) <= DEGENERATE_EPS else 0.0
    inter = min(p[1], t[1]) - max(p[0], t[0])
    if inter <= 0.0:
        return 0.0
    union = max(p[1], t[1]) - min(p[0], t[0])
    return inter / union


def line_iou(p: Segment, t: Segment, pad: float = 0.0) -> float:
    """Mean of the x- and y-projection interval IoUs, in [0, 1].

    ``pad`` widens every projection interval by that amount on each side
    before the ratio (0 gives the literal metric).
    """
    iou_x = _interval_iou(_projection(p, 0, pad), _projection(t, 0, pad))
    iou_y = _interval_iou(_projection(p, 1, pad), _projection(t, 1, pad))
    return 0.5 * (iou_x + iou_y)


@dataclass(frozen=True)
class MatchResult:
    """One-to-one assignment between predictions and ground truths."""

    pairs: tuple[tuple[int, int, float], ...]
    unmatched_pred: tuple[int, ...]
    unmatched_gt: tuple[int, ...]


def match(
    preds: Sequence[Segment],
    gts: Sequence[Segment],
    threshold: float,
    pad: float = 0.0,
) -> MatchResult:
    """Maximum-cardinality matching over pairs with IoU >= threshold.

    Among maximum matchings the one with the largest total IoU wins; exact
    ties break deterministically toward low (pred, gt) indices.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1]: {threshold!r}")
    n, m = len(preds), len(gts)
    if n == 0 or m == 0:
        return MatchResult((), tuple(range(n)), tuple(range(m)))

    iou = np.empty((n, m))
    for i, p in enumerate(preds):
        for j, t in enumerate(gts):
            iou[i, j] = line_iou(p, t, pad)
    valid = iou >= threshold
    if not valid.any():
        return MatchResult((), tuple(range(n)), tuple(range(m)))

    # One extra matched pair must outweigh any re-shuffle of IoU mass, so
    # every valid pair carries a bonus larger than the largest possible
    # total IoU.  The rank epsilon only separates exact ties.
    bonus = float(min(n, m)) + 1.0
    rank = np.arange(n * m, dtype=float).reshape(n, m)
    eps = 1e-12 / (n * m)
    reward = np.where(valid, bonus + iou - eps * rank, 0.0)
    rows, cols = linear_sum_assignment(reward, maximize=True)

    pairs = []
    for i, j in zip(rows, cols):
        if valid[i, j]:
            pairs.append((int(i), int(j), float(iou[i, j])))
    pairs.sort()
    matched_p = {i for i, _, _ in pairs}
    matched_t = {j for _, j, _ in pairs}
    return MatchResult(
        tuple(pairs),
        tuple(i for i in range(n) if i not in matched_p),
        tuple(j for j in range(m) if j not in matched_t),
    )


@dataclass
class BucketScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r else 0.0

    @property
    def support(self) -> int:
        return self.tp + self.fn


@dataclass
class ImageScore:
    image_id: str
    counts: dict[float, tuple[int, int, int]]  # threshold -> (tp, fp, fn)


@dataclass
class EvalReport:
    """Micro-averaged corpus scores per IoU threshold and length bucket."""

    thresholds: tuple[float, ...]
    scores: dict[float, dict[str, BucketScore]]
    corpus_size: int
    per_image: list[ImageScore] = field(default_factory=list)
    split: float = SHORT_LONG_SPLIT
    pad: float = 0.0
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "corpus_size": self.corpus_size,
            "short_long_split": self.split,
            "iou_pad": self.pad,
            "thresholds": {
                f"{thr:g}": {
                    bucket: {
                        "tp": s.tp,
                        "fp": s.fp,
                        "fn": s.fn,
                        "precision": s.precision,
                        "recall": s.recall,
                        "f1": s.f1,
                    }
                    for bucket, s in by_bucket.items()
                }
                for thr, by_bucket in self.scores.items()
            },
            "per_image": [
                {
                    "id": img.image_id,
                    "counts": {
                        f"{thr:g}": list(c) for thr, c in img.counts.items()
                    },
                }
                for img in self.per_image
            ],
            "diagnostics": list(self.diagnostics),
        }


def _bucket(seg_len: float, split: float) -> str:
    return "short" if seg_len < split else "long"


def score(
    corpus: Sequence[tuple[Figure, Figure]],
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
    pad: float = 0.0,
    split: float = SHORT_LONG_SPLIT,
    ids: Sequence[str] | None = None,
) -> EvalReport:
    """Score (prediction, ground truth) figure pairs.

    Circles never enter the counts.  Matched pairs and unmatched ground
    truths bucket by GT segment length; unmatched predictions bucket by
    their own length (they have no GT partner).
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("cannot score an empty corpus")
    thresholds = tuple(thresholds)
    if ids is None:
        ids = [f"{i:08d}" for i in range(len(corpus))]
    elif len(ids) != len(corpus):
        raise ValueError(f"{len(ids)} ids for {len(corpus)} corpus pairs")

    scores = {thr: {b: BucketScore() for b in BUCKETS} for thr in thresholds}
    per_image = []
    for image_id, (pred, gt) in zip(ids, corpus):
        counts: dict[float, tuple[int, int, int]] = {}
        for thr in thresholds:
            result = match(pred.segments, gt.segments, thr, pad)
            by_bucket = scores[thr]
            for _, j, _ in result.pairs:
                by_bucket["all"].tp += 1
                by_bucket[_bucket(length(gt.segments[j]), split)].tp += 1
            for i in result.unmatched_pred:
                by_bucket["all"].fp += 1
                by_bucket[_bucket(length(pred.segments[i]), split)].fp += 1
            for j in result.unmatched_gt:
                by_bucket["all"].fn += 1
                by_bucket[_bucket(length(gt.segments[j]), split)].fn += 1
            counts[thr] = (
                len(result.pairs),
                len(result.unmatched_pred),
                len(result.unmatched_gt),
            )
        per_image.append(ImageScore(image_id, counts))
    return EvalReport(thresholds, scores, len(corpus), per_image, split, pad)


def format_table(report: EvalReport) -> str:
    """Human-readable table: F1, F1_s, F1_l, P, P_s, P_l, R, R_s, R_l per threshold."""
    cols = ["F1", "F1_s", "F1_l", "P", "P_s", "P_l", "R", "R_s", "R_l"]
    header = f"{'IoU':>5} " + " ".join(f"{c:>6}" for c in cols)
    rows = [header, "-" * len(header)]
    for thr in report.thresholds:
        by_bucket = report.scores[thr]
        values = []
        for metric in ("f1", "precision", "recall"):
            for bucket in BUCKETS:
                values.append(100.0 * getattr(by_bucket[bucket], metric))
        rows.append(f"{thr:>5g} " + " ".join(f"{v:>6.1f}" for v in values))
    return "\n".join(rows)
