"""Independent reference implementations used to check the package.

These deliberately avoid the package's own code paths: string arithmetic
for rounding, grid counting for interval IoU, exhaustive enumeration for
matching.
"""

from __future__ import annotations

import math


def round_half_away_str(text: str, places: int = 2) -> float:
    """Round a decimal literal half away from zero using string arithmetic."""
    text = text.strip()
    sign = -1.0 if text.startswith("-") else 1.0
    digits = text.lstrip("+-")
    if "e" in digits or "E" in digits:
        raise ValueError("plain decimal literals only")
    int_part, _, frac_part = digits.partition(".")
    frac_part += "0" * places
    kept = int((int_part or "0") + frac_part[:places])
    rest = frac_part[places:]
    if rest and rest[0] >= "5":
        kept += 1
    return sign * kept / (10.0**places)


def clamp(v: float, lo: float = -10.0, hi: float = 10.0) -> float:
    return min(max(v, lo), hi)


def interval_iou_grid(
    p: tuple[float, float], t: tuple[float, float], step: float = 1e-4
) -> float:
    """Interval IoU by counting grid multiples of ``step`` in each set."""

    def count(lo: float, hi: float) -> int:
        if hi < lo:
            return 0
        return max(
            0,
            math.floor(hi / step + 1e-9) - math.ceil(lo / step - 1e-9) + 1,
        )

    inter = count(max(p[0], t[0]), min(p[1], t[1]))
    union = count(min(p[0], t[0]), max(p[1], t[1]))
    return inter / union if union else 0.0


def segment_projections(seg) -> tuple[tuple[float, float], tuple[float, float]]:
    xs = sorted((seg.a.x, seg.b.x))
    ys = sorted((seg.a.y, seg.b.y))
    return (xs[0], xs[1]), (ys[0], ys[1])


def line_iou_grid(p, t, step: float = 1e-4) -> float:
    px, py = segment_projections(p)
    tx, ty = segment_projections(t)
    return 0.5 * (interval_iou_grid(px, tx, step) + interval_iou_grid(py, ty, step))


def brute_force_match(ious, threshold: float) -> tuple[int, float]:
    """Exhaustive best one-to-one assignment: (cardinality, total IoU)."""
    n = len(ious)
    m = len(ious[0]) if n else 0
    best = (0, 0.0)
    used = [False] * m

    def rec(i: int, card: int, total: float) -> None:
        nonlocal best
        if i == n:
            if (card, total) > best:
                best = (card, total)
            return
        rec(i + 1, card, total)
        for j in range(m):
            if not used[j] and ious[i][j] >= threshold:
                used[j] = True
                rec(i + 1, card + 1, total + ious[i][j])
                used[j] = False

    rec(0, 0, 0.0)
    return best
