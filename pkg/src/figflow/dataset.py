"""Dataset records, figure JSON, split hashing, and corpus statistics.

Datasets are JSONL: one record per line with a sample id, the image path,
the serialized sequence text, the ruler it was encoded at, and a split tag.
Figures also have a standalone JSON form used by the encode/decode/render
commands; when such a file declares a pixel ``frame``, its coordinates are
ingested as raster annotations and normalized here.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from . import codec
from .geometry import Circle, Figure, Point, Segment, angle_deg, length, quantize_value
from .transform import PixelFrame, to_normalized

SPLITS = ("train", "val", "test")

LENGTH_BIN_WIDTH = 1.0
LENGTH_RANGE = (0.0, 30.0)
ANGLE_BIN_WIDTH = 10.0
ANGLE_RANGE = (0.0, 180.0)


class DatasetError(ValueError):
    """Malformed dataset or figure file."""


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    image_path: str | None
    sequence: str
    ruler: float
    split: str

    def __post_init__(self) -> None:
        if self.split not in SPLITS:
            raise DatasetError(f"unknown split {self.split!r}")

    def to_json(self) -> str:
        ruler = "inf" if math.isinf(self.ruler) else self.ruler
        payload = {
            "id": self.id,
            "image_path": self.image_path,
            "sequence": self.sequence,
            "ruler": ruler,
            "split": self.split,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "DatasetRecord":
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"bad JSONL line: {exc}") from exc
        try:
            ruler = payload["ruler"]
            ruler = math.inf if ruler == "inf" else float(ruler)
            return cls(
                id=str(payload["id"]),
                image_path=payload.get("image_path"),
                sequence=payload["sequence"],
                ruler=ruler,
                split=payload.get("split", "train"),
            )
        except KeyError as exc:
            raise DatasetError(f"record missing field {exc}") from exc


def write_records(records: Iterable[DatasetRecord], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record.to_json())
            fh.write("\n")


def read_records(path: Path | str) -> list[DatasetRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(DatasetRecord.from_json(line))
    return records


def assign_split(seed: int, sample_id: str) -> str:
    """Seed-derived hash split: 80% train, then val:test at 1:3."""
    digest = hashlib.sha256(f"{seed}:{sample_id}".encode("utf-8")).digest()
    u = int.from_bytes(digest[:8], "big") / 2**64
    if u < 0.80:
        return "train"
    if u < 0.85:
        return "val"
    return "test"


# ---------------------------------------------------------------------------
# figure JSON


def figure_to_json(fig: Figure) -> dict:
    return {
        "segments": [[[s.a.x, s.a.y], [s.b.x, s.b.y]] for s in fig.segments],
        "circles": [[c.center.x, c.center.y, c.radius] for c in fig.circles],
        "labels": {letter: [p.x, p.y] for letter, p in fig.labels.items()},
    }


def _load_point(raw, frame: PixelFrame | None) -> Point:
    x, y = float(raw[0]), float(raw[1])
    if frame is not None:
        return to_normalized(x, y, frame)
    return Point(quantize_value(x), quantize_value(y))


def figure_from_json(data: dict) -> Figure:
    """Load a figure JSON object.

    With a ``frame`` key the coordinates are pixel annotations (y-down
    raster unless the frame says otherwise) and are normalized on the way
    in.
    """
    frame = None
    if data.get("frame"):
        raw = data["frame"]
        frame = PixelFrame(
            float(raw["width"]), float(raw["height"]), raw.get("y_axis", "down")
        )
    try:
        segments = tuple(
            Segment(_load_point(a, frame), _load_point(b, frame))
            for a, b in data.get("segments", ())
        )
        scale = 20.0 / min(frame.width, frame.height) if frame else 1.0
        circles = tuple(
            Circle(
                _load_point((c[0], c[1]), frame),
                quantize_value(float(c[2]) * scale),
            )
            for c in data.get("circles", ())
        )
        labels = {
            letter: _load_point(p, frame)
            for letter, p in (data.get("labels") or {}).items()
        }
        return Figure(segments, circles, labels)
    except (TypeError, ValueError, IndexError) as exc:
        raise DatasetError(f"bad figure JSON: {exc}") from exc


def load_figure(path: Path | str) -> Figure:
    with open(path, "r", encoding="utf-8") as fh:
        return figure_from_json(json.load(fh))


def save_figure(fig: Figure, path: Path | str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(figure_to_json(fig), fh, sort_keys=True, indent=2)
        fh.write("\n")


def record_figure(record: DatasetRecord) -> Figure:
    """Strict-parse a record's sequence and collapse it to a figure."""
    return codec.collapse(codec.parse(record.sequence))


def frame_from_image(path: Path | str) -> PixelFrame:
    """Read the pixel frame of a raster file (rasters are y-down)."""
    from PIL import Image

    with Image.open(path) as img:
        width, height = img.size
    return PixelFrame(width, height, "down")


# ---------------------------------------------------------------------------
# corpus statistics


@dataclass
class CorpusStats:
    segment_count: int
    length_bins: list[int]
    angle_bins: list[int]
    median_length: float

    def to_dict(self) -> dict:
        return {
            "segment_count": self.segment_count,
            "length_bin_width": LENGTH_BIN_WIDTH,
            "length_bins": self.length_bins,
            "angle_bin_width": ANGLE_BIN_WIDTH,
            "angle_bins": self.angle_bins,
            "median_length": self.median_length,
        }


def corpus_stats(figures: Iterable[Figure]) -> CorpusStats:
    lengths: list[float] = []
    angles: list[float] = []
    for fig in figures:
        for seg in fig.segments:
            lengths.append(length(seg))
            angles.append(angle_deg(seg))
    if not lengths:
        raise DatasetError("no segments in dataset")
    n_len_bins = int(LENGTH_RANGE[1] / LENGTH_BIN_WIDTH)
    n_ang_bins = int(ANGLE_RANGE[1] / ANGLE_BIN_WIDTH)
    length_bins = [0] * n_len_bins
    angle_bins = [0] * n_ang_bins
    for value in lengths:
        idx = min(int(value / LENGTH_BIN_WIDTH), n_len_bins - 1)
        length_bins[idx] += 1
    for value in angles:
        idx = min(int(value / ANGLE_BIN_WIDTH), n_ang_bins - 1)
        angle_bins[idx] += 1
    ordered = sorted(lengths)
    mid = len(ordered) // 2
    median = (
        ordered[mid]
        if len(ordered) % 2
        else 0.5 * (ordered[mid - 1] + ordered[mid])
    )
    return CorpusStats(len(lengths), length_bins, angle_bins, median)


def histogram_svg(
    bins: Sequence[int], bin_width: float, title: str, x_label: str
) -> str:
    """A small standalone bar-chart SVG for one histogram."""
    width, height = 640, 360
    margin_l, margin_b, margin_t = 50, 40, 30
    plot_w = width - margin_l - 20
    plot_h = height - margin_t - margin_b
    peak = max(max(bins), 1)
    bar_w = plot_w / len(bins)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    for i, count in enumerate(bins):
        bar_h = plot_h * count / peak
        x = margin_l + i * bar_w
        y = margin_t + plot_h - bar_h
        out.append(
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w * 0.9:.1f}" '
            f'height="{bar_h:.1f}" fill="#4878a8"/>'
        )
    axis_y = margin_t + plot_h
    out.append(
        f'<path d="M {margin_l} {margin_t} L {margin_l} {axis_y} '
        f'L {margin_l + plot_w} {axis_y}" stroke="#000000" fill="none"/>'
    )
    for i in range(0, len(bins) + 1, max(1, len(bins) // 6)):
        x = margin_l + i * bar_w
        out.append(
            f'<text x="{x:.1f}" y="{axis_y + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{i * bin_width:g}</text>'
        )
    out.append(
        f'<text x="{margin_l + plot_w / 2:.0f}" y="{height - 8}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{x_label}</text>'
    )
    out.append(
        f'<text x="14" y="{margin_t - 8}" font-family="sans-serif" '
        f'font-size="11">max {peak}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
