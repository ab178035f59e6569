"""Quantized geometric value types shared by the whole pipeline.

All coordinates live on a 0.01 grid inside [-10, 10]^2.  Values on the grid
round-trip exactly through their two-decimal text form, which is what makes
the sequence codec and the dataset files byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import TYPE_CHECKING, Mapping, NamedTuple

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, render owns the type
    from .render import RenderConfig

COORD_MIN = -10.0
COORD_MAX = 10.0
GRID_STEP = 0.01

_CENTS_MAX = 1000
_TWO_PLACES = Decimal("0.01")


class GeometryError(ValueError):
    """Invalid geometric value: degenerate segment, off-grid point, ..."""


def _decimal_cents(v: float) -> int:
    # Ties are resolved on the shortest round-tripping decimal form of v, so
    # a literal like 2.345 rounds up even though its binary value sits a hair
    # below the tie.
    return int(Decimal(repr(v)).scaleb(2).to_integral_value(rounding=ROUND_HALF_UP))


def quantize_value(v: float) -> float:
    """Round to the 0.01 grid, half away from zero, then clamp to [-10, 10]."""
    v = float(v)
    if not math.isfinite(v):
        raise GeometryError(f"non-finite coordinate: {v!r}")
    c = abs(v) * 100.0
    f = math.floor(c)
    r = c - f
    if abs(r - 0.5) < 1e-6:
        cents = abs(_decimal_cents(abs(v)))
    else:
        cents = f + (1 if r > 0.5 else 0)
    if cents > _CENTS_MAX:
        cents = _CENTS_MAX
    if v < 0:
        cents = -cents
    return cents / 100.0


def is_on_grid(v: float) -> bool:
    return (
        COORD_MIN <= v <= COORD_MAX
        and abs(v * 100.0 - round(v * 100.0)) < 1e-9
    )


class Point(NamedTuple):
    """A grid point.  Tuple ordering doubles as the canonical (x, y) order."""

    x: float
    y: float

    def __str__(self) -> str:
        return f"({self.x:.2f},{self.y:.2f})"


def quantize(x: float, y: float) -> Point:
    """Quantize a raw coordinate pair onto the grid."""
    return Point(quantize_value(x), quantize_value(y))


@dataclass(frozen=True, order=True)
class Segment:
    """An undirected maximal stroke between two distinct grid points.

    Endpoints are normalised at construction so that ``a`` precedes ``b``
    lexicographically; every Segment value is therefore canonical.
    """

    a: Point
    b: Point

    def __post_init__(self) -> None:
        a, b = self.a, self.b
        if not isinstance(a, Point):
            object.__setattr__(self, "a", Point(*a))
            a = self.a
        if not isinstance(b, Point):
            object.__setattr__(self, "b", Point(*b))
            b = self.b
        if a == b:
            raise GeometryError(f"degenerate segment at {a}")
        if b < a:
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)


def canonicalize(seg: Segment) -> Segment:
    """Return the canonical (endpoint-ordered) form of a segment.

    Construction already normalises endpoint order, so this is idempotent
    and acts as the identity on any Segment value.
    """
    return Segment(seg.a, seg.b)


def length(seg: Segment) -> float:
    """Euclidean length of a segment."""
    return math.hypot(seg.b.x - seg.a.x, seg.b.y - seg.a.y)


def angle_deg(seg: Segment) -> float:
    """Orientation of the undirected line in degrees, in [0, 180)."""
    ang = math.degrees(math.atan2(seg.b.y - seg.a.y, seg.b.x - seg.a.x))
    ang %= 180.0
    return 0.0 if ang == 180.0 else ang


@dataclass(frozen=True, order=True)
class Circle:
    """A circle that fits inside the coordinate range."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not isinstance(self.center, Point):
            object.__setattr__(self, "center", Point(*self.center))
        if not self.radius > 0:
            raise GeometryError(f"non-positive circle radius: {self.radius!r}")
        c, r = self.center, self.radius
        if (
            abs(c.x) + r > COORD_MAX + 1e-9
            or abs(c.y) + r > COORD_MAX + 1e-9
        ):
            raise GeometryError(f"circle exceeds coordinate range: {c}, r={r}")


@dataclass(frozen=True)
class Figure:
    """A full scene: canonical sorted segments, circles, optional labels.

    ``render_meta`` carries the style the figure was (or is to be) rendered
    with; it is provenance only and excluded from equality.
    """

    segments: tuple[Segment, ...] = ()
    circles: tuple[Circle, ...] = ()
    labels: Mapping[str, Point] = field(default_factory=dict)
    render_meta: "RenderConfig | None" = field(default=None, compare=False)

    def __post_init__(self) -> None:
        segs = tuple(sorted(set(self.segments)))
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "circles", tuple(self.circles))
        labels = dict(sorted(self.labels.items()))
        endpoints = self.vertices()
        for letter, pt in labels.items():
            if len(letter) != 1 or not "A" <= letter <= "Z":
                raise GeometryError(f"label key must be a letter A..Z: {letter!r}")
            if not isinstance(pt, Point):
                pt = Point(*pt)
                labels[letter] = pt
            if pt not in endpoints:
                raise GeometryError(f"label {letter} not bound to a vertex: {pt}")
        object.__setattr__(self, "labels", labels)

    def vertices(self) -> frozenset[Point]:
        pts = set()
        for seg in self.segments:
            pts.add(seg.a)
            pts.add(seg.b)
        return frozenset(pts)


def sorted_vertices(fig: Figure) -> tuple[Point, ...]:
    """Figure vertices in lexicographic (x, then y) order."""
    return tuple(sorted(fig.vertices()))
