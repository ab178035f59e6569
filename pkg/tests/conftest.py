import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from figflow import Segment, quantize


@pytest.fixture
def rng():
    return random.Random(20250811)


def random_segment(rnd: random.Random, min_extent: float = 0.0) -> Segment:
    """A random quantized segment; optionally force both projection extents."""
    while True:
        a = quantize(rnd.uniform(-10, 10), rnd.uniform(-10, 10))
        b = quantize(rnd.uniform(-10, 10), rnd.uniform(-10, 10))
        if a == b:
            continue
        if min_extent and (
            abs(a.x - b.x) < min_extent or abs(a.y - b.y) < min_extent
        ):
            continue
        return Segment(a, b)


@pytest.fixture
def segment_factory():
    return random_segment
