import random

import pytest

from figflow import PixelFrame, Point, to_normalized, to_pixel
from figflow.transform import FrameError, Y_DOWN, Y_UP


class TestToNormalized:
    def test_corner_maps_to_range_corner(self):
        frame = PixelFrame(400, 400, Y_UP)
        assert to_normalized(0, 0, frame) == Point(-10.0, -10.0)

    def test_center_maps_to_origin(self):
        frame = PixelFrame(400, 400, Y_UP)
        assert to_normalized(200, 200, frame) == Point(0.0, 0.0)

    def test_flip_then_scale(self):
        frame = PixelFrame(400, 400, Y_DOWN)
        assert to_normalized(300, 100, frame) == Point(5.0, 5.0)

    def test_rejects_out_of_frame(self):
        frame = PixelFrame(400, 400, Y_UP)
        with pytest.raises(FrameError):
            to_normalized(401, 0, frame)
        with pytest.raises(FrameError):
            to_normalized(0, -1, frame)


class TestToPixel:
    @pytest.mark.parametrize(
        "p, frame, expected",
        [
            ((0, 0), (400, 400, Y_UP), (200, 200)),
            ((-10, -10), (400, 400, Y_UP), (0, 0)),
            ((5, 5), (400, 400, Y_DOWN), (300, 100)),
        ],
    )
    def test_examples(self, p, frame, expected):
        px, py = to_pixel(Point(*map(float, p)), PixelFrame(*frame))
        assert (px, py) == pytest.approx(expected)


class TestProperties:
    def test_round_trip(self):
        rnd = random.Random(3)
        for _ in range(500):
            w = rnd.randint(40, 1200)
            h = rnd.randint(40, 1200)
            axis = rnd.choice([Y_UP, Y_DOWN])
            frame = PixelFrame(w, h, axis)
            p = Point(
                round(rnd.uniform(-10, 10), 2), round(rnd.uniform(-10, 10), 2)
            )
            back = to_normalized(*to_pixel(p, frame), frame)
            bound = 0.01 + 20.0 / min(w, h)
            assert abs(back.x - p.x) <= bound
            assert abs(back.y - p.y) <= bound

    def test_monotone_in_px(self):
        frame = PixelFrame(640, 480, Y_UP)
        prev = None
        for px in range(0, 641, 16):
            p = to_normalized(px, 240, frame)
            if prev is not None:
                assert p.x > prev
            prev = p.x

    def test_corners_map_to_corners(self):
        frame = PixelFrame(640, 480, Y_DOWN)
        assert to_normalized(0, 480, frame) == Point(-10.0, -10.0)
        assert to_normalized(640, 0, frame) == Point(10.0, 10.0)
