import pytest

from figflow import Figure, Point, Segment, line_iou, match, quantize, score
from figflow.evaluate import format_table

from conftest import random_segment
from oracles import brute_force_match, line_iou_grid


def seg(ax, ay, bx, by):
    return Segment(Point(float(ax), float(ay)), Point(float(bx), float(by)))


class TestLineIou:
    def test_identity(self, rng, segment_factory):
        for _ in range(200):
            s = segment_factory(rng)
            assert line_iou(s, s) == 1.0

    def test_half_overlap(self):
        assert line_iou(seg(0, 0, 4, 4), seg(0, 0, 2, 2)) == pytest.approx(0.5)

    def test_degenerate_projection_rule(self):
        assert line_iou(seg(0, 0, 0, 5), seg(0, 1, 0, 5)) == pytest.approx(0.9)
        # same axis positions: perfect
        assert line_iou(seg(0, 0, 0, 5), seg(0, 0, 0, 5)) == 1.0
        # collapsed on different positions: that component is 0
        assert line_iou(seg(0, 0, 0, 5), seg(1, 0, 1, 5)) == pytest.approx(0.5)
        # one collapsed, one not: literal formula gives 0 for that axis
        assert line_iou(seg(0, 0, 0, 4), seg(-2, 0, 2, 4)) == pytest.approx(0.5)

    def test_symmetry_and_axis_swap(self, rng, segment_factory):
        for _ in range(300):
            p, t = segment_factory(rng), segment_factory(rng)
            assert line_iou(p, t) == pytest.approx(line_iou(t, p), abs=1e-12)
            swap_p = Segment(Point(p.a.y, p.a.x), Point(p.b.y, p.b.x))
            swap_t = Segment(Point(t.a.y, t.a.x), Point(t.b.y, t.b.x))
            assert line_iou(swap_p, swap_t) == pytest.approx(
                line_iou(p, t), abs=1e-12
            )

    def test_one_iff_same_projections(self, rng, segment_factory):
        for _ in range(300):
            p, t = segment_factory(rng), segment_factory(rng)
            same = (
                sorted((p.a.x, p.b.x)) == sorted((t.a.x, t.b.x))
                and sorted((p.a.y, p.b.y)) == sorted((t.a.y, t.b.y))
            )
            assert (line_iou(p, t) == 1.0) == same

    def test_matches_grid_oracle(self, rng):
        for _ in range(500):
            p = random_segment(rng, min_extent=0.5)
            t = random_segment(rng, min_extent=0.5)
            assert line_iou(p, t) == pytest.approx(line_iou_grid(p, t), abs=1e-3)

    def test_pad_widens_intervals(self):
        p, t = seg(0, 0, 0, 4), seg(1, 0, 1, 4)
        assert line_iou(p, t) == pytest.approx(0.5)
        padded = line_iou(p, t, pad=0.6)
        assert padded > 0.5


class TestMatch:
    def test_perfect_prediction(self, rng, segment_factory):
        gts = [segment_factory(rng) for _ in range(5)]
        result = match(gts, gts, 0.75)
        assert len(result.pairs) == 5
        assert all(iou == 1.0 for _, _, iou in result.pairs)
        assert result.unmatched_pred == ()
        assert result.unmatched_gt == ()

    def test_empty_predictions(self):
        result = match([], [seg(0, 0, 1, 1)], 0.75)
        assert result.pairs == ()
        assert result.unmatched_gt == (0,)

    def test_one_pred_two_equal_gts(self):
        pred = seg(0, 0, 4, 0)
        gt = seg(0, 0, 5, 0)  # IoU 0.8 on x-extent, 1.0 on y -> 0.9
        result = match([pred], [gt, gt], 0.75)
        assert len(result.pairs) == 1
        assert len(result.unmatched_gt) == 1
        assert result.pairs[0][:2] == (0, 0)  # deterministic low-index tie-break

    def test_matches_brute_force(self, rng):
        for trial in range(300):
            n = rng.randint(0, 6)
            m = rng.randint(0, 6)
            preds = [random_segment(rng) for _ in range(n)]
            gts = [random_segment(rng) for _ in range(m)]
            # mix in near-duplicates so matches actually occur
            for j, g in enumerate(gts):
                if preds and rng.random() < 0.5:
                    preds[rng.randrange(len(preds))] = g
            threshold = rng.choice([0.5, 0.75, 0.9])
            result = match(preds, gts, threshold)
            ious = [[line_iou(p, t) for t in gts] for p in preds]
            card, total = brute_force_match(ious, threshold)
            assert len(result.pairs) == card
            assert sum(iou for _, _, iou in result.pairs) == pytest.approx(
                total, abs=1e-9
            )

    def test_threshold_validated(self):
        with pytest.raises(ValueError):
            match([], [], 0.0)


class TestScore:
    def figure(self, *segments):
        return Figure(tuple(segments))

    def test_perfect_fixed_point(self, rng, segment_factory):
        corpus = []
        for _ in range(20):
            fig = self.figure(*(segment_factory(rng) for _ in range(4)))
            corpus.append((fig, fig))
        report = score(corpus)
        for thr in (0.75, 0.9):
            for bucket in ("all", "short", "long"):
                s = report.scores[thr][bucket]
                if s.support:
                    assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)
        assert report.scores[0.75]["all"].support > 0

    def test_half_recall(self):
        gt = self.figure(seg(0, 0, 4, 0), seg(0, 0, 0, 4))
        pred = self.figure(seg(0, 0, 4, 0))
        report = score([(pred, gt)])
        for thr in (0.75, 0.9):
            s = report.scores[thr]["all"]
            assert s.precision == 1.0
            assert s.recall == 0.5
            assert s.f1 == pytest.approx(2 / 3)

    def test_spurious_prediction(self, rng, segment_factory):
        corpus = []
        n_per_image = 3
        for _ in range(10):
            segs = [random_segment(rng, min_extent=0.3) for _ in range(n_per_image)]
            gt = self.figure(*segs)
            extra = seg(9, 9, 9.5, 9.5)
            pred = Figure(gt.segments + (extra,))
            corpus.append((pred, gt))
        report = score(corpus, thresholds=(0.75,))
        s = report.scores[0.75]["all"]
        assert s.recall == 1.0
        assert s.precision == pytest.approx(
            (n_per_image * 10) / (n_per_image * 10 + 10)
        )

    def test_bucket_counts_add_up(self, rng, segment_factory):
        corpus = []
        for _ in range(15):
            gt = self.figure(*(segment_factory(rng) for _ in range(4)))
            pred = self.figure(*(segment_factory(rng) for _ in range(3)))
            corpus.append((pred, gt))
        report = score(corpus)
        for thr in report.thresholds:
            by_bucket = report.scores[thr]
            for field in ("tp", "fp", "fn"):
                assert getattr(by_bucket["all"], field) == getattr(
                    by_bucket["short"], field
                ) + getattr(by_bucket["long"], field)

    def test_threshold_monotone(self, rng, segment_factory):
        corpus = []
        for _ in range(25):
            gt_segs = [random_segment(rng, min_extent=0.4) for _ in range(4)]
            noisy = []
            for s in gt_segs:
                try:
                    noisy.append(
                        Segment(
                            quantize(
                                s.a.x + rng.uniform(-0.5, 0.5),
                                s.a.y + rng.uniform(-0.5, 0.5),
                            ),
                            quantize(
                                s.b.x + rng.uniform(-0.5, 0.5),
                                s.b.y + rng.uniform(-0.5, 0.5),
                            ),
                        )
                    )
                except Exception:
                    pass
            corpus.append((Figure(tuple(noisy)), Figure(tuple(gt_segs))))
        report = score(corpus)
        assert report.scores[0.9]["all"].tp <= report.scores[0.75]["all"].tp
        assert report.scores[0.9]["all"].f1 <= report.scores[0.75]["all"].f1

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            score([])

    def test_id_count_mismatch_rejected(self):
        fig = self.figure(seg(0, 0, 1, 1))
        with pytest.raises(ValueError):
            score([(fig, fig)], ids=["a", "b"])

    def test_circles_excluded(self):
        from figflow import Circle

        gt = Figure((seg(0, 0, 4, 0),), (Circle(Point(0.0, 0.0), 2.0),))
        pred = Figure((seg(0, 0, 4, 0),))
        report = score([(pred, gt)])
        assert report.scores[0.75]["all"].f1 == 1.0

    def test_table_shape(self, rng, segment_factory):
        fig = self.figure(*(segment_factory(rng) for _ in range(3)))
        table = format_table(score([(fig, fig)]))
        lines = table.splitlines()
        assert "F1_s" in lines[0] and "R_l" in lines[0]
        assert len(lines) == 4  # header, rule, one row per threshold
