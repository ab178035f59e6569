"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
complete.  The random corpora are seeded, so every run checks the same
samples.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from figflow import (
    Figure,
    FlowSequence,
    GenConfig,
    PerceptualRuler,
    Point,
    Segment,
    collapse,
    encode,
    jitter_gaze,
    length,
    line_iou,
    match,
    parse,
    quantize,
    serialize,
    subdivide,
)
from figflow.cli import main
from figflow.dataset import DatasetRecord, write_records
from figflow.evaluate import score

from conftest import random_segment
from oracles import brute_force_match, line_iou_grid

ACC_SEED = 20250811
RULERS = (
    PerceptualRuler(4),
    PerceptualRuler(8),
    PerceptualRuler(12),
    PerceptualRuler.infinite(),
)


def _report(number: int, description: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {description}")
    assert ok, f"criterion {number} failed: {description}"


@pytest.fixture(scope="module")
def figures_10k():
    from figflow.engine import generate_sample

    cfg = GenConfig(seed=ACC_SEED)
    start = time.perf_counter()
    figures = [generate_sample(cfg, i)[0] for i in range(10_000)]
    elapsed = time.perf_counter() - start
    return figures, elapsed


@pytest.fixture(scope="module")
def gt_corpus_360(figures_10k, tmp_path_factory):
    figures, _ = figures_10k
    chosen = figures[:360]
    records = [
        DatasetRecord(
            id=f"{i:08d}",
            image_path=None,
            sequence=serialize(encode(fig, PerceptualRuler(4))),
            ruler=4.0,
            split="test",
        )
        for i, fig in enumerate(chosen)
    ]
    path = tmp_path_factory.mktemp("acc") / "gt.jsonl"
    write_records(records, path)
    return chosen, path


def test_criterion_1_subdivision_count_law():
    twelve = Segment(Point(-6.0, 0.0), Point(6.0, 0.0))
    ok = len(subdivide(twelve, PerceptualRuler(8)).points) - 1 == 2
    ok &= len(subdivide(twelve, PerceptualRuler(4)).points) - 1 == 3

    rnd = random.Random(ACC_SEED)
    segments = [random_segment(rnd) for _ in range(10_000)]
    rulers = [PerceptualRuler(d) for d in (2, 4, 8, 10, 12)]
    start = time.perf_counter()
    violations = 0
    for seg in segments:
        seg_len = length(seg)
        for ruler in rulers:
            n = len(subdivide(seg, ruler).points) - 1
            if n != max(1, math.ceil(seg_len / ruler.d)):
                violations += 1
    elapsed = time.perf_counter() - start
    ok = ok and violations == 0 and elapsed < 1.0
    _report(1, f"n = ceil(len/d) on 10k segments x 5 rulers in {elapsed:.2f}s", ok)


def test_criterion_2_codec_round_trip(figures_10k):
    figures, _ = figures_10k
    start = time.perf_counter()
    failures = 0
    for fig in figures:
        for ruler in RULERS:
            back = collapse(parse(serialize(encode(fig, ruler))))
            if back.segments != fig.segments or back.circles != fig.circles:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30.0
    _report(2, f"exact round-trip on 10k figures x 4 rulers in {elapsed:.1f}s", ok)


def test_criterion_3_monotone_cost(figures_10k):
    figures, _ = figures_10k
    violations = 0
    for fig in figures[:1000]:
        counts = [encode(fig, ruler).point_count() for ruler in RULERS]
        if counts != sorted(counts, reverse=True):
            violations += 1
            continue
        longest = max((length(s) for s in fig.segments), default=0.0)
        baseline = counts[-1]
        for ruler, count in zip(RULERS[:3], counts[:3]):
            if longest > ruler.d and not count > baseline:
                violations += 1
    _report(3, "serialized point count monotone in ruler on 1k figures", violations == 0)


def test_criterion_4_metric_fixed_point(gt_corpus_360, tmp_path, capsys):
    _, gt_path = gt_corpus_360
    out_dir = tmp_path / "report"
    code = main(["eval", str(gt_path), str(gt_path), "--out", str(out_dir)])
    capsys.readouterr()
    report = json.loads((out_dir / "report.json").read_text())
    ok = code == 0 and report["corpus_size"] == 360
    for thr in ("0.75", "0.9"):
        for bucket in ("all", "short", "long"):
            cell = report["thresholds"][thr][bucket]
            ok &= cell["tp"] + cell["fn"] > 0
            ok &= (cell["precision"], cell["recall"], cell["f1"]) == (1.0, 1.0, 1.0)
    _report(4, "self-eval on 360 figures scores exactly 100.0 everywhere", ok)


def test_criterion_5_iou_oracle():
    rnd = random.Random(ACC_SEED + 5)
    worst = 0.0
    for _ in range(10_000):
        p = random_segment(rnd, min_extent=0.5)
        t = random_segment(rnd, min_extent=0.5)
        worst = max(worst, abs(line_iou(p, t) - line_iou_grid(p, t)))
    degenerate_ok = (
        line_iou(Segment(Point(0.0, 0.0), Point(0.0, 5.0)),
                 Segment(Point(0.0, 1.0), Point(0.0, 5.0))) == pytest.approx(0.9)
        and line_iou(Segment(Point(0.0, 0.0), Point(0.0, 5.0)),
                     Segment(Point(1.0, 0.0), Point(1.0, 5.0))) == 0.5
        and line_iou(Segment(Point(2.0, 0.0), Point(2.0, 5.0)),
                     Segment(Point(2.0, 0.0), Point(2.0, 5.0))) == 1.0
        and line_iou(Segment(Point(0.0, 3.0), Point(5.0, 3.0)),
                     Segment(Point(0.0, 4.0), Point(5.0, 4.0))) == 0.5
    )
    ok = worst <= 1e-3 and degenerate_ok
    _report(5, f"line IoU vs grid oracle on 10k pairs, max err {worst:.2e}", ok)


def test_criterion_6_matching_oracle():
    rnd = random.Random(ACC_SEED + 6)
    failures = 0
    for _ in range(1000):
        n = rnd.randint(0, 6)
        m = rnd.randint(0, 6)
        preds = [random_segment(rnd) for _ in range(n)]
        gts = [random_segment(rnd) for _ in range(m)]
        for j in range(m):
            if preds and rnd.random() < 0.6:
                preds[rnd.randrange(n)] = gts[j]
        threshold = rnd.choice([0.5, 0.75, 0.9])
        result = match(preds, gts, threshold)
        ious = [[line_iou(p, t) for t in gts] for p in preds]
        card, total = brute_force_match(ious, threshold)
        got_total = sum(iou for _, _, iou in result.pairs)
        if len(result.pairs) != card or abs(got_total - total) > 1e-9:
            failures += 1
    _report(6, "match equals brute-force enumeration on 1k instances", failures == 0)


def test_criterion_7_jitter_machinery(figures_10k):
    figures, _ = figures_10k
    rng = np.random.default_rng(ACC_SEED + 7)
    ruler = PerceptualRuler(2)
    draws = 0
    bound_violations = 0
    collapse_violations = 0
    for fig in figures:
        for seg in fig.segments:
            chain = subdivide(seg, ruler)
            if not chain.gaze_points:
                continue
            jittered = jitter_gaze(chain, rng, 0.1)
            bound = 0.1 * length(seg)
            for before, after in zip(chain.gaze_points, jittered.gaze_points):
                draws += 1
                if math.hypot(after.x - before.x, after.y - before.y) > bound:
                    bound_violations += 1
            if collapse(FlowSequence((jittered,))) != collapse(FlowSequence((chain,))):
                collapse_violations += 1
        if draws >= 10_000:
            break
    ok = draws >= 10_000 and bound_violations == 0 and collapse_violations == 0
    _report(7, f"jitter bounded by L/10 over {draws} draws, collapse invariant", ok)


def test_criterion_8_threshold_monotonicity(gt_corpus_360):
    figures, _ = gt_corpus_360
    rnd = random.Random(ACC_SEED + 8)

    def perturbed(fig: Figure, magnitude: float) -> Figure:
        segs = []
        for seg in fig.segments:
            try:
                segs.append(
                    Segment(
                        quantize(
                            seg.a.x + rnd.uniform(-magnitude, magnitude),
                            seg.a.y + rnd.uniform(-magnitude, magnitude),
                        ),
                        quantize(
                            seg.b.x + rnd.uniform(-magnitude, magnitude),
                            seg.b.y + rnd.uniform(-magnitude, magnitude),
                        ),
                    )
                )
            except Exception:
                continue
        return Figure(tuple(segs))

    noisy = [(perturbed(fig, 0.5), fig) for fig in figures]
    report = score(noisy)
    f1_075 = report.scores[0.75]["all"].f1
    f1_090 = report.scores[0.9]["all"].f1
    ok = f1_090 <= f1_075 < 1.0

    clean = [(perturbed(fig, 0.0), fig) for fig in figures]
    clean_report = score(clean)
    for thr in (0.75, 0.9):
        cell = clean_report.scores[thr]["all"]
        ok &= (cell.precision, cell.recall, cell.f1) == (1.0, 1.0, 1.0)
    _report(
        8,
        f"F1@0.9 ({f1_090:.3f}) <= F1@0.75 ({f1_075:.3f}); zero noise recovers 100.0",
        ok,
    )


def test_criterion_9_length_distribution(figures_10k):
    figures, gen_seconds = figures_10k
    start = time.perf_counter()
    lengths = sorted(length(s) for fig in figures for s in fig.segments)
    mid = len(lengths) // 2
    median = lengths[mid] if len(lengths) % 2 else 0.5 * (
        lengths[mid - 1] + lengths[mid]
    )
    in_band = sum(1 for v in lengths if 2.0 <= v <= 10.0) / len(lengths)
    elapsed = gen_seconds + time.perf_counter() - start
    ok = 2.0 <= median <= 10.0 and in_band >= 0.70 and elapsed < 120.0
    _report(
        9,
        f"10k samples in {elapsed:.0f}s: median {median:.2f}, {in_band:.0%} in [2,10]",
        ok,
    )


def test_criterion_10_generation_determinism(tmp_path, capsys):
    args = ["generate", "--count", "16", "--ruler", "4", "--seed", "1234"]
    dirs = [tmp_path / name for name in ("run_a", "run_b", "workers_8")]
    ok = main(args + ["--out", str(dirs[0])]) == 0
    ok &= main(args + ["--out", str(dirs[1])]) == 0
    ok &= main(args + ["--out", str(dirs[2]), "--workers", "8"]) == 0
    capsys.readouterr()

    ref = (dirs[0] / "dataset.jsonl").read_bytes()
    for other in dirs[1:]:
        ok &= (other / "dataset.jsonl").read_bytes() == ref
    for image in sorted((dirs[0] / "images").glob("*")):
        blob = image.read_bytes()
        for other in dirs[1:]:
            ok &= (other / "images" / image.name).read_bytes() == blob
    _report(10, "byte-identical output across runs and 1-vs-8 workers", ok)
