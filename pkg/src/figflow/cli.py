"""Command-line surface for the pipeline.

Subcommands: generate, eval, stats, encode, decode, render, reference.
Exit codes: 0 success, 1 usage, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import codec, dataset, engine, evaluate, render
from .codec import FlowSequence, ParseError, PerceptualRuler
from .dataset import DatasetError, DatasetRecord
from .geometry import GeometryError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

REFERENCE_CAVEAT = (
    "Note: the sketch above was parsed automatically from the figure. It only "
    "approximately represents the positions of the points and lines and how "
    "they relate, and it is provided for reference only. The final answer "
    "must be based on the original image, not on this sketch."
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this CLI reserves 2 for
    # data errors, so usage problems are rerouted.
    def error(self, message):
        raise _UsageError(message)


def _parse_ruler(text: str) -> PerceptualRuler:
    if text.strip().lower() in ("inf", "infinite", "+inf"):
        return PerceptualRuler.infinite()
    try:
        return PerceptualRuler(float(text))
    except ValueError as exc:
        raise _UsageError(f"bad --ruler value {text!r}: {exc}") from exc


def _parse_iou_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise _UsageError(f"bad --iou list {text!r}") from exc
    if not values or not all(0.0 < v <= 1.0 for v in values):
        raise _UsageError(f"--iou values must be in (0, 1]: {text!r}")
    return values


def _load_gen_config(path: str | None, seed: int | None) -> engine.GenConfig:
    kwargs = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {
            "quad_types",
            "delete_prob",
            "add_count_range",
            "special_weight",
            "point_weights",
            "circle_prob",
            "label_prob",
            "label_alphabet",
            "seed",
        }
        unknown = set(raw) - known
        if unknown:
            raise DatasetError(f"unknown config keys: {sorted(unknown)}")
        kwargs.update(raw)
        if "quad_types" in kwargs:
            kwargs["quad_types"] = tuple(kwargs["quad_types"])
        if "add_count_range" in kwargs:
            kwargs["add_count_range"] = tuple(kwargs["add_count_range"])
        if "point_weights" in kwargs:
            kwargs["point_weights"] = engine.PointWeights(**kwargs["point_weights"])
    if seed is not None:
        kwargs["seed"] = seed
    try:
        return engine.GenConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise DatasetError(f"bad generation config: {exc}") from exc


# ---------------------------------------------------------------------------
# generate


def _build_sample(args: tuple) -> tuple[str, bytes, str, str]:
    cfg, index, d, jitter_frac = args
    fig, rc = engine.generate_sample(cfg, index)
    ruler = PerceptualRuler(d) if math.isfinite(d) else PerceptualRuler.infinite()
    seq = codec.encode(fig, ruler)
    if jitter_frac > 0.0:
        rng = engine._rng_for(cfg, index, 1)
        seq = FlowSequence(
            tuple(codec.jitter_gaze(c, rng, jitter_frac) for c in seq.chains),
            seq.circles,
            dict(seq.labels),
            ruler,
        )
    sample_id = f"{index:08d}"
    record = DatasetRecord(
        id=sample_id,
        image_path=f"images/{sample_id}.png",
        sequence=codec.serialize(seq),
        ruler=ruler.d,
        split=dataset.assign_split(cfg.seed, sample_id),
    )
    png = render.png_bytes(render.render_raster(fig, rc))
    svg = render.render_vector(fig, rc)
    return record.to_json(), png, svg, sample_id


def cmd_generate(args) -> int:
    cfg = _load_gen_config(args.config, args.seed)
    ruler = _parse_ruler(args.ruler)
    out_dir = Path(args.out)
    image_dir = out_dir / "images"
    image_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, index, ruler.d, args.jitter) for index in range(args.count)]

    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_build_sample, tasks, chunksize=8))
    else:
        results = [_build_sample(task) for task in tasks]

    with open(out_dir / "dataset.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for record_json, png, svg, sample_id in results:
            fh.write(record_json)
            fh.write("\n")
            (image_dir / f"{sample_id}.png").write_bytes(png)
            (image_dir / f"{sample_id}.svg").write_text(svg, encoding="utf-8")
    print(f"wrote {len(results)} samples to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _figures_from_records(
    records: list[DatasetRecord], strict: bool, diagnostics: list[str]
):
    figures = {}
    for record in records:
        if record.id in figures:
            raise DatasetError(f"duplicate sample id {record.id}")
        if strict:
            seq = codec.parse(record.sequence)
        else:
            seq, issues = codec.parse_lenient(record.sequence)
            diagnostics.extend(
                f"{record.id}: statement {i.statement} (line {i.line}): {i.reason}"
                for i in issues
            )
        sink: list[str] = []
        figures[record.id] = codec.collapse(seq, sink)
        diagnostics.extend(f"{record.id}: {msg}" for msg in sink)
    return figures


def cmd_eval(args) -> int:
    thresholds = _parse_iou_list(args.iou)
    gt_records = dataset.read_records(args.gt)
    pred_records = dataset.read_records(args.pred)
    diagnostics: list[str] = []
    try:
        gt_figures = _figures_from_records(gt_records, strict=True, diagnostics=diagnostics)
    except ParseError as exc:
        raise DatasetError(f"ground truth must parse strictly: {exc}") from exc
    pred_figures = _figures_from_records(
        pred_records, strict=args.strict, diagnostics=diagnostics
    )

    missing_pred = sorted(set(gt_figures) - set(pred_figures))
    missing_gt = sorted(set(pred_figures) - set(gt_figures))
    if missing_pred or missing_gt:
        parts = []
        if missing_pred:
            parts.append(f"ids missing from predictions: {', '.join(missing_pred)}")
        if missing_gt:
            parts.append(f"ids missing from ground truth: {', '.join(missing_gt)}")
        raise DatasetError("; ".join(parts))

    ids = sorted(gt_figures)
    corpus = [(pred_figures[i], gt_figures[i]) for i in ids]
    report = evaluate.score(corpus, thresholds, pad=args.iou_pad, ids=ids)
    report.diagnostics = diagnostics

    table = evaluate.format_table(report)
    print(table)
    if diagnostics:
        print(f"({len(diagnostics)} ingestion diagnostics)")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "report.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        (out_dir / "report.txt").write_text(table + "\n", encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    records = dataset.read_records(args.data)
    if not records:
        raise DatasetError(f"empty dataset: {args.data}")
    figures = []
    for record in records:
        try:
            figures.append(dataset.record_figure(record))
        except ParseError as exc:
            raise DatasetError(f"record {record.id}: {exc}") from exc
    stats = dataset.corpus_stats(figures)
    print(f"segments: {stats.segment_count}")
    print(f"median length: {stats.median_length:.2f}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "stats.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(stats.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        (out_dir / "lengths.svg").write_text(
            dataset.histogram_svg(
                stats.length_bins, dataset.LENGTH_BIN_WIDTH,
                "Segment length distribution", "length (normalized units)",
            ),
            encoding="utf-8",
        )
        (out_dir / "angles.svg").write_text(
            dataset.histogram_svg(
                stats.angle_bins, dataset.ANGLE_BIN_WIDTH,
                "Segment angle distribution", "angle (degrees)",
            ),
            encoding="utf-8",
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# encode / decode / render / reference


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_encode(args) -> int:
    fig = dataset.load_figure(args.figure)
    seq = codec.encode(fig, _parse_ruler(args.ruler))
    if args.jitter > 0.0:
        rng = np.random.default_rng(args.seed if args.seed is not None else 0)
        seq = FlowSequence(
            tuple(codec.jitter_gaze(c, rng, args.jitter) for c in seq.chains),
            seq.circles,
            dict(seq.labels),
            seq.ruler,
        )
    _write_or_print(codec.serialize(seq), args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    text = Path(args.sequence).read_text(encoding="utf-8")
    diagnostics: list[str] = []
    if args.strict:
        seq = codec.parse(text)
    else:
        seq, issues = codec.parse_lenient(text)
        diagnostics.extend(
            f"statement {i.statement} (line {i.line}): {i.reason}" for i in issues
        )
    fig = codec.collapse(seq, diagnostics)
    payload = dataset.figure_to_json(fig)
    if diagnostics:
        payload["diagnostics"] = diagnostics
        print(f"({len(diagnostics)} diagnostics)", file=sys.stderr)
    _write_or_print(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _load_input_figure(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return dataset.figure_from_json(json.loads(text))
    return codec.collapse(codec.parse(text))


def cmd_render(args) -> int:
    fig = _load_input_figure(args.input)
    rc = render.RenderConfig.from_dpi(args.dpi, args.line_width, args.line_style)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    (out_dir / f"{stem}.svg").write_text(render.render_vector(fig, rc), encoding="utf-8")
    render.save_png(render.render_raster(fig, rc), out_dir / f"{stem}.png")
    print(f"rendered {stem}.svg and {stem}.png to {out_dir}")
    return EXIT_OK


def compose_reference(seq: FlowSequence) -> str:
    """Wrap a parsed figure as a reference prompt with the fixed caveat."""
    return (
        "Here is a reference sketch parsed from the figure:\n"
        "\n"
        + codec.serialize(seq)
        + "\n"
        + REFERENCE_CAVEAT
        + "\n"
    )


def cmd_reference(args) -> int:
    text = Path(args.sequence).read_text(encoding="utf-8")
    seq = codec.parse(text)
    _write_or_print(compose_reference(seq), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="figflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("config", nargs="?", help="generation config JSON")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--ruler", default="inf", help="perceptual ruler d, or 'inf'")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jitter", type=float, default=0.0, help="gaze jitter fraction")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("pred")
    p.add_argument("gt")
    p.add_argument("--iou", default="0.75,0.9")
    p.add_argument("--iou-pad", type=float, default=0.0)
    p.add_argument("--out", default=None)
    strictness = p.add_mutually_exclusive_group()
    strictness.add_argument("--strict", action="store_true")
    strictness.add_argument(
        "--lenient", dest="strict", action="store_false"
    )
    p.set_defaults(func=cmd_eval, strict=False)

    p = sub.add_parser("stats", help="corpus length/angle histograms")
    p.add_argument("data")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("encode", help="figure JSON -> sequence text")
    p.add_argument("figure")
    p.add_argument("--ruler", default="inf")
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="sequence text -> figure JSON")
    p.add_argument("sequence")
    p.add_argument("--out", default=None)
    strictness = p.add_mutually_exclusive_group()
    strictness.add_argument("--strict", action="store_true")
    strictness.add_argument("--lenient", dest="strict", action="store_false")
    p.set_defaults(func=cmd_decode, strict=True)

    p = sub.add_parser("render", help="figure JSON or sequence -> SVG and PNG")
    p.add_argument("input")
    p.add_argument("--dpi", type=int, default=96)
    p.add_argument("--line-width", type=float, default=1.5)
    p.add_argument("--line-style", choices=(render.SOLID, render.DASHED), default=render.SOLID)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("reference", help="compose a reference prompt from a parse")
    p.add_argument("sequence")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reference)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DatasetError, GeometryError, engine.GenerationError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())
