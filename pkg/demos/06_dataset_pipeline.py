"""
The dataset pipeline, end to end
================================

The CLI ties it together: `generate` writes images plus a JSONL of
records, `stats` plots the corpus distributions, `eval` scores a
prediction file against ground truth, and `reference` wraps a parse as a
prompt for a downstream answerer.  This demo drives the same entry points
in-process.
"""

import json
from pathlib import Path

from figflow.cli import main
from figflow.dataset import read_records

OUT = Path(__file__).parent / "output" / "pipeline"
DATA = OUT / "data"

code = main([
    "generate", "--count", "12", "--ruler", "4", "--seed", "2024",
    "--out", str(DATA), "--workers", "2",
])
assert code == 0
records = read_records(DATA / "dataset.jsonl")
print(f"\ndataset: {len(records)} records, splits:",
      sorted({r.split for r in records}))
print("first record sequence:\n" + records[0].sequence)

assert main(["stats", str(DATA / "dataset.jsonl"), "--out", str(OUT / "stats")]) == 0
stats = json.loads((OUT / "stats" / "stats.json").read_text())
print(f"median segment length: {stats['median_length']:.2f}")

# Self-evaluation is the sanity fixed point: F1 = P = R = 100 everywhere.
assert main([
    "eval", str(DATA / "dataset.jsonl"), str(DATA / "dataset.jsonl"),
    "--out", str(OUT / "report"),
]) == 0

# Compose a reference prompt from the first record's sequence.
seq_file = OUT / "first.txt"
seq_file.write_text(records[0].sequence, encoding="utf-8")
assert main(["reference", str(seq_file), "--out", str(OUT / "prompt.txt")]) == 0
print("\nreference prompt written to", OUT / "prompt.txt")
print((OUT / "prompt.txt").read_text()[:240], "...")
