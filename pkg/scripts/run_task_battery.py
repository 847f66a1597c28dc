#!/usr/bin/env python3
"""Generate synthetic streams for all 8 task codes, then run the full
analysis, correlation comparison, and chart rendering on them.

Usage: python3 scripts/run_task_battery.py [out_dir]
"""

import sys
from pathlib import Path

from motionspc.cli import main as cli

TASKS = ["SGI", "SGP", "SUI", "SUP", "LGI", "LGP", "LUI", "LUP"]


def run(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    stream_paths = []
    for i, task in enumerate(TASKS):
        path = out_dir / f"{task}.lmks.jsonl"
        # A mid-stream burst gives every task some out-of-control frames.
        cli([
            "synth", "-o", str(path),
            "--frames", "1100", "--task", task, "--seed", str(100 + i),
            "--jitter-std", "0.01",
            "--burst", "550:20:0.08,0.08,0.02",
        ])
        stream_paths.append(str(path))
        task_out = out_dir / task
        cli(["analyze", str(path), "--out-dir", str(task_out)])
        cli(["chart", str(path), "--out-dir", str(task_out)])
        print((task_out / "results.txt").read_text())
    cli(["correlate", *stream_paths, "--out-dir", str(out_dir)])
    print(f"battery complete; outputs in {out_dir}")


if __name__ == "__main__":
    run(Path(sys.argv[1] if len(sys.argv) > 1 else "battery_out"))
