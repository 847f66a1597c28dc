"""pose-extract command line: video in, landmark stream out."""

from __future__ import annotations

import argparse
import sys

from .extract import BACKENDS, ExtractionError, ExtractionJob, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pose-extract",
        description="Convert a video into a .lmks.jsonl landmark stream",
    )
    parser.add_argument("video")
    parser.add_argument("-o", "--output", required=True,
                        help="output stream path, or - for stdout")
    parser.add_argument("--fps", type=float, help="override the container frame rate")
    parser.add_argument("--visibility-floor", type=float, dest="visibility_floor",
                        help="drop landmarks below this visibility")
    parser.add_argument("--anonymize", action="store_true", default=True)
    parser.add_argument("--backend", choices=sorted(BACKENDS), default="mediapipe")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = ExtractionJob(
        video_path=args.video,
        output_path=args.output,
        fps_override=args.fps,
        visibility_floor=args.visibility_floor,
        anonymize=args.anonymize,
    )
    try:
        backend = BACKENDS[args.backend]()
        if args.output == "-":
            count = extract(job, backend, out=sys.stdout)
        else:
            count = extract(job, backend)
            print(f"wrote {count} frame records to {args.output}", file=sys.stderr)
    except ExtractionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
