"""Minimal line-protocol detector used to exercise the external-process backend.

Modes (combinable):
  --replay DIR       answer DETECT with the detections recorded in DIR/<stem>.txt
  --time SECONDS     reported detection time (default 0.01)
  --oom-on STEM      respond OOM for that image stem
  --err-on STEM      respond ERR for that image stem
  --garble-on STEM   emit a malformed line mid-response
  --die-on STEM      exit without answering (simulates a crash)
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--replay")
    parser.add_argument("--time", type=float, default=0.01)
    parser.add_argument("--oom-on")
    parser.add_argument("--err-on")
    parser.add_argument("--garble-on")
    parser.add_argument("--die-on")
    args = parser.parse_args()

    out = sys.stdout
    for raw in sys.stdin:
        line = raw.strip()
        if line == "QUIT":
            return 0
        if not line.startswith("DETECT "):
            out.write("ERR unknown command\nEND\n")
            out.flush()
            continue
        stem = Path(line[len("DETECT "):].strip()).stem
        if args.die_on == stem:
            return 1
        if args.oom_on == stem:
            out.write("OOM\nEND\n")
            out.flush()
            continue
        if args.err_on == stem:
            out.write(f"ERR cannot process {stem}\nEND\n")
            out.flush()
            continue
        out.write(f"TIME {args.time}\n")
        if args.garble_on == stem:
            out.write("DETX not a real line\n")
        elif args.replay:
            path = Path(args.replay) / f"{stem}.txt"
            if path.is_file():
                for det_line in path.read_text(encoding="utf-8").splitlines():
                    det_line = det_line.strip()
                    if det_line and not det_line.startswith("#"):
                        out.write(f"DET {det_line}\n")
        out.write("END\n")
        out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
