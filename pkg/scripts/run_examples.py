#!/usr/bin/env python3
"""Regenerate the example surface reports (sweeps + checks) into a directory.

Usage: python scripts/run_examples.py [outdir]

Writes, for each example surface, a CSV sweep and a JSON check report. The
outputs are deterministic: rerunning produces byte-identical files.
"""

import pathlib
import sys

from curv.cli import main as curv


def run(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("euclid-cone", []),
        ("spherical-glued", []),
        ("spherical-glued-a0.25", ["--a", "0.25"]),
    ]
    rc = 0
    for name, extra in jobs:
        stem = name.replace(".", "")
        example = name.split("-a")[0] if "-a" in name else name
        for fmt in ("csv", "json"):
            argv = [
                "example", "--name", example, *extra,
                "--format", fmt, "--out", str(outdir / f"{stem}.{fmt}"),
            ]
            rc = max(rc, curv(argv))
    return rc


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("reports")
    sys.exit(run(target))
