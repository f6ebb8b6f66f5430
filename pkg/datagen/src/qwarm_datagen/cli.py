"""Generator command line: run the default job set or a JSON manifest."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .generate import GeneratorJob, default_jobs, generate
from .scf import ScfError


def _jobs_from_manifest(path: Path) -> list[GeneratorJob]:
    doc = json.loads(path.read_text())
    return [GeneratorJob(**entry) for entry in doc["jobs"]]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qwarm-datagen", description=__doc__)
    parser.add_argument("--fixtures-dir", default="fixtures", help="output directory")
    parser.add_argument("--manifest", default=None, help="JSON job manifest (default: built-in set)")
    parser.add_argument("--only", default=None, help="comma-separated molecule names to generate")
    args = parser.parse_args(argv)

    jobs = _jobs_from_manifest(Path(args.manifest)) if args.manifest else default_jobs()
    if args.only:
        wanted = {name.strip() for name in args.only.split(",")}
        jobs = [job for job in jobs if job.name in wanted]
    if not jobs:
        print("no jobs selected", file=sys.stderr)
        return 2

    failures = 0
    for job in jobs:
        start = time.time()
        try:
            path = generate(job, args.fixtures_dir)
        except (ScfError, RuntimeError) as exc:
            failures += 1
            print(f"FAIL {job.name}/{job.geometry_label}: {exc}", file=sys.stderr)
            continue
        print(f"wrote {path} ({time.time() - start:.1f}s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
