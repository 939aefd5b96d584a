#!/usr/bin/env python3
"""Compile and run the dialect probe under a real compiler.

For every requested dialect value the probe source is compiled with the
canonical flags for that value and executed; the binary must print the
value back.  Values with 32-bit pointers need a toolchain that can link
-m32 binaries (gcc-multilib on Debian-style systems).

Typical runs:

    scripts/verify_probe.py                     # all 768 values
    scripts/verify_probe.py --values 0-63
    scripts/verify_probe.py --values 16,17,443 --jobs 4
"""

import argparse
import sys
import time

from dialectoscope import load_profile
from dialectoscope.cli import verify_with_compiler


def parse_values(spec: str) -> list[int]:
    values: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return values


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--compiler", default="gcc")
    ap.add_argument("--profile", default="gcc8-x86_64")
    ap.add_argument("--values", default="0-767", help="e.g. 0-767 or 0,1,7,42")
    ap.add_argument("--jobs", type=int, default=8)
    args = ap.parse_args()

    profile = load_profile(args.profile)
    values = parse_values(args.values)
    started = time.perf_counter()
    report = verify_with_compiler(
        compiler=args.compiler, values=values, jobs=args.jobs, profile=profile
    )
    elapsed = time.perf_counter() - started

    if report.status == "skipped":
        print(f"SKIPPED: {report.skip_reason}")
        return 0

    for r in report.failures:
        print(f"value {r.value}: {r.detail}", file=sys.stderr)
    passed = sum(1 for r in report.results if r.ok)
    print(f"{passed}/{len(report.results)} values verified in {elapsed:.1f}s "
          f"with {args.compiler}")
    if not report.failures and values == list(range(min(values), max(values) + 1)):
        print(f"tests {min(values)}..{max(values)} succeeded")
    return 1 if report.failures else 0


if __name__ == "__main__":
    sys.exit(main())
