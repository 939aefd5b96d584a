#!/usr/bin/env python3
"""Print a survey of the modeled dialect space.

Covers the four standing reports in one place: the 2^112 lower bound on
conforming dialects, the admissible integer width models, the probe's
per-dimension constructs, and the wrap-check verdict across every width
model (with and without the corrective cast).
"""

import argparse
import sys

from dialectoscope import (
    BaseType,
    CType,
    TypeModel,
    WrapCheckExpr,
    analyze_wrap_check,
    decimal_scientific,
    decode_value,
    dialect_count_lower_bound,
    enumerate_integer_size_models,
    explain_value,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--behaviors", type=int, default=112,
                    help="independently countable two-way behaviors")
    ap.add_argument("--value", type=int, default=443,
                    help="dialect value to break down per dimension")
    args = ap.parse_args()

    exact = dialect_count_lower_bound(args.behaviors)
    print(f"lower bound on conforming dialects: 2^{args.behaviors} = {exact}")
    print(f"  = {decimal_scientific(exact)}")
    print()

    models = [TypeModel(*t) for t in enumerate_integer_size_models()]
    print(f"{len(models)} admissible integer width models (char/short/int/long/llong):")
    for m in models:
        print("  " + "/".join(str(w) for w in m.widths()))
    print()

    print(f"dimension breakdown of value {args.value}:")
    for spec, contribution in explain_value(args.value):
        print(f"  +{contribution:<4} {spec.dimension}")
        print(f"        probe: {spec.c_construct}")
    config = decode_value(args.value)
    print(f"  total {args.value} = {config}")
    print()

    u16 = CType(BaseType.FIXED, 16, True)
    for expr in (WrapCheckExpr(u16), WrapCheckExpr(u16, cast_before_compare=u16)):
        print(f"wrap check {expr.describe()}:")
        unreliable = 0
        for m in models:
            verdict = analyze_wrap_check(expr, m)
            if not verdict.reliable:
                unreliable += 1
        reliable = len(models) - unreliable
        print(f"  RELIABLE on {reliable}/{len(models)} models,"
              f" UNRELIABLE on {unreliable}")
        for m in models:
            verdict = analyze_wrap_check(expr, m)
            if not verdict.reliable:
                widths = "/".join(str(w) for w in m.widths())
                print(f"    {widths}: {verdict.reason}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
