"""Command-line interface.

One executable, one subcommand per library operation.  Every
subcommand honors ``--format human|json``.  Exit status: 0 success,
1 findings (audit findings, unreliable verdicts, failed or unresolved
probes), 2 usage or input errors.

All subcommands except ``probe verify`` are hermetic: no subprocesses
and no filesystem access beyond files named on the command line.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .build_audit import (
    BuildLoadError,
    Severity,
    audit,
    check_against,
    load_build,
)
from .dialect_model import (
    DIMENSIONS,
    AnsiMode,
    DialectValueError,
    decimal_scientific,
    decode_value,
    dialect_count_lower_bound,
    e_notation,
    encode_config,
    enumerate_integer_size_models,
    TypeModel,
)
from .include_resolver import (
    FileSystemModel,
    IncludeDirective,
    IncludeForm,
    resolve_include,
    search_paths,
)
from .invocation import InvocationError, parse_invocation
from .macro_env import (
    MacroEnv,
    PreprocessorError,
    active_branches,
    apply_directives,
    eval_condition,
    invocation_macro_env,
    predefined_macros,
)
from .invocation import MacroDirective
from .probe import PROBE_SHA256, emit_probe_source, explain_value, flags_for_value
from .profiles import DEFAULT_PROFILE, ProfileError, available_profiles, load_profile
from .promotion import (
    WrapCheckExpr,
    analyze_wrap_check,
    boundary_pairs,
    parse_ctype,
    simulate_wrap_check,
    true_wraparound,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2

_INPUT_ERRORS = (
    DialectValueError,
    ProfileError,
    InvocationError,
    BuildLoadError,
    PreprocessorError,
)


@dataclass(frozen=True)
class CliConfig:
    profile_name: str
    profile_dirs: tuple[str, ...]
    fmt: str  # "human" | "json"

    def profile(self):
        return load_profile(self.profile_name, list(self.profile_dirs) or None)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _fmt_value(value) -> str:
    if isinstance(value, AnsiMode):
        return value.name
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _config_dict(config) -> dict:
    return {d: _fmt_value(config.value_of(d)) for d in DIMENSIONS}


def _env_map(pairs: list[str] | None) -> dict[str, str]:
    env = {}
    for item in pairs or []:
        name, eq, value = item.partition("=")
        if not name or not eq:
            raise InvocationError(f"--env expects NAME=VALUE, got {item!r}")
        env[name] = value
    return env


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# --- probe subcommands -----------------------------------------------------


def cmd_probe_emit(args, cfg: CliConfig) -> int:
    source = emit_probe_source()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(source)
        if cfg.fmt == "json":
            _print_json({"written": args.output, "length": len(source), "sha256": PROBE_SHA256})
        else:
            print(f"wrote {len(source)} bytes to {args.output}")
        return EXIT_OK
    if cfg.fmt == "json":
        _print_json({"length": len(source), "sha256": PROBE_SHA256, "source": source})
    else:
        sys.stdout.write(source)
    return EXIT_OK


def cmd_probe_flags(args, cfg: CliConfig) -> int:
    flags = flags_for_value(args.value, cfg.profile())
    if cfg.fmt == "json":
        _print_json({"value": args.value, "flags": flags})
    else:
        print(" ".join(flags))
    return EXIT_OK


def cmd_probe_explain(args, cfg: CliConfig) -> int:
    rows = explain_value(args.value)
    config = decode_value(args.value)
    if cfg.fmt == "json":
        _print_json(
            {
                "value": args.value,
                "config": _config_dict(config),
                "terms": [
                    {
                        "dimension": spec.dimension,
                        "weight": spec.weight,
                        "contribution": contribution,
                        "construct": spec.c_construct,
                        "behavior": spec.standard_clause,
                    }
                    for spec, contribution in rows
                ],
            }
        )
        return EXIT_OK
    print(f"value {args.value}")
    for spec, contribution in rows:
        setting = _fmt_value(config.value_of(spec.dimension))
        print(f"  +{contribution:<4} {spec.dimension} = {setting}")
        print(f"        probe: {spec.c_construct}")
        print(f"        behavior: {spec.standard_clause}")
    return EXIT_OK


def cmd_probe_value(args, cfg: CliConfig) -> int:
    profile = cfg.profile()
    argv = shlex.split(args.flags)
    inv = parse_invocation(argv, env=_env_map(args.env), profile=profile)
    value = encode_config(inv.dialect)
    if cfg.fmt == "json":
        _print_json(
            {"flags": argv, "value": value, "config": _config_dict(inv.dialect)}
        )
    else:
        print(value)
    return EXIT_OK


def _parse_values_spec(spec: str) -> list[int]:
    values: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        a, dash, b = part.partition("-")
        try:
            if dash:
                values.extend(range(int(a), int(b) + 1))
            else:
                values.append(int(a))
        except ValueError:
            raise DialectValueError(f"bad value range {part!r}") from None
    if not values:
        raise DialectValueError(f"empty value specification {spec!r}")
    return sorted(set(values))


@dataclass(frozen=True)
class VerifyResult:
    value: int
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    status: str  # "ran" | "skipped"
    compiler: str
    results: tuple[VerifyResult, ...] = ()
    skip_reason: str = ""

    @property
    def failures(self) -> list[VerifyResult]:
        return [r for r in self.results if not r.ok]


_DRIVER_MAIN = """\
#include <stdio.h>
unsigned return_value(void);
int main(void) {
   printf("%u\\n", return_value());
   return 0;
}
"""


def verify_with_compiler(
    compiler: str = "gcc",
    values=None,
    jobs: int = 8,
    profile=None,
) -> VerificationReport:
    """Compile and run the probe for each value with its own flags and
    compare the printed result.  A missing compiler yields a skipped
    report, not a failure; -w suppresses trigraph warnings."""
    if profile is None:
        profile = load_profile()
    if values is None:
        values = range(768)
    values = sorted(set(values))
    for v in values:
        if not 0 <= v <= 767:
            raise DialectValueError(f"dialect value must be in 0..767, got {v}")
    path = shutil.which(compiler)
    if path is None:
        return VerificationReport(
            "skipped", compiler, skip_reason=f"compiler {compiler!r} not found"
        )

    with tempfile.TemporaryDirectory(prefix="dialect-verify-") as tmp:
        probe_c = os.path.join(tmp, "probe.c")
        main_c = os.path.join(tmp, "main.c")
        with open(probe_c, "w", encoding="utf-8", newline="") as fh:
            fh.write(emit_probe_source())
        with open(main_c, "w", encoding="utf-8", newline="") as fh:
            fh.write(_DRIVER_MAIN)

        def run_one(v: int) -> VerifyResult:
            flags = flags_for_value(v, profile)
            exe = os.path.join(tmp, f"probe{v}")
            cmd = [path, "-w", *flags, probe_c, main_c, "-o", exe]
            built = subprocess.run(cmd, capture_output=True, text=True)
            if built.returncode != 0:
                detail = built.stderr.strip().splitlines()
                return VerifyResult(
                    v, False, f"compile failed ({' '.join(flags)}): {detail[-1] if detail else ''}"
                )
            ran = subprocess.run([exe], capture_output=True, text=True)
            if ran.returncode != 0:
                return VerifyResult(v, False, f"run exited with status {ran.returncode}")
            out = ran.stdout.strip()
            if out == str(v):
                return VerifyResult(v, True)
            return VerifyResult(v, False, f"printed {out!r}, expected {v}")

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            results = tuple(pool.map(run_one, values))
    return VerificationReport("ran", path, results)


def cmd_probe_verify(args, cfg: CliConfig) -> int:
    values = _parse_values_spec(args.values)
    report = verify_with_compiler(
        compiler=args.compiler, values=values, jobs=args.jobs, profile=cfg.profile()
    )
    if cfg.fmt == "json":
        _print_json(
            {
                "status": report.status,
                "compiler": report.compiler,
                "skip_reason": report.skip_reason,
                "passed": sum(1 for r in report.results if r.ok),
                "failed": len(report.failures),
                "failures": [
                    {"value": r.value, "detail": r.detail} for r in report.failures
                ],
            }
        )
    elif report.status == "skipped":
        print(f"SKIPPED: {report.skip_reason}")
    elif not report.failures:
        lo, hi = values[0], values[-1]
        if values == list(range(lo, hi + 1)):
            print(f"tests {lo}..{hi} succeeded")
        else:
            print(f"all {len(values)} selected values succeeded")
    else:
        for r in report.failures:
            print(f"value {r.value}: FAILED: {r.detail}")
        print(f"{len(report.failures)} of {len(values)} values failed")
    if report.status == "skipped":
        return EXIT_OK
    return EXIT_OK if not report.failures else EXIT_FINDINGS


# --- invocation subcommand ---------------------------------------------------


def _strip_separator(argv: list[str]) -> list[str]:
    return argv[1:] if argv and argv[0] == "--" else argv


def cmd_invocation_parse(args, cfg: CliConfig) -> int:
    profile = cfg.profile()
    argv = _strip_separator(list(args.argv))
    if args.flags:
        argv = shlex.split(args.flags) + argv
    inv = parse_invocation(argv, env=_env_map(args.env), profile=profile)
    value = encode_config(inv.dialect)
    if cfg.fmt == "json":
        _print_json(
            {
                "profile": profile.name,
                "value": value,
                "config": _config_dict(inv.dialect),
                "canonical_flags": flags_for_value(value, profile),
                "macro_directives": [
                    {"action": d.action, "name": d.name, "value": d.value}
                    for d in inv.macro_directives
                ],
                "include_dirs": {
                    "quote": list(inv.include_dirs.quote),
                    "normal": list(inv.include_dirs.normal),
                    "system": list(inv.include_dirs.system),
                },
                "nostdinc": inv.nostdinc,
                "sources": list(inv.source_files),
                "unrecognized": list(inv.unrecognized),
                "opt_level": inv.opt_level,
            }
        )
        return EXIT_OK
    print(f"profile: {profile.name}")
    print(f"dialect value: {value}")
    for d in DIMENSIONS:
        print(f"  {d} = {_fmt_value(inv.dialect.value_of(d))}")
    print(f"canonical flags: {' '.join(flags_for_value(value, profile))}")
    if inv.macro_directives:
        rendered = [
            f"-D{d.name}={d.value}" if d.action == "define" else f"-U{d.name}"
            for d in inv.macro_directives
        ]
        print(f"macro directives: {' '.join(rendered)}")
    for kind in ("quote", "normal", "system"):
        dirs = getattr(inv.include_dirs, kind)
        if dirs:
            print(f"include dirs ({kind}): {' '.join(dirs)}")
    if inv.nostdinc:
        print("system include dirs suppressed (-nostdinc)")
    if inv.source_files:
        print(f"sources: {' '.join(inv.source_files)}")
    if inv.unrecognized:
        print(f"unrecognized (passed through): {' '.join(inv.unrecognized)}")
    return EXIT_OK


# --- macros subcommands -------------------------------------------------------


def _macro_env_from_args(args, profile) -> MacroEnv:
    if getattr(args, "value", None) is not None:
        env = predefined_macros(decode_value(args.value), profile)
    else:
        argv = shlex.split(args.flags or "")
        inv = parse_invocation(argv, env=_env_map(args.env), profile=profile)
        env = invocation_macro_env(inv)
    extra = [MacroDirective("define", *_split_define(d)) for d in args.define or []]
    extra += [MacroDirective("undefine", u) for u in args.undef or []]
    return apply_directives(env, extra)


def _split_define(text: str) -> tuple[str, str]:
    name, eq, value = text.partition("=")
    return name, value if eq else "1"


def cmd_macros_show(args, cfg: CliConfig) -> int:
    env = _macro_env_from_args(args, cfg.profile())
    defs = env.definitions()
    if cfg.fmt == "json":
        _print_json(
            {
                "macros": [
                    {
                        "name": d.name,
                        "body": d.body,
                        "provenance": d.provenance,
                        "function_like": d.function_like,
                    }
                    for d in defs
                ]
            }
        )
        return EXIT_OK
    width = max((len(d.name) for d in defs), default=0)
    for d in defs:
        print(f"{d.name:<{width}}  {d.body:<12}  [{d.provenance}]")
    return EXIT_OK


def cmd_macros_eval(args, cfg: CliConfig) -> int:
    env = _macro_env_from_args(args, cfg.profile())
    value = eval_condition(env, args.expression)
    if cfg.fmt == "json":
        _print_json(
            {"expression": args.expression, "value": value, "taken": value != 0}
        )
    else:
        print(value)
    return EXIT_OK


def cmd_macros_branches(args, cfg: CliConfig) -> int:
    env = _macro_env_from_args(args, cfg.profile())
    source = _read_text(args.source)
    report = active_branches(env, source)
    if cfg.fmt == "json":
        _print_json(
            {
                "groups": [
                    {
                        "start_line": g.start_line,
                        "end_line": g.end_line,
                        "evaluated": g.evaluated,
                        "arms": [
                            {
                                "kind": a.kind,
                                "condition": a.condition,
                                "line": a.line,
                                "taken": a.taken,
                            }
                            for a in g.arms
                        ],
                    }
                    for g in report.groups
                ],
                "retained_ranges": [list(r) for r in report.retained_ranges],
                "retained_text": report.retained_text if args.show_retained else None,
            }
        )
        return EXIT_OK
    for g in report.groups:
        state = "evaluated" if g.evaluated else "inactive region"
        print(f"conditional group, lines {g.start_line}..{g.end_line} ({state})")
        for a in g.arms:
            cond = f" {a.condition}" if a.condition else ""
            mark = {True: "TAKEN", False: "not taken", None: "skipped"}[a.taken]
            print(f"  line {a.line}: #{a.kind}{cond}  ->  {mark}")
    ranges = ", ".join(
        f"{a}" if a == b else f"{a}-{b}" for a, b in report.retained_ranges
    )
    print(f"retained lines: {ranges if ranges else '(none)'}")
    if args.show_retained:
        sys.stdout.write(report.retained_text)
    return EXIT_OK


# --- include subcommand --------------------------------------------------------


def cmd_include_resolve(args, cfg: CliConfig) -> int:
    profile = cfg.profile()
    if args.manifest:
        fs = FileSystemModel.from_manifest(_read_text(args.manifest), cwd=args.cwd)
    elif args.root:
        fs = FileSystemModel.from_directory(args.root)
    else:
        raise InvocationError("include resolve needs --manifest or --root")
    inv = parse_invocation(
        shlex.split(args.flags or ""), env=_env_map(args.env), profile=profile
    )
    form = IncludeForm(args.form)
    directive = IncludeDirective(args.header, form, args.includer)
    resolution = resolve_include(directive, inv, fs)
    if cfg.fmt == "json":
        _print_json(
            {
                "header": args.header,
                "form": form.value,
                "including_file": args.includer,
                "search_order": search_paths(inv, form, args.includer),
                "found": resolution.found,
                "trace": [
                    {"candidate": p.candidate, "hit": p.hit} for p in resolution.trace
                ],
            }
        )
    else:
        for p in resolution.trace:
            print(f"{'hit ' if p.hit else 'miss'}  {p.candidate}")
        if resolution.found:
            print(f"resolved: {resolution.found}")
        else:
            print("not found")
    return EXIT_OK if resolution.found else EXIT_FINDINGS


# --- promote subcommand ----------------------------------------------------------


def _models_from_args(args) -> list[TypeModel]:
    if args.all_models:
        return [
            TypeModel.from_widths(widths) for widths in enumerate_integer_size_models()
        ]
    if args.model:
        parts = [p.strip() for p in args.model.split(",")]
        if len(parts) != 5:
            raise DialectValueError(
                "--model expects five comma-separated widths: char,short,int,long,llong"
            )
        try:
            widths = tuple(int(p) for p in parts)
        except ValueError:
            raise DialectValueError(f"bad --model widths {args.model!r}") from None
        return [TypeModel.from_widths(widths, char_is_signed=not args.unsigned_char)]
    return [
        TypeModel.from_widths(widths) for widths in enumerate_integer_size_models()
    ]


def cmd_promote_check(args, cfg: CliConfig) -> int:
    operand = parse_ctype(args.operand)
    cast = parse_ctype(args.cast) if args.cast else None
    expr = WrapCheckExpr(operand, cast)
    models = _models_from_args(args)
    rows = []
    any_unreliable = False
    for m in models:
        verdict = analyze_wrap_check(expr, m)
        simulated_ok = None
        if args.simulate:
            w = operand.width(m)
            simulated_ok = all(
                simulate_wrap_check(expr, m, x, y) == true_wraparound(w, x, y)
                for x, y in boundary_pairs(w)
            )
        rows.append((m, verdict, simulated_ok))
        if not verdict.reliable:
            any_unreliable = True
    if cfg.fmt == "json":
        _print_json(
            {
                "expression": expr.describe(),
                "verdicts": [
                    {
                        "widths": list(m.widths()),
                        "verdict": v.label,
                        "reason": v.reason,
                        "sum_width": v.sum_width,
                        "simulation_agrees": simulated,
                    }
                    for m, v, simulated in rows
                ],
            }
        )
    else:
        print(f"expression: {expr.describe()}")
        for m, v, simulated in rows:
            widths = "/".join(str(w) for w in m.widths())
            suffix = ""
            if simulated is not None:
                suffix = "  [simulation agrees]" if simulated else "  [SIMULATION DISAGREES]"
            print(f"  widths {widths:<14} {v.label}: {v.reason}{suffix}")
    return EXIT_FINDINGS if any_unreliable else EXIT_OK


# --- space subcommands ------------------------------------------------------------


def cmd_space_count(args, cfg: CliConfig) -> int:
    exact = dialect_count_lower_bound(args.behaviors)
    if cfg.fmt == "json":
        _print_json(
            {
                "behaviors": args.behaviors,
                "exact": str(exact),
                "scientific": decimal_scientific(exact),
                "e_notation": e_notation(exact),
            }
        )
    else:
        print(f"2^{args.behaviors} = {exact}")
        print(f"≈{decimal_scientific(exact)}")
    return EXIT_OK


def cmd_space_models(args, cfg: CliConfig) -> int:
    models = enumerate_integer_size_models()
    if cfg.fmt == "json":
        _print_json({"count": len(models), "models": [list(m) for m in models]})
    else:
        print("char short int long llong")
        for widths in models:
            print("  ".join(f"{w:<4}" for w in widths).rstrip())
        print(f"{len(models)} models")
    return EXIT_OK


# --- build subcommands --------------------------------------------------------------


_THRESHOLDS = {"medium": Severity.MEDIUM, "high": Severity.HIGH}


def _print_audit_human(report) -> None:
    print("file                          value  flags")
    for row in report.per_tu:
        if row.status == "ok":
            print(f"{row.file:<28}  {row.value:<5}  {' '.join(row.flags)}")
        else:
            print(f"{row.file:<28}  -      (unauditable)")
    for inc in report.inconsistencies:
        parts = "; ".join(
            f"{value}: {', '.join(files)}" for value, files in inc.partition
        )
        print(f"inconsistency [{inc.severity.name.lower()}] {inc.dimension}: {parts}")
    for mis in report.mismatches:
        print(
            f"mismatch [{mis.severity.name.lower()}] {mis.file} {mis.dimension}:"
            f" TU={mis.tu_value} reference={mis.reference_value}"
        )
    for file in report.unauditable:
        print(f"unauditable: {file} (compiler not covered by profile)")


def _finish_audit(report, args, cfg: CliConfig) -> int:
    if cfg.fmt == "json":
        _print_json(report.to_json_dict())
    else:
        _print_audit_human(report)
        if not report.inconsistencies and not report.mismatches and not report.unauditable:
            print("no findings")
    if args.fail_on == "none":
        return EXIT_OK
    return (
        EXIT_FINDINGS
        if report.has_findings(_THRESHOLDS[args.fail_on])
        else EXIT_OK
    )


def cmd_build_audit(args, cfg: CliConfig) -> int:
    capture = load_build(_read_text(args.compile_commands), cfg.profile())
    return _finish_audit(audit(capture), args, cfg)


def cmd_build_check(args, cfg: CliConfig) -> int:
    profile = cfg.profile()
    capture = load_build(_read_text(args.compile_commands), profile)
    if args.reference_flags is not None:
        inv = parse_invocation(shlex.split(args.reference_flags), env={}, profile=profile)
        reference = inv.dialect
    else:
        reference = decode_value(args.reference)
    return _finish_audit(check_against(capture, reference), args, cfg)


# --- parser wiring ---------------------------------------------------------------------


def _add_env_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--flags",
        default="",
        help='compiler flag string establishing the dialect; use the'
        ' equals form (--flags="-O2 -std=c11") since the string starts'
        " with a dash",
    )
    p.add_argument(
        "--value",
        type=int,
        default=None,
        help="dialect value 0..767 instead of --flags",
    )
    p.add_argument(
        "--env",
        action="append",
        metavar="NAME=VALUE",
        help="environment variable for the parse (e.g. CPATH=/inc)",
    )
    p.add_argument(
        "-D",
        dest="define",
        action="append",
        metavar="NAME[=VALUE]",
        help="extra macro definition applied after the dialect env",
    )
    p.add_argument(
        "-U",
        dest="undef",
        action="append",
        metavar="NAME",
        help="macro removal applied after -D options",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dialectoscope",
        description="Measure, derive, and audit C dialect configurations.",
    )
    parser.add_argument(
        "--profile",
        default=DEFAULT_PROFILE,
        help=f"compiler profile name (default {DEFAULT_PROFILE})",
    )
    parser.add_argument(
        "--profile-dir",
        action="append",
        default=[],
        help="extra directory to search for profile data files",
    )
    parser.add_argument(
        "--format",
        choices=("human", "json"),
        default="human",
        help="output format (default human)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # probe
    probe_p = sub.add_parser("probe", help="dialect probe operations")
    probe_sub = probe_p.add_subparsers(dest="subcommand", required=True)

    p = probe_sub.add_parser("emit", help="print the probe source")
    p.add_argument("--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_probe_emit)

    p = probe_sub.add_parser("flags", help="flags that produce a value")
    p.add_argument("value", type=int)
    p.set_defaults(func=cmd_probe_flags)

    p = probe_sub.add_parser("explain", help="per-dimension breakdown of a value")
    p.add_argument("value", type=int)
    p.set_defaults(func=cmd_probe_explain)

    p = probe_sub.add_parser("value", help="value a flag string produces")
    p.add_argument("--flags", required=True, help="compiler flag string")
    p.add_argument("--env", action="append", metavar="NAME=VALUE")
    p.set_defaults(func=cmd_probe_value)

    p = probe_sub.add_parser(
        "verify", help="compile and run the probe with a real compiler"
    )
    p.add_argument("--compiler", default="gcc")
    p.add_argument("--values", default="0-767", help="e.g. 0-767 or 0,1,7,42")
    p.add_argument("--jobs", type=int, default=8)
    p.set_defaults(func=cmd_probe_verify)

    # invocation
    inv_p = sub.add_parser("invocation", help="command-line analysis")
    inv_sub = inv_p.add_subparsers(dest="subcommand", required=True)
    p = inv_sub.add_parser(
        "parse", help="parse compiler arguments (put them after --)"
    )
    p.add_argument("--flags", default="", help="flag string (alternative to argv)")
    p.add_argument("--env", action="append", metavar="NAME=VALUE")
    p.add_argument("argv", nargs=argparse.REMAINDER)
    p.set_defaults(func=cmd_invocation_parse)

    # macros
    mac_p = sub.add_parser("macros", help="macro environment operations")
    mac_sub = mac_p.add_subparsers(dest="subcommand", required=True)

    p = mac_sub.add_parser("show", help="list the macro table for a dialect")
    _add_env_options(p)
    p.set_defaults(func=cmd_macros_show)

    p = mac_sub.add_parser("eval", help="evaluate a preprocessor condition")
    _add_env_options(p)
    p.add_argument("expression")
    p.set_defaults(func=cmd_macros_eval)

    p = mac_sub.add_parser("branches", help="report taken conditional branches")
    _add_env_options(p)
    p.add_argument("source", help="C source file, or - for stdin")
    p.add_argument("--show-retained", action="store_true")
    p.set_defaults(func=cmd_macros_branches)

    # include
    inc_p = sub.add_parser("include", help="header search simulation")
    inc_sub = inc_p.add_subparsers(dest="subcommand", required=True)
    p = inc_sub.add_parser("resolve", help="resolve one include directive")
    p.add_argument("--header", required=True)
    p.add_argument("--form", choices=("quote", "angle"), required=True)
    p.add_argument("--includer", required=True, help="file containing the directive")
    p.add_argument("--manifest", help="virtual filesystem: one path per line")
    p.add_argument("--root", help="snapshot a real directory instead")
    p.add_argument("--cwd", default="/", help="working directory for relative paths")
    p.add_argument("--flags", default="", help="compiler flags (-I, -isystem, ...)")
    p.add_argument("--env", action="append", metavar="NAME=VALUE")
    p.set_defaults(func=cmd_include_resolve)

    # promote
    pro_p = sub.add_parser("promote", help="integer promotion analysis")
    pro_sub = pro_p.add_subparsers(dest="subcommand", required=True)
    p = pro_sub.add_parser("check", help="analyze the unsigned wrap-check idiom")
    p.add_argument("--operand", required=True, help="e.g. uint16_t")
    p.add_argument("--cast", help="cast applied to the sum, e.g. uint16_t")
    p.add_argument("--model", help="five widths: char,short,int,long,llong")
    p.add_argument("--unsigned-char", action="store_true")
    p.add_argument(
        "--all-models",
        action="store_true",
        help="check every admissible width model (default when --model absent)",
    )
    p.add_argument(
        "--simulate",
        action="store_true",
        help="cross-check each verdict against boundary-pair simulation",
    )
    p.set_defaults(func=cmd_promote_check)

    # space
    space_p = sub.add_parser("space", help="dialect-space counting")
    space_sub = space_p.add_subparsers(dest="subcommand", required=True)
    p = space_sub.add_parser("count", help="2^n lower bound on dialects")
    p.add_argument("--behaviors", type=int, default=112)
    p.set_defaults(func=cmd_space_count)
    p = space_sub.add_parser("models", help="admissible integer width models")
    p.set_defaults(func=cmd_space_models)

    # build
    build_p = sub.add_parser("build", help="compile-database audits")
    build_sub = build_p.add_subparsers(dest="subcommand", required=True)

    p = build_sub.add_parser("audit", help="cross-TU dialect consistency")
    p.add_argument("compile_commands", help="compile_commands.json path, or -")
    p.add_argument("--fail-on", choices=("medium", "high", "none"), default="medium")
    p.set_defaults(func=cmd_build_audit)

    p = build_sub.add_parser("check", help="compare TUs against a reference dialect")
    p.add_argument("compile_commands", help="compile_commands.json path, or -")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--reference", type=int, help="reference dialect value 0..767")
    group.add_argument("--reference-flags", help="reference dialect as a flag string")
    p.add_argument("--fail-on", choices=("medium", "high", "none"), default="medium")
    p.set_defaults(func=cmd_build_check)

    # profiles
    prof_p = sub.add_parser("profiles", help="list known compiler profiles")
    prof_p.set_defaults(func=cmd_profiles)

    return parser


def cmd_profiles(args, cfg: CliConfig) -> int:
    names = available_profiles(list(cfg.profile_dirs) or None)
    if cfg.fmt == "json":
        _print_json({"profiles": names})
    else:
        for name in names:
            print(name)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(
        profile_name=args.profile,
        profile_dirs=tuple(args.profile_dir),
        fmt=args.format,
    )
    try:
        return args.func(args, cfg)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
