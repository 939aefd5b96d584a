"""Compile-database ingestion and cross-TU dialect auditing.

A build capture is the compile_commands.json convention: a JSON array
of entries with ``directory``, ``file``, and either ``command`` (one
shell-quoted string) or ``arguments`` (pre-split).  Each entry is
parsed into an invocation and a dialect; an audit then reports every
dialect dimension on which translation units disagree, or on which
they differ from a declared reference dialect.
"""

from __future__ import annotations

import json
import posixpath
import shlex
from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping

from .dialect_model import DIMENSIONS, AnsiMode, DialectConfig, canonical_flags, encode_config
from .invocation import CompilerInvocation, InvocationError, parse_invocation
from .profiles import CompilerProfile, ProfileError


class BuildLoadError(ValueError):
    """Malformed capture document or unparseable entry."""


class Severity(IntEnum):
    MEDIUM = 1
    HIGH = 2


# Divergence in object layout silently changes what shared data means
# across TUs; divergence in the macro environment "only" selects
# different code.  Overridable per audit call.
DEFAULT_SEVERITY_POLICY: dict[str, Severity] = {
    "char_is_signed": Severity.HIGH,
    "bitfield_is_signed": Severity.HIGH,
    "short_enums": Severity.HIGH,
    "pointer_width_64": Severity.HIGH,
    "optimized": Severity.MEDIUM,
    "freestanding": Severity.MEDIUM,
    "std_class": Severity.MEDIUM,
    "ansi_mode": Severity.MEDIUM,
}

OK = "ok"
UNAUDITABLE = "unauditable"


@dataclass(frozen=True)
class BuildEntry:
    directory: str
    file: str
    arguments: tuple[str, ...]  # verbatim, argv[0] included
    compiler: str
    status: str  # "ok" | "unauditable"
    invocation: CompilerInvocation | None = None
    dialect: DialectConfig | None = None


@dataclass(frozen=True)
class BuildCapture:
    entries: tuple[BuildEntry, ...]
    profile: CompilerProfile

    def ok_entries(self) -> list[BuildEntry]:
        return [e for e in self.entries if e.status == OK]


@dataclass(frozen=True)
class PerTuRow:
    file: str
    status: str
    value: int | None
    flags: tuple[str, ...]


@dataclass(frozen=True)
class Inconsistency:
    dimension: str
    partition: tuple[tuple[str, tuple[str, ...]], ...]  # (value, files) by first appearance
    severity: Severity


@dataclass(frozen=True)
class Mismatch:
    file: str
    dimension: str
    tu_value: str
    reference_value: str
    severity: Severity


@dataclass(frozen=True)
class AuditReport:
    per_tu: tuple[PerTuRow, ...]
    inconsistencies: tuple[Inconsistency, ...] = ()
    mismatches: tuple[Mismatch, ...] = ()
    unauditable: tuple[str, ...] = ()
    reference_value: int | None = None

    def max_severity(self) -> Severity | None:
        severities = [f.severity for f in self.inconsistencies]
        severities += [f.severity for f in self.mismatches]
        if self.unauditable:
            # An entry we cannot interpret may hide anything.
            severities.append(Severity.HIGH)
        return max(severities) if severities else None

    def has_findings(self, threshold: Severity = Severity.MEDIUM) -> bool:
        top = self.max_severity()
        return top is not None and top >= threshold

    def to_json_dict(self) -> dict:
        return {
            "per_tu": [
                {
                    "file": r.file,
                    "status": r.status,
                    "value": r.value,
                    "flags": list(r.flags),
                }
                for r in self.per_tu
            ],
            "inconsistencies": [
                {
                    "dimension": f.dimension,
                    "severity": f.severity.name.lower(),
                    "values": [
                        {"value": value, "files": list(files)}
                        for value, files in f.partition
                    ],
                }
                for f in self.inconsistencies
            ],
            "mismatches": [
                {
                    "file": f.file,
                    "dimension": f.dimension,
                    "tu_value": f.tu_value,
                    "reference_value": f.reference_value,
                    "severity": f.severity.name.lower(),
                }
                for f in self.mismatches
            ],
            "unauditable": list(self.unauditable),
            "reference_value": self.reference_value,
        }


def _render(value) -> str:
    if isinstance(value, AnsiMode):
        return value.name
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def load_build(document: str, profile: CompilerProfile) -> BuildCapture:
    """Parse a compile-database document.  Shell-word splitting follows
    POSIX quoting; no expansions are performed."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise BuildLoadError(f"invalid JSON: {exc}") from None
    if not isinstance(data, list) or not data:
        raise BuildLoadError("capture must be a non-empty JSON array of entries")

    entries: list[BuildEntry] = []
    for index, item in enumerate(data):
        where = f"entry {index}"
        if not isinstance(item, dict):
            raise BuildLoadError(f"{where}: expected an object")
        file = item.get("file")
        if not isinstance(file, str) or not file:
            raise BuildLoadError(f"{where}: missing field 'file'")
        where = f"entry {index} ({file})"
        directory = item.get("directory", "")
        if not isinstance(directory, str):
            raise BuildLoadError(f"{where}: field 'directory' must be a string")
        if "arguments" in item:
            arguments = item["arguments"]
            if not isinstance(arguments, list) or not all(
                isinstance(a, str) for a in arguments
            ):
                raise BuildLoadError(f"{where}: 'arguments' must be a string array")
        elif "command" in item:
            if not isinstance(item["command"], str):
                raise BuildLoadError(f"{where}: 'command' must be a string")
            try:
                arguments = shlex.split(item["command"], posix=True)
            except ValueError as exc:
                raise BuildLoadError(f"{where}: unparseable command: {exc}") from None
        else:
            raise BuildLoadError(f"{where}: needs 'command' or 'arguments'")
        if not arguments:
            raise BuildLoadError(f"{where}: empty argument list")

        compiler = posixpath.basename(arguments[0].replace("\\", "/"))
        if not profile.covers_compiler(compiler):
            entries.append(
                BuildEntry(directory, file, tuple(arguments), compiler, UNAUDITABLE)
            )
            continue
        try:
            inv = parse_invocation(arguments[1:], env={}, profile=profile)
        except (InvocationError, ProfileError) as exc:
            raise BuildLoadError(f"{file}: {exc}") from None
        entries.append(
            BuildEntry(
                directory,
                file,
                tuple(arguments),
                compiler,
                OK,
                invocation=inv,
                dialect=inv.dialect,
            )
        )
    return BuildCapture(entries=tuple(entries), profile=profile)


def _per_tu_rows(capture: BuildCapture) -> tuple[PerTuRow, ...]:
    rows = []
    for e in capture.entries:
        if e.status == OK:
            assert e.dialect is not None
            rows.append(
                PerTuRow(
                    e.file,
                    OK,
                    encode_config(e.dialect),
                    tuple(canonical_flags(e.dialect, capture.profile)),
                )
            )
        else:
            rows.append(PerTuRow(e.file, UNAUDITABLE, None, ()))
    return tuple(rows)


def _policy(overrides: Mapping[str, Severity] | None) -> dict[str, Severity]:
    policy = dict(DEFAULT_SEVERITY_POLICY)
    if overrides:
        for dimension, severity in overrides.items():
            if dimension not in policy:
                raise ValueError(f"unknown dialect dimension: {dimension}")
            policy[dimension] = Severity(severity)
    return policy


def audit(
    capture: BuildCapture, severity_policy: Mapping[str, Severity] | None = None
) -> AuditReport:
    """Report each dimension on which the capture's TUs disagree, with
    the partition of files by value."""
    policy = _policy(severity_policy)
    ok = capture.ok_entries()
    inconsistencies: list[Inconsistency] = []
    for dimension in DIMENSIONS:
        partition: dict[str, list[str]] = {}
        for e in ok:
            assert e.dialect is not None
            partition.setdefault(_render(e.dialect.value_of(dimension)), []).append(e.file)
        if len(partition) >= 2:
            inconsistencies.append(
                Inconsistency(
                    dimension,
                    tuple((v, tuple(files)) for v, files in partition.items()),
                    policy[dimension],
                )
            )
    return AuditReport(
        per_tu=_per_tu_rows(capture),
        inconsistencies=tuple(inconsistencies),
        unauditable=tuple(e.file for e in capture.entries if e.status == UNAUDITABLE),
    )


def check_against(
    capture: BuildCapture,
    reference: DialectConfig,
    severity_policy: Mapping[str, Severity] | None = None,
) -> AuditReport:
    """Compare every TU dialect against the analysis tool's declared
    dialect; one mismatch row per differing (file, dimension)."""
    policy = _policy(severity_policy)
    mismatches: list[Mismatch] = []
    for e in capture.ok_entries():
        assert e.dialect is not None
        for dimension in DIMENSIONS:
            tu_value = e.dialect.value_of(dimension)
            ref_value = reference.value_of(dimension)
            if tu_value != ref_value:
                mismatches.append(
                    Mismatch(
                        e.file,
                        dimension,
                        _render(tu_value),
                        _render(ref_value),
                        policy[dimension],
                    )
                )
    return AuditReport(
        per_tu=_per_tu_rows(capture),
        mismatches=tuple(mismatches),
        unauditable=tuple(e.file for e in capture.entries if e.status == UNAUDITABLE),
        reference_value=encode_config(reference),
    )
