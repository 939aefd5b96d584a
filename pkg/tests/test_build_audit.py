"""Compile-database loading and cross-TU dialect audits."""

import json

import pytest
from hypothesis import given, strategies as st

from dialectoscope import (
    DIMENSIONS,
    AuditReport,
    BuildLoadError,
    PerTuRow,
    Severity,
    audit,
    canonical_flags,
    check_against,
    decode_value,
    encode_config,
    load_build,
)
from conftest import compile_db


def capture_of(entries, profile):
    return load_build(compile_db(entries), profile)


def flags_for(value, profile):
    return " ".join(canonical_flags(decode_value(value), profile))


# --- loading ----------------------------------------------------------------


def test_load_command_form(profile):
    capture = capture_of([("a.c", "-O2 -funsigned-char")], profile)
    (entry,) = capture.entries
    assert entry.status == "ok"
    assert entry.compiler == "gcc"
    assert entry.dialect.optimized
    assert not entry.dialect.char_is_signed
    assert entry.arguments[0] == "gcc"


def test_load_arguments_form(profile):
    doc = json.dumps(
        [{"directory": "/p", "file": "a.c", "arguments": ["cc", "-std=c99", "-c", "a.c"]}]
    )
    capture = load_build(doc, profile)
    (entry,) = capture.entries
    assert entry.status == "ok"
    assert entry.dialect.std_class == 1
    assert entry.compiler == "cc"


def test_load_command_respects_shell_quoting(profile):
    doc = json.dumps(
        [{"directory": "/p", "file": "a b/x.c", "command": "gcc -c 'a b/x.c'"}]
    )
    capture = load_build(doc, profile)
    assert capture.entries[0].arguments == ("gcc", "-c", "a b/x.c")


def test_load_windows_style_compiler_path(profile):
    doc = json.dumps(
        [{"directory": "/p", "file": "a.c", "arguments": ["tools\\gcc", "-c", "a.c"]}]
    )
    capture = load_build(doc, profile)
    assert capture.entries[0].compiler == "gcc"
    assert capture.entries[0].status == "ok"


def test_unknown_compiler_is_unauditable(profile):
    doc = json.dumps(
        json.loads(compile_db([("a.c", "")]))
        + [{"directory": "/p", "file": "fw.c", "command": "armcc --c99 fw.c"}]
    )
    capture = load_build(doc, profile)
    statuses = [e.status for e in capture.entries]
    assert statuses == ["ok", "unauditable"]
    assert capture.ok_entries()[0].file == "a.c"


@pytest.mark.parametrize(
    "document,fragment",
    [
        ("not json", "invalid JSON"),
        ("[]", "non-empty"),
        ("{}", "non-empty JSON array"),
        ("[42]", "expected an object"),
        ('[{"directory": "/p", "command": "gcc -c a.c"}]', "missing field 'file'"),
        ('[{"file": "a.c"}]', "needs 'command' or 'arguments'"),
        ('[{"file": "a.c", "arguments": "gcc"}]', "string array"),
        ('[{"file": "a.c", "arguments": []}]', "empty argument list"),
        ('[{"file": "a.c", "command": "gcc \'unclosed"}]', "unparseable command"),
        ('[{"file": "a.c", "directory": 3, "command": "gcc -c a.c"}]', "'directory'"),
    ],
)
def test_load_rejects_malformed_documents(document, fragment, profile):
    with pytest.raises(BuildLoadError) as err:
        load_build(document, profile)
    assert fragment in str(err.value)


def test_load_reports_bad_flags_with_file_name(profile):
    with pytest.raises(BuildLoadError) as err:
        capture_of([("z.c", "-std=c2x")], profile)
    assert "z.c" in str(err.value) and "c2x" in str(err.value)


# --- consistency audit --------------------------------------------------------


def test_audit_flags_char_signedness_split(profile):
    capture = capture_of(
        [("a.c", "-O2"), ("b.c", "-O2 -funsigned-char"), ("c.c", "-O2")], profile
    )
    report = audit(capture)
    (finding,) = report.inconsistencies
    assert finding.dimension == "char_is_signed"
    assert finding.severity is Severity.HIGH
    assert finding.partition == (
        ("true", ("a.c", "c.c")),
        ("false", ("b.c",)),
    )
    assert report.max_severity() is Severity.HIGH
    assert report.has_findings()


def test_audit_consistent_build_is_clean(profile):
    capture = capture_of([("a.c", "-O2 -std=gnu11"), ("b.c", "-std=gnu11 -O2")], profile)
    report = audit(capture)
    assert report.inconsistencies == ()
    assert report.max_severity() is None
    assert not report.has_findings()
    assert {row.value for row in report.per_tu} == {
        encode_config(capture.entries[0].dialect)
    }


def test_audit_std_partition_is_medium(profile):
    capture = capture_of(
        [("a.c", "-std=c99"), ("b.c", "-std=c99"), ("c.c", "-std=c11")], profile
    )
    report = audit(capture)
    (finding,) = report.inconsistencies
    assert finding.dimension == "std_class"
    assert finding.severity is Severity.MEDIUM
    assert finding.partition == (("1", ("a.c", "b.c")), ("0", ("c.c",)))
    assert report.max_severity() is Severity.MEDIUM
    assert report.has_findings(Severity.MEDIUM)
    assert not report.has_findings(Severity.HIGH)


def test_audit_multiple_dimensions(profile):
    capture = capture_of([("a.c", ""), ("b.c", "-O2 -m32")], profile)
    report = audit(capture)
    dims = {f.dimension for f in report.inconsistencies}
    assert dims == {"optimized", "pointer_width_64"}


def test_audit_severity_override(profile):
    capture = capture_of([("a.c", "-std=c99"), ("b.c", "-std=c11")], profile)
    report = audit(capture, severity_policy={"std_class": Severity.HIGH})
    assert report.inconsistencies[0].severity is Severity.HIGH
    with pytest.raises(ValueError):
        audit(capture, severity_policy={"no_such_dimension": Severity.HIGH})


def test_audit_counts_unauditable_as_high(profile):
    doc = json.dumps(
        [
            {"directory": "/p", "file": "a.c", "command": "gcc -c a.c"},
            {"directory": "/p", "file": "fw.c", "command": "armcc fw.c"},
        ]
    )
    report = audit(load_build(doc, profile))
    assert report.inconsistencies == ()
    assert report.unauditable == ("fw.c",)
    assert report.max_severity() is Severity.HIGH
    assert report.has_findings(Severity.HIGH)
    row = next(r for r in report.per_tu if r.file == "fw.c")
    assert row == PerTuRow("fw.c", "unauditable", None, ())


def test_per_tu_rows_in_capture_order(profile):
    capture = capture_of([("z.c", ""), ("a.c", "-O2")], profile)
    report = audit(capture)
    assert [r.file for r in report.per_tu] == ["z.c", "a.c"]
    assert report.per_tu[1].flags == tuple(
        canonical_flags(capture.entries[1].dialect, profile)
    )


# --- reference check ------------------------------------------------------------


def test_check_against_reports_each_differing_dimension(profile):
    capture = capture_of([("a.c", flags_for(1, profile))], profile)
    report = check_against(capture, decode_value(0))
    (mismatch,) = report.mismatches
    assert mismatch.file == "a.c"
    assert mismatch.dimension == "char_is_signed"
    assert {mismatch.tu_value, mismatch.reference_value} == {"true", "false"}
    assert mismatch.severity is Severity.HIGH
    assert report.reference_value == 0


def test_check_against_matching_dialect_is_clean(profile):
    capture = capture_of([("a.c", flags_for(443, profile))], profile)
    report = check_against(capture, decode_value(443))
    assert report.mismatches == ()
    assert report.max_severity() is None
    assert report.reference_value == 443


@given(tu_value=st.integers(0, 767), ref_value=st.integers(0, 767))
def test_check_against_counts_dimension_distance(tu_value, ref_value, profile):
    capture = capture_of([("a.c", flags_for(tu_value, profile))], profile)
    report = check_against(capture, decode_value(ref_value))
    tu, ref = decode_value(tu_value), decode_value(ref_value)
    distance = sum(tu.value_of(d) != ref.value_of(d) for d in DIMENSIONS)
    assert len(report.mismatches) == distance
    assert (report.mismatches == ()) == (tu_value == ref_value)


def test_reports_serialize_to_json(profile):
    capture = capture_of([("a.c", ""), ("b.c", "-funsigned-char")], profile)
    for report in (audit(capture), check_against(capture, decode_value(0))):
        blob = json.dumps(report.to_json_dict())
        parsed = json.loads(blob)
        assert {"per_tu", "inconsistencies", "mismatches", "unauditable"} <= set(parsed)
    checked = check_against(capture, decode_value(0)).to_json_dict()
    assert checked["reference_value"] == 0
    assert checked["mismatches"][0]["severity"] == "high"


def test_empty_report_shape():
    report = AuditReport(per_tu=())
    assert report.max_severity() is None
    assert not report.has_findings()
    assert report.to_json_dict()["per_tu"] == []
