"""The dialect probe: a self-contained C function whose return value
encodes the eight observable dialect dimensions as additive weights.

The probe source is a stored fixture, not regenerated text: its byte
length and checksum are part of the contract, so tests pin both.  Each
additive term is described by a :class:`ProbeBitSpec` so a value can be
explained dimension by dimension.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

from .dialect_model import (
    ANSI_MODE_WEIGHT,
    STD_CLASS_WEIGHT,
    DialectConfig,
    canonical_flags,
    decode_value,
)
from .profiles import CompilerProfile

PROBE_FILENAME = "probe_return_value.c"
PROBE_BYTE_LENGTH = 647
PROBE_SHA256 = "03862b5e1c8b3000513c766caf21ebeb1549114ad0f1a36c56cc0aa34a6ba48d"


@dataclass(frozen=True)
class ProbeBitSpec:
    """One additive term of the probe: its weight, the C construct that
    computes it, the dialect dimension it witnesses, and the behavior
    the construct depends on."""

    weight: int
    c_construct: str
    dimension: str
    standard_clause: str


#: One entry per dialect dimension, in encoding order.  The last two
#: weights scale: the standard class contributes weight * class and the
#: mode contributes weight * mode index.
PROBE_BITS: tuple[ProbeBitSpec, ...] = (
    ProbeBitSpec(
        weight=1,
        c_construct="((char)-1) < 0",
        dimension="char_is_signed",
        standard_clause="signedness of plain char",
    ),
    ProbeBitSpec(
        weight=2,
        c_construct="s.f < 0, with struct { int f:8; } s = { 255 }",
        dimension="bitfield_is_signed",
        standard_clause="signedness of plain int bit-fields",
    ),
    ProbeBitSpec(
        weight=4,
        c_construct="sizeof(S) < sizeof(L), S a tiny enum and L an int-range enum",
        dimension="short_enums",
        standard_clause="storage size of enumeration types",
    ),
    ProbeBitSpec(
        weight=8,
        c_construct="#ifdef __OPTIMIZE__",
        dimension="optimized",
        standard_clause="predefined macros reflecting optimization options",
    ),
    ProbeBitSpec(
        weight=16,
        c_construct="sizeof(void *) == 8",
        dimension="pointer_width_64",
        standard_clause="size of object pointers",
    ),
    ProbeBitSpec(
        weight=32,
        c_construct="!defined(__STDC_HOSTED__) || __STDC_HOSTED__ == 0",
        dimension="freestanding",
        standard_clause="hosted versus freestanding execution environment",
    ),
    ProbeBitSpec(
        weight=STD_CLASS_WEIGHT,
        c_construct="(__STDC_VERSION__ % 4)*64 under #ifdef __STDC_VERSION__, else 192",
        dimension="std_class",
        standard_clause="language standard version reported by __STDC_VERSION__",
    ),
    ProbeBitSpec(
        weight=ANSI_MODE_WEIGHT,
        c_construct='#ifndef __STRICT_ANSI__ adds 256, plus 256 more if sizeof("??-") != 4',
        dimension="ansi_mode",
        standard_clause=(
            "strict-conformance macro and trigraph replacement"
            ' ("??-" collapses to "~", shrinking the literal from 4 bytes to 2)'
        ),
    ),
)


def emit_probe_source() -> str:
    """Return the probe function text, byte-exact."""
    text = (resources.files(__package__) / "data" / PROBE_FILENAME).read_text(
        encoding="ascii"
    )
    digest = hashlib.sha256(text.encode("ascii")).hexdigest()
    if digest != PROBE_SHA256:
        raise RuntimeError(
            f"probe fixture corrupted: sha256 {digest} != expected {PROBE_SHA256}"
        )
    return text


def flags_for_value(value: int, profile: CompilerProfile) -> list[str]:
    """Compiler flags that make the probe return ``value``."""
    return canonical_flags(decode_value(value), profile)


def _contribution(spec: ProbeBitSpec, config: DialectConfig) -> int:
    dim = config.value_of(spec.dimension)
    if spec.dimension == "std_class":
        return spec.weight * dim
    if spec.dimension == "ansi_mode":
        return spec.weight * dim.value
    return spec.weight if dim else 0


def explain_value(value: int) -> list[tuple[ProbeBitSpec, int]]:
    """Decompose a probe value into per-dimension contributions.

    Returns one (bit spec, contribution) pair per dimension; the
    contributions sum to ``value``.
    """
    config = decode_value(value)
    return [(spec, _contribution(spec, config)) for spec in PROBE_BITS]
