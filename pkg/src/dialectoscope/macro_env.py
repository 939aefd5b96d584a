"""Predefined macro tables, conditional-expression evaluation, and
conditional-compilation branch reports.

The evaluator implements preprocessor constant expressions over 64-bit
two's-complement arithmetic: integer literals with suffixes, ``defined``,
object-like macro expansion, the unary and binary integer operators,
``?:``, and parentheses.  Identifiers left after expansion evaluate to 0.
Function-like macros may be defined in an environment, but invoking one
inside a condition raises :class:`UnsupportedMacroError` rather than
returning a wrong answer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .dialect_model import AnsiMode, DialectConfig
from .invocation import CompilerInvocation, MacroDirective
from .profiles import CompilerProfile


class PreprocessorError(ValueError):
    """Base class for preprocessing problems."""


class ExprSyntaxError(PreprocessorError):
    """Malformed conditional expression."""


class ExprEvalError(PreprocessorError):
    """Expression is well-formed but cannot be evaluated (division by
    zero, out-of-range shift count, oversized constant)."""


class UnsupportedMacroError(PreprocessorError):
    """A function-like macro was invoked inside a condition."""


class ConditionalStructureError(PreprocessorError):
    """Unbalanced or malformed conditional structure in scanned source."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# --- macro environments -------------------------------------------------

PREDEFINED = "predefined"
COMMAND_LINE = "command-line"
SOURCE = "source"


@dataclass(frozen=True)
class MacroDefinition:
    name: str
    body: str
    provenance: str  # "predefined" | "command-line" | "source"
    function_like: bool = False


class MacroEnv:
    """Immutable name -> definition table; updates return new tables."""

    __slots__ = ("_table",)

    def __init__(self, table: Mapping[str, MacroDefinition] | None = None):
        object.__setattr__(self, "_table", dict(table or {}))

    @classmethod
    def empty(cls) -> "MacroEnv":
        return cls()

    def lookup(self, name: str) -> MacroDefinition | None:
        return self._table.get(name)

    def defined(self, name: str) -> bool:
        return name in self._table

    def definitions(self) -> list[MacroDefinition]:
        return [self._table[n] for n in sorted(self._table)]

    def with_define(
        self, name: str, body: str, provenance: str, function_like: bool = False
    ) -> "MacroEnv":
        table = dict(self._table)
        table[name] = MacroDefinition(name, body, provenance, function_like)
        return MacroEnv(table)

    def without(self, name: str) -> "MacroEnv":
        if name not in self._table:
            return self
        table = dict(self._table)
        del table[name]
        return MacroEnv(table)

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other) -> bool:
        return isinstance(other, MacroEnv) and self._table == other._table

    def __repr__(self) -> str:
        return f"MacroEnv({len(self._table)} macros)"


def predefined_macros(config: DialectConfig, profile: CompilerProfile) -> MacroEnv:
    """The macro table an implementation predefines for a dialect."""
    table: dict[str, MacroDefinition] = {}

    def pre(name: str, body: str) -> None:
        table[name] = MacroDefinition(name, body, PREDEFINED)

    pre("__STDC__", "1")
    version = profile.stdc_version(config.std_class)
    if version is not None:
        pre("__STDC_VERSION__", version)
    pre("__STDC_HOSTED__", "0" if config.freestanding else "1")
    if config.optimized:
        pre("__OPTIMIZE__", "1")
    if config.ansi_mode is AnsiMode.STRICT:
        pre("__STRICT_ANSI__", "1")
    if not config.char_is_signed:
        pre("__CHAR_UNSIGNED__", "1")
    pre("__SIZEOF_POINTER__", "8" if config.pointer_width_64 else "4")
    for name, value in profile.compiler_id_macros.items():
        pre(name, value)
    return MacroEnv(table)


def apply_directives(
    env: MacroEnv, directives: Iterable[MacroDirective], provenance: str = COMMAND_LINE
) -> MacroEnv:
    """Apply -D/-U style directives in order; define overwrites,
    undefine removes, undefining an absent name is a no-op."""
    for d in directives:
        if d.action == "define":
            env = env.with_define(d.name, d.value if d.value is not None else "1", provenance)
        elif d.action == "undefine":
            env = env.without(d.name)
        else:
            raise ValueError(f"unknown directive action {d.action!r}")
    return env


def invocation_macro_env(inv: CompilerInvocation) -> MacroEnv:
    """Full macro environment of an invocation: dialect-predefined
    macros, option-conditional profile macros, then -D/-U in order."""
    env = predefined_macros(inv.dialect, inv.profile)
    for name, value in inv.profile_defines:
        env = env.with_define(name, value, PREDEFINED)
    return apply_directives(env, inv.macro_directives)


# --- conditional expression evaluation -----------------------------------

_U64_MASK = (1 << 64) - 1
_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1

_TOKEN_RE = re.compile(
    r"""\s+
      | (?P<num>\.?[0-9](?:[0-9a-zA-Z_.]|[eEpP][+-])*)
      | (?P<ident>[A-Za-z_]\w*)
      | (?P<punct><<|>>|<=|>=|==|!=|&&|\|\||[+\-*/%&|^~!<>()?:])
    """,
    re.VERBOSE,
)

_INT_RE = re.compile(
    r"(?:(?P<hex>0[xX][0-9a-fA-F]+)|(?P<oct>0[0-7]*)|(?P<dec>[1-9][0-9]*))"
    r"(?P<suffix>[uU](?:l|ll|L|LL)?|(?:l|ll|L|LL)[uU]?)?\Z"
)

_BIN_PRECEDENCE = {
    "||": 1, "&&": 2,
    "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}

_Token = tuple[str, str]


def _tokenize(text: str, context: str = "expression") -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch in "\"'":
                raise ExprSyntaxError(
                    f"string and character constants are not supported in {context}"
                )
            raise ExprSyntaxError(f"unexpected character {ch!r} in {context}")
        pos = m.end()
        kind = m.lastgroup
        if kind is not None:
            tokens.append((kind, m.group(kind)))
    return tokens


def _read_defined(tokens: Sequence[_Token], i: int) -> tuple[str, int]:
    if i < len(tokens) and tokens[i] == ("punct", "("):
        if i + 2 < len(tokens) and tokens[i + 1][0] == "ident" and tokens[i + 2] == ("punct", ")"):
            return tokens[i + 1][1], i + 3
        raise ExprSyntaxError("expected defined(NAME)")
    if i < len(tokens) and tokens[i][0] == "ident":
        return tokens[i][1], i + 1
    raise ExprSyntaxError("expected a macro name after 'defined'")


def _expand_tokens(
    tokens: Sequence[_Token], env: MacroEnv, hidden: frozenset[str] = frozenset()
) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    while i < len(tokens):
        kind, text = tokens[i]
        if kind != "ident":
            out.append(tokens[i])
            i += 1
            continue
        if text == "defined":
            name, i = _read_defined(tokens, i + 1)
            out.append(("num", "1" if env.defined(name) else "0"))
            continue
        macro = env.lookup(text)
        if macro is None or text in hidden:
            out.append(tokens[i])
            i += 1
            continue
        if macro.function_like:
            if i + 1 < len(tokens) and tokens[i + 1] == ("punct", "("):
                raise UnsupportedMacroError(
                    f"function-like macro {text!r} invoked in a condition"
                )
            out.append(tokens[i])  # name without arguments is not expanded
            i += 1
            continue
        body = _tokenize(macro.body, context=f"body of macro {text!r}")
        out.extend(_expand_tokens(body, env, hidden | {text}))
        i += 1
    return out


@dataclass(frozen=True)
class _Value:
    value: int  # canonical: [0, 2^64) when unsigned, [-2^63, 2^63) when signed
    unsigned: bool

    def truth(self) -> bool:
        return self.value != 0


def _wrap_signed(v: int) -> int:
    return ((v - _INT64_MIN) & _U64_MASK) + _INT64_MIN


def _parse_int(text: str) -> _Value:
    m = _INT_RE.match(text)
    if m is None:
        raise ExprSyntaxError(f"invalid integer constant {text!r}")
    value = int(m.group("hex") or m.group("oct") or m.group("dec"),
                16 if m.group("hex") else 8 if m.group("oct") else 10)
    if value > _U64_MASK:
        raise ExprEvalError(f"integer constant {text!r} does not fit in 64 bits")
    suffix = m.group("suffix") or ""
    # Unsuffixed constants above the signed maximum are treated as
    # unsigned, matching common compiler practice.
    unsigned = "u" in suffix.lower() or value > _INT64_MAX
    return _Value(value, unsigned)


def _c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _apply_binary(op: str, a: _Value, b: _Value, live: bool) -> _Value:
    if op in ("<", ">", "<=", ">=", "==", "!="):
        if not live:
            return _Value(0, False)
        unsigned = a.unsigned or b.unsigned
        av = a.value & _U64_MASK if unsigned else a.value
        bv = b.value & _U64_MASK if unsigned else b.value
        result = {
            "<": av < bv, ">": av > bv, "<=": av <= bv,
            ">=": av >= bv, "==": av == bv, "!=": av != bv,
        }[op]
        return _Value(int(result), False)

    if op in ("<<", ">>"):
        # Shift result takes the promoted left operand's type.
        if not live:
            return _Value(0, a.unsigned)
        count = b.value & _U64_MASK if b.unsigned else b.value
        if count < 0 or count >= 64:
            raise ExprEvalError(f"shift count {count} out of range 0..63")
        raw = a.value << count if op == "<<" else a.value >> count
        return _Value(raw & _U64_MASK if a.unsigned else _wrap_signed(raw), a.unsigned)

    unsigned = a.unsigned or b.unsigned
    if not live:
        return _Value(0, unsigned)
    av = a.value & _U64_MASK if unsigned else a.value
    bv = b.value & _U64_MASK if unsigned else b.value
    if op in ("/", "%") and bv == 0:
        raise ExprEvalError("division by zero in conditional expression")
    if op == "+":
        raw = av + bv
    elif op == "-":
        raw = av - bv
    elif op == "*":
        raw = av * bv
    elif op == "/":
        raw = _c_div(av, bv)
    elif op == "%":
        raw = av - _c_div(av, bv) * bv
    elif op == "&":
        raw = av & bv
    elif op == "^":
        raw = av ^ bv
    elif op == "|":
        raw = av | bv
    else:  # pragma: no cover - operator table and grammar agree
        raise AssertionError(op)
    return _Value(raw & _U64_MASK if unsigned else _wrap_signed(raw), unsigned)


class _Parser:
    """Precedence-climbing evaluator.  ``live`` is False inside the
    unevaluated operand of && || ?: where only result signedness is
    tracked and no arithmetic errors can occur."""

    def __init__(self, tokens: Sequence[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of expression")
        self.pos += 1
        return tok

    def expect(self, punct: str) -> None:
        tok = self.peek()
        if tok != ("punct", punct):
            found = tok[1] if tok else "end of expression"
            raise ExprSyntaxError(f"expected {punct!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> _Value:
        result = self.conditional(live=True)
        if self.peek() is not None:
            raise ExprSyntaxError(f"unexpected token {self.peek()[1]!r} after expression")
        return result

    def conditional(self, live: bool) -> _Value:
        cond = self.binary(1, live)
        if self.peek() != ("punct", "?"):
            return cond
        self.next()
        truth = cond.truth() if live else False
        then = self.conditional(live and truth)
        self.expect(":")
        otherwise = self.conditional(live and not truth)
        unsigned = then.unsigned or otherwise.unsigned
        if not live:
            return _Value(0, unsigned)
        chosen = then if truth else otherwise
        value = chosen.value & _U64_MASK if unsigned else chosen.value
        return _Value(value, unsigned)

    def binary(self, min_prec: int, live: bool) -> _Value:
        left = self.unary(live)
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "punct":
                return left
            prec = _BIN_PRECEDENCE.get(tok[1])
            if prec is None or prec < min_prec:
                return left
            op = self.next()[1]
            if op in ("&&", "||"):
                left_truth = left.truth() if live else False
                rhs_live = live and (left_truth if op == "&&" else not left_truth)
                right = self.binary(prec + 1, rhs_live)
                if live:
                    if op == "&&":
                        result = left_truth and right.truth()
                    else:
                        result = left_truth or right.truth()
                    left = _Value(int(result), False)
                else:
                    left = _Value(0, False)
            else:
                right = self.binary(prec + 1, live)
                left = _apply_binary(op, left, right, live)

    def unary(self, live: bool) -> _Value:
        tok = self.peek()
        if tok is not None and tok[0] == "punct" and tok[1] in ("!", "-", "+", "~"):
            self.next()
            operand = self.unary(live)
            op = tok[1]
            if op == "!":
                return _Value(int(not operand.truth()) if live else 0, False)
            if not live:
                return _Value(0, operand.unsigned)
            if op == "+":
                return operand
            raw = -operand.value if op == "-" else ~operand.value
            value = raw & _U64_MASK if operand.unsigned else _wrap_signed(raw)
            return _Value(value, operand.unsigned)
        return self.primary(live)

    def primary(self, live: bool) -> _Value:
        kind, text = self.next()
        if kind == "num":
            return _parse_int(text)
        if kind == "ident":
            # Identifiers surviving macro expansion evaluate to 0.
            return _Value(0, False)
        if (kind, text) == ("punct", "("):
            inner = self.conditional(live)
            self.expect(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {text!r}")


def eval_condition(env: MacroEnv, expr: str) -> int:
    """Evaluate a preprocessor constant expression against an
    environment; nonzero means the branch is taken."""
    tokens = _tokenize(expr)
    if not tokens:
        raise ExprSyntaxError("empty conditional expression")
    expanded = _expand_tokens(tokens, env)
    return _Parser(expanded).parse().value


# --- conditional-compilation branch reports -------------------------------

_DIRECTIVE_RE = re.compile(r"\s*#\s*([A-Za-z_]\w*)?\s*(.*?)\s*\Z", re.S)
_DEFINE_RE = re.compile(r"([A-Za-z_]\w*)(\(?)(.*)\Z", re.S)

_CONDITIONAL_KINDS = frozenset({"if", "ifdef", "ifndef", "elif", "else", "endif"})


@dataclass(frozen=True)
class BranchArm:
    kind: str  # "if" | "ifdef" | "ifndef" | "elif" | "else"
    condition: str | None  # None for else
    line: int
    taken: bool | None  # None when the group sits in an inactive region


@dataclass(frozen=True)
class ConditionalGroup:
    arms: tuple[BranchArm, ...]
    start_line: int
    end_line: int
    evaluated: bool


@dataclass(frozen=True)
class BranchReport:
    groups: tuple[ConditionalGroup, ...]
    retained_ranges: tuple[tuple[int, int], ...]  # 1-based inclusive line spans
    retained_text: str


@dataclass
class _LogicalLine:
    text: str
    start: int
    end: int


def _logical_lines(physical: list[str]) -> list[_LogicalLine]:
    out: list[_LogicalLine] = []
    i = 0
    while i < len(physical):
        start = i
        parts = []
        while i < len(physical) - 1 and physical[i].endswith("\\"):
            parts.append(physical[i][:-1])
            i += 1
        parts.append(physical[i])
        out.append(_LogicalLine("".join(parts), start + 1, i + 1))
        i += 1
    return out


def _strip_comments(lines: list[_LogicalLine]) -> list[str]:
    stripped = []
    in_block = False
    block_start = 0
    for line in lines:
        text = line.text
        res = []
        i = 0
        n = len(text)
        while i < n:
            c = text[i]
            if in_block:
                if c == "*" and i + 1 < n and text[i + 1] == "/":
                    in_block = False
                    res.append(" ")
                    i += 2
                else:
                    i += 1
            elif c == "/" and i + 1 < n and text[i + 1] == "/":
                break
            elif c == "/" and i + 1 < n and text[i + 1] == "*":
                in_block = True
                block_start = line.start
                i += 2
            elif c in "\"'":
                quote = c
                res.append(c)
                i += 1
                while i < n:
                    res.append(text[i])
                    if text[i] == "\\" and i + 1 < n:
                        res.append(text[i + 1])
                        i += 2
                        continue
                    if text[i] == quote:
                        i += 1
                        break
                    i += 1
            else:
                res.append(c)
                i += 1
        stripped.append("".join(res))
    if in_block:
        raise ConditionalStructureError("unterminated block comment", block_start)
    return stripped


@dataclass
class _Frame:
    arms: list[BranchArm]
    start_line: int
    evaluated: bool  # context was active when the group opened
    taken_seen: bool = False
    in_else: bool = False
    active: bool = False


def _begin_arm(
    frame: _Frame, kind: str, condition: str | None, line: int, env: MacroEnv
) -> None:
    if not frame.evaluated:
        taken: bool | None = None
        frame.active = False
    elif frame.taken_seen:
        taken = False
        frame.active = False
    else:
        if kind == "else":
            taken = True
        elif kind == "ifdef":
            taken = env.defined(condition or "")
        elif kind == "ifndef":
            taken = not env.defined(condition or "")
        else:  # if / elif
            try:
                taken = bool(eval_condition(env, condition or ""))
            except ConditionalStructureError:
                raise
            except PreprocessorError as exc:
                raise type(exc)(f"line {line}: {exc}") from exc
        frame.active = taken
        if taken:
            frame.taken_seen = True
    frame.arms.append(BranchArm(kind, condition, line, taken))


def _require_name(rest: str, kind: str, line: int) -> str:
    m = re.match(r"([A-Za-z_]\w*)\s*\Z", rest)
    if m is None:
        raise ConditionalStructureError(f"#{kind} needs a single macro name", line)
    return m.group(1)


def active_branches(env: MacroEnv, source: str) -> BranchReport:
    """Scan well-formed conditional structure, evaluate conditions in
    active regions, and report taken arms plus the retained line spans.

    ``#define``/``#undef`` lines in active regions update a working copy
    of the environment (provenance "source") and are retained, as is any
    other non-conditional line in an active region.  Conditional
    directive lines themselves are never retained.
    """
    physical = source.split("\n")
    if physical and physical[-1] == "":
        physical.pop()
    logical = _logical_lines(physical)
    stripped = _strip_comments(logical)

    env_work = env
    frames: list[_Frame] = []
    groups: list[ConditionalGroup] = []
    retained: list[tuple[int, int]] = []

    def context_active() -> bool:
        return frames[-1].active if frames else True

    def retain(line: _LogicalLine) -> None:
        if retained and retained[-1][1] + 1 == line.start:
            retained[-1] = (retained[-1][0], line.end)
        else:
            retained.append((line.start, line.end))

    for line, text in zip(logical, stripped):
        m = _DIRECTIVE_RE.match(text) if text.lstrip().startswith("#") else None
        kind = m.group(1) if m else None
        if m is None or kind not in _CONDITIONAL_KINDS:
            if not context_active():
                continue
            if kind == "define":
                dm = _DEFINE_RE.match(m.group(2))
                if dm is None:
                    raise ConditionalStructureError("malformed #define", line.start)
                name, paren, body = dm.groups()
                env_work = env_work.with_define(
                    name,
                    (paren + body).strip() if paren else body.strip(),
                    SOURCE,
                    function_like=bool(paren),
                )
            elif kind == "undef":
                env_work = env_work.without(_require_name(m.group(2), "undef", line.start))
            retain(line)
            continue

        rest = m.group(2)
        if kind in ("if", "ifdef", "ifndef"):
            frame = _Frame(arms=[], start_line=line.start, evaluated=context_active())
            frames.append(frame)
            condition = (
                _require_name(rest, kind, line.start) if kind != "if" else rest
            )
            _begin_arm(frame, kind, condition, line.start, env_work)
        elif kind == "elif":
            if not frames:
                raise ConditionalStructureError("#elif without matching #if", line.start)
            if frames[-1].in_else:
                raise ConditionalStructureError("#elif after #else", line.start)
            _begin_arm(frames[-1], "elif", rest, line.start, env_work)
        elif kind == "else":
            if not frames:
                raise ConditionalStructureError("#else without matching #if", line.start)
            if frames[-1].in_else:
                raise ConditionalStructureError("duplicate #else", line.start)
            frames[-1].in_else = True
            _begin_arm(frames[-1], "else", None, line.start, env_work)
        elif kind == "endif":
            if not frames:
                raise ConditionalStructureError("#endif without matching #if", line.start)
            frame = frames.pop()
            groups.append(
                ConditionalGroup(
                    arms=tuple(frame.arms),
                    start_line=frame.start_line,
                    end_line=line.end,
                    evaluated=frame.evaluated,
                )
            )

    if frames:
        raise ConditionalStructureError(
            "unterminated conditional", frames[-1].start_line
        )

    groups.sort(key=lambda g: g.start_line)
    lines_out: list[str] = []
    for start, end in retained:
        lines_out.extend(physical[start - 1 : end])
    retained_text = "".join(l + "\n" for l in lines_out)
    return BranchReport(
        groups=tuple(groups),
        retained_ranges=tuple(retained),
        retained_text=retained_text,
    )
