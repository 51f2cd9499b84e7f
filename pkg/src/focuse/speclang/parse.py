"""Recursive-descent parsers for streams, properties, components, nets.

Single-token lookahead throughout.  Stream and property parsing fail
fast on the first problem; component and network parsing recover at
clause boundaries so one file can report several diagnostics.  Nesting
depth is capped so hostile input cannot blow the stack, and the number
of reported diagnostics is bounded so garbage costs linear time.

Name rules: declared names (channels, state variables, instances,
component and net names, pattern variables) must be plain identifiers
and may not be reserved words.  Inside angle brackets every word is a
message name, reserved or not; output-list words resolve to a variable
only when one of that name is in scope.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Set, Tuple

from .. import causality, components, network
from ..components import (
    AsmAnd,
    AsmExpr,
    AsmNot,
    AsmOr,
    AsmPattern,
    AsmTrue,
    BinOp,
    ChannelCopy,
    ChannelPattern,
    Compare,
    ComponentSpec,
    Expr,
    GuardAtom,
    IntLit,
    ListExpr,
    MsgLit,
    OutExpr,
    PatAny,
    PatEmpty,
    PatLiteral,
    PatMsg,
    Pattern,
    StateVar,
    Transition,
    VarRef,
    INT_BOUND,
)
from ..diagnostics import (
    BAD_INT,
    EMPTY_INPUT,
    EMPTY_INTERVAL,
    ENCODING,
    EXPECTED,
    Diagnostic,
    NEST_DEPTH,
    ParseResult,
    RESERVED_NAME,
    SourceSpan,
    TOO_MANY_ERRORS,
    TRAILING_INPUT,
    UNKNOWN_COMPONENT,
    error,
    has_errors,
)
from ..network import Endpoint, Instance, NetworkSpec, Wire
from ..streams import EventStream, Message, TimedStream
from .lexer import EOF, INT, WORD, Token, tokenize

MAX_NEST = 64
_MAX_DIAGNOSTICS = 200

# Tokens that reliably start a new clause; error recovery skips to one.
_SYNC_WORDS = frozenset(
    ["in", "out", "state", "asm", "gar", "trans", "end",
     "component", "net", "use", "wire"]
)


class _Abort(Exception):
    """Give up on the current construct; recovery may continue."""


class _Bail(Exception):
    """Give up on the whole input (diagnostic budget exhausted)."""


def _found(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    return f"'{tok.text}'"


class _P:
    def __init__(self, tokens: "List[Token]", diags: "List[Diagnostic]") -> None:
        self.toks = tokens
        self.i = 0
        self.diags = diags
        self.bailed = False

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, ahead: int = 1) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def at(self, kind: str) -> bool:
        return self.cur.kind == kind

    def at_word(self, lexeme: str) -> bool:
        return self.cur.kind == WORD and self.cur.text == lexeme

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != EOF:
            self.i += 1
        return tok

    def err(self, message: str, code: str = EXPECTED,
            span: Optional[SourceSpan] = None) -> None:
        if self.bailed:
            raise _Bail()
        self.diags.append(error(span or self.cur.span, message, code))
        if len(self.diags) >= _MAX_DIAGNOSTICS:
            self.diags.append(error(
                self.cur.span, "too many errors; giving up", TOO_MANY_ERRORS
            ))
            self.bailed = True
            raise _Bail()

    def fail(self, message: str, code: str = EXPECTED,
             span: Optional[SourceSpan] = None) -> None:
        self.err(message, code, span)
        raise _Abort()

    def expect(self, kind: str, what: str) -> Token:
        if self.at(kind):
            return self.advance()
        self.fail(f"expected {what}, found {_found(self.cur)}")
        raise AssertionError  # unreachable

    def expect_word(self, lexeme: str) -> Token:
        if self.at_word(lexeme):
            return self.advance()
        self.fail(f"expected '{lexeme}', found {_found(self.cur)}")
        raise AssertionError

    def ident(self, what: str) -> Token:
        """A declared name: a word that is not reserved."""
        if self.cur.kind != WORD:
            self.fail(f"expected {what}, found {_found(self.cur)}")
        if self.cur.is_reserved:
            self.fail(
                f"{what} may not be the reserved word '{self.cur.text}'",
                RESERVED_NAME,
            )
        return self.advance()

    def word_any(self, what: str) -> Token:
        """A name position where reserved words are allowed."""
        if self.cur.kind != WORD:
            self.fail(f"expected {what}, found {_found(self.cur)}")
        return self.advance()

    def int_value(self) -> int:
        tok = self.expect(INT, "a number")
        if len(tok.text) > 19 or int(tok.text) >= INT_BOUND:
            self.fail("integer literal out of range", BAD_INT, tok.span)
        return int(tok.text)

    def expect_end(self, what: str) -> None:
        if not self.at(EOF):
            self.err(f"unexpected input after {what}", TRAILING_INPUT)


def _result(text: str):
    tokens, diags = tokenize(text)
    return _P(tokens, diags), ParseResult(None, diags)


def decode_source(data: bytes) -> "Tuple[Optional[str], List[Diagnostic]]":
    """UTF-8 decode with a positioned diagnostic instead of an exception."""
    try:
        return data.decode("utf-8"), []
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start].decode("utf-8", "replace")
        line = prefix.count("\n") + 1
        column = len(prefix) - (prefix.rfind("\n") + 1) + 1
        return None, [error(
            SourceSpan(line, column, 1),
            f"input is not valid UTF-8 at byte {exc.start}",
            ENCODING,
        )]


# --- streams -----------------------------------------------------------------

def _bracket_message(p: _P) -> Message:
    name = p.word_any("a message name")
    sort = None
    if p.at(":"):
        p.advance()
        sort = p.word_any("a sort name").text
    return Message(name.text, sort)


def _interval(p: _P, reject_empty: bool) -> "tuple[Message, ...]":
    open_tok = p.expect("<", "'<'")
    if p.at(">"):
        if reject_empty:
            p.fail(
                "event streams cannot contain the empty interval '<>'",
                EMPTY_INTERVAL,
                open_tok.span,
            )
        p.advance()
        return ()
    items = [_bracket_message(p)]
    while True:
        if p.at(","):
            p.advance()
            items.append(_bracket_message(p))
        elif p.at(">"):
            p.advance()
            return tuple(items)
        else:
            p.fail(f"expected ',' or '>', found {_found(p.cur)}")


def _intervals(p: _P, reject_empty: bool) -> "List[tuple[Message, ...]]":
    if p.at(EOF):
        p.fail("empty input: expected a stream or 'empty'", EMPTY_INPUT)
    if p.at_word("empty"):
        p.advance()
        p.expect_end("'empty'")
        return []
    out = []
    while not p.at(EOF):
        out.append(_interval(p, reject_empty))
    return out


def parse_stream(text: str) -> ParseResult:
    """Timed-stream literal: whitespace-separated intervals or 'empty'."""
    p, result = _result(text)
    if not result.ok:
        return result
    try:
        result.value = TimedStream(_intervals(p, reject_empty=False))
    except (_Abort, _Bail):
        pass
    if not result.ok:
        result.value = None
    return result


def parse_event_stream(text: str) -> ParseResult:
    """Same literal grammar, but the empty interval is rejected."""
    p, result = _result(text)
    if not result.ok:
        return result
    try:
        result.value = EventStream(_intervals(p, reject_empty=True))
    except (_Abort, _Bail):
        pass
    if not result.ok:
        result.value = None
    return result


# --- properties --------------------------------------------------------------

def _stream_ref(p: _P) -> str:
    base = p.word_any("a stream name")
    if p.at("."):
        p.advance()
        channel = p.word_any("a channel name")
        return f"{base.text}.{channel.text}"
    return base.text


def _prop_atom(p: _P) -> causality.PropertyExpr:
    if p.at_word("occurs"):
        p.advance()
        p.expect("(", "'('")
        sort = p.word_any("a sort name")
        p.expect(")", "')'")
        p.expect_word("in")
        return causality.Occurs(sort.text, _stream_ref(p))
    if p.at_word("first"):
        p.advance()
        sort_a = p.word_any("a sort name")
        p.expect_word("before")
        sort_b = p.word_any("a sort name")
        p.expect_word("in")
        return causality.AlwaysBeforeFirst(sort_a.text, sort_b.text, _stream_ref(p))
    if p.at_word("each"):
        p.advance()
        sort_b = p.word_any("a sort name")
        p.expect_word("after")
        sort_a = p.word_any("a sort name")
        p.expect_word("in")
        return causality.AlwaysBeforeEach(sort_a.text, sort_b.text, _stream_ref(p))
    if p.at_word("ci"):
        p.advance()
        p.expect("(", "'('")
        ref_a = _stream_ref(p)
        p.expect(",", "','")
        index_a = p.int_value()
        p.expect(")", "')'")
        p.expect_word("before")
        p.expect_word("ci")
        p.expect("(", "'('")
        ref_b = _stream_ref(p)
        p.expect(",", "','")
        index_b = p.int_value()
        p.expect(")", "')'")
        return causality.OccursBefore(ref_a, index_a, ref_b, index_b)
    p.fail(
        "expected a property ('occurs', 'first', 'each', 'ci', '!' or '('), "
        f"found {_found(p.cur)}"
    )
    raise AssertionError


def _prop_unary(p: _P, depth: int) -> causality.PropertyExpr:
    if depth > MAX_NEST:
        p.fail("property nesting too deep", NEST_DEPTH)
    if p.at("!"):
        p.advance()
        return causality.Not(_prop_unary(p, depth + 1))
    if p.at("("):
        p.advance()
        inner = _prop_or(p, depth + 1)
        p.expect(")", "')'")
        return inner
    return _prop_atom(p)


def _prop_and(p: _P, depth: int) -> causality.PropertyExpr:
    left = _prop_unary(p, depth)
    while p.at("&"):
        p.advance()
        left = causality.And(left, _prop_unary(p, depth))
    return left


def _prop_or(p: _P, depth: int) -> causality.PropertyExpr:
    left = _prop_and(p, depth)
    while p.at("|"):
        p.advance()
        left = causality.Or(left, _prop_and(p, depth))
    return left


def parse_property(text: str) -> ParseResult:
    """One property expression; precedence is ! over & over |."""
    p, result = _result(text)
    if not result.ok:
        return result
    try:
        result.value = _prop_or(p, 0)
        p.expect_end("property")
    except (_Abort, _Bail):
        pass
    if not result.ok:
        result.value = None
    return result


def parse_properties(text: str) -> ParseResult:
    """A property file: one property per line, '--' comments allowed."""
    diags: "List[Diagnostic]" = []
    props: "List[causality.PropertyExpr]" = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        tokens, ldiags = tokenize(line, start_line=lineno)
        diags.extend(ldiags)
        if has_errors(ldiags):
            continue
        if len(tokens) == 1:  # EOF only: blank or comment line
            continue
        p = _P(tokens, diags)
        try:
            prop = _prop_or(p, 0)
            p.expect_end("property")
            props.append(prop)
        except (_Abort, _Bail):
            pass
    result = ParseResult(None, diags)
    if result.ok:
        result.value = props
    return result


# --- component bodies ---------------------------------------------------------

def _recover(p: _P, start: int) -> None:
    if p.i == start:
        p.advance()
    while not p.at(EOF):
        if p.cur.kind == WORD and p.cur.text in _SYNC_WORDS:
            return
        p.advance()


def _pattern(p: _P) -> Pattern:
    if p.at("<"):
        items = _interval(p, reject_empty=False)
        if not items:
            return PatEmpty()
        return PatLiteral(items)
    if p.at_word("any"):
        p.advance()
        return PatAny()
    if p.at_word("msg"):
        p.advance()
        p.expect("(", "'('")
        var = p.ident("a pattern variable")
        p.expect(")", "')'")
        return PatMsg(var.text)
    p.fail(f"expected a pattern ('<...>', 'msg(x)' or 'any'), found {_found(p.cur)}")
    raise AssertionError


def _expr_term(p: _P, scope: "Set[str]", depth: int) -> Expr:
    if p.at(INT):
        return IntLit(p.int_value())
    if p.at("-"):
        p.advance()
        return IntLit(-p.int_value())
    if p.at("("):
        p.advance()
        inner = _expr(p, scope, depth + 1)
        p.expect(")", "')'")
        return inner
    if p.cur.kind == WORD:
        if p.cur.is_reserved:
            p.fail(
                f"'{p.cur.text}' is reserved and cannot appear in an expression",
                RESERVED_NAME,
            )
        tok = p.advance()
        if tok.text in scope:
            return VarRef(tok.text)
        sort = None
        if p.at(":"):
            p.advance()
            sort = p.word_any("a sort name").text
        return MsgLit(Message(tok.text, sort))
    p.fail(f"expected an expression, found {_found(p.cur)}")
    raise AssertionError


def _expr(p: _P, scope: "Set[str]", depth: int) -> Expr:
    if depth > MAX_NEST:
        p.fail("expression nesting too deep", NEST_DEPTH)
    left = _expr_term(p, scope, depth)
    while p.at("+") or p.at("-"):
        op = p.advance().kind
        left = BinOp(op, left, _expr_term(p, scope, depth))
    return left


_CMP_OPS = ("==", "!=", "<=", ">=", "<", ">")


def _guard_atom(p: _P, scope: "Set[str]") -> GuardAtom:
    if p.cur.kind == WORD and p.peek().kind == "=":
        channel = p.ident("a channel name")
        p.advance()  # '='
        pattern = _pattern(p)
        if isinstance(pattern, PatMsg):
            scope.add(pattern.var)
        return ChannelPattern(channel.text, pattern)
    left = _expr(p, scope, 0)
    if p.cur.kind not in _CMP_OPS:
        p.fail(f"expected a comparison operator, found {_found(p.cur)}")
    op = p.advance().kind
    right = _expr(p, scope, 0)
    return Compare(op, left, right)


def _at_clause_end(p: _P) -> bool:
    return p.at(EOF) or (p.cur.kind == WORD and p.cur.text in _SYNC_WORDS)


def _out_element(p: _P, scope: "Set[str]") -> Expr:
    tok = p.word_any("a message name or variable")
    if not tok.is_reserved and tok.text in scope:
        return VarRef(tok.text)
    sort = None
    if p.at(":"):
        p.advance()
        sort = p.word_any("a sort name").text
    return MsgLit(Message(tok.text, sort))


def _out_expr(p: _P, scope: "Set[str]") -> OutExpr:
    if p.at("<"):
        p.advance()
        if p.at(">"):
            p.advance()
            return ListExpr(())
        items = [_out_element(p, scope)]
        while True:
            if p.at(","):
                p.advance()
                items.append(_out_element(p, scope))
            elif p.at(">"):
                p.advance()
                return ListExpr(tuple(items))
            else:
                p.fail(f"expected ',' or '>', found {_found(p.cur)}")
    if p.cur.kind == WORD:
        channel = p.ident("an input channel name")
        return ChannelCopy(channel.text)
    p.fail(f"expected '<...>' or an input channel name, found {_found(p.cur)}")
    raise AssertionError


def _transition(p: _P, state_names: "Set[str]") -> Transition:
    scope = set(state_names)
    guard: "List[GuardAtom]" = []
    if not p.at("==>"):
        guard.append(_guard_atom(p, scope))
        while p.at(","):
            p.advance()
            guard.append(_guard_atom(p, scope))
    p.expect("==>", "'==>'")
    outputs: "List[tuple[str, OutExpr]]" = []
    updates: "List[tuple[str, Expr]]" = []
    if not _at_clause_end(p) and not p.at(";"):
        while True:
            channel = p.ident("an output channel name")
            p.expect("=", "'='")
            outputs.append((channel.text, _out_expr(p, scope)))
            if p.at(","):
                p.advance()
            else:
                break
    if p.at(";"):
        p.advance()
        if not _at_clause_end(p):
            while True:
                var = p.ident("a state variable name")
                p.expect(":=", "':='")
                updates.append((var.text, _expr(p, scope, 0)))
                if p.at(","):
                    p.advance()
                else:
                    break
    return Transition(tuple(guard), tuple(outputs), tuple(updates))


def _asm_atom(p: _P, depth: int) -> AsmExpr:
    if depth > MAX_NEST:
        p.fail("assumption nesting too deep", NEST_DEPTH)
    if p.at("!"):
        p.advance()
        return AsmNot(_asm_atom(p, depth + 1))
    if p.at("("):
        p.advance()
        inner = _asm_or(p, depth + 1)
        p.expect(")", "')'")
        return inner
    if p.at_word("true"):
        p.advance()
        return AsmTrue()
    if p.cur.kind == WORD:
        channel = p.ident("an input channel name")
        p.expect("=", "'='")
        return AsmPattern(channel.text, _pattern(p))
    p.fail(
        "expected an assumption ('true', a channel pattern, '!' or '('), "
        f"found {_found(p.cur)}"
    )
    raise AssertionError


def _asm_and(p: _P, depth: int) -> AsmExpr:
    left = _asm_atom(p, depth)
    while p.at("&"):
        p.advance()
        left = AsmAnd(left, _asm_atom(p, depth))
    return left


def _asm_or(p: _P, depth: int) -> AsmExpr:
    left = _asm_and(p, depth)
    while p.at("|"):
        p.advance()
        left = AsmOr(left, _asm_and(p, depth))
    return left


_CLAUSE_ORDER = {"in": 0, "out": 1, "state": 2, "asm": 3, "gar": 4, "trans": 5}


def _name_list(p: _P, what: str, names: "List[str]",
               spans: "Dict[object, SourceSpan]") -> None:
    while True:
        tok = p.ident(what)
        names.append(tok.text)
        spans.setdefault(tok.text, tok.span)
        if p.at(","):
            p.advance()
        else:
            return


def _init_value(p: _P):
    if p.at(INT):
        return p.int_value()
    if p.at("-"):
        p.advance()
        return -p.int_value()
    if p.cur.kind == WORD:
        if p.cur.is_reserved:
            p.fail(
                f"'{p.cur.text}' is reserved and cannot be an initial value",
                RESERVED_NAME,
            )
        tok = p.advance()
        sort = None
        if p.at(":"):
            p.advance()
            sort = p.word_any("a sort name").text
        return Message(tok.text, sort)
    p.fail(f"expected an integer or message initial value, found {_found(p.cur)}")
    raise AssertionError


def _component_def(p: _P) -> Optional[ComponentSpec]:
    p.expect_word("component")
    name_tok = p.ident("a component name")
    spans: "Dict[object, SourceSpan]" = {name_tok.text: name_tok.span}
    inputs: "List[str]" = []
    outputs: "List[str]" = []
    state_vars: "List[StateVar]" = []
    assumption: AsmExpr = AsmTrue()
    asm_seen = False
    guarantees: "List[causality.PropertyExpr]" = []
    transitions: "List[Transition]" = []
    last_clause = -1
    while True:
        if p.at(EOF):
            p.err(f"expected 'end' to close component {name_tok.text!r}")
            break
        if p.at_word("end"):
            p.advance()
            break
        keyword = p.cur
        if keyword.kind != WORD or keyword.text not in _CLAUSE_ORDER:
            start = p.i
            p.err(
                "expected a clause ('in', 'out', 'state', 'asm', 'gar', "
                f"'trans') or 'end', found {_found(keyword)}"
            )
            _recover(p, start)
            if p.at_word("component") or p.at_word("net"):
                break
            continue
        rank = _CLAUSE_ORDER[keyword.text]
        if rank < last_clause:
            p.err(f"'{keyword.text}' clause appears after a later clause kind")
        last_clause = max(last_clause, rank)
        start = p.i
        try:
            p.advance()
            if keyword.text == "in":
                _name_list(p, "an input channel name", inputs, spans)
            elif keyword.text == "out":
                _name_list(p, "an output channel name", outputs, spans)
            elif keyword.text == "state":
                while True:
                    tok = p.ident("a state variable name")
                    p.expect(":=", "':='")
                    state_vars.append(StateVar(tok.text, _init_value(p)))
                    spans.setdefault(tok.text, tok.span)
                    if p.at(","):
                        p.advance()
                    else:
                        break
            elif keyword.text == "asm":
                expr = _asm_or(p, 0)
                if asm_seen:
                    p.err("duplicate 'asm' clause", span=keyword.span)
                else:
                    assumption = expr
                    asm_seen = True
                    spans[("asm",)] = keyword.span
            elif keyword.text == "gar":
                spans[("gar", len(guarantees))] = keyword.span
                guarantees.append(_prop_or(p, 0))
            else:  # trans
                spans[("trans", len(transitions))] = keyword.span
                transitions.append(
                    _transition(p, {v.name for v in state_vars})
                )
        except _Abort:
            _recover(p, start)
            if p.at_word("component") or p.at_word("net"):
                break
    return ComponentSpec(
        name=name_tok.text,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        state_vars=tuple(state_vars),
        assumption=assumption,
        transitions=tuple(transitions),
        guarantees=tuple(guarantees),
        decl_spans=spans,
    )


def parse_component(text: str) -> ParseResult:
    """One component definition per file."""
    p, result = _result(text)
    if not result.ok:
        return result
    spec = None
    try:
        spec = _component_def(p)
        p.expect_end("component definition")
    except (_Abort, _Bail):
        pass
    if result.ok and spec is not None:
        result.diagnostics.extend(components.validate(spec))
    result.value = spec if result.ok else None
    return result


# --- networks ----------------------------------------------------------------

_NET_CLAUSE_ORDER = {"in": 0, "out": 1, "use": 2, "wire": 3}


def _endpoint(p: _P) -> "Tuple[Endpoint, SourceSpan]":
    base = p.ident("a channel or instance name")
    if p.at("."):
        p.advance()
        channel = p.ident("a channel name")
        return Endpoint(base.text, channel.text), base.span
    return Endpoint(None, base.text), base.span


def _net_block(p: _P, definitions: "List[ComponentSpec]") -> Optional[NetworkSpec]:
    by_name = {}
    for d in definitions:
        by_name.setdefault(d.name, d)
    p.expect_word("net")
    name_tok = p.ident("a network name")
    spans: "Dict[object, SourceSpan]" = {name_tok.text: name_tok.span}
    ext_in: "List[str]" = []
    ext_out: "List[str]" = []
    instances: "List[Instance]" = []
    wires: "List[Wire]" = []
    last_clause = -1
    while True:
        if p.at(EOF):
            p.err(f"expected 'end' to close net {name_tok.text!r}")
            break
        if p.at_word("end"):
            p.advance()
            break
        keyword = p.cur
        if keyword.kind != WORD or keyword.text not in _NET_CLAUSE_ORDER:
            start = p.i
            p.err(
                "expected a clause ('in', 'out', 'use', 'wire') or 'end', "
                f"found {_found(keyword)}"
            )
            _recover(p, start)
            continue
        rank = _NET_CLAUSE_ORDER[keyword.text]
        if rank < last_clause:
            p.err(f"'{keyword.text}' clause appears after a later clause kind")
        last_clause = max(last_clause, rank)
        start = p.i
        try:
            p.advance()
            if keyword.text == "in":
                _name_list(p, "an external input name", ext_in, spans)
            elif keyword.text == "out":
                _name_list(p, "an external output name", ext_out, spans)
            elif keyword.text == "use":
                inst_tok = p.ident("an instance name")
                p.expect("=", "'='")
                type_tok = p.ident("a component name")
                spans.setdefault(inst_tok.text, inst_tok.span)
                spec = by_name.get(type_tok.text)
                if spec is None:
                    p.err(
                        f"unknown component {type_tok.text!r}",
                        UNKNOWN_COMPONENT,
                        type_tok.span,
                    )
                else:
                    instances.append(Instance(inst_tok.text, spec))
            else:  # wire
                src, src_span = _endpoint(p)
                p.expect("->", "'->'")
                dst, dst_span = _endpoint(p)
                delayed = False
                initial: "tuple[Message, ...]" = ()
                if p.at_word("delayed"):
                    p.advance()
                    delayed = True
                    if p.at("<"):
                        initial = _interval(p, reject_empty=False)
                wire = Wire(src, dst, delayed, initial)
                wires.append(wire)
                spans.setdefault(wire, keyword.span)
                spans.setdefault(dst, dst_span)
        except _Abort:
            _recover(p, start)
    return NetworkSpec(
        name=name_tok.text,
        definitions=tuple(definitions),
        instances=tuple(instances),
        wires=tuple(wires),
        external_inputs=tuple(ext_in),
        external_outputs=tuple(ext_out),
        decl_spans=spans,
    )


def parse_network(text: str) -> ParseResult:
    """Component definitions followed by a single net block."""
    p, result = _result(text)
    if not result.ok:
        return result
    definitions: "List[ComponentSpec]" = []
    net = None
    try:
        while p.at_word("component"):
            start = p.i
            try:
                definitions.append(_component_def(p))
            except _Abort:
                _recover(p, start)
                if not (p.at_word("component") or p.at_word("net")):
                    break
        if not p.at_word("net"):
            p.fail(f"expected 'net', found {_found(p.cur)}")
        net = _net_block(p, definitions)
        p.expect_end("net block")
    except (_Abort, _Bail):
        pass
    if result.ok and net is not None:
        result.diagnostics.extend(network.validate(net))
    result.value = net if result.ok else None
    return result
