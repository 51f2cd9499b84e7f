"""Canonical text for each parsed category.

Printing is deterministic with fixed spacing, and parsing the output of
print yields a structurally equal value.  Parentheses are emitted only
where precedence requires them.
"""

from __future__ import annotations

from typing import Union

from .. import causality
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
    IntLit,
    ListExpr,
    MsgLit,
    OutExpr,
    PatAny,
    PatEmpty,
    PatLiteral,
    PatMsg,
    Pattern,
    Transition,
    VarRef,
)
from ..network import NetworkSpec, Wire
from ..streams import EventStream, Message, TimedStream


def _interval_text(interval) -> str:
    return "<" + ",".join(m.key() for m in interval) + ">"


def print_stream(s: Union[TimedStream, EventStream]) -> str:
    if not s.intervals:
        return "empty"
    return " ".join(_interval_text(interval) for interval in s.intervals)


# Precedence: atoms bind tightest, then !, &, |.
_ATOM, _NOT, _AND, _OR = 4, 3, 2, 1


def _prop_text(p: causality.PropertyExpr, need: int) -> str:
    if isinstance(p, causality.Occurs):
        text, prec = f"occurs({p.sort}) in {p.stream}", _ATOM
    elif isinstance(p, causality.AlwaysBeforeFirst):
        text, prec = f"first {p.sort_a} before {p.sort_b} in {p.stream}", _ATOM
    elif isinstance(p, causality.AlwaysBeforeEach):
        text, prec = f"each {p.sort_b} after {p.sort_a} in {p.stream}", _ATOM
    elif isinstance(p, causality.OccursBefore):
        text = (f"ci({p.stream_a},{p.index_a}) before "
                f"ci({p.stream_b},{p.index_b})")
        prec = _ATOM
    elif isinstance(p, causality.Not):
        text, prec = "!" + _prop_text(p.operand, _NOT), _NOT
    elif isinstance(p, causality.And):
        text = f"{_prop_text(p.left, _AND)} & {_prop_text(p.right, _AND + 1)}"
        prec = _AND
    elif isinstance(p, causality.Or):
        text = f"{_prop_text(p.left, _OR)} | {_prop_text(p.right, _OR + 1)}"
        prec = _OR
    else:
        raise TypeError(f"not a property expression: {p!r}")
    if prec < need:
        return f"({text})"
    return text


def print_property(p: causality.PropertyExpr) -> str:
    return _prop_text(p, 0)


def _expr_text(e: Expr, need: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, MsgLit):
        return e.message.key()
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, BinOp):
        text = f"{_expr_text(e.left, 1)} {e.op} {_expr_text(e.right, 2)}"
        if need > 1:
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {e!r}")


def _pattern_text(pat: Pattern) -> str:
    if isinstance(pat, PatEmpty):
        return "<>"
    if isinstance(pat, PatAny):
        return "any"
    if isinstance(pat, PatMsg):
        return f"msg({pat.var})"
    if isinstance(pat, PatLiteral):
        return _interval_text(pat.items)
    raise TypeError(f"not a pattern: {pat!r}")


def _out_text(out: OutExpr) -> str:
    if isinstance(out, ChannelCopy):
        return out.channel
    if isinstance(out, ListExpr):
        return "<" + ",".join(_expr_text(item) for item in out.items) + ">"
    raise TypeError(f"not an output expression: {out!r}")


def _asm_text(a: AsmExpr, need: int) -> str:
    if isinstance(a, AsmTrue):
        text, prec = "true", _ATOM
    elif isinstance(a, AsmPattern):
        text, prec = f"{a.channel} = {_pattern_text(a.pattern)}", _ATOM
    elif isinstance(a, AsmNot):
        text, prec = "!" + _asm_text(a.operand, _NOT), _NOT
    elif isinstance(a, AsmAnd):
        text = f"{_asm_text(a.left, _AND)} & {_asm_text(a.right, _AND + 1)}"
        prec = _AND
    elif isinstance(a, AsmOr):
        text = f"{_asm_text(a.left, _OR)} | {_asm_text(a.right, _OR + 1)}"
        prec = _OR
    else:
        raise TypeError(f"not an assumption expression: {a!r}")
    if prec < need:
        return f"({text})"
    return text


def _guard_atom_text(atom) -> str:
    if isinstance(atom, ChannelPattern):
        return f"{atom.channel} = {_pattern_text(atom.pattern)}"
    if isinstance(atom, Compare):
        return f"{_expr_text(atom.left)} {atom.op} {_expr_text(atom.right)}"
    raise TypeError(f"not a guard atom: {atom!r}")


def _transition_text(t: Transition) -> str:
    segs = ["trans"]
    if t.guard:
        segs.append(", ".join(_guard_atom_text(a) for a in t.guard))
    segs.append("==>")
    if t.outputs:
        segs.append(", ".join(f"{ch} = {_out_text(o)}" for ch, o in t.outputs))
    if t.updates:
        segs.append(";")
        segs.append(", ".join(f"{v} := {_expr_text(e)}" for v, e in t.updates))
    return " ".join(segs)


def _init_text(value) -> str:
    if isinstance(value, Message):
        return value.key()
    return str(value)


def print_component(c: ComponentSpec) -> str:
    lines = [f"component {c.name}"]
    if c.inputs:
        lines.append(f"  in {', '.join(c.inputs)}")
    if c.outputs:
        lines.append(f"  out {', '.join(c.outputs)}")
    for v in c.state_vars:
        lines.append(f"  state {v.name} := {_init_text(v.init)}")
    if c.assumption != AsmTrue():
        lines.append(f"  asm {_asm_text(c.assumption, 0)}")
    for g in c.guarantees:
        lines.append(f"  gar {print_property(g)}")
    for t in c.transitions:
        lines.append(f"  {_transition_text(t)}")
    lines.append("end")
    return "\n".join(lines)


def _wire_text(w: Wire) -> str:
    text = f"  wire {w.src} -> {w.dst}"
    if w.delayed:
        text += " delayed"
        if w.initial:
            text += f" {_interval_text(w.initial)}"
    return text


def print_network(n: NetworkSpec) -> str:
    blocks = [print_component(d) for d in n.definitions]
    lines = [f"net {n.name}"]
    if n.external_inputs:
        lines.append(f"  in {', '.join(n.external_inputs)}")
    if n.external_outputs:
        lines.append(f"  out {', '.join(n.external_outputs)}")
    for inst in n.instances:
        lines.append(f"  use {inst.name} = {inst.component.name}")
    for w in n.wires:
        lines.append(_wire_text(w))
    lines.append("end")
    blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def to_text(value) -> str:
    """Canonical form of any printable value."""
    if isinstance(value, (TimedStream, EventStream)):
        return print_stream(value)
    if isinstance(value, ComponentSpec):
        return print_component(value)
    if isinstance(value, NetworkSpec):
        return print_network(value)
    return print_property(value)
