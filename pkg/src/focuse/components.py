"""Executable assumption-guarantee components.

A component owns input/output channels and state variables and is driven
one interval at a time: transitions are tested in declaration order and
the first whose guard matches fires.  Whatever a fired transition does
not mention falls under the implicit else-case: an unmentioned state
variable keeps its current value and an unmentioned output channel emits
the empty list.  When no transition matches at all, the whole step
defaults the same way: state unchanged, every output empty.

The assumption is a per-interval predicate over the inputs.  A violated
assumption does not stop execution; the interval is recorded so that
guarantee checking can be made vacuous from that point on (the component
only owes its guarantee while the environment honours the assumption).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import causality
from .diagnostics import (
    BAD_INIT,
    BAD_NAME,
    DUP_ASSIGN,
    DUP_BINDING,
    DUP_NAME,
    Diagnostic,
    NO_SPAN,
    NO_TRANSITIONS,
    RESERVED_NAME,
    RESERVED_WORDS,
    SourceSpan,
    UNBOUND_VAR,
    UNDECLARED_NAME,
    UNREACHABLE_TRANS,
    WRITE_TO_INPUT,
    error,
    warning,
)
from .streams import Message, TimedStream, _IDENT_RE

Value = Union[int, Message]

# State integers are bounded; arithmetic past this is an evaluation error.
INT_BOUND = 2 ** 63


class ArityError(ValueError):
    """Inputs or state maps do not cover exactly the declared names."""


class BindingError(NameError):
    """An expression referenced a variable with no binding."""


class EvalError(RuntimeError):
    """An expression could not be evaluated (type or range problem)."""


class TransitionOverlapError(RuntimeError):
    """Strict mode found several transitions whose guards all match."""


class InputLengthError(ValueError):
    """An input stream is shorter than the requested interval count."""


# --- expressions ----------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class MsgLit:
    message: Message


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # "+" or "-"
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, MsgLit, VarRef, BinOp]


# --- interval patterns ----------------------------------------------------

@dataclass(frozen=True)
class PatEmpty:
    pass


@dataclass(frozen=True)
class PatAny:
    pass


@dataclass(frozen=True)
class PatMsg:
    """Matches a singleton interval, binding its message to ``var``."""

    var: str


@dataclass(frozen=True)
class PatLiteral:
    items: "tuple[Message, ...]"


Pattern = Union[PatEmpty, PatAny, PatMsg, PatLiteral]


# --- guard atoms ----------------------------------------------------------

@dataclass(frozen=True)
class ChannelPattern:
    channel: str
    pattern: Pattern


@dataclass(frozen=True)
class Compare:
    op: str  # == != < <= > >=
    left: Expr
    right: Expr


GuardAtom = Union[ChannelPattern, Compare]


# --- output expressions ----------------------------------------------------

@dataclass(frozen=True)
class ListExpr:
    items: "tuple[Expr, ...]"


@dataclass(frozen=True)
class ChannelCopy:
    """The current interval of an input channel, forwarded whole."""

    channel: str


OutExpr = Union[ListExpr, ChannelCopy]


# --- assumption predicate ---------------------------------------------------
#
# Per-interval conditions on the inputs.  Whole-stream causality
# properties cannot talk about "the current interval", hence this small
# dedicated predicate language.

@dataclass(frozen=True)
class AsmTrue:
    pass


@dataclass(frozen=True)
class AsmPattern:
    channel: str
    pattern: Pattern


@dataclass(frozen=True)
class AsmNot:
    operand: "AsmExpr"


@dataclass(frozen=True)
class AsmAnd:
    left: "AsmExpr"
    right: "AsmExpr"


@dataclass(frozen=True)
class AsmOr:
    left: "AsmExpr"
    right: "AsmExpr"


AsmExpr = Union[AsmTrue, AsmPattern, AsmNot, AsmAnd, AsmOr]


# --- component structure ----------------------------------------------------

@dataclass(frozen=True)
class StateVar:
    name: str
    init: Value


@dataclass(frozen=True)
class Transition:
    guard: "tuple[GuardAtom, ...]" = ()
    outputs: "tuple[tuple[str, OutExpr], ...]" = ()
    updates: "tuple[tuple[str, Expr], ...]" = ()


@dataclass(frozen=True, eq=True)
class ComponentSpec:
    name: str
    inputs: "tuple[str, ...]" = ()
    outputs: "tuple[str, ...]" = ()
    state_vars: "tuple[StateVar, ...]" = ()
    assumption: AsmExpr = AsmTrue()
    transitions: "tuple[Transition, ...]" = ()
    guarantees: "tuple[causality.PropertyExpr, ...]" = ()
    # Best-effort source positions for load-time diagnostics; never part
    # of the component's identity.
    decl_spans: Dict[object, SourceSpan] = field(
        default_factory=dict, compare=False, repr=False
    )

    def initial_state(self) -> "Dict[str, Value]":
        return {v.name: v.init for v in self.state_vars}


@dataclass(frozen=True)
class StepResult:
    new_state: "Dict[str, Value]"
    outputs: "Dict[str, tuple[Message, ...]]"  # total over declared outputs
    fired_transition: Optional[int]
    assumption_violated: bool


@dataclass(frozen=True)
class RunResult:
    outputs: "Dict[str, TimedStream]"
    states: "tuple[Dict[str, Value], ...]"  # length T + 1, initial first
    violations: "tuple[int, ...]"           # intervals where the assumption failed


# --- evaluation -------------------------------------------------------------

def eval_expr(expr: Expr, env: Mapping[str, Value]) -> Value:
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, MsgLit):
        return expr.message
    if isinstance(expr, VarRef):
        try:
            return env[expr.name]
        except KeyError:
            raise BindingError(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, BinOp):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        if not isinstance(left, int) or not isinstance(right, int):
            raise EvalError(f"arithmetic {expr.op!r} needs integers")
        result = left + right if expr.op == "+" else left - right
        if abs(result) >= INT_BOUND:
            raise EvalError(f"integer out of range: {result}")
        return result
    raise TypeError(f"not an expression: {expr!r}")


def _eval_compare(cmp: Compare, env: Mapping[str, Value]) -> bool:
    left = eval_expr(cmp.left, env)
    right = eval_expr(cmp.right, env)
    if cmp.op == "==":
        return left == right
    if cmp.op == "!=":
        return left != right
    if not isinstance(left, int) or not isinstance(right, int):
        raise EvalError(f"ordering {cmp.op!r} needs integers")
    return {"<": left < right, "<=": left <= right,
            ">": left > right, ">=": left >= right}[cmp.op]


def match_pattern(
    pattern: Pattern, interval: "tuple[Message, ...]"
) -> "Optional[Dict[str, Value]]":
    """Bindings produced by matching one interval, or None on mismatch."""
    if isinstance(pattern, PatEmpty):
        return {} if not interval else None
    if isinstance(pattern, PatAny):
        return {}
    if isinstance(pattern, PatMsg):
        if len(interval) == 1:
            return {pattern.var: interval[0]}
        return None
    if isinstance(pattern, PatLiteral):
        return {} if tuple(interval) == pattern.items else None
    raise TypeError(f"not a pattern: {pattern!r}")


def _match_guard(
    transition: Transition,
    inputs: Mapping[str, "tuple[Message, ...]"],
    state: Mapping[str, Value],
) -> "Optional[Dict[str, Value]]":
    """Bindings for a matching guard, None otherwise.

    Atoms are evaluated left to right, so a comparison may use variables
    bound by an earlier pattern in the same guard.
    """
    bindings: "Dict[str, Value]" = {}
    env = dict(state)
    for atom in transition.guard:
        if isinstance(atom, ChannelPattern):
            got = match_pattern(atom.pattern, inputs[atom.channel])
            if got is None:
                return None
            bindings.update(got)
            env.update(got)
        else:
            if not _eval_compare(atom, env):
                return None
    return bindings


def eval_assumption(
    asm: AsmExpr, inputs: Mapping[str, "tuple[Message, ...]"]
) -> bool:
    if isinstance(asm, AsmTrue):
        return True
    if isinstance(asm, AsmPattern):
        return match_pattern(asm.pattern, inputs[asm.channel]) is not None
    if isinstance(asm, AsmNot):
        return not eval_assumption(asm.operand, inputs)
    if isinstance(asm, AsmAnd):
        return eval_assumption(asm.left, inputs) and eval_assumption(asm.right, inputs)
    if isinstance(asm, AsmOr):
        return eval_assumption(asm.left, inputs) or eval_assumption(asm.right, inputs)
    raise TypeError(f"not an assumption expression: {asm!r}")


def _eval_output(
    out: OutExpr,
    env: Mapping[str, Value],
    inputs: Mapping[str, "tuple[Message, ...]"],
) -> "tuple[Message, ...]":
    if isinstance(out, ChannelCopy):
        try:
            return inputs[out.channel]
        except KeyError:
            raise BindingError(f"copy from undeclared channel {out.channel!r}") from None
    items = []
    for expr in out.items:
        value = eval_expr(expr, env)
        if not isinstance(value, Message):
            raise EvalError(f"output element is not a message: {value!r}")
        items.append(value)
    return tuple(items)


def _check_totality(
    given: Mapping, declared: Sequence[str], what: str
) -> None:
    missing = [n for n in declared if n not in given]
    extra = [n for n in given if n not in declared]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {', '.join(sorted(missing))}")
        if extra:
            parts.append(f"unexpected {', '.join(sorted(extra))}")
        raise ArityError(f"{what} not total over declared names: {'; '.join(parts)}")


def step(
    spec: ComponentSpec,
    state: Mapping[str, Value],
    inputs: Mapping[str, "tuple[Message, ...]"],
    strict: bool = False,
) -> StepResult:
    """Execute one interval.

    In strict mode, more than one matching guard is an error instead of
    being resolved by declaration order.
    """
    _check_totality(inputs, spec.inputs, "inputs")
    _check_totality(state, [v.name for v in spec.state_vars], "state")

    violated = not eval_assumption(spec.assumption, inputs)

    fired: Optional[int] = None
    bindings: "Dict[str, Value]" = {}
    if strict:
        matches = []
        for idx, t in enumerate(spec.transitions):
            got = _match_guard(t, inputs, state)
            if got is not None:
                matches.append((idx, got))
        if len(matches) > 1:
            which = ", ".join(str(i) for i, _ in matches)
            raise TransitionOverlapError(f"transitions {which} all match")
        if matches:
            fired, bindings = matches[0]
    else:
        for idx, t in enumerate(spec.transitions):
            got = _match_guard(t, inputs, state)
            if got is not None:
                fired, bindings = idx, got
                break

    outputs: "Dict[str, tuple[Message, ...]]" = {ch: () for ch in spec.outputs}
    new_state = dict(state)
    if fired is not None:
        t = spec.transitions[fired]
        env = dict(state)
        env.update(bindings)
        for ch, out_expr in t.outputs:
            outputs[ch] = _eval_output(out_expr, env, inputs)
        # Updates all read the pre-step state: simultaneous assignment.
        for var, expr in t.updates:
            new_state[var] = eval_expr(expr, env)
    return StepResult(new_state, outputs, fired, violated)


def run(
    spec: ComponentSpec,
    inputs: Mapping[str, TimedStream],
    t_count: int,
    strict: bool = False,
) -> RunResult:
    """Fold step over intervals 0..t_count-1 from the declared initial state."""
    _check_totality(inputs, spec.inputs, "input streams")
    for name, stream in inputs.items():
        if len(stream) < t_count:
            raise InputLengthError(
                f"input stream {name!r} has {len(stream)} intervals, need {t_count}"
            )
    state = spec.initial_state()
    states = [dict(state)]
    collected: "Dict[str, list]" = {ch: [] for ch in spec.outputs}
    violations = []
    for t in range(t_count):
        interval_inputs = {ch: inputs[ch].intervals[t] for ch in spec.inputs}
        result = step(spec, state, interval_inputs, strict=strict)
        if result.assumption_violated:
            violations.append(t)
        for ch in spec.outputs:
            collected[ch].append(result.outputs[ch])
        state = result.new_state
        states.append(dict(state))
    out_streams = {ch: TimedStream(collected[ch]) for ch in spec.outputs}
    return RunResult(out_streams, tuple(states), tuple(violations))


def check_guarantees(
    spec: ComponentSpec,
    inputs: Mapping[str, TimedStream],
    result: RunResult,
) -> "List[causality.Verdict]":
    """Check declared guarantee properties against a recorded run.

    The guarantee is owed only while the assumption held, so recorded
    streams are truncated at the first violated interval before
    checking; behaviour from that point on cannot fail a guarantee.
    """
    cutoff = result.violations[0] if result.violations else None
    env: "Dict[str, TimedStream]" = {}
    for name, stream in inputs.items():
        env[name] = stream if cutoff is None else TimedStream(stream.intervals[:cutoff])
    for name, stream in result.outputs.items():
        env[name] = stream if cutoff is None else TimedStream(stream.intervals[:cutoff])
    return [causality.check(p, env) for p in spec.guarantees]


# --- load-time validation ----------------------------------------------------

def _span(spec: ComponentSpec, key: object) -> SourceSpan:
    return spec.decl_spans.get(key, NO_SPAN)


def _expr_vars(expr: Expr) -> "List[str]":
    if isinstance(expr, VarRef):
        return [expr.name]
    if isinstance(expr, BinOp):
        return _expr_vars(expr.left) + _expr_vars(expr.right)
    return []


def _out_expr_vars(out: OutExpr) -> "List[str]":
    if isinstance(out, ListExpr):
        return [v for item in out.items for v in _expr_vars(item)]
    return []


def _asm_channels(asm: AsmExpr) -> "List[str]":
    if isinstance(asm, AsmPattern):
        return [asm.channel]
    if isinstance(asm, AsmNot):
        return _asm_channels(asm.operand)
    if isinstance(asm, (AsmAnd, AsmOr)):
        return _asm_channels(asm.left) + _asm_channels(asm.right)
    return []


def _canonical_guard(guard: "tuple[GuardAtom, ...]") -> tuple:
    """Guard with binder names normalised, for syntactic comparison."""
    renames: "Dict[str, str]" = {}

    def rename_expr(expr: Expr) -> Expr:
        if isinstance(expr, VarRef) and expr.name in renames:
            return VarRef(renames[expr.name])
        if isinstance(expr, BinOp):
            return BinOp(expr.op, rename_expr(expr.left), rename_expr(expr.right))
        return expr

    atoms = []
    for atom in guard:
        if isinstance(atom, ChannelPattern):
            if isinstance(atom.pattern, PatMsg):
                renames[atom.pattern.var] = f"_b{len(renames)}"
                atom = ChannelPattern(atom.channel, PatMsg(renames[atom.pattern.var]))
            atoms.append(atom)
        else:
            atoms.append(Compare(atom.op, rename_expr(atom.left), rename_expr(atom.right)))
    return tuple(atoms)


def _atom_is_tautology(atom: GuardAtom) -> bool:
    return isinstance(atom, ChannelPattern) and isinstance(atom.pattern, PatAny)


def _guard_subsumes(earlier: tuple, later: tuple) -> bool:
    """Syntactic check: whenever ``later`` matches, ``earlier`` does too."""
    return all(
        _atom_is_tautology(a) or a in later
        for a in earlier
    )


def validate(spec: ComponentSpec) -> "List[Diagnostic]":
    """Load-time well-formedness diagnostics; never raises."""
    diags: "List[Diagnostic]" = []

    def bad_name(name: str, key: object, what: str) -> bool:
        if not isinstance(name, str) or not _IDENT_RE.match(name):
            diags.append(error(_span(spec, key), f"invalid {what} {name!r}", BAD_NAME))
            return True
        if name in RESERVED_WORDS:
            diags.append(error(
                _span(spec, key), f"{what} {name!r} is a reserved word", RESERVED_NAME
            ))
            return True
        return False

    bad_name(spec.name, spec.name, "component name")
    declared: "Dict[str, str]" = {}
    for kind, names in (("input channel", spec.inputs),
                        ("output channel", spec.outputs),
                        ("state variable", [v.name for v in spec.state_vars])):
        for name in names:
            if bad_name(name, name, kind):
                continue
            if name in declared:
                diags.append(error(
                    _span(spec, name),
                    f"duplicate name {name!r} ({declared[name]} and {kind})",
                    DUP_NAME,
                ))
            else:
                declared[name] = kind

    state_names = {v.name for v in spec.state_vars}
    input_set = set(spec.inputs)
    output_set = set(spec.outputs)

    for v in spec.state_vars:
        if isinstance(v.init, int):
            if abs(v.init) >= INT_BOUND:
                diags.append(error(
                    _span(spec, v.name),
                    f"initial value of {v.name!r} out of range",
                    BAD_INIT,
                ))
        elif not isinstance(v.init, Message):
            diags.append(error(
                _span(spec, v.name),
                f"initial value of {v.name!r} must be an integer or a message",
                BAD_INIT,
            ))

    for ch in _asm_channels(spec.assumption):
        if ch not in input_set:
            diags.append(error(
                _span(spec, ("asm",)),
                f"assumption tests {ch!r}, which is not an input channel",
                UNDECLARED_NAME,
            ))

    for gi, g in enumerate(spec.guarantees):
        for ref in causality.property_streams(g):
            if ref not in input_set and ref not in output_set:
                diags.append(error(
                    _span(spec, ("gar", gi)),
                    f"guarantee references {ref!r}, which is not a channel",
                    UNDECLARED_NAME,
                ))

    for ti_, t in enumerate(spec.transitions):
        span = _span(spec, ("trans", ti_))
        where = f"transition {ti_}"
        bound: "Dict[str, bool]" = {}

        def check_vars(names: "List[str]") -> None:
            for v in names:
                if v not in bound and v not in state_names:
                    diags.append(error(
                        span, f"{where}: unbound variable {v!r}", UNBOUND_VAR
                    ))

        for atom in t.guard:
            if isinstance(atom, ChannelPattern):
                if atom.channel not in input_set:
                    diags.append(error(
                        span,
                        f"{where}: guard pattern on {atom.channel!r}, "
                        f"which is not an input channel",
                        UNDECLARED_NAME,
                    ))
                if isinstance(atom.pattern, PatMsg):
                    var = atom.pattern.var
                    if not bad_name(var, ("trans", ti_), "pattern variable"):
                        if var in bound:
                            diags.append(error(
                                span, f"{where}: variable {var!r} bound twice",
                                DUP_BINDING,
                            ))
                        elif var in declared:
                            diags.append(error(
                                span,
                                f"{where}: variable {var!r} shadows a declared name",
                                DUP_BINDING,
                            ))
                        bound[var] = True
            else:
                check_vars(_expr_vars(atom.left) + _expr_vars(atom.right))

        assigned = set()
        for ch, out_expr in t.outputs:
            if ch in input_set:
                diags.append(error(
                    span, f"{where}: writes to input channel {ch!r}", WRITE_TO_INPUT
                ))
            elif ch not in output_set:
                diags.append(error(
                    span, f"{where}: output to undeclared channel {ch!r}",
                    UNDECLARED_NAME,
                ))
            if ch in assigned:
                diags.append(error(
                    span, f"{where}: channel {ch!r} assigned twice", DUP_ASSIGN
                ))
            assigned.add(ch)
            if isinstance(out_expr, ChannelCopy) and out_expr.channel not in input_set:
                diags.append(error(
                    span,
                    f"{where}: copies from {out_expr.channel!r}, "
                    f"which is not an input channel",
                    UNDECLARED_NAME,
                ))
            check_vars(_out_expr_vars(out_expr))

        updated = set()
        for var, expr in t.updates:
            if var not in state_names:
                diags.append(error(
                    span, f"{where}: update of undeclared state variable {var!r}",
                    UNDECLARED_NAME,
                ))
            if var in updated:
                diags.append(error(
                    span, f"{where}: state variable {var!r} updated twice", DUP_ASSIGN
                ))
            updated.add(var)
            check_vars(_expr_vars(expr))

    if not spec.transitions:
        diags.append(warning(
            _span(spec, spec.name), f"component {spec.name!r} has no transitions",
            NO_TRANSITIONS,
        ))
    else:
        canon = [_canonical_guard(t.guard) for t in spec.transitions]
        for later in range(1, len(canon)):
            for earlier in range(later):
                if _guard_subsumes(canon[earlier], canon[later]):
                    diags.append(warning(
                        _span(spec, ("trans", later)),
                        f"transition {later} is unreachable: its guard is "
                        f"subsumed by transition {earlier}",
                        UNREACHABLE_TRANS,
                    ))
                    break
    return diags
