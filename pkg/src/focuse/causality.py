"""Combined events, causality ordering, and a small property language.

"Before" is strict everywhere in this module: messages in the same
causality interval are simultaneous, and simultaneity never satisfies
"before".  The ambiguous phrase "X always before Y" is therefore split
into two distinct operators, a first-occurrence reading
(always_before_first) and an every-occurrence reading
(always_before_each), instead of guessing a single intent.

Cross-stream ordering needs a shared clock, so occurs_before is defined
between two timed streams via time positions; on bare event streams it
is meaningful only within a single stream, where it reduces to index
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .streams import (
    EventStream,
    Message,
    Stream,
    TimedStream,
    causality_length,
    ci,
    time_position,
)


class UnknownStreamError(KeyError):
    """A property referenced a stream name missing from the environment."""

    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown stream {self.name!r}"


class UnsupportedComparisonError(TypeError):
    """Ordering was asked across streams that share no time base."""


@dataclass(frozen=True)
class CombinedEvent:
    """All messages of one causality interval viewed as one occurrence."""

    index: int
    messages: "tuple[Message, ...]"

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("combined event must contain at least one message")

    def message_set(self) -> "frozenset[Message]":
        """The set view; the list form keeps order and multiplicity."""
        return frozenset(self.messages)


@dataclass(frozen=True)
class Witness:
    """One (stream, causality index, message) triple justifying a verdict."""

    stream: str
    index: int
    message: Message

    def __str__(self) -> str:
        return f"{self.message} at ci {self.index} in {self.stream}"


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witnesses: "tuple[Witness, ...]" = ()
    explanation: str = ""

    def __bool__(self) -> bool:
        return self.holds


# --- property ASTs -------------------------------------------------------
#
# Stream references are names resolved against an environment when the
# property is checked.

@dataclass(frozen=True)
class Occurs:
    sort: str
    stream: str


@dataclass(frozen=True)
class AlwaysBeforeFirst:
    sort_a: str
    sort_b: str
    stream: str


@dataclass(frozen=True)
class AlwaysBeforeEach:
    sort_a: str
    sort_b: str
    stream: str


@dataclass(frozen=True)
class OccursBefore:
    stream_a: str
    index_a: int
    stream_b: str
    index_b: int


@dataclass(frozen=True)
class Not:
    operand: "PropertyExpr"


@dataclass(frozen=True)
class And:
    left: "PropertyExpr"
    right: "PropertyExpr"


@dataclass(frozen=True)
class Or:
    left: "PropertyExpr"
    right: "PropertyExpr"


PropertyExpr = Union[Occurs, AlwaysBeforeFirst, AlwaysBeforeEach, OccursBefore, Not, And, Or]


def property_streams(p: PropertyExpr) -> "tuple[str, ...]":
    """Names of every stream a property refers to, in reference order."""
    if isinstance(p, Not):
        return property_streams(p.operand)
    if isinstance(p, (And, Or)):
        return property_streams(p.left) + property_streams(p.right)
    if isinstance(p, OccursBefore):
        return (p.stream_a, p.stream_b)
    return (p.stream,)


def combined_event(s: Stream, i: int) -> CombinedEvent:
    """Causality interval i of a stream packaged as a combined event."""
    return CombinedEvent(i, ci(s, i))


def _causality_intervals(s: Stream) -> "tuple[tuple[Message, ...], ...]":
    if isinstance(s, EventStream):
        return s.intervals
    return tuple(interval for interval in s.intervals if interval)


def _first_of_sort(s: Stream, sort: str) -> "Optional[tuple[int, Message]]":
    for i, interval in enumerate(_causality_intervals(s)):
        for m in interval:
            if m.matches_sort(sort):
                return i, m
    return None


def occurs_before(s1: Stream, i: int, s2: Stream, j: int) -> bool:
    """Does causality interval i of s1 occur before interval j of s2?

    Timed streams are compared by the time indices their intervals sit
    at.  A single event stream carries its own order, so within one
    stream the answer is i < j; two distinct event streams (or an event
    stream against a timed one) have no common clock and are rejected.
    """
    # Validate indices first so range errors win over type errors.
    ci(s1, i)
    ci(s2, j)
    if isinstance(s1, TimedStream) and isinstance(s2, TimedStream):
        return time_position(s1, i) < time_position(s2, j)
    if s1 is s2:
        return i < j
    raise UnsupportedComparisonError(
        "cannot order causality intervals across event streams without time anchors"
    )


def check_occurs(sort: str, s: Stream, stream_name: str = "s") -> Verdict:
    for i, interval in enumerate(_causality_intervals(s)):
        for m in interval:
            if m.matches_sort(sort):
                return Verdict(
                    True,
                    (Witness(stream_name, i, m),),
                    f"{sort!r} occurs at causality interval {i}",
                )
    return Verdict(False, (), f"no {sort!r} occurs in {stream_name}")


def always_before_first(
    sort_a: str, sort_b: str, s: Stream, stream_name: str = "s"
) -> Verdict:
    """First occurrence of sort_a strictly precedes first of sort_b.

    Vacuously true when sort_b never occurs.  Sharing the first interval
    means the occurrences were simultaneous, which does not count as
    before.
    """
    first_b = _first_of_sort(s, sort_b)
    if first_b is None:
        return Verdict(True, (), f"no {sort_b!r} occurs in {stream_name}")
    ib, mb = first_b
    first_a = _first_of_sort(s, sort_a)
    if first_a is None:
        return Verdict(
            False,
            (Witness(stream_name, ib, mb),),
            f"{sort_b!r} occurs at causality interval {ib} but {sort_a!r} never does",
        )
    ia, ma = first_a
    if ia < ib:
        return Verdict(
            True,
            (Witness(stream_name, ia, ma), Witness(stream_name, ib, mb)),
            f"first {sort_a!r} at causality interval {ia} precedes first {sort_b!r} at {ib}",
        )
    reason = "simultaneous with" if ia == ib else "after"
    return Verdict(
        False,
        (Witness(stream_name, ib, mb),),
        f"first {sort_a!r} at causality interval {ia} is {reason} first {sort_b!r} at {ib}",
    )


def always_before_each(
    sort_a: str, sort_b: str, s: Stream, stream_name: str = "s"
) -> Verdict:
    """Every sort_b interval is strictly preceded by some sort_a interval."""
    seen_a = False
    for i, interval in enumerate(_causality_intervals(s)):
        has_b = next((m for m in interval if m.matches_sort(sort_b)), None)
        if has_b is not None and not seen_a:
            return Verdict(
                False,
                (Witness(stream_name, i, has_b),),
                f"{sort_b!r} at causality interval {i} has no earlier {sort_a!r}",
            )
        if any(m.matches_sort(sort_a) for m in interval):
            seen_a = True
    return Verdict(True, (), f"every {sort_b!r} in {stream_name} is preceded by {sort_a!r}")


def _resolve(env: Mapping[str, Stream], name: str) -> Stream:
    try:
        return env[name]
    except KeyError:
        raise UnknownStreamError(name) from None


def check(p: PropertyExpr, env: Mapping[str, Stream]) -> Verdict:
    """Evaluate a property expression against named streams.

    Boolean connectives combine verdicts; witnesses propagate from the
    subterm that determined the result.
    """
    if isinstance(p, Occurs):
        return check_occurs(p.sort, _resolve(env, p.stream), p.stream)
    if isinstance(p, AlwaysBeforeFirst):
        return always_before_first(p.sort_a, p.sort_b, _resolve(env, p.stream), p.stream)
    if isinstance(p, AlwaysBeforeEach):
        return always_before_each(p.sort_a, p.sort_b, _resolve(env, p.stream), p.stream)
    if isinstance(p, OccursBefore):
        s1 = _resolve(env, p.stream_a)
        s2 = env[p.stream_a] if p.stream_b == p.stream_a else _resolve(env, p.stream_b)
        before = occurs_before(s1, p.index_a, s2, p.index_b)
        w = (
            Witness(p.stream_a, p.index_a, ci(s1, p.index_a)[0]),
            Witness(p.stream_b, p.index_b, ci(s2, p.index_b)[0]),
        )
        rel = "precedes" if before else "does not precede"
        return Verdict(
            before,
            w,
            f"ci({p.stream_a},{p.index_a}) {rel} ci({p.stream_b},{p.index_b})",
        )
    if isinstance(p, Not):
        inner = check(p.operand, env)
        return Verdict(not inner.holds, inner.witnesses, f"negation of: {inner.explanation}")
    if isinstance(p, And):
        left = check(p.left, env)
        if not left.holds:
            return Verdict(False, left.witnesses, left.explanation)
        right = check(p.right, env)
        if not right.holds:
            return Verdict(False, right.witnesses, right.explanation)
        return Verdict(True, left.witnesses + right.witnesses,
                       f"{left.explanation}; {right.explanation}")
    if isinstance(p, Or):
        left = check(p.left, env)
        if left.holds:
            return Verdict(True, left.witnesses, left.explanation)
        right = check(p.right, env)
        if right.holds:
            return Verdict(True, right.witnesses, right.explanation)
        return Verdict(False, left.witnesses + right.witnesses,
                       f"{left.explanation}; {right.explanation}")
    raise TypeError(f"not a property expression: {p!r}")
