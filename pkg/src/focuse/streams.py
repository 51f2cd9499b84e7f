"""Core stream data types and interval operators.

A timed stream maps clock ticks (natural numbers) to lists of messages;
an interval may be empty.  Deleting every empty interval yields an event
stream, whose indices count *causality intervals*: they record only the
relative order in which things happened, not when.  Messages sharing one
causality interval occurred simultaneously; consecutive causality
intervals are separated by at least one clock tick when placed back on
the clock (the gap is always strictly positive).

All values here are immutable and all operators are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

MessageList = "tuple[Message, ...]"


class IntervalIndexError(IndexError):
    """A time or causality index lies outside the stream."""


class FirstOfEmptyError(ValueError):
    """first() was applied to an empty message list."""


class ScheduleMismatchError(ValueError):
    """A schedule's length differs from the event stream it places."""


@dataclass(frozen=True)
class Message:
    """A named event atom, optionally tagged with a sort.

    The sort tag is what causality predicates match against; untagged
    messages fall back to matching by name, so small examples can use
    bare names as sorts.
    """

    name: str
    sort: Optional[str] = None

    def __post_init__(self) -> None:
        if not _IDENT_RE.match(self.name):
            raise ValueError(f"invalid message name: {self.name!r}")
        if self.sort is not None and not _IDENT_RE.match(self.sort):
            raise ValueError(f"invalid message sort: {self.sort!r}")

    def matches_sort(self, sort: str) -> bool:
        """True if this message belongs to the given sort."""
        if self.sort is not None:
            return self.sort == sort
        return self.name == sort

    def key(self) -> str:
        """Stable text form: ``name`` or ``name:sort``."""
        if self.sort is None:
            return self.name
        return f"{self.name}:{self.sort}"

    @classmethod
    def from_key(cls, text: str) -> "Message":
        name, sep, sort = text.partition(":")
        return cls(name, sort if sep else None)

    def __str__(self) -> str:
        return self.key()


def msgs(*names: str) -> "tuple[Message, ...]":
    """Build a message list from ``name`` / ``name:sort`` strings."""
    return tuple(Message.from_key(n) for n in names)


def _freeze_intervals(intervals: Iterable[Iterable[Message]]) -> tuple:
    out = []
    for interval in intervals:
        items = tuple(interval)
        for m in items:
            if not isinstance(m, Message):
                raise TypeError(f"interval items must be Message, got {m!r}")
        out.append(items)
    return tuple(out)


@dataclass(frozen=True)
class TimedStream:
    """A finite prefix of a clock-indexed stream of message lists.

    Index t is the time-interval number; empty intervals are
    significant for length and equality.
    """

    intervals: "tuple[tuple[Message, ...], ...]"

    def __init__(self, intervals: Iterable[Iterable[Message]] = ()) -> None:
        object.__setattr__(self, "intervals", _freeze_intervals(intervals))

    @classmethod
    def from_names(cls, names: Iterable[Iterable[str]]) -> "TimedStream":
        """Build a stream from per-interval ``name``/``name:sort`` strings."""
        return cls([msgs(*interval) for interval in names])

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)


@dataclass(frozen=True)
class EventStream:
    """A sequence of non-empty message lists indexed by causality interval."""

    intervals: "tuple[tuple[Message, ...], ...]"

    def __init__(self, intervals: Iterable[Iterable[Message]] = ()) -> None:
        frozen = _freeze_intervals(intervals)
        for i, interval in enumerate(frozen):
            if not interval:
                raise ValueError(f"event stream interval {i} is empty")
        object.__setattr__(self, "intervals", frozen)

    @classmethod
    def from_names(cls, names: Iterable[Iterable[str]]) -> "EventStream":
        return cls([msgs(*interval) for interval in names])

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)


Stream = Union[TimedStream, EventStream]


@dataclass(frozen=True)
class DeltaSchedule:
    """Time positions for placing causality intervals back on the clock.

    positions[k] is the tick that receives causality interval k.  The
    sequence must be strictly increasing, so consecutive intervals are
    at least one tick apart.
    """

    positions: "tuple[int, ...]"

    def __init__(self, positions: Iterable[int] = ()) -> None:
        frozen = tuple(int(p) for p in positions)
        if frozen and frozen[0] < 0:
            raise ValueError(f"schedule positions must be >= 0, got {frozen[0]}")
        for a, b in zip(frozen, frozen[1:]):
            if b <= a:
                raise ValueError(
                    f"schedule positions must be strictly increasing, got {a} then {b}"
                )
        object.__setattr__(self, "positions", frozen)

    def __len__(self) -> int:
        return len(self.positions)


def ti(s: TimedStream, t: int) -> "tuple[Message, ...]":
    """The t-th time interval of a timed stream."""
    if not 0 <= t < len(s.intervals):
        raise IntervalIndexError(
            f"time index {t} out of range for stream of length {len(s.intervals)}"
        )
    return s.intervals[t]


def causality_length(s: Stream) -> int:
    """Number of causality intervals (non-empty intervals) of a stream."""
    if isinstance(s, EventStream):
        return len(s.intervals)
    return sum(1 for interval in s.intervals if interval)


def ci(s: Stream, i: int) -> "tuple[Message, ...]":
    """The i-th causality interval of a stream.

    On a timed stream this skips empty intervals; on an event stream it
    is direct indexing.
    """
    if isinstance(s, EventStream):
        if not 0 <= i < len(s.intervals):
            raise IntervalIndexError(
                f"causality index {i} out of range for stream with "
                f"{len(s.intervals)} causality intervals"
            )
        return s.intervals[i]
    k = i
    if i >= 0:
        for interval in s.intervals:
            if interval:
                if k == 0:
                    return interval
                k -= 1
    raise IntervalIndexError(
        f"causality index {i} out of range for stream with "
        f"{causality_length(s)} causality intervals"
    )


def first(l: Iterable[Message]) -> Message:
    """The first element of a non-empty message list."""
    items = tuple(l)
    if not items:
        raise FirstOfEmptyError("first of empty list")
    return items[0]


def to_event(s: TimedStream) -> EventStream:
    """Delete every empty interval, keeping order: the event-stream view.

    The conversion erases timing (how many ticks separated the
    occupied intervals) and keeps only their order.
    """
    return EventStream([interval for interval in s.intervals if interval])


def embed(e: EventStream, d: DeltaSchedule) -> TimedStream:
    """Place an event stream back on the clock at the scheduled ticks.

    Interval k of ``e`` lands at tick d.positions[k]; every other tick up
    to the last scheduled one is empty.  Inverse of to_event for any
    valid schedule.
    """
    if len(d.positions) != len(e.intervals):
        raise ScheduleMismatchError(
            f"schedule has {len(d.positions)} positions for "
            f"{len(e.intervals)} causality intervals"
        )
    if not e.intervals:
        return TimedStream()
    length = d.positions[-1] + 1
    slots: "list[tuple[Message, ...]]" = [()] * length
    for pos, interval in zip(d.positions, e.intervals):
        slots[pos] = interval
    return TimedStream(slots)


def causality_index_map(s: TimedStream) -> "tuple[Optional[int], ...]":
    """Per time index, the causality index of its interval (None if empty)."""
    out: "list[Optional[int]]" = []
    k = 0
    for interval in s.intervals:
        if interval:
            out.append(k)
            k += 1
        else:
            out.append(None)
    return tuple(out)


def time_position(s: TimedStream, i: int) -> int:
    """Time index at which causality interval i of a timed stream sits."""
    if i >= 0:
        k = i
        for t, interval in enumerate(s.intervals):
            if interval:
                if k == 0:
                    return t
                k -= 1
    raise IntervalIndexError(
        f"causality index {i} out of range for stream with "
        f"{causality_length(s)} causality intervals"
    )
