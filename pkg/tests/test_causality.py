import random

import pytest
from hypothesis import given, strategies as st

from focuse import causality
from focuse.causality import (
    AlwaysBeforeEach,
    AlwaysBeforeFirst,
    And,
    CombinedEvent,
    Not,
    Occurs,
    OccursBefore,
    Or,
    UnknownStreamError,
    UnsupportedComparisonError,
    always_before_each,
    always_before_first,
    check,
    check_occurs,
    combined_event,
    occurs_before,
    property_streams,
)
from focuse.streams import (
    EventStream,
    IntervalIndexError,
    TimedStream,
    causality_length,
    embed,
    msgs,
)

import genvalues
import oracle

names = st.sampled_from(["a", "b", "c"])
small_streams = st.builds(
    TimedStream.from_names,
    st.lists(st.lists(names, max_size=2), max_size=6),
)


def ts(*interval_names):
    return TimedStream.from_names(interval_names)


class TestCombinedEvent:
    def test_worked_example_interval_one(self, fig1):
        got = combined_event(fig1, 1)
        assert got == CombinedEvent(index=1, messages=msgs("b", "c"))

    def test_singleton(self):
        assert combined_event(ts(["a"]), 0) == CombinedEvent(0, msgs("a"))

    def test_out_of_range(self, fig1):
        with pytest.raises(IntervalIndexError):
            combined_event(fig1, 4)

    def test_set_view_drops_duplicates(self):
        ce = CombinedEvent(0, msgs("a", "a", "b"))
        assert ce.message_set() == frozenset(msgs("a", "b"))
        assert len(ce.messages) == 3

    def test_must_be_nonempty(self):
        with pytest.raises(ValueError):
            CombinedEvent(0, ())


class TestOccursBefore:
    def test_within_one_stream_is_index_order(self, fig1):
        assert occurs_before(fig1, 0, fig1, 1) is True

    def test_cross_stream_time_positions(self):
        assert occurs_before(ts(["a"], []), 0, ts([], ["b"]), 0) is True
        assert occurs_before(ts([], ["a"]), 0, ts(["b"], []), 0) is False

    def test_same_time_is_not_before(self):
        assert occurs_before(ts(["a"]), 0, ts(["b"]), 0) is False

    def test_event_streams_need_shared_stream(self):
        e1 = EventStream.from_names([["a"], ["b"]])
        e2 = EventStream.from_names([["c"]])
        assert occurs_before(e1, 0, e1, 1) is True
        assert occurs_before(e1, 1, e1, 1) is False
        with pytest.raises(UnsupportedComparisonError):
            occurs_before(e1, 0, e2, 0)

    def test_timed_against_event_rejected(self, fig1):
        with pytest.raises(UnsupportedComparisonError):
            occurs_before(fig1, 0, EventStream.from_names([["a"]]), 0)

    def test_index_errors_win(self, fig1):
        with pytest.raises(IntervalIndexError):
            occurs_before(fig1, 9, EventStream.from_names([["a"]]), 0)


class TestAlwaysBeforeFirst:
    def test_holds_on_worked_example(self, fig1):
        v = always_before_first("a", "d", fig1)
        assert v.holds
        assert [(w.index, w.message.name) for w in v.witnesses] == [(0, "a"), (2, "d")]

    def test_violated_with_witness(self, fig1):
        v = always_before_first("d", "a", fig1, stream_name="s")
        assert not v.holds
        assert v.witnesses[0].stream == "s"
        assert v.witnesses[0].index == 0
        assert v.witnesses[0].message.name == "a"

    def test_simultaneous_is_not_before(self):
        assert not always_before_first("a", "b", ts(["a", "b"])).holds

    def test_vacuous_without_b(self):
        assert always_before_first("a", "z", ts(["a"])).holds

    def test_b_without_a_is_violated(self):
        v = always_before_first("a", "b", ts(["b"]))
        assert not v.holds and v.witnesses


class TestAlwaysBeforeEach:
    def test_holds(self):
        assert always_before_each("a", "b", ts(["a"], ["b"], ["b"])).holds

    def test_violated_names_first_bad_interval(self):
        v = always_before_each("a", "b", ts(["b"], ["a"], ["b"]))
        assert not v.holds
        assert v.witnesses[0].index == 0

    def test_vacuous(self):
        assert always_before_each("a", "b", ts(["a"], ["c"])).holds

    def test_same_interval_does_not_count(self):
        assert not always_before_each("a", "b", ts(["a", "b"])).holds
        assert always_before_each("a", "b", ts(["a"], ["a", "b"])).holds


class TestCheck:
    def test_composed_worked_example(self, fig1):
        p = And(
            AlwaysBeforeFirst("a", "d", "s"),
            Not(AlwaysBeforeFirst("d", "a", "s")),
        )
        assert check(p, {"s": fig1}).holds

    def test_occurs_witness(self, fig1):
        v = check(Occurs("c", "s"), {"s": fig1})
        assert v.holds
        assert v.witnesses == (causality.Witness("s", 1, msgs("c")[0]),)

    def test_occurs_violated(self, fig1):
        assert not check(Occurs("z", "s"), {"s": fig1}).holds

    def test_unknown_stream(self, fig1):
        with pytest.raises(UnknownStreamError, match="nope"):
            check(Occurs("a", "nope"), {"s": fig1})

    def test_occurs_before_nodes(self, fig1):
        early = ts(["a"], [])
        late = ts([], ["b"])
        env = {"s1": early, "s2": late}
        assert check(OccursBefore("s1", 0, "s2", 0), env).holds
        assert not check(OccursBefore("s2", 0, "s1", 0), env).holds

    def test_or_picks_succeeding_side(self, fig1):
        v = check(Or(Occurs("z", "s"), Occurs("a", "s")), {"s": fig1})
        assert v.holds and v.witnesses[0].message.name == "a"

    def test_property_streams(self):
        p = And(Occurs("a", "s"), Not(OccursBefore("t", 0, "u", 1)))
        assert property_streams(p) == ("s", "t", "u")


# --- invariants ----------------------------------------------------------------

@given(small_streams, st.integers(0, 5), st.integers(0, 5))
def test_occurs_before_monotone_within_stream(s, i, j):
    n = causality_length(s)
    if i < n and j < n:
        assert occurs_before(s, i, s, j) == (i < j)


@given(small_streams)
def test_strictness_never_self_before(s):
    for sort in ("a", "b", "c"):
        if check_occurs(sort, s).holds:
            assert not always_before_first(sort, sort, s).holds


@given(small_streams)
def test_negation_soundness(s):
    env = {"s": s}
    for p in (Occurs("a", "s"), AlwaysBeforeFirst("a", "b", "s"),
              AlwaysBeforeEach("b", "a", "s")):
        assert check(Not(p), env).holds == (not check(p, env).holds)


def test_embedding_invariance_seeded():
    rnd = random.Random(20260810)
    sorts = ["a", "b", "c", "d"]
    for _ in range(300):
        e = genvalues.gen_event_stream(rnd, max_length=6)
        d1 = genvalues.gen_schedule(rnd, len(e))
        d2 = genvalues.gen_schedule(rnd, len(e))
        s1, s2 = embed(e, d1), embed(e, d2)
        for x in sorts:
            assert check_occurs(x, s1).holds == check_occurs(x, s2).holds
            for y in sorts:
                assert (always_before_first(x, y, s1).holds
                        == always_before_first(x, y, s2).holds)
                assert (always_before_each(x, y, s1).holds
                        == always_before_each(x, y, s2).holds)


def test_checker_matches_brute_force_oracle_on_sample():
    # The exhaustive sweep lives in the acceptance suite; this is a
    # quick random cross-check against the independent oracle.
    rnd = random.Random(7)
    for _ in range(500):
        length = rnd.randint(0, 6)
        plain = [
            [rnd.choice("ab") for _ in range(rnd.randint(0, 2))]
            for _ in range(length)
        ]
        s = TimedStream.from_names(plain)
        for x in "ab":
            assert check_occurs(x, s).holds == oracle.oracle_occurs(x, plain)
            for y in "ab":
                assert (always_before_first(x, y, s).holds
                        == oracle.oracle_always_before_first(x, y, plain))
                assert (always_before_each(x, y, s).holds
                        == oracle.oracle_always_before_each(x, y, plain))
