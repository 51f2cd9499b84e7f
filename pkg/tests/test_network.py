import io

import pytest

from focuse import causality
from focuse.components import (
    ArityError,
    ChannelCopy,
    ChannelPattern,
    ComponentSpec,
    InputLengthError,
    PatAny,
    Transition,
)
from focuse.diagnostics import FAN_IN, UNDELAYED_CYCLE, UNWIRED
from focuse.network import (
    CompositionError,
    Endpoint,
    Instance,
    NetworkSpec,
    Trace,
    Wire,
    WiringError,
    check_trace,
    elaborate,
    read_trace,
    simulate,
    validate,
    write_trace,
)
from focuse.streams import TimedStream, msgs


def copy_component(name="Identity"):
    return ComponentSpec(
        name=name,
        inputs=("x",),
        outputs=("y",),
        transitions=(
            Transition(guard=(ChannelPattern("x", PatAny()),),
                       outputs=(("y", ChannelCopy("x")),)),
        ),
    )


def single_identity_net():
    return NetworkSpec.build(
        "Single",
        [Instance("A", copy_component())],
        wires=[
            Wire(Endpoint(None, "ein"), Endpoint("A", "x")),
            Wire(Endpoint("A", "y"), Endpoint(None, "eout")),
        ],
        external_inputs=["ein"],
        external_outputs=["eout"],
    )


def delayed_chain_net(initial=()):
    return NetworkSpec.build(
        "Chain",
        [Instance("A", copy_component()), Instance("B", copy_component())],
        wires=[
            Wire(Endpoint(None, "ein"), Endpoint("A", "x")),
            Wire(Endpoint("A", "y"), Endpoint("B", "x"), delayed=True,
                 initial=initial),
            Wire(Endpoint("B", "y"), Endpoint(None, "eout")),
        ],
        external_inputs=["ein"],
        external_outputs=["eout"],
    )


class TestElaborate:
    def test_acyclic_order(self):
        net = NetworkSpec.build(
            "AB",
            [Instance("A", copy_component()), Instance("B", copy_component())],
            wires=[Wire(Endpoint("A", "y"), Endpoint("B", "x"))],
        )
        assert elaborate(net) == ("A", "B")

    def test_delay_breaks_cycle(self):
        net = NetworkSpec.build(
            "Loop",
            [Instance("A", copy_component()), Instance("B", copy_component())],
            wires=[
                Wire(Endpoint("A", "y"), Endpoint("B", "x")),
                Wire(Endpoint("B", "y"), Endpoint("A", "x"), delayed=True),
            ],
        )
        assert elaborate(net) == ("A", "B")

    def test_undelayed_cycle_named(self):
        net = NetworkSpec.build(
            "Loop",
            [Instance("A", copy_component()), Instance("B", copy_component())],
            wires=[
                Wire(Endpoint("A", "y"), Endpoint("B", "x")),
                Wire(Endpoint("B", "y"), Endpoint("A", "x")),
            ],
        )
        with pytest.raises(CompositionError) as exc:
            elaborate(net)
        assert "A" in str(exc.value) and "B" in str(exc.value)
        assert UNDELAYED_CYCLE in [d.code for d in validate(net)]

    def test_fan_in_rejected(self):
        net = NetworkSpec.build(
            "Fan",
            [Instance("A", copy_component()), Instance("B", copy_component())],
            wires=[
                Wire(Endpoint("A", "y"), Endpoint(None, "eout")),
                Wire(Endpoint("B", "y"), Endpoint(None, "eout")),
            ],
            external_outputs=["eout"],
        )
        with pytest.raises(WiringError, match="2 producers"):
            elaborate(net)
        assert FAN_IN in [d.code for d in validate(net)]

    def test_dangling_endpoint(self):
        net = NetworkSpec.build(
            "Dangle",
            [Instance("A", copy_component())],
            wires=[Wire(Endpoint("A", "nope"), Endpoint("A", "x"))],
        )
        with pytest.raises(WiringError, match="does not exist"):
            elaborate(net)

    def test_direction_checked(self):
        net = NetworkSpec.build(
            "Backwards",
            [Instance("A", copy_component())],
            wires=[Wire(Endpoint("A", "x"), Endpoint("A", "y"))],
        )
        with pytest.raises(WiringError, match="not an output"):
            elaborate(net)

    def test_unwired_input_warns(self):
        net = NetworkSpec.build("Lonely", [Instance("A", copy_component())])
        codes = [d.code for d in validate(net)]
        assert codes.count(UNWIRED) == 1


class TestSimulate:
    def test_single_identity_over_worked_example(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 6)
        assert len(trace) == 6
        assert trace.channel_stream("eout") == fig1
        assert trace.channel_stream("A.x") == fig1

    def test_delayed_chain_shifts_by_one(self):
        ein = TimedStream.from_names([["a"], ["b"], ["c"]])
        trace = simulate(delayed_chain_net(), {"ein": ein}, 3)
        assert trace.channel_stream("eout") == TimedStream.from_names(
            [[], ["a"], ["b"]]
        )

    def test_delay_law_with_initial_buffer(self):
        ein = TimedStream.from_names([["a"], ["b"], ["c"]])
        trace = simulate(delayed_chain_net(initial=msgs("z")), {"ein": ein}, 3)
        producer = trace.channel_stream("A.y")
        consumer = trace.channel_stream("B.x")
        assert consumer.intervals == (msgs("z"),) + producer.intervals[:-1]

    def test_pass_through_without_components(self, fig1):
        net = NetworkSpec.build(
            "Wireonly",
            [],
            wires=[Wire(Endpoint(None, "ein"), Endpoint(None, "eout"))],
            external_inputs=["ein"],
            external_outputs=["eout"],
        )
        trace = simulate(net, {"ein": fig1}, 6)
        assert trace.channel_stream("eout") == fig1

    def test_conservation_on_undelayed_wire(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 6)
        for record in trace.records:
            assert record.channels["A.x"] == record.channels["ein"]
            assert record.channels["eout"] == record.channels["A.y"]

    def test_locality_of_unwired_component(self, fig1):
        base = single_identity_net()
        extended = NetworkSpec.build(
            "Single",
            list(base.instances) + [Instance("Z", copy_component())],
            wires=list(base.wires),
            external_inputs=["ein"],
            external_outputs=["eout"],
        )
        t1 = simulate(base, {"ein": fig1}, 6)
        t2 = simulate(extended, {"ein": fig1}, 6)
        for name in t1.channel_names():
            assert t1.channel_stream(name) == t2.channel_stream(name)

    def test_zero_intervals(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 0)
        assert len(trace) == 0

    def test_input_checks(self, fig1):
        with pytest.raises(ArityError, match="missing ein"):
            simulate(single_identity_net(), {}, 3)
        with pytest.raises(ArityError, match="unexpected extra"):
            simulate(single_identity_net(), {"ein": fig1, "extra": fig1}, 3)
        with pytest.raises(InputLengthError):
            simulate(single_identity_net(), {"ein": fig1}, 9)

    def test_deterministic_records(self, fig1):
        t1 = simulate(single_identity_net(), {"ein": fig1}, 6)
        t2 = simulate(single_identity_net(), {"ein": fig1}, 6)
        assert t1 == t2


class TestCheckTrace:
    def test_identity_trace_property(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 6)
        [verdict] = check_trace(
            trace, [causality.AlwaysBeforeFirst("a", "d", "eout")]
        )
        assert verdict.holds

    def test_delay_forces_later_first_event(self):
        ein = TimedStream.from_names([["a"], ["b"], ["c"]])
        trace = simulate(delayed_chain_net(), {"ein": ein}, 3)
        [verdict] = check_trace(
            trace, [causality.OccursBefore("ein", 0, "eout", 0)]
        )
        assert verdict.holds

    def test_unknown_channel(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 6)
        with pytest.raises(causality.UnknownStreamError, match="nope"):
            check_trace(trace, [causality.Occurs("a", "nope")])


class TestTraceIO:
    def test_write_read_round_trip(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 6)
        buffer = io.StringIO()
        write_trace(trace, buffer)
        assert read_trace(io.StringIO(buffer.getvalue())) == trace

    def test_byte_identical_across_runs(self, fig1, tmp_path):
        paths = [tmp_path / "one.jsonl", tmp_path / "two.jsonl"]
        for path in paths:
            trace = simulate(single_identity_net(), {"ein": fig1}, 6)
            write_trace(trace, str(path))
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_schema_shape(self, fig1):
        trace = simulate(single_identity_net(), {"ein": fig1}, 1)
        buffer = io.StringIO()
        write_trace(trace, buffer)
        line = buffer.getvalue().splitlines()[0]
        assert line.startswith('{"t":0,"channels":{')
        assert '"states"' in line and '"violations"' in line

    def test_malformed_line_reports_position(self):
        with pytest.raises(ValueError, match="trace line 2"):
            read_trace(io.StringIO('{"t":0,"channels":{},"states":{},"violations":[]}\nnot json\n'))

    def test_empty_trace(self):
        assert read_trace(io.StringIO("")) == Trace(())
