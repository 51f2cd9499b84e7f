"""Networks of components wired by named channels.

Composition timing: within one interval, an undelayed wire delivers the
producer's output to the consumer at the same tick, so components step
in a topological order of the undelayed wiring.  Every feedback cycle
must therefore contain at least one delayed wire, which buffers its
producer's output for one interval (with declared initial contents at
tick 0).  Fan-out is allowed; fan-in is rejected since there is no merge
rule for two producers on one channel.

Simulation is sequential and deterministic: identical (network, inputs,
interval count) produce identical traces, byte for byte once exported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, IO, Iterable, List, Mapping, Optional, Union

from . import causality, components
from .components import ArityError, ComponentSpec, InputLengthError, Value
from .diagnostics import (
    BAD_INIT,
    BAD_NAME,
    DUP_NAME,
    Diagnostic,
    FAN_IN,
    NO_SPAN,
    RESERVED_NAME,
    RESERVED_WORDS,
    SourceSpan,
    UNDECLARED_NAME,
    UNDELAYED_CYCLE,
    UNKNOWN_COMPONENT,
    UNWIRED,
    WIRE_DIRECTION,
    error,
    warning,
)
from .streams import Message, TimedStream, _IDENT_RE


class CompositionError(ValueError):
    """The wiring contains a cycle with no delayed wire on it."""


class WiringError(ValueError):
    """A wire endpoint is dangling, misdirected, or doubly driven."""


@dataclass(frozen=True)
class Endpoint:
    """A wire end: an instance channel, or a bare external channel."""

    instance: Optional[str]
    channel: str

    def __str__(self) -> str:
        if self.instance is None:
            return self.channel
        return f"{self.instance}.{self.channel}"


@dataclass(frozen=True)
class Wire:
    src: Endpoint
    dst: Endpoint
    delayed: bool = False
    initial: "tuple[Message, ...]" = ()  # buffer delivered at tick 0

    def __str__(self) -> str:
        tail = " delayed" if self.delayed else ""
        return f"{self.src} -> {self.dst}{tail}"


@dataclass(frozen=True)
class Instance:
    name: str
    component: ComponentSpec


@dataclass(frozen=True, eq=True)
class NetworkSpec:
    name: str
    definitions: "tuple[ComponentSpec, ...]" = ()
    instances: "tuple[Instance, ...]" = ()
    wires: "tuple[Wire, ...]" = ()
    external_inputs: "tuple[str, ...]" = ()
    external_outputs: "tuple[str, ...]" = ()
    decl_spans: Dict[object, SourceSpan] = field(
        default_factory=dict, compare=False, repr=False
    )

    @classmethod
    def build(
        cls,
        name: str,
        instances: Iterable[Instance],
        wires: Iterable[Wire] = (),
        external_inputs: Iterable[str] = (),
        external_outputs: Iterable[str] = (),
    ) -> "NetworkSpec":
        """Construct a network, deriving definitions from the instances."""
        inst = tuple(instances)
        defs: "List[ComponentSpec]" = []
        for i in inst:
            if not any(d is i.component or d == i.component for d in defs):
                defs.append(i.component)
        return cls(name, tuple(defs), inst, tuple(wires),
                   tuple(external_inputs), tuple(external_outputs))


@dataclass(frozen=True)
class TraceRecord:
    t: int
    channels: "Dict[str, tuple[Message, ...]]"
    states: "Dict[str, Dict[str, Value]]"   # post-step state per instance
    violations: "tuple[str, ...]"           # instances whose assumption failed


@dataclass(frozen=True)
class Trace:
    records: "tuple[TraceRecord, ...]"

    def __len__(self) -> int:
        return len(self.records)

    def channel_names(self) -> "tuple[str, ...]":
        if not self.records:
            return ()
        return tuple(sorted(self.records[0].channels))

    def channel_stream(self, name: str) -> TimedStream:
        """The recorded stream of one channel across all intervals."""
        if self.records and name not in self.records[0].channels:
            raise causality.UnknownStreamError(name)
        return TimedStream([r.channels.get(name, ()) for r in self.records])


def _span(n: NetworkSpec, key: object) -> SourceSpan:
    return n.decl_spans.get(key, NO_SPAN)


def _instance_map(n: NetworkSpec) -> "Dict[str, Instance]":
    return {i.name: i for i in n.instances}


def _endpoint_role(n: NetworkSpec, ep: Endpoint) -> Optional[str]:
    """'producer', 'consumer', or None when the endpoint dangles."""
    if ep.instance is None:
        if ep.channel in n.external_inputs:
            return "producer"
        if ep.channel in n.external_outputs:
            return "consumer"
        return None
    inst = _instance_map(n).get(ep.instance)
    if inst is None:
        return None
    if ep.channel in inst.component.outputs:
        return "producer"
    if ep.channel in inst.component.inputs:
        return "consumer"
    return None


def _structural_diagnostics(n: NetworkSpec) -> "List[Diagnostic]":
    diags: "List[Diagnostic]" = []
    instances = _instance_map(n)

    seen: "Dict[str, str]" = {}
    for kind, names in (("instance", [i.name for i in n.instances]),
                        ("external input", n.external_inputs),
                        ("external output", n.external_outputs)):
        for name in names:
            if not _IDENT_RE.match(name):
                diags.append(error(_span(n, name), f"invalid {kind} name {name!r}", BAD_NAME))
            elif name in RESERVED_WORDS:
                diags.append(error(
                    _span(n, name), f"{kind} name {name!r} is a reserved word",
                    RESERVED_NAME,
                ))
            if name in seen:
                diags.append(error(
                    _span(n, name), f"duplicate name {name!r} ({seen[name]} and {kind})",
                    DUP_NAME,
                ))
            else:
                seen[name] = kind

    by_dst: "Dict[Endpoint, int]" = {}
    for w in n.wires:
        wspan = _span(n, w)
        src_role = _endpoint_role(n, w.src)
        if src_role is None:
            what = UNKNOWN_COMPONENT if (
                w.src.instance is not None and w.src.instance not in instances
            ) else UNDECLARED_NAME
            diags.append(error(wspan, f"wire source {w.src} does not exist", what))
        elif src_role != "producer":
            diags.append(error(
                wspan, f"wire source {w.src} is not an output or external input",
                WIRE_DIRECTION,
            ))
        dst_role = _endpoint_role(n, w.dst)
        if dst_role is None:
            what = UNKNOWN_COMPONENT if (
                w.dst.instance is not None and w.dst.instance not in instances
            ) else UNDECLARED_NAME
            diags.append(error(wspan, f"wire target {w.dst} does not exist", what))
        elif dst_role != "consumer":
            diags.append(error(
                wspan, f"wire target {w.dst} is not an input or external output",
                WIRE_DIRECTION,
            ))
        if w.initial and not w.delayed:
            diags.append(error(
                wspan, f"wire {w} has initial contents but no delay", BAD_INIT
            ))
        by_dst[w.dst] = by_dst.get(w.dst, 0) + 1

    for dst, count in by_dst.items():
        if count > 1:
            diags.append(error(
                _span(n, dst), f"{count} producers drive {dst}; each input "
                f"channel may have at most one", FAN_IN,
            ))

    cycle = _find_undelayed_cycle(n)
    if cycle:
        diags.append(error(
            _span(n, n.name),
            "undelayed cycle: " + " -> ".join(cycle),
            UNDELAYED_CYCLE,
        ))

    wired_dsts = {w.dst for w in n.wires}
    for inst in n.instances:
        for ch in inst.component.inputs:
            if Endpoint(inst.name, ch) not in wired_dsts:
                diags.append(warning(
                    _span(n, inst.name),
                    f"input {inst.name}.{ch} is not wired and will always be empty",
                    UNWIRED,
                ))
    for ext in n.external_outputs:
        if Endpoint(None, ext) not in wired_dsts:
            diags.append(warning(
                _span(n, ext),
                f"external output {ext!r} is not wired and will always be empty",
                UNWIRED,
            ))
    return diags


def _undelayed_edges(n: NetworkSpec) -> "List[tuple[str, str]]":
    edges = []
    for w in n.wires:
        if not w.delayed and w.src.instance is not None and w.dst.instance is not None:
            edges.append((w.src.instance, w.dst.instance))
    return edges


def _topo_order(n: NetworkSpec) -> "Optional[List[str]]":
    """Declaration-order-stable topological sort, or None on a cycle."""
    order = _topo_order_prefix(n)
    if len(order) != len(n.instances):
        return None
    return order


def _find_undelayed_cycle(n: NetworkSpec) -> "Optional[List[str]]":
    order = _topo_order(n)
    if order is not None:
        return None
    # Every node Kahn could not remove has a predecessor among the other
    # stuck nodes, so walking predecessors must close a loop.
    stuck = {i.name for i in n.instances} - set(_topo_order_prefix(n))
    pred: "Dict[str, str]" = {}
    for src, dst in _undelayed_edges(n):
        if src in stuck and dst in stuck:
            pred.setdefault(dst, src)
    node = next(iter(stuck))
    path, seen = [], {}
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = pred[node]
    loop = path[seen[node]:]
    loop.reverse()
    return loop + [loop[0]]


def _topo_order_prefix(n: NetworkSpec) -> "List[str]":
    """Nodes removable by Kahn's algorithm (all of them when acyclic)."""
    names = [i.name for i in n.instances]
    indeg = {name: 0 for name in names}
    out: "Dict[str, List[str]]" = {name: [] for name in names}
    for src, dst in _undelayed_edges(n):
        if src in indeg and dst in indeg:
            out[src].append(dst)
            indeg[dst] += 1
    order = []
    remaining = list(names)
    while remaining:
        ready = next((name for name in remaining if indeg[name] == 0), None)
        if ready is None:
            break
        remaining.remove(ready)
        order.append(ready)
        for dst in out[ready]:
            indeg[dst] -= 1
    return order


def validate(n: NetworkSpec) -> "List[Diagnostic]":
    """All load-time diagnostics: per-definition checks plus wiring."""
    diags: "List[Diagnostic]" = []
    def_names = set()
    for d in n.definitions:
        if d.name in def_names:
            diags.append(error(
                _span(n, d.name), f"duplicate component definition {d.name!r}", DUP_NAME
            ))
        def_names.add(d.name)
        diags.extend(components.validate(d))
    for inst in n.instances:
        if not any(d is inst.component or d == inst.component for d in n.definitions):
            diags.append(error(
                _span(n, inst.name),
                f"instance {inst.name!r} uses an undefined component "
                f"{inst.component.name!r}",
                UNKNOWN_COMPONENT,
            ))
    diags.extend(_structural_diagnostics(n))
    return diags


_RAISE_AS = {
    UNDELAYED_CYCLE: CompositionError,
}


def elaborate(n: NetworkSpec) -> "tuple[str, ...]":
    """Check the wiring and return the instance step order.

    Raises CompositionError for undelayed cycles and WiringError for
    dangling endpoints, misdirected wires, or fan-in.
    """
    for d in _structural_diagnostics(n):
        if d.severity == "error":
            raise _RAISE_AS.get(d.code, WiringError)(d.message)
    order = _topo_order(n)
    assert order is not None  # cycle would have been diagnosed above
    return tuple(order)


def simulate(
    n: NetworkSpec,
    inputs: Mapping[str, TimedStream],
    t_count: int,
    strict: bool = False,
) -> Trace:
    """Interval-synchronous simulation producing a full trace.

    Per interval: external inputs are published, components step in
    topological order with undelayed wires delivering same-tick values
    and delayed wires delivering the previous tick's value (their
    declared initial contents at tick 0), then external outputs are
    collected.  Recorded states are post-step.
    """
    order = elaborate(n)
    _check_external_inputs(n, inputs, t_count)
    instances = _instance_map(n)
    wires_by_dst = {w.dst: w for w in n.wires}

    states: "Dict[str, Dict[str, Value]]" = {
        name: instances[name].component.initial_state() for name in order
    }
    prev: "Dict[str, tuple[Message, ...]]" = {}
    records: "List[TraceRecord]" = []

    def delivered(ep: Endpoint, t: int, store: dict) -> "tuple[Message, ...]":
        wire = wires_by_dst.get(ep)
        if wire is None:
            return ()
        src = str(wire.src)
        if wire.delayed:
            return wire.initial if t == 0 else prev[src]
        return store[src]

    for t in range(t_count):
        store: "Dict[str, tuple[Message, ...]]" = {}
        for ext in n.external_inputs:
            store[ext] = inputs[ext].intervals[t]
        violated: "List[str]" = []
        for name in order:
            comp = instances[name].component
            in_map = {}
            for ch in comp.inputs:
                value = delivered(Endpoint(name, ch), t, store)
                in_map[ch] = value
                store[f"{name}.{ch}"] = value
            result = components.step(comp, states[name], in_map, strict=strict)
            if result.assumption_violated:
                violated.append(name)
            states[name] = result.new_state
            for ch, value in result.outputs.items():
                store[f"{name}.{ch}"] = value
        for ext in n.external_outputs:
            store[ext] = delivered(Endpoint(None, ext), t, store)
        records.append(TraceRecord(
            t,
            dict(store),
            {name: dict(state) for name, state in states.items()},
            tuple(violated),
        ))
        prev = store
    return Trace(tuple(records))


def _check_external_inputs(
    n: NetworkSpec, inputs: Mapping[str, TimedStream], t_count: int
) -> None:
    missing = [e for e in n.external_inputs if e not in inputs]
    extra = [e for e in inputs if e not in n.external_inputs]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {', '.join(sorted(missing))}")
        if extra:
            parts.append(f"unexpected {', '.join(sorted(extra))}")
        raise ArityError(f"external inputs not total: {'; '.join(parts)}")
    for name in n.external_inputs:
        if len(inputs[name]) < t_count:
            raise InputLengthError(
                f"input stream {name!r} has {len(inputs[name])} intervals, "
                f"need {t_count}"
            )


def check_trace(
    trace: Trace, props: Iterable[causality.PropertyExpr]
) -> "List[causality.Verdict]":
    """Check causality properties against channel streams from a trace."""
    verdicts = []
    for p in props:
        env = {
            name: trace.channel_stream(name)
            for name in causality.property_streams(p)
        }
        verdicts.append(causality.check(p, env))
    return verdicts


# --- trace export ------------------------------------------------------------
#
# Line-delimited JSON, one record per interval:
#   {"t": 0, "channels": {"A.x": ["a"]}, "states": {"A": {"n": 1}},
#    "violations": []}
# Message text form is "name" or "name:sort"; key order is fixed (the
# four record keys in that order, inner maps sorted by name) so traces
# can be compared byte for byte.

def _encode_value(v: Value):
    if isinstance(v, Message):
        return v.key()
    return v


def _decode_value(v) -> Value:
    if isinstance(v, str):
        return Message.from_key(v)
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise ValueError(f"bad state value in trace: {v!r}")


def record_to_json(r: TraceRecord) -> str:
    obj = {
        "t": r.t,
        "channels": {
            name: [m.key() for m in r.channels[name]]
            for name in sorted(r.channels)
        },
        "states": {
            inst: {var: _encode_value(val) for var, val in sorted(r.states[inst].items())}
            for inst in sorted(r.states)
        },
        "violations": sorted(r.violations),
    }
    return json.dumps(obj, separators=(",", ":"))


def write_trace(trace: Trace, out: Union[str, IO[str]]) -> None:
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="\n") as fp:
            write_trace(trace, fp)
        return
    for r in trace.records:
        out.write(record_to_json(r))
        out.write("\n")


def read_trace(source: Union[str, IO[str]]) -> Trace:
    """Parse a line-delimited trace file back into a Trace."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fp:
            return read_trace(fp)
    records = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            record = TraceRecord(
                t=int(obj["t"]),
                channels={
                    name: tuple(Message.from_key(m) for m in values)
                    for name, values in obj["channels"].items()
                },
                states={
                    inst: {var: _decode_value(val) for var, val in state.items()}
                    for inst, state in obj["states"].items()
                },
                violations=tuple(obj["violations"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"trace line {lineno}: {exc}") from None
        records.append(record)
    return Trace(tuple(records))
