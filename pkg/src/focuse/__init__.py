"""focuse: timed and event-based message streams, components, networks.

The timed view indexes message lists by clock tick; the event view keeps
only the non-empty intervals, ordered by causality.  On top of the
stream operators sit a small causality property language with a checker,
executable assumption-guarantee components with implicit else-case
semantics, and deterministic network simulation with trace export.
"""

from .causality import (
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
    Verdict,
    Witness,
    always_before_each,
    always_before_first,
    check,
    check_occurs,
    combined_event,
    occurs_before,
)
from .components import (
    ComponentSpec,
    RunResult,
    StateVar,
    StepResult,
    Transition,
    check_guarantees,
    run,
    step,
)
from .network import (
    Endpoint,
    Instance,
    NetworkSpec,
    Trace,
    Wire,
    check_trace,
    elaborate,
    read_trace,
    simulate,
    write_trace,
)
from .streams import (
    DeltaSchedule,
    EventStream,
    IntervalIndexError,
    Message,
    TimedStream,
    causality_index_map,
    causality_length,
    ci,
    embed,
    first,
    msgs,
    ti,
    time_position,
    to_event,
)

__version__ = "0.1.0"
