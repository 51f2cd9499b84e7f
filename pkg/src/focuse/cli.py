"""Command-line front end: convert, simulate, check, validate.

Exit codes: 0 success, 1 semantic failure (violated property, validation
errors), 2 usage or parse failure.  All commands are deterministic;
identical invocations produce byte-identical stdout and trace files.
ANSI color is used only on a terminal and can be disabled with
FOCUSE_COLOR=0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

from . import causality, network, speclang
from .components import (
    ArityError,
    InputLengthError,
    TransitionOverlapError,
)
from .diagnostics import Diagnostic, ERROR, ParseResult
from .network import CompositionError, WiringError
from .streams import (
    DeltaSchedule,
    IntervalIndexError,
    Stream,
    TimedStream,
    embed,
    to_event,
)

USAGE_ERROR = 2
SEMANTIC_ERROR = 1


def _color_enabled() -> bool:
    if os.environ.get("FOCUSE_COLOR") == "0":
        return False
    return sys.stdout.isatty()


def _paint(text: str, code: str, enabled: bool) -> str:
    if not enabled:
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _print_diagnostics(path: str, diags: "List[Diagnostic]") -> None:
    color = _color_enabled()
    for d in diags:
        severity = _paint(d.severity, "31" if d.severity == ERROR else "33", color)
        print(f"{path}:{d.span}: {severity}[{d.code}]: {d.message}", file=sys.stderr)


def _read_file(path: str) -> Optional[bytes]:
    try:
        with open(path, "rb") as fp:
            return fp.read()
    except OSError as exc:
        print(f"focuse: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None


def _parse_file(path: str, parser) -> "Optional[ParseResult]":
    """Read and parse; on any diagnostics, print them.  None means I/O error."""
    data = _read_file(path)
    if data is None:
        return None
    text, decode_diags = speclang.decode_source(data)
    if text is None:
        result = ParseResult(None, decode_diags)
    else:
        result = parser(text)
    if result.diagnostics:
        _print_diagnostics(path, result.diagnostics)
    return result


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fp:
            fp.write(text + "\n")


def _parse_schedule(text: str) -> DeltaSchedule:
    parts = [part.strip() for part in text.split(",") if part.strip()]
    positions = []
    for part in parts:
        if not part.isdigit() or len(part) > 19:
            raise ValueError(f"bad schedule entry {part!r}")
        positions.append(int(part))
    return DeltaSchedule(positions)


def cmd_convert(args: argparse.Namespace) -> int:
    if args.to_timed and not args.schedule and args.schedule != "":
        print("focuse convert: --to-timed requires --schedule", file=sys.stderr)
        return USAGE_ERROR
    parser = speclang.parse_event_stream if args.to_timed else speclang.parse_stream
    result = _parse_file(args.file, parser)
    if result is None or not result.ok:
        return USAGE_ERROR
    if args.to_timed:
        try:
            schedule = _parse_schedule(args.schedule)
            converted: Stream = embed(result.value, schedule)
        except ValueError as exc:
            print(f"focuse convert: {exc}", file=sys.stderr)
            return USAGE_ERROR
    else:
        converted = to_event(result.value)
    text = speclang.print_stream(converted)
    if args.format == "json":
        text = json.dumps({"stream": text})
    _write_output(text, args.output)
    return 0


def _load_stream_args(pairs: "List[str]", parser, env: "Dict[str, Stream]") -> bool:
    for pair in pairs:
        name, sep, path = pair.partition("=")
        if not sep or not name:
            print(f"focuse: expected NAME=PATH, got {pair!r}", file=sys.stderr)
            return False
        if name in env:
            print(f"focuse: stream {name!r} given twice", file=sys.stderr)
            return False
        result = _parse_file(path, parser)
        if result is None or not result.ok:
            return False
        env[name] = result.value
    return True


def cmd_simulate(args: argparse.Namespace) -> int:
    result = _parse_file(args.netfile, speclang.parse_network)
    if result is None or not result.ok:
        return USAGE_ERROR
    net: network.NetworkSpec = result.value
    inputs: "Dict[str, Stream]" = {}
    if not _load_stream_args(args.input, speclang.parse_stream, inputs):
        return USAGE_ERROR
    try:
        trace = network.simulate(net, inputs, args.T, strict=args.strict)
    except (ArityError, InputLengthError, CompositionError, WiringError,
            TransitionOverlapError) as exc:
        print(f"focuse simulate: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.trace:
        network.write_trace(trace, args.trace)
    violations: "Dict[str, List[int]]" = {}
    for record in trace.records:
        for name in record.violations:
            violations.setdefault(name, []).append(record.t)
    if args.format == "json":
        summary = {
            "intervals": len(trace),
            "channels": {
                name: sum(len(r.channels[name]) for r in trace.records)
                for name in trace.channel_names()
            },
            "violations": {name: violations[name] for name in sorted(violations)},
        }
        print(json.dumps(summary))
    else:
        print(f"simulated {len(trace)} intervals")
        for name in trace.channel_names():
            total = sum(len(r.channels[name]) for r in trace.records)
            print(f"  {name}: {total} messages")
        for name in sorted(violations):
            ticks = ",".join(str(t) for t in violations[name])
            print(f"WARN assumption of {name} violated at intervals {ticks}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    result = _parse_file(args.propfile, speclang.parse_properties)
    if result is None or not result.ok:
        return USAGE_ERROR
    props: "List[causality.PropertyExpr]" = result.value
    env: "Dict[str, Stream]" = {}
    if not _load_stream_args(args.stream, speclang.parse_stream, env):
        return USAGE_ERROR
    if not _load_stream_args(args.event_stream, speclang.parse_event_stream, env):
        return USAGE_ERROR
    if args.trace:
        try:
            trace = network.read_trace(args.trace)
        except (OSError, ValueError) as exc:
            print(f"focuse check: {exc}", file=sys.stderr)
            return USAGE_ERROR
        for name in trace.channel_names():
            if name in env:
                print(f"focuse check: stream {name!r} given twice", file=sys.stderr)
                return USAGE_ERROR
            env[name] = trace.channel_stream(name)
    color = _color_enabled()
    reports = []
    any_violated = False
    for prop in props:
        text = speclang.print_property(prop)
        try:
            verdict = causality.check(prop, env)
        except (causality.UnknownStreamError,
                causality.UnsupportedComparisonError,
                IntervalIndexError) as exc:
            print(f"focuse check: {text}: {exc}", file=sys.stderr)
            return USAGE_ERROR
        any_violated = any_violated or not verdict.holds
        reports.append((text, verdict))
    if args.format == "json":
        print(json.dumps([
            {
                "property": text,
                "holds": verdict.holds,
                "witnesses": [
                    {"stream": w.stream, "index": w.index, "message": w.message.key()}
                    for w in verdict.witnesses
                ],
                "explanation": verdict.explanation,
            }
            for text, verdict in reports
        ]))
    else:
        for text, verdict in reports:
            word = (_paint("HOLDS", "32", color) if verdict.holds
                    else _paint("VIOLATED", "31", color))
            line = f"{word} {text}"
            if verdict.witnesses:
                line += " [" + "; ".join(str(w) for w in verdict.witnesses) + "]"
            print(line)
    return SEMANTIC_ERROR if any_violated else 0


_PARSERS_BY_SUFFIX = {
    ".fstream": "parse_stream",
    ".fprop": "parse_properties",
    ".fcomp": "parse_component",
    ".fnet": "parse_network",
}


def cmd_validate(args: argparse.Namespace) -> int:
    suffix = os.path.splitext(args.file)[1]
    parser_name = _PARSERS_BY_SUFFIX.get(suffix)
    if parser_name is None:
        known = ", ".join(sorted(_PARSERS_BY_SUFFIX))
        print(f"focuse validate: unknown file type {suffix!r} (expected {known})",
              file=sys.stderr)
        return USAGE_ERROR
    result = _parse_file(args.file, getattr(speclang, parser_name))
    if result is None:
        return USAGE_ERROR
    errors = sum(1 for d in result.diagnostics if d.severity == ERROR)
    warnings = len(result.diagnostics) - errors
    if args.format == "json":
        print(json.dumps([
            {
                "severity": d.severity,
                "code": d.code,
                "line": d.span.line,
                "column": d.span.column,
                "length": d.span.length,
                "message": d.message,
            }
            for d in result.diagnostics
        ]))
    else:
        print(f"{errors} errors, {warnings} warnings")
    return SEMANTIC_ERROR if errors else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focuse",
        description="Work with timed and event-based message streams: "
                    "convert between views, simulate component networks, "
                    "and check causality properties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="convert between timed and event view")
    convert.add_argument("file", help="stream literal file (.fstream)")
    direction = convert.add_mutually_exclusive_group(required=True)
    direction.add_argument("--to-event", action="store_true",
                           help="drop empty intervals")
    direction.add_argument("--to-timed", action="store_true",
                           help="place causality intervals at scheduled ticks")
    convert.add_argument("--schedule", default=None,
                         help="comma-separated tick positions, e.g. '1,2,4,5'")
    convert.add_argument("-o", "--output", default=None, help="output path")
    convert.add_argument("--format", choices=["text", "json"], default="text")
    convert.set_defaults(func=cmd_convert)

    simulate = sub.add_parser("simulate", help="run a network over input streams")
    simulate.add_argument("netfile", help="network file (.fnet)")
    simulate.add_argument("--input", action="append", default=[],
                          metavar="NAME=PATH",
                          help="external input stream (repeatable)")
    simulate.add_argument("-T", type=int, required=True,
                          help="number of intervals to simulate")
    simulate.add_argument("--trace", default=None, help="trace output path")
    simulate.add_argument("--strict", action="store_true",
                          help="reject overlapping transition guards at runtime")
    simulate.add_argument("--format", choices=["text", "json"], default="text")
    simulate.set_defaults(func=cmd_simulate)

    check = sub.add_parser("check", help="check properties against streams or a trace")
    check.add_argument("propfile", help="property file (.fprop), one per line")
    check.add_argument("--stream", action="append", default=[],
                       metavar="NAME=PATH", help="timed stream binding (repeatable)")
    check.add_argument("--event-stream", action="append", default=[],
                       metavar="NAME=PATH", help="event stream binding (repeatable)")
    check.add_argument("--trace", default=None,
                       help="trace file whose channels become streams")
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.set_defaults(func=cmd_check)

    validate = sub.add_parser("validate", help="parse and validate a spec file")
    validate.add_argument("file", help=".fstream, .fprop, .fcomp or .fnet file")
    validate.add_argument("--format", choices=["text", "json"], default="text")
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: "Optional[List[str]]" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "T", None) is not None and args.T < 0:
        print("focuse simulate: -T must be >= 0", file=sys.stderr)
        return USAGE_ERROR
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
