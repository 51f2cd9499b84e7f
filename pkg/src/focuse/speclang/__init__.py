"""Textual front end: parsers, printers, and diagnostics."""

from ..diagnostics import Diagnostic, ParseResult, SourceSpan, has_errors
from .lexer import Token, tokenize
from .parse import (
    decode_source,
    parse_component,
    parse_event_stream,
    parse_network,
    parse_properties,
    parse_property,
    parse_stream,
)
from .printer import (
    print_component,
    print_network,
    print_property,
    print_stream,
    to_text,
)

__all__ = [
    "Diagnostic",
    "ParseResult",
    "SourceSpan",
    "Token",
    "decode_source",
    "has_errors",
    "parse_component",
    "parse_event_stream",
    "parse_network",
    "parse_properties",
    "parse_property",
    "parse_stream",
    "print_component",
    "print_network",
    "print_property",
    "print_stream",
    "to_text",
    "tokenize",
]
