"""Declarative front end: parse programs, execute them, emit reports."""
from .runtime import Options, Report, emit_json, emit_text, execute
from .syntax import Diagnostic, DslError, Program, parse, parse_program, program_source

__all__ = [
    "Diagnostic",
    "DslError",
    "Options",
    "Program",
    "Report",
    "emit_json",
    "emit_text",
    "execute",
    "parse",
    "parse_program",
    "program_source",
]
