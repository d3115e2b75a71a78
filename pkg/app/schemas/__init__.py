"""
Text formats and report schemas.
"""
from app.schemas.formats import (
    emit_automaton, emit_certificate, emit_cover, emit_lattice, emit_monoid, emit_morphism,
    emit_rel, file_digest, first_keyword, parse_automaton, parse_certificate, parse_cover,
    parse_dfa, parse_lattice, parse_monoid, parse_morphism, parse_rel, read_text,
)
from app.schemas.reports import (
    AnalyzeReport, DimReport, OracleReport, ReduceReport, Report, SweepReport, VerifyReport,
)

__all__ = [
    "emit_automaton", "emit_certificate", "emit_cover", "emit_lattice", "emit_monoid",
    "emit_morphism", "emit_rel", "file_digest", "first_keyword", "parse_automaton",
    "parse_certificate", "parse_cover", "parse_dfa", "parse_lattice", "parse_monoid",
    "parse_morphism", "parse_rel", "read_text",
    "AnalyzeReport", "DimReport", "OracleReport", "ReduceReport", "Report", "SweepReport",
    "VerifyReport",
]
