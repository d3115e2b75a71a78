"""
Command-line verbs. Each module registers one subcommand.
"""
from app.cli import analyze, certify, dim, oracle, reduce

VERBS = [analyze, certify, reduce, oracle, dim]

__all__ = ["VERBS", "analyze", "certify", "dim", "oracle", "reduce"]
