"""
Shared helpers for the command-line verbs: file loading and search flags.
"""
import argparse
from pathlib import Path
from typing import List, Tuple, Union

from app.core.config import settings
from app.core.errors import InputError
from app.models.automata import Dfa, Nfa
from app.models.language import MonoidRecognizer
from app.models.relation import Rel
from app.schemas.formats import (
    first_keyword, parse_automaton, parse_dfa, parse_monoid, parse_rel, read_text,
)


def add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kmax", type=int, default=None, help="Largest size to search for")
    parser.add_argument("--budget", type=int, default=None, help="Search-node budget")


def add_seed_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed", type=int, default=settings.SEED, help="Seed of the randomized greedy cover restarts"
    )


def load_dfa(path: str) -> Dfa:
    return parse_dfa(read_text(path), path)


def load_automaton(path: str) -> Union[Dfa, Nfa]:
    return parse_automaton(read_text(path), path)


def load_rel(path: str) -> Rel:
    return parse_rel(read_text(path), path)


def load_monoid(path: str) -> MonoidRecognizer:
    return parse_monoid(read_text(path), path)


def load_instance(paths: List[str]) -> Tuple[str, Union[Tuple[Dfa, Dfa], MonoidRecognizer], List[str]]:
    """
    Two automaton files form an atomic instance, one monoid file a subatomic one.
    Returns the kind, the parsed instance and the raw texts.
    """
    texts = [read_text(p) for p in paths]
    if len(paths) == 2:
        return "atomic", (parse_dfa(texts[0], paths[0]), parse_dfa(texts[1], paths[1])), texts
    if len(paths) == 1 and first_keyword(texts[0]) == "monoid":
        return "subatomic", parse_monoid(texts[0], paths[0]), texts
    raise InputError("an instance is two dfa files or one monoid file")


def write_output(text: str, out: Union[str, None]) -> None:
    if out is None:
        print(text, end="")
    else:
        Path(out).write_text(text, encoding="utf-8")
